#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace nehari {

namespace {
constexpr double kWidth = 760, kHeight = 480;
constexpr double kMarginL = 70, kMarginR = 20, kMarginT = 40, kMarginB = 55;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
}  // namespace

SvgChart::SvgChart(std::string title, std::string x_label, std::string y_label, bool log_x,
                   bool log_y)
    : title_(std::move(title)),
      x_label_(std::move(x_label)),
      y_label_(std::move(y_label)),
      log_x_(log_x),
      log_y_(log_y) {}

void SvgChart::add_series(std::string name, std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size()) fail(errc::invalid_argument, "svg: series size mismatch");
  series_.push_back({std::move(name), std::move(xs), std::move(ys)});
}

void SvgChart::add_marker(double x, std::string caption) {
  markers_.push_back({x, std::move(caption)});
}

std::string SvgChart::render() const {
  auto tx = [this](double v) { return log_x_ ? std::log10(v) : v; };
  auto ty = [this](double v) { return log_y_ ? std::log10(v) : v; };

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series_) {
    for (size_t i = 0; i < s.xs.size(); ++i) {
      if ((log_x_ && s.xs[i] <= 0.0) || (log_y_ && s.ys[i] <= 0.0)) continue;
      if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
      xmin = std::min(xmin, tx(s.xs[i]));
      xmax = std::max(xmax, tx(s.xs[i]));
      ymin = std::min(ymin, ty(s.ys[i]));
      ymax = std::max(ymax, ty(s.ys[i]));
    }
  }
  if (!(xmin < xmax)) {
    xmin -= 1.0;
    xmax += 1.0;
  }
  if (!(ymin < ymax)) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double xpad = 0.03 * (xmax - xmin), ypad = 0.05 * (ymax - ymin);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;

  auto px = [&](double v) {
    return kMarginL + (tx(v) - xmin) / (xmax - xmin) * (kWidth - kMarginL - kMarginR);
  };
  auto py = [&](double v) {
    return kHeight - kMarginB - (ty(v) - ymin) / (ymax - ymin) * (kHeight - kMarginT - kMarginB);
  };

  std::ostringstream out;
  out.precision(7);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title_ << "</text>\n";

  // frame and tick labels
  out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
      << kWidth - kMarginL - kMarginR << "\" height=\"" << kHeight - kMarginT - kMarginB
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0;
    const double fy = ymin + (ymax - ymin) * i / 4.0;
    const double gx = kMarginL + (kWidth - kMarginL - kMarginR) * i / 4.0;
    const double gy = kHeight - kMarginB - (kHeight - kMarginT - kMarginB) * i / 4.0;
    const double label_x = log_x_ ? std::pow(10.0, fx) : fx;
    const double label_y = log_y_ ? std::pow(10.0, fy) : fy;
    out << "<text x=\"" << gx << "\" y=\"" << kHeight - kMarginB + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << label_x << "</text>\n";
    out << "<text x=\"" << kMarginL - 8 << "\" y=\"" << gy + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << label_y << "</text>\n";
  }
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label_ << "</text>\n";
  out << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << kHeight / 2 << ")\">" << y_label_ << "</text>\n";

  int color = 0;
  for (const auto& s : series_) {
    out << "<polyline fill=\"none\" stroke=\"" << kColors[color % 6]
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.xs.size(); ++i) {
      if ((log_x_ && s.xs[i] <= 0.0) || (log_y_ && s.ys[i] <= 0.0)) continue;
      if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
      out << px(s.xs[i]) << "," << py(s.ys[i]) << " ";
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kMarginR - 6 << "\" y=\"" << kMarginT + 16 + 16 * color
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << kColors[color % 6] << "\">"
        << s.name << "</text>\n";
    ++color;
  }

  for (const auto& m : markers_) {
    if (log_x_ && m.x <= 0.0) continue;
    const double gx = px(m.x);
    out << "<line x1=\"" << gx << "\" y1=\"" << kMarginT << "\" x2=\"" << gx << "\" y2=\""
        << kHeight - kMarginB << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
    out << "<text x=\"" << gx + 3 << "\" y=\"" << kMarginT + 12
        << "\" font-size=\"11\" fill=\"#555\">" << m.caption << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void SvgChart::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(errc::io, "cannot open " + path);
  out << render();
  if (!out) fail(errc::io, "write failed: " + path);
}

}  // namespace nehari
