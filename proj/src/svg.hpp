#pragma once

#include <string>
#include <vector>

namespace nehari {

/// Minimal static SVG line chart. Series share the axes; log scaling maps
/// values through log10 before plotting (non-positive values are dropped).
class SvgChart {
public:
  SvgChart(std::string title, std::string x_label, std::string y_label,
           bool log_x = false, bool log_y = false);

  void add_series(std::string name, std::vector<double> xs, std::vector<double> ys);
  /// A vertical marker line with a caption (e.g. a located root).
  void add_marker(double x, std::string caption);

  std::string render() const;
  void write(const std::string& path) const;

private:
  struct Series {
    std::string name;
    std::vector<double> xs, ys;
  };
  struct Marker {
    double x;
    std::string caption;
  };
  std::string title_, x_label_, y_label_;
  bool log_x_, log_y_;
  std::vector<Series> series_;
  std::vector<Marker> markers_;
};

}  // namespace nehari
