#include "grid.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rootfind.hpp"

namespace nehari {

Grid::Grid(int dim, int nodes_per_axis) : dim_(dim), n_(nodes_per_axis) {
  if (dim < 1 || dim > 3) fail(errc::invalid_argument, "grid: dim must be 1, 2 or 3");
  if (nodes_per_axis < 3) fail(errc::invalid_argument, "grid: nodes_per_axis must be >= 3");
  h_ = 1.0 / (n_ - 1);
  node_count_ = 1;
  cell_count_ = 1;
  for (int d = 0; d < dim_; ++d) {
    node_count_ *= n_;
    cell_count_ *= n_ - 1;
  }
  cell_measure_ = std::pow(h_, dim_);
}

std::array<int, 3> Grid::node_coords(std::int64_t node) const {
  std::array<int, 3> c{0, 0, 0};
  for (int d = 0; d < dim_; ++d) {
    c[d] = static_cast<int>(node % n_);
    node /= n_;
  }
  return c;
}

std::int64_t Grid::node_index(const std::array<int, 3>& c) const {
  std::int64_t idx = 0;
  for (int d = dim_ - 1; d >= 0; --d) idx = idx * n_ + c[d];
  return idx;
}

std::array<int, 3> Grid::cell_coords(std::int64_t cell) const {
  std::array<int, 3> c{0, 0, 0};
  const int m = n_ - 1;
  for (int d = 0; d < dim_; ++d) {
    c[d] = static_cast<int>(cell % m);
    cell /= m;
  }
  return c;
}

std::int64_t Grid::cell_index(const std::array<int, 3>& c) const {
  const int m = n_ - 1;
  std::int64_t idx = 0;
  for (int d = dim_ - 1; d >= 0; --d) idx = idx * m + c[d];
  return idx;
}

bool Grid::is_boundary_node(std::int64_t node) const {
  const auto c = node_coords(node);
  for (int d = 0; d < dim_; ++d)
    if (c[d] == 0 || c[d] == n_ - 1) return true;
  return false;
}

std::array<double, 3> Grid::node_position(std::int64_t node) const {
  const auto c = node_coords(node);
  return {c[0] * h_, c[1] * h_, c[2] * h_};
}

std::array<double, 3> Grid::cell_center(std::int64_t cell) const {
  const auto c = cell_coords(cell);
  return {(c[0] + 0.5) * h_, (c[1] + 0.5) * h_, (c[2] + 0.5) * h_};
}

void Grid::cell_corners(std::int64_t cell, std::int64_t* corners) const {
  const auto c = cell_coords(cell);
  const int n_corners = 1 << dim_;
  for (int bit = 0; bit < n_corners; ++bit) {
    std::array<int, 3> nc = c;
    for (int d = 0; d < dim_; ++d)
      if (bit & (1 << d)) ++nc[d];
    corners[bit] = node_index(nc);
  }
}

Field::Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (static_cast<std::int64_t>(values.size()) != g.node_count())
    fail(errc::invalid_argument, "field: value count does not match grid");
  enforce_boundary();
}

void Field::enforce_boundary() {
  for (std::int64_t i = 0; i < grid.node_count(); ++i)
    if (grid.is_boundary_node(i)) values[i] = 0.0;
}

bool Field::is_zero(double tol) const {
  for (double v : values)
    if (std::abs(v) > tol) return false;
  return true;
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

Weight::Weight(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (static_cast<std::int64_t>(values.size()) != g.cell_count())
    fail(errc::invalid_argument, "weight: value count does not match grid");
}

double Weight::max() const {
  double m = values.empty() ? 0.0 : values[0];
  for (double v : values) m = std::max(m, v);
  return m;
}

double Weight::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double Weight::positive_part_lr_norm(double r) const {
  double s = 0.0;
  for (double v : values)
    if (v > 0.0) s += std::pow(v, r);
  return std::pow(s * grid.cell_measure(), 1.0 / r);
}

std::array<double, 3> cell_gradient(const Field& u, std::int64_t cell) {
  const Grid& g = u.grid;
  const int dim = g.dim();
  std::int64_t corners[8];
  g.cell_corners(cell, corners);
  const int n_corners = 1 << dim;
  const double scale = 1.0 / ((n_corners / 2) * g.spacing());
  std::array<double, 3> grad{0.0, 0.0, 0.0};
  for (int d = 0; d < dim; ++d) {
    double diff = 0.0;
    for (int bit = 0; bit < n_corners; ++bit) {
      const double v = u.values[corners[bit]];
      diff += (bit & (1 << d)) ? v : -v;
    }
    grad[d] = diff * scale;
  }
  return grad;
}

double cell_average(const Field& u, std::int64_t cell) {
  const Grid& g = u.grid;
  std::int64_t corners[8];
  g.cell_corners(cell, corners);
  const int n_corners = 1 << g.dim();
  double s = 0.0;
  for (int bit = 0; bit < n_corners; ++bit) s += u.values[corners[bit]];
  return s / n_corners;
}

CellSamples sample_cells(const Field& u) {
  const Grid& g = u.grid;
  const std::int64_t nc = g.cell_count();
  CellSamples out;
  out.grad_mag.resize(nc);
  out.gradient.resize(nc);
  out.average.resize(nc);
  const int dim = g.dim();
  const int n_corners = 1 << dim;
  const double scale = 1.0 / ((n_corners / 2) * g.spacing());
  std::int64_t corners[8];
  for (std::int64_t c = 0; c < nc; ++c) {
    g.cell_corners(c, corners);
    double avg = 0.0;
    std::array<double, 3> grad{0.0, 0.0, 0.0};
    for (int bit = 0; bit < n_corners; ++bit) {
      const double v = u.values[corners[bit]];
      avg += v;
      for (int d = 0; d < dim; ++d) grad[d] += (bit & (1 << d)) ? v : -v;
    }
    out.average[c] = avg / n_corners;
    double mag2 = 0.0;
    for (int d = 0; d < dim; ++d) {
      grad[d] *= scale;
      mag2 += grad[d] * grad[d];
    }
    out.gradient[c] = grad;
    out.grad_mag[c] = std::sqrt(mag2);
  }
  return out;
}

double integrate(const Grid& g, const std::vector<double>& cell_values) {
  if (static_cast<std::int64_t>(cell_values.size()) != g.cell_count())
    fail(errc::invalid_argument, "integrate: one value per cell required");
  double s = 0.0;
  for (double v : cell_values) s += v;
  return s * g.cell_measure();
}

namespace {

/// Bisects the strictly decreasing modular to |modular(k) - 1| <= 1e-10.
template <typename Modular>
double luxemburg_bisect(Modular&& modular, double start) {
  double hi = expand_up(start, [&](double k) { return modular(k) <= 1.0; });
  double lo = shrink_down(hi * 0.5, [&](double k) { return modular(k) >= 1.0; });
  double k = 0.5 * (lo + hi);
  for (int i = 0; i < 300; ++i) {
    k = 0.5 * (lo + hi);
    const double m = modular(k);
    if (std::abs(m - 1.0) <= 1e-10) return k;
    if (m > 1.0)
      lo = k;
    else
      hi = k;
  }
  return k;
}

}  // namespace

double luxemburg_norm(const NFunction& f, const Grid& g,
                      const std::vector<double>& cell_values) {
  double vmax = 0.0;
  for (double v : cell_values) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) return 0.0;
  const double measure = g.cell_measure();

  // Power-sum families reduce the modular to precomputed moments, so each
  // bisection step is O(#terms).
  if (const auto* terms = f.power_terms()) {
    std::vector<double> moments(terms->size(), 0.0);
    for (size_t j = 0; j < terms->size(); ++j) {
      double acc = 0.0;
      const double e = (*terms)[j].e;
      for (double v : cell_values)
        if (v != 0.0) acc += std::pow(std::abs(v), e);
      moments[j] = (*terms)[j].coef_big_phi * acc * measure;
    }
    auto modular = [&](double k) {
      double s = 0.0;
      for (size_t j = 0; j < terms->size(); ++j)
        s += moments[j] * std::pow(k, -(*terms)[j].e);
      return s;
    };
    return luxemburg_bisect(modular, vmax);
  }

  auto modular = [&](double k) {
    double s = 0.0;
    for (double v : cell_values) {
      const double x = std::abs(v) / k;
      if (x > 0.0) s += f.big_phi(x);
    }
    return s * measure;
  };
  return luxemburg_bisect(modular, vmax);
}

double luxemburg_norm(const NFunction& f, const Field& u) {
  const auto s = sample_cells(u);
  return luxemburg_norm(f, u.grid, s.average);
}

double sobolev_norm(const NFunction& f, const Field& u) {
  const Grid& g = u.grid;
  const auto s = sample_cells(u);
  double norm = luxemburg_norm(f, g, s.average);
  std::vector<double> comp(g.cell_count());
  for (int d = 0; d < g.dim(); ++d) {
    for (std::int64_t c = 0; c < g.cell_count(); ++c) comp[c] = s.gradient[c][d];
    norm += luxemburg_norm(f, g, comp);
  }
  return norm;
}

double gradient_luxemburg_norm(const NFunction& f, const Field& u) {
  const auto s = sample_cells(u);
  return luxemburg_norm(f, u.grid, s.grad_mag);
}

double sobolev_norm_magnitude_variant(const NFunction& f, const Field& u) {
  const auto s = sample_cells(u);
  return luxemburg_norm(f, u.grid, s.average) + luxemburg_norm(f, u.grid, s.grad_mag);
}

double lp_integral(const Field& u, const Weight& w, double s) {
  if (!(s > 1.0)) fail(errc::invalid_argument, "lp_integral: exponent must be > 1");
  if (!(u.grid == w.grid)) fail(errc::invalid_argument, "lp_integral: grid mismatch");
  const auto samples = sample_cells(u);
  double acc = 0.0;
  for (std::int64_t c = 0; c < u.grid.cell_count(); ++c)
    acc += w.values[c] * std::pow(std::abs(samples.average[c]), s);
  return acc * u.grid.cell_measure();
}

namespace {

void write_matrix_csv(const std::string& path, const std::vector<double>& values,
                      int dim, int per_axis) {
  std::ofstream out(path);
  if (!out) fail(errc::io, "cannot open " + path);
  out.precision(17);
  const std::int64_t cols = per_axis;
  const std::int64_t total = static_cast<std::int64_t>(values.size());
  for (std::int64_t i = 0; i < total; ++i) {
    out << values[i];
    const bool row_end = (dim == 1) ? (i + 1 == total) : ((i + 1) % cols == 0);
    out << (row_end ? '\n' : ',');
  }
  if (dim == 1 && total > 0) {
    // single row already newline-terminated above
  }
  if (!out) fail(errc::io, "write failed: " + path);
}

std::vector<double> read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open " + path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      values.push_back(std::stod(item));
    }
  }
  return values;
}

void write_header_json(const std::string& path, const Grid& g, const std::string& kind) {
  nlohmann::json j;
  j["dim"] = g.dim();
  j["nodes_per_axis"] = g.nodes_per_axis();
  j["kind"] = kind;
  std::ofstream out(path);
  if (!out) fail(errc::io, "cannot open " + path);
  out << j.dump(2) << '\n';
}

Grid read_header_json(const std::string& path, std::string* kind) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(errc::parse, std::string("bad header json: ") + e.what());
  }
  if (kind) *kind = j.value("kind", "field");
  return Grid(j.at("dim").get<int>(), j.at("nodes_per_axis").get<int>());
}

}  // namespace

void save_field(const Field& u, const std::string& path_base) {
  write_matrix_csv(path_base + ".csv", u.values, u.grid.dim(), u.grid.nodes_per_axis());
  write_header_json(path_base + ".json", u.grid, "field");
}

Field load_field(const std::string& path_base) {
  std::string kind;
  Grid g = read_header_json(path_base + ".json", &kind);
  auto values = read_matrix_csv(path_base + ".csv");
  if (static_cast<std::int64_t>(values.size()) != g.node_count())
    fail(errc::parse, "field csv size does not match header grid");
  return Field(g, std::move(values));
}

void save_weight(const Weight& w, const std::string& path_base) {
  write_matrix_csv(path_base + ".csv", w.values, w.grid.dim(), w.grid.cells_per_axis());
  write_header_json(path_base + ".json", w.grid, "weight");
}

Weight load_weight(const std::string& path_base) {
  std::string kind;
  Grid g = read_header_json(path_base + ".json", &kind);
  auto values = read_matrix_csv(path_base + ".csv");
  if (static_cast<std::int64_t>(values.size()) != g.cell_count())
    fail(errc::parse, "weight csv size does not match header grid");
  return Weight(g, std::move(values));
}

}  // namespace nehari
