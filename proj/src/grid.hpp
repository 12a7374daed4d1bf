#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "nfunction.hpp"

namespace nehari {

/// Uniform tensor grid on the closed unit cube [0,1]^dim with spacing
/// h = 1/(nodes_per_axis-1). Nodes and cells are indexed lexicographically,
/// axis 0 fastest.
class Grid {
public:
  /// Empty placeholder grid (dim 0); any real use requires the sized ctor.
  Grid() = default;
  Grid(int dim, int nodes_per_axis);

  int dim() const { return dim_; }
  int nodes_per_axis() const { return n_; }
  int cells_per_axis() const { return n_ - 1; }
  double spacing() const { return h_; }
  double cell_measure() const { return cell_measure_; }

  std::int64_t node_count() const { return node_count_; }
  std::int64_t cell_count() const { return cell_count_; }

  std::array<int, 3> node_coords(std::int64_t node) const;
  std::int64_t node_index(const std::array<int, 3>& c) const;
  std::array<int, 3> cell_coords(std::int64_t cell) const;
  std::int64_t cell_index(const std::array<int, 3>& c) const;

  bool is_boundary_node(std::int64_t node) const;
  /// Node position (coordinates beyond dim are 0).
  std::array<double, 3> node_position(std::int64_t node) const;
  /// Cell center position.
  std::array<double, 3> cell_center(std::int64_t cell) const;

  /// Node ids of a cell's 2^dim corners; corner bit d set means the high
  /// side along axis d.
  void cell_corners(std::int64_t cell, std::int64_t* corners) const;

  bool operator==(const Grid& o) const { return dim_ == o.dim_ && n_ == o.n_; }

private:
  int dim_ = 0;
  int n_ = 0;
  double h_ = 0.0;
  double cell_measure_ = 0.0;
  std::int64_t node_count_ = 0;
  std::int64_t cell_count_ = 0;
};

/// Nodal scalar function with zero trace on the boundary nodes.
struct Field {
  Grid grid;
  std::vector<double> values;  // one per node

  Field() = default;
  explicit Field(const Grid& g) : grid(g), values(g.node_count(), 0.0) {}
  Field(const Grid& g, std::vector<double> v);

  /// Zeroes the boundary entries in place.
  void enforce_boundary();
  bool is_zero(double tol = 0.0) const;
  double max_abs() const;
};

/// Cell-centered coefficient (a(x) or b(x) sampled at cell centers).
struct Weight {
  Grid grid;
  std::vector<double> values;  // one per cell

  explicit Weight(const Grid& g, double constant = 0.0)
      : grid(g), values(g.cell_count(), constant) {}
  Weight(const Grid& g, std::vector<double> v);

  double max() const;
  double max_abs() const;
  /// L^r norm of the positive part, midpoint quadrature.
  double positive_part_lr_norm(double r) const;
};

/// Per-cell constant gradient: along each axis the mean of the nodal forward
/// differences over the cell's edges in that direction, divided by h.
std::array<double, 3> cell_gradient(const Field& u, std::int64_t cell);

/// Mean of the 2^dim corner values.
double cell_average(const Field& u, std::int64_t cell);

/// All cell gradients and averages in one sweep (the hot path for energy
/// assembly).
struct CellSamples {
  std::vector<double> grad_mag;                 // |grad u| per cell
  std::vector<std::array<double, 3>> gradient;  // per cell
  std::vector<double> average;                  // cell-centered u
};
CellSamples sample_cells(const Field& u);

/// Midpoint quadrature: sum of cell values times h^dim.
double integrate(const Grid& g, const std::vector<double>& cell_values);

/// Luxemburg norm of cell magnitudes: the k > 0 with
/// sum Phi(|v_c|/k) h^dim = 1, bisected to |modular-1| <= 1e-10.
double luxemburg_norm(const NFunction& f, const Grid& g, const std::vector<double>& cell_values);

/// Luxemburg norm of a field sampled at cell centers.
double luxemburg_norm(const NFunction& f, const Field& u);

/// ||u||_Phi + sum_d ||du/dx_d||_Phi (cell-centered quantities throughout).
double sobolev_norm(const NFunction& f, const Field& u);

/// Luxemburg norm of the cellwise gradient magnitude |grad u|; the quantity
/// whose modular identities are exact discretely.
double gradient_luxemburg_norm(const NFunction& f, const Field& u);

/// Equivalent norm variant ||u||_Phi + || |grad u| ||_Phi.
double sobolev_norm_magnitude_variant(const NFunction& f, const Field& u);

/// int w |u|^s dx with u averaged to cell centers; requires s > 1.
double lp_integral(const Field& u, const Weight& w, double s);

/// CSV matrix (row-major nodal values) plus a JSON header carrying
/// {dim, nodes_per_axis}. `path_base` gets .csv / .json appended.
void save_field(const Field& u, const std::string& path_base);
Field load_field(const std::string& path_base);
void save_weight(const Weight& w, const std::string& path_base);
Weight load_weight(const std::string& path_base);

}  // namespace nehari
