#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "demax/types.hpp"

namespace demax {

/// Periodic structured grid carrying the discrete double de Rham complex.
///
/// k-cells are grouped by type: the set of axes a cell spans, encoded as a
/// bitmask and ordered by increasing mask value (so 3D edges come as x,y,z
/// and faces as xy,xz,yz). Within a type, cells are indexed x-fastest by
/// their anchor vertex. Straight k-cochains hold one DOF per k-cell
/// (integrals over the cell, oriented by the wedge of its axes in
/// increasing order). Twisted j-cochains are stored on the dual (n-j)-cells
/// and therefore indexed exactly like straight (n-j)-cochains; their DOFs
/// are taken with respect to the co-orientation that completes the primal
/// cell's orientation to the global one, which keeps every Hodge entry
/// positive and the Poincare pairing sign-free.
class ComplexMesh {
public:
  static constexpr int kMaxDim = 3;

  int dimension() const { return dim_; }
  int cells_per_axis(int axis) const { return cells_[axis]; }
  double extent(int axis) const { return extent_[axis]; }
  double spacing(int axis) const { return h_[axis]; }
  double metric(int axis) const { return metric_[axis]; }
  /// Physical length of a unit step along axis: sqrt(g_aa) * h_a.
  double physical_spacing(int axis) const { return std::sqrt(metric_[axis]) * h_[axis]; }
  double total_volume() const;

  Index vertex_count() const { return n_flat_; }
  Index cell_count(int degree) const;
  int type_count(int degree) const { return static_cast<int>(types_[degree].size()); }
  /// Axis bitmask of the t-th k-cell type.
  std::uint8_t cell_type(int degree, int t) const { return types_[degree][t]; }

  /// Integer coboundary taking straight k-cochains to (k+1)-cochains.
  const SpMatI& incidence(int k) const;
  const SpMat& incidence_real(int k) const;
  /// Diagonal discrete Hodge star on straight k-cochains (also the L2 mass
  /// matrix of degree k): entry = dual cell measure / primal cell measure.
  const ArrayX& hodge(int k) const;
  /// Replace hodge(k); intended for metric-perturbation experiments.
  void replace_hodge(int k, ArrayX diag);

  Index flat_index(int i, int j, int k) const {
    return i + static_cast<Index>(cells_[0]) * (j + static_cast<Index>(cells_[1]) * k);
  }
  /// Linear DOF index of the k-cell of type t anchored at grid point (i,j,k).
  Index cell_index(int degree, int t, int i, int j, int k) const {
    return static_cast<Index>(t) * n_flat_ + flat_index(i, j, k);
  }
  /// Coordinate of a cell's center (anchor + half step along spanned axes).
  Vec3 cell_center(int degree, int t, int i, int j, int k) const;
  Vec3 vertex_position(int i, int j, int k) const;

  friend ComplexMesh build_mesh(int dimension, const std::vector<int>& cells_per_axis,
                                const std::vector<double>& extent_per_axis,
                                const std::vector<double>& metric);

private:
  ComplexMesh() = default;
  void assemble();

  int dim_ = 0;
  std::array<int, 3> cells_{1, 1, 1};
  std::array<double, 3> extent_{1.0, 1.0, 1.0};
  std::array<double, 3> h_{1.0, 1.0, 1.0};
  std::array<double, 3> metric_{1.0, 1.0, 1.0};
  Index n_flat_ = 0;
  std::array<std::vector<std::uint8_t>, kMaxDim + 1> types_;
  std::vector<SpMatI> incidence_;
  std::vector<SpMat> incidence_real_;
  std::vector<ArrayX> hodge_;
};

/// Assemble the periodic mesh. metric holds the (uniform) diagonal metric
/// coefficients g_aa per axis; pass an empty vector for the unit metric.
ComplexMesh build_mesh(int dimension, const std::vector<int>& cells_per_axis,
                       const std::vector<double>& extent_per_axis,
                       const std::vector<double>& metric = {});

} // namespace demax
