#pragma once

#include <vector>

#include "demax/cochain.hpp"
#include "demax/mesh.hpp"
#include "demax/types.hpp"

namespace demax {

/// Raw DOF vectors of the electromagnetic fields, one entry per field block
/// of the owning Geometry (see below). b[i] is empty when block i has no
/// magnetic partner.
struct EMFields {
  std::vector<VectorX> e;
  std::vector<VectorX> b;
};

/// One Faraday/Ampere pair: an e-like straight cochain of degree e_degree
/// and, when has_b, its b-partner of degree e_degree + 1. Slots describe the
/// vector component carried by each cell-type slice of the cochain together
/// with the proxy normalization (physical cell measure) and orientation sign
/// that turn a DOF into an orthonormal-frame field component.
struct ComponentSlot {
  int component;  // 0=x, 1=y, 2=z
  double scale;   // physical measure of the carrying cell
  double sign;    // orientation sign of the component in the sorted-axis basis
};

struct FieldBlock {
  int e_degree = 0;
  bool has_b = false;
  std::vector<ComponentSlot> e_slots;
  std::vector<ComponentSlot> b_slots;
};

/// Mapping of the Maxwell fields onto the complex for a given dimension,
/// plus the assembled operators the dynamics needs. The reductions carry the
/// field components that survive in each dimension:
///   3D: e^1 = (Ex,Ey,Ez) on edges, b^2 = (Bx,By,Bz) on faces.
///   2D: TE set e^1 = (Ex,Ey), b^2 = Bz.
///   1D: longitudinal Ex on edges (no b-partner) plus the transverse pair
///       Ey on vertices, Bz on edges.
class Geometry {
public:
  static Geometry maxwell_1d(const ComplexMesh& mesh);
  static Geometry maxwell_2d_te(const ComplexMesh& mesh);
  static Geometry maxwell_3d(const ComplexMesh& mesh);
  /// Dispatch on mesh.dimension().
  static Geometry maxwell(const ComplexMesh& mesh);

  const ComplexMesh& mesh() const { return *mesh_; }
  const std::vector<FieldBlock>& blocks() const { return blocks_; }
  int n_blocks() const { return static_cast<int>(blocks_.size()); }

  EMFields zero_fields() const;
  Index e_dof_count() const { return e_dofs_; }
  Index total_dof_count() const { return total_dofs_; }

  /// Exterior derivative taking block i's e-cochain to its b-cochain.
  const SpMat& faraday_op(int i) const { return faraday_[i]; }
  /// Weak (adjoint) curl M_e^{-1} D^T M_b taking h back to the d slot.
  const SpMat& weak_curl_op(int i) const { return weak_curl_[i]; }
  /// Divergence monitors; empty matrices where the degree degenerates.
  const SpMat& gauss_b_op(int i) const { return gauss_b_[i]; }
  const SpMat& gauss_d_op(int i) const { return gauss_d_[i]; }

  /// Orthonormal-frame field components at the n-cell centers, as
  /// (#centers x 3) matrices; components not carried by the layout are zero.
  Eigen::Matrix<double, Eigen::Dynamic, 3> sample_E(const EMFields& f) const;
  Eigen::Matrix<double, Eigen::Dynamic, 3> sample_B(const EMFields& f) const;
  /// Adjoints of the samplers: scatter per-center gradients back to raw DOF
  /// gradients (same shapes as EMFields.e / EMFields.b).
  std::vector<VectorX> scatter_E(const Eigen::Matrix<double, Eigen::Dynamic, 3>& g) const;
  std::vector<VectorX> scatter_B(const Eigen::Matrix<double, Eigen::Dynamic, 3>& g) const;

  /// 1D only: field components at the vertices (where a coupled phase-space
  /// density lives). Rows are vertices, columns components.
  Eigen::Matrix<double, Eigen::Dynamic, 3> sample_E_vertices(const EMFields& f) const;
  Eigen::Matrix<double, Eigen::Dynamic, 3> sample_B_vertices(const EMFields& f) const;
  std::vector<VectorX> scatter_E_vertices(const Eigen::Matrix<double, Eigen::Dynamic, 3>& g) const;

  /// Mass (hodge) diagonal of block i's e- and b-cochains.
  const ArrayX& e_mass(int i) const;
  const ArrayX& b_mass(int i) const;

  /// Sparse sampler of block i's e-cochain to stacked center components
  /// (row = center + n_centers * component).
  const SpMat& e_sampler(int i) const { return sample_e_[i]; }
  const SpMat& e_vertex_sampler(int i) const { return sample_e_vertex_[i]; }

  Index n_centers() const { return mesh_->cell_count(mesh_->dimension()); }

  /// l2 inner products over all blocks.
  double inner_e(const EMFields& a, const EMFields& b) const;
  double inner_b(const EMFields& a, const EMFields& b) const;

private:
  Geometry(const ComplexMesh& mesh, std::vector<FieldBlock> blocks);
  void build_operators();
  void build_samplers();

  const ComplexMesh* mesh_ = nullptr;
  std::vector<FieldBlock> blocks_;
  Index e_dofs_ = 0;
  Index total_dofs_ = 0;
  std::vector<SpMat> faraday_, weak_curl_, gauss_b_, gauss_d_;
  // samplers: rows = center + n_centers * component (stacked), cols = DOFs
  std::vector<SpMat> sample_e_, sample_b_;
  std::vector<SpMat> sample_e_vertex_, sample_b_vertex_;
};

} // namespace demax
