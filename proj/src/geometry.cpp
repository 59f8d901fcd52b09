#include "demax/geometry.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace demax {

namespace {

using Mx3 = Eigen::Matrix<double, Eigen::Dynamic, 3>;

// Sampler from the DOFs of one straight cochain (degree, slots) to component
// values at the n-cell centers: average the 2^(n-degree) covering cells.
SpMat build_center_sampler(const ComplexMesh& mesh, int degree,
                           const std::vector<ComponentSlot>& slots) {
  const int n = mesh.dimension();
  const Index nc = mesh.cell_count(n);
  SpMat S(nc * 3, mesh.cell_count(degree));
  std::vector<Eigen::Triplet<double>> trips;
  const std::array<int, 3> N{mesh.cells_per_axis(0), n > 1 ? mesh.cells_per_axis(1) : 1,
                             n > 2 ? mesh.cells_per_axis(2) : 1};
  for (int t = 0; t < mesh.type_count(degree); ++t) {
    const std::uint8_t mask = mesh.cell_type(degree, t);
    const ComponentSlot& slot = slots[t];
    std::vector<int> comp_axes;
    for (int a = 0; a < n; ++a)
      if (!((mask >> a) & 1)) comp_axes.push_back(a);
    const int n_sub = 1 << comp_axes.size();
    const double w = slot.sign / (slot.scale * n_sub);
    for (int kk = 0; kk < N[2]; ++kk)
      for (int jj = 0; jj < N[1]; ++jj)
        for (int ii = 0; ii < N[0]; ++ii) {
          const Index row = mesh.flat_index(ii, jj, kk) + nc * slot.component;
          for (int s = 0; s < n_sub; ++s) {
            std::array<int, 3> q{ii, jj, kk};
            for (std::size_t ax = 0; ax < comp_axes.size(); ++ax)
              if ((s >> ax) & 1) q[comp_axes[ax]] = (q[comp_axes[ax]] + 1) % N[comp_axes[ax]];
            trips.emplace_back(row, mesh.cell_index(degree, t, q[0], q[1], q[2]), w);
          }
        }
  }
  S.setFromTriplets(trips.begin(), trips.end());
  S.makeCompressed();
  return S;
}

// Sampler to the vertices: average the 2^degree cells touching each vertex.
SpMat build_vertex_sampler(const ComplexMesh& mesh, int degree,
                           const std::vector<ComponentSlot>& slots) {
  const int n = mesh.dimension();
  const Index nv = mesh.vertex_count();
  SpMat S(nv * 3, mesh.cell_count(degree));
  std::vector<Eigen::Triplet<double>> trips;
  const std::array<int, 3> N{mesh.cells_per_axis(0), n > 1 ? mesh.cells_per_axis(1) : 1,
                             n > 2 ? mesh.cells_per_axis(2) : 1};
  for (int t = 0; t < mesh.type_count(degree); ++t) {
    const std::uint8_t mask = mesh.cell_type(degree, t);
    const ComponentSlot& slot = slots[t];
    std::vector<int> span_axes;
    for (int a = 0; a < n; ++a)
      if ((mask >> a) & 1) span_axes.push_back(a);
    const int n_sub = 1 << span_axes.size();
    const double w = slot.sign / (slot.scale * n_sub);
    for (int kk = 0; kk < N[2]; ++kk)
      for (int jj = 0; jj < N[1]; ++jj)
        for (int ii = 0; ii < N[0]; ++ii) {
          const Index row = mesh.flat_index(ii, jj, kk) + nv * slot.component;
          for (int s = 0; s < n_sub; ++s) {
            std::array<int, 3> q{ii, jj, kk};
            for (std::size_t ax = 0; ax < span_axes.size(); ++ax)
              if ((s >> ax) & 1)
                q[span_axes[ax]] = (q[span_axes[ax]] + N[span_axes[ax]] - 1) % N[span_axes[ax]];
            trips.emplace_back(row, mesh.cell_index(degree, t, q[0], q[1], q[2]), w);
          }
        }
  }
  S.setFromTriplets(trips.begin(), trips.end());
  S.makeCompressed();
  return S;
}

Mx3 apply_samplers(const std::vector<SpMat>& samplers, const std::vector<VectorX>& dofs,
                   Index rows) {
  VectorX stacked = VectorX::Zero(rows * 3);
  for (std::size_t i = 0; i < samplers.size(); ++i)
    if (dofs[i].size() > 0 && samplers[i].rows() > 0) stacked += samplers[i] * dofs[i];
  Mx3 out(rows, 3);
  for (int cmp = 0; cmp < 3; ++cmp) out.col(cmp) = stacked.segment(rows * cmp, rows);
  return out;
}

std::vector<VectorX> apply_adjoint(const std::vector<SpMat>& samplers, const Mx3& g) {
  const Index rows = g.rows();
  VectorX stacked(rows * 3);
  for (int cmp = 0; cmp < 3; ++cmp) stacked.segment(rows * cmp, rows) = g.col(cmp);
  std::vector<VectorX> out;
  out.reserve(samplers.size());
  for (const auto& S : samplers)
    out.push_back(S.rows() > 0 ? VectorX(S.transpose() * stacked) : VectorX());
  return out;
}

} // namespace

Geometry::Geometry(const ComplexMesh& mesh, std::vector<FieldBlock> blocks)
    : mesh_(&mesh), blocks_(std::move(blocks)) {
  build_operators();
  build_samplers();
  e_dofs_ = 0;
  total_dofs_ = 0;
  for (const auto& blk : blocks_) {
    e_dofs_ += mesh_->cell_count(blk.e_degree);
    total_dofs_ += mesh_->cell_count(blk.e_degree);
    if (blk.has_b) total_dofs_ += mesh_->cell_count(blk.e_degree + 1);
  }
}

Geometry Geometry::maxwell_1d(const ComplexMesh& mesh) {
  if (mesh.dimension() != 1) throw std::invalid_argument("maxwell_1d: need a 1D mesh");
  const double lx = mesh.physical_spacing(0);
  FieldBlock longitudinal;
  longitudinal.e_degree = 1;
  longitudinal.has_b = false;
  longitudinal.e_slots = {{0, lx, 1.0}};
  FieldBlock transverse;
  transverse.e_degree = 0;
  transverse.has_b = true;
  transverse.e_slots = {{1, 1.0, 1.0}};
  transverse.b_slots = {{2, lx, 1.0}};
  return Geometry(mesh, {longitudinal, transverse});
}

Geometry Geometry::maxwell_2d_te(const ComplexMesh& mesh) {
  if (mesh.dimension() != 2) throw std::invalid_argument("maxwell_2d_te: need a 2D mesh");
  const double lx = mesh.physical_spacing(0);
  const double ly = mesh.physical_spacing(1);
  FieldBlock te;
  te.e_degree = 1;
  te.has_b = true;
  te.e_slots = {{0, lx, 1.0}, {1, ly, 1.0}};
  te.b_slots = {{2, lx * ly, 1.0}};
  return Geometry(mesh, {te});
}

Geometry Geometry::maxwell_3d(const ComplexMesh& mesh) {
  if (mesh.dimension() != 3) throw std::invalid_argument("maxwell_3d: need a 3D mesh");
  const double lx = mesh.physical_spacing(0);
  const double ly = mesh.physical_spacing(1);
  const double lz = mesh.physical_spacing(2);
  FieldBlock full;
  full.e_degree = 1;
  full.has_b = true;
  full.e_slots = {{0, lx, 1.0}, {1, ly, 1.0}, {2, lz, 1.0}};
  // Face types come ordered xy, xz, yz; i_B vol^3 puts -By on the xz slot.
  full.b_slots = {{2, lx * ly, 1.0}, {1, lx * lz, -1.0}, {0, ly * lz, 1.0}};
  return Geometry(mesh, {full});
}

Geometry Geometry::maxwell(const ComplexMesh& mesh) {
  switch (mesh.dimension()) {
    case 1: return maxwell_1d(mesh);
    case 2: return maxwell_2d_te(mesh);
    default: return maxwell_3d(mesh);
  }
}

void Geometry::build_operators() {
  const ComplexMesh& mesh = *mesh_;
  const int n = mesh.dimension();
  for (const auto& blk : blocks_) {
    const int ke = blk.e_degree;
    if (blk.has_b) {
      faraday_.push_back(mesh.incidence_real(ke));
      // M_e^{-1} D^T M_b assembled once; both masses are diagonal.
      SpMat W = mesh.incidence_real(ke).transpose();
      W = mesh.hodge(ke).inverse().matrix().asDiagonal() * W;
      W = W * SpMat(mesh.hodge(ke + 1).matrix().asDiagonal());
      weak_curl_.push_back(std::move(W));
      if (ke + 1 < n)
        gauss_b_.push_back(mesh.incidence_real(ke + 1));
      else
        gauss_b_.push_back(SpMat());
    } else {
      faraday_.push_back(SpMat());
      weak_curl_.push_back(SpMat());
      gauss_b_.push_back(SpMat());
    }
    if (ke >= 1) {
      SpMat G = mesh.incidence_real(ke - 1).transpose();
      G = G * SpMat(mesh.hodge(ke).matrix().asDiagonal());
      gauss_d_.push_back(std::move(G));
    } else {
      gauss_d_.push_back(SpMat());
    }
  }
}

void Geometry::build_samplers() {
  for (const auto& blk : blocks_) {
    sample_e_.push_back(build_center_sampler(*mesh_, blk.e_degree, blk.e_slots));
    sample_b_.push_back(blk.has_b
                            ? build_center_sampler(*mesh_, blk.e_degree + 1, blk.b_slots)
                            : SpMat());
    if (mesh_->dimension() == 1) {
      sample_e_vertex_.push_back(build_vertex_sampler(*mesh_, blk.e_degree, blk.e_slots));
      sample_b_vertex_.push_back(
          blk.has_b ? build_vertex_sampler(*mesh_, blk.e_degree + 1, blk.b_slots) : SpMat());
    } else {
      sample_e_vertex_.push_back(SpMat());
      sample_b_vertex_.push_back(SpMat());
    }
  }
}

EMFields Geometry::zero_fields() const {
  EMFields f;
  for (const auto& blk : blocks_) {
    f.e.push_back(VectorX::Zero(mesh_->cell_count(blk.e_degree)));
    f.b.push_back(blk.has_b ? VectorX::Zero(mesh_->cell_count(blk.e_degree + 1)) : VectorX());
  }
  return f;
}

Eigen::Matrix<double, Eigen::Dynamic, 3> Geometry::sample_E(const EMFields& f) const {
  return apply_samplers(sample_e_, f.e, n_centers());
}

Eigen::Matrix<double, Eigen::Dynamic, 3> Geometry::sample_B(const EMFields& f) const {
  return apply_samplers(sample_b_, f.b, n_centers());
}

std::vector<VectorX> Geometry::scatter_E(
    const Eigen::Matrix<double, Eigen::Dynamic, 3>& g) const {
  return apply_adjoint(sample_e_, g);
}

std::vector<VectorX> Geometry::scatter_B(
    const Eigen::Matrix<double, Eigen::Dynamic, 3>& g) const {
  return apply_adjoint(sample_b_, g);
}

Eigen::Matrix<double, Eigen::Dynamic, 3> Geometry::sample_E_vertices(const EMFields& f) const {
  if (mesh_->dimension() != 1)
    throw std::invalid_argument("sample_E_vertices: available on 1D layouts only");
  return apply_samplers(sample_e_vertex_, f.e, mesh_->vertex_count());
}

Eigen::Matrix<double, Eigen::Dynamic, 3> Geometry::sample_B_vertices(const EMFields& f) const {
  if (mesh_->dimension() != 1)
    throw std::invalid_argument("sample_B_vertices: available on 1D layouts only");
  return apply_samplers(sample_b_vertex_, f.b, mesh_->vertex_count());
}

std::vector<VectorX> Geometry::scatter_E_vertices(
    const Eigen::Matrix<double, Eigen::Dynamic, 3>& g) const {
  if (mesh_->dimension() != 1)
    throw std::invalid_argument("scatter_E_vertices: available on 1D layouts only");
  return apply_adjoint(sample_e_vertex_, g);
}

const ArrayX& Geometry::e_mass(int i) const { return mesh_->hodge(blocks_[i].e_degree); }

const ArrayX& Geometry::b_mass(int i) const {
  if (!blocks_[i].has_b) throw std::invalid_argument("b_mass: block has no b partner");
  return mesh_->hodge(blocks_[i].e_degree + 1);
}

double Geometry::inner_e(const EMFields& a, const EMFields& b) const {
  double s = 0.0;
  for (int i = 0; i < n_blocks(); ++i)
    s += a.e[i].dot((e_mass(i) * b.e[i].array()).matrix());
  return s;
}

double Geometry::inner_b(const EMFields& a, const EMFields& b) const {
  double s = 0.0;
  for (int i = 0; i < n_blocks(); ++i)
    if (blocks_[i].has_b) s += a.b[i].dot((b_mass(i) * b.b[i].array()).matrix());
  return s;
}

} // namespace demax
