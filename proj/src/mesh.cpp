#include "demax/mesh.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace demax {

namespace {

int popcount8(std::uint8_t m) { return std::popcount(static_cast<unsigned>(m)); }

} // namespace

double ComplexMesh::total_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= std::sqrt(metric_[a]) * extent_[a];
  return v;
}

Index ComplexMesh::cell_count(int degree) const {
  if (degree < 0 || degree > dim_) throw std::invalid_argument("cell_count: degree out of range");
  return static_cast<Index>(types_[degree].size()) * n_flat_;
}

const SpMatI& ComplexMesh::incidence(int k) const {
  if (k < 0 || k >= dim_) throw std::invalid_argument("incidence: need 0 <= k < dimension");
  return incidence_[k];
}

const SpMat& ComplexMesh::incidence_real(int k) const {
  if (k < 0 || k >= dim_) throw std::invalid_argument("incidence: need 0 <= k < dimension");
  return incidence_real_[k];
}

const ArrayX& ComplexMesh::hodge(int k) const {
  if (k < 0 || k > dim_) throw std::invalid_argument("hodge: degree out of range");
  return hodge_[k];
}

void ComplexMesh::replace_hodge(int k, ArrayX diag) {
  if (k < 0 || k > dim_) throw std::invalid_argument("replace_hodge: degree out of range");
  if (diag.size() != cell_count(k)) throw std::invalid_argument("replace_hodge: size mismatch");
  if ((diag <= 0.0).any()) throw std::invalid_argument("replace_hodge: entries must be positive");
  hodge_[k] = std::move(diag);
}

Vec3 ComplexMesh::cell_center(int degree, int t, int i, int j, int k) const {
  const std::uint8_t mask = types_[degree][t];
  const std::array<int, 3> p{i, j, k};
  Vec3 x = Vec3::Zero();
  for (int a = 0; a < dim_; ++a)
    x[a] = (p[a] + ((mask >> a) & 1 ? 0.5 : 0.0)) * h_[a];
  return x;
}

Vec3 ComplexMesh::vertex_position(int i, int j, int k) const {
  return Vec3(i * h_[0], dim_ > 1 ? j * h_[1] : 0.0, dim_ > 2 ? k * h_[2] : 0.0);
}

void ComplexMesh::assemble() {
  n_flat_ = 1;
  for (int a = 0; a < dim_; ++a) n_flat_ *= cells_[a];

  for (int k = 0; k <= dim_; ++k) {
    types_[k].clear();
    for (std::uint8_t m = 0; m < (1u << dim_); ++m)
      if (popcount8(m) == k) types_[k].push_back(m);
  }

  // Coboundary of a (k+1)-cell spanned by axes A at anchor p:
  //   sum_m (-1)^m [dof(A \ a_m, p + e_{a_m}) - dof(A \ a_m, p)]
  // with a_m the m-th axis of A in increasing order.
  incidence_.clear();
  incidence_real_.clear();
  for (int k = 0; k < dim_; ++k) {
    SpMatI D(cell_count(k + 1), cell_count(k));
    std::vector<Eigen::Triplet<int>> trips;
    trips.reserve(static_cast<std::size_t>(cell_count(k + 1)) * 2 * (k + 1));
    const auto& row_types = types_[k + 1];
    const auto& col_types = types_[k];
    auto col_type_index = [&](std::uint8_t m) {
      for (std::size_t t = 0; t < col_types.size(); ++t)
        if (col_types[t] == m) return static_cast<int>(t);
      throw std::logic_error("incidence: missing cell type");
    };
    for (std::size_t rt = 0; rt < row_types.size(); ++rt) {
      const std::uint8_t mask = row_types[rt];
      for (int kk = 0; kk < (dim_ > 2 ? cells_[2] : 1); ++kk)
        for (int jj = 0; jj < (dim_ > 1 ? cells_[1] : 1); ++jj)
          for (int ii = 0; ii < cells_[0]; ++ii) {
            const Index row = cell_index(k + 1, static_cast<int>(rt), ii, jj, kk);
            int m = 0;
            for (int a = 0; a < dim_; ++a) {
              if (!((mask >> a) & 1)) continue;
              const int sign = (m % 2 == 0) ? 1 : -1;
              const int sub_t = col_type_index(static_cast<std::uint8_t>(mask & ~(1u << a)));
              std::array<int, 3> q{ii, jj, kk};
              q[a] = (q[a] + 1) % cells_[a];
              trips.emplace_back(row, cell_index(k, sub_t, q[0], q[1], q[2]), sign);
              trips.emplace_back(row, cell_index(k, sub_t, ii, jj, kk), -sign);
              ++m;
            }
          }
    }
    D.setFromTriplets(trips.begin(), trips.end());
    D.makeCompressed();
    incidence_.push_back(std::move(D));
    incidence_real_.push_back(incidence_.back().cast<double>());
  }

  // Hodge entry = (physical measure of the dual cell) / (physical measure of
  // the primal cell); physical edge length along axis a is sqrt(g_aa) h_a.
  hodge_.clear();
  for (int k = 0; k <= dim_; ++k) {
    ArrayX diag(cell_count(k));
    for (std::size_t t = 0; t < types_[k].size(); ++t) {
      const std::uint8_t mask = types_[k][t];
      double primal = 1.0, dual = 1.0;
      for (int a = 0; a < dim_; ++a) {
        const double len = std::sqrt(metric_[a]) * h_[a];
        if ((mask >> a) & 1)
          primal *= len;
        else
          dual *= len;
      }
      diag.segment(static_cast<Index>(t) * n_flat_, n_flat_).setConstant(dual / primal);
    }
    hodge_.push_back(std::move(diag));
  }
}

ComplexMesh build_mesh(int dimension, const std::vector<int>& cells_per_axis,
                       const std::vector<double>& extent_per_axis,
                       const std::vector<double>& metric) {
  if (dimension < 1 || dimension > ComplexMesh::kMaxDim)
    throw std::invalid_argument("build_mesh: dimension must be 1, 2, or 3");
  if (static_cast<int>(cells_per_axis.size()) != dimension)
    throw std::invalid_argument("build_mesh: cells_per_axis size must equal dimension");
  if (static_cast<int>(extent_per_axis.size()) != dimension)
    throw std::invalid_argument("build_mesh: extent_per_axis size must equal dimension");
  if (!metric.empty() && static_cast<int>(metric.size()) != dimension)
    throw std::invalid_argument("build_mesh: metric size must equal dimension");

  ComplexMesh mesh;
  mesh.dim_ = dimension;
  for (int a = 0; a < dimension; ++a) {
    if (cells_per_axis[a] < 2)
      throw std::invalid_argument("build_mesh: need at least 2 cells per axis");
    if (!(extent_per_axis[a] > 0.0))
      throw std::invalid_argument("build_mesh: extents must be positive");
    if (!metric.empty() && !(metric[a] > 0.0))
      throw std::invalid_argument("build_mesh: metric coefficients must be positive");
    mesh.cells_[a] = cells_per_axis[a];
    mesh.extent_[a] = extent_per_axis[a];
    mesh.h_[a] = extent_per_axis[a] / cells_per_axis[a];
    mesh.metric_[a] = metric.empty() ? 1.0 : metric[a];
  }
  mesh.assemble();
  return mesh;
}

} // namespace demax
