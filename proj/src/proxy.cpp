#include "demax/proxy.hpp"

#include <cmath>
#include <stdexcept>

#include "demax/dec.hpp"

namespace demax {

namespace {

int face_sign(std::uint8_t mask, int missing) {
  // Sign of the `missing` slot of i_V vol^3 on the face spanned by `mask`:
  // (-1)^(number of spanned axes below the missing one).
  int below = 0;
  for (int a = 0; a < missing; ++a)
    if ((mask >> a) & 1) ++below;
  return below % 2 == 0 ? 1 : -1;
}

int missing_axis(const ComplexMesh& mesh, std::uint8_t mask) {
  for (int a = 0; a < mesh.dimension(); ++a)
    if (!((mask >> a) & 1)) return a;
  throw std::logic_error("missing_axis: full mask");
}

int edge_axis(std::uint8_t mask) {
  for (int a = 0; a < 3; ++a)
    if ((mask >> a) & 1) return a;
  throw std::logic_error("edge_axis: empty mask");
}

Cochain straight_proxy(const ComplexMesh& mesh,
                       const std::function<Vec3(Index)>& sample_at_cell, ProxyTarget target) {
  const int n = mesh.dimension();
  const int degree = target == ProxyTarget::one_form ? 1 : 2;
  if (target == ProxyTarget::two_form && n != 3)
    throw std::invalid_argument("vector_proxy_to_forms: two_form target needs a 3D mesh");
  if (degree > n) throw std::invalid_argument("vector_proxy_to_forms: degree exceeds dimension");

  Cochain out = zero_cochain(mesh, degree, Flavor::straight);
  const std::array<int, 3> N{mesh.cells_per_axis(0), n > 1 ? mesh.cells_per_axis(1) : 1,
                             n > 2 ? mesh.cells_per_axis(2) : 1};
  for (int t = 0; t < mesh.type_count(degree); ++t) {
    const std::uint8_t mask = mesh.cell_type(degree, t);
    for (int kk = 0; kk < N[2]; ++kk)
      for (int jj = 0; jj < N[1]; ++jj)
        for (int ii = 0; ii < N[0]; ++ii) {
          const Index id = mesh.cell_index(degree, t, ii, jj, kk);
          const Vec3 v = sample_at_cell(id);
          if (target == ProxyTarget::one_form) {
            const int a = edge_axis(mask);
            out.values[id] = v[a] * mesh.metric(a) * mesh.spacing(a);
          } else {
            const int m = missing_axis(mesh, mask);
            double area = 1.0;
            for (int a = 0; a < n; ++a)
              if ((mask >> a) & 1) area *= mesh.spacing(a);
            double sqrtg = 1.0;
            for (int a = 0; a < n; ++a) sqrtg *= std::sqrt(mesh.metric(a));
            out.values[id] = face_sign(mask, m) * v[m] * sqrtg * area;
          }
        }
  }
  return out;
}

} // namespace

Cochain vector_proxy_to_forms(const ComplexMesh& mesh, const VectorField& field,
                              ProxyTarget target, Flavor flavor) {
  const int degree = target == ProxyTarget::one_form ? 1 : 2;
  auto sampler = [&](Index id) {
    const Index nf = mesh.vertex_count();
    const int t = static_cast<int>(id / nf);
    const Index flat = id % nf;
    const int nx = mesh.cells_per_axis(0);
    const int ny = mesh.dimension() > 1 ? mesh.cells_per_axis(1) : 1;
    const int i = static_cast<int>(flat % nx);
    const int j = static_cast<int>((flat / nx) % ny);
    const int k = static_cast<int>(flat / (static_cast<Index>(nx) * ny));
    return field(mesh.cell_center(degree, t, i, j, k));
  };
  Cochain straight = straight_proxy(mesh, sampler, target);
  if (flavor == Flavor::straight) return straight;
  return hodge_star(mesh, straight);
}

Cochain vector_proxy_to_forms(const ComplexMesh& mesh,
                              const Eigen::Matrix<double, Eigen::Dynamic, 3>& samples,
                              ProxyTarget target, Flavor flavor) {
  const int degree = target == ProxyTarget::one_form ? 1 : 2;
  if (degree > mesh.dimension())
    throw std::invalid_argument("vector_proxy_to_forms: degree exceeds dimension");
  if (samples.rows() != mesh.cell_count(degree))
    throw std::invalid_argument("vector_proxy_to_forms: sample-location mismatch");
  Cochain straight =
      straight_proxy(mesh, [&](Index id) { return Vec3(samples.row(id)); }, target);
  if (flavor == Flavor::straight) return straight;
  return hodge_star(mesh, straight);
}

VectorX one_form_component(const ComplexMesh& mesh, const Cochain& w, int axis) {
  if (w.degree != 1 || w.flavor != Flavor::straight)
    throw std::invalid_argument("one_form_component: need a straight 1-cochain");
  for (int t = 0; t < mesh.type_count(1); ++t)
    if (mesh.cell_type(1, t) == (1u << axis))
      return w.values.segment(static_cast<Index>(t) * mesh.vertex_count(),
                              mesh.vertex_count()) /
             mesh.physical_spacing(axis);
  throw std::invalid_argument("one_form_component: axis not in mesh");
}

VectorX two_form_component(const ComplexMesh& mesh, const Cochain& w, int axis) {
  const int n = mesh.dimension();
  if (w.degree != n - 1 || w.flavor != Flavor::straight)
    throw std::invalid_argument("two_form_component: need a straight (n-1)-cochain");
  for (int t = 0; t < mesh.type_count(n - 1); ++t) {
    const std::uint8_t mask = mesh.cell_type(n - 1, t);
    if (missing_axis(mesh, mask) != axis) continue;
    double area = 1.0;
    for (int a = 0; a < n; ++a)
      if ((mask >> a) & 1) area *= mesh.physical_spacing(a);
    // remaining sqrt(g) factor of vol belongs to the missing axis
    area *= std::sqrt(mesh.metric(axis));
    const double s = face_sign(mask, axis);
    return s *
           w.values.segment(static_cast<Index>(t) * mesh.vertex_count(), mesh.vertex_count()) /
           area;
  }
  throw std::invalid_argument("two_form_component: axis not in mesh");
}

} // namespace demax
