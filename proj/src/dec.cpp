#include "demax/dec.hpp"

#include <stdexcept>

namespace demax {

namespace {

void check_sized(const ComplexMesh& mesh, const Cochain& w, const char* who) {
  if (w.degree < 0 || w.degree > mesh.dimension())
    throw std::invalid_argument(std::string(who) + ": degree out of range");
  if (w.values.size() != mesh.cell_count(w.index_degree(mesh)))
    throw std::invalid_argument(std::string(who) + ": value count mismatch");
}

} // namespace

Cochain exterior_derivative(const ComplexMesh& mesh, const Cochain& w) {
  check_sized(mesh, w, "exterior_derivative");
  const int n = mesh.dimension();
  if (w.degree >= n)
    throw std::invalid_argument("exterior_derivative: top-degree cochain has no derivative");
  Cochain out;
  out.degree = w.degree + 1;
  out.flavor = w.flavor;
  if (w.flavor == Flavor::straight) {
    out.values = mesh.incidence_real(w.degree) * w.values;
  } else {
    // Twisted j-cochain indexed by (n-j)-cells; its coboundary is the
    // transposed primal incidence one degree down.
    out.values = mesh.incidence_real(n - w.degree - 1).transpose() * w.values;
  }
  return out;
}

Cochain hodge_star(const ComplexMesh& mesh, const Cochain& w) {
  check_sized(mesh, w, "hodge_star");
  const int n = mesh.dimension();
  Cochain out;
  out.degree = n - w.degree;
  if (w.flavor == Flavor::straight) {
    out.flavor = Flavor::twisted;
    out.values = (mesh.hodge(w.degree).array() * w.values.array()).matrix();
  } else {
    out.flavor = Flavor::straight;
    out.values = (w.values.array() / mesh.hodge(n - w.degree).array()).matrix();
  }
  return out;
}

double l2_inner(const ComplexMesh& mesh, const Cochain& a, const Cochain& b) {
  check_sized(mesh, a, "l2_inner");
  check_sized(mesh, b, "l2_inner");
  if (a.degree != b.degree || a.flavor != b.flavor)
    throw std::invalid_argument("l2_inner: degree/flavor mismatch");
  if (a.flavor == Flavor::straight)
    return a.values.dot((mesh.hodge(a.degree).array() * b.values.array()).matrix());
  // Twisted cochains: the star is an isometry, so the mass is hodge^{-1} on
  // the indexing degree.
  const int idx = mesh.dimension() - a.degree;
  return a.values.dot((b.values.array() / mesh.hodge(idx).array()).matrix());
}

double poincare_pair(const ComplexMesh& mesh, const Cochain& w, const Cochain& eta) {
  check_sized(mesh, w, "poincare_pair");
  check_sized(mesh, eta, "poincare_pair");
  if (w.flavor != Flavor::straight || eta.flavor != Flavor::twisted)
    throw std::invalid_argument("poincare_pair: need (straight, twisted) pair");
  if (eta.degree != mesh.dimension() - w.degree)
    throw std::invalid_argument("poincare_pair: degrees must be complementary");
  return w.values.dot(eta.values);
}

Cochain codifferential(const ComplexMesh& mesh, const Cochain& w) {
  check_sized(mesh, w, "codifferential");
  if (w.flavor != Flavor::straight)
    throw std::invalid_argument("codifferential: implemented for straight cochains");
  if (w.degree < 1)
    throw std::invalid_argument("codifferential: degree 0 has no codifferential");
  const int k = w.degree;
  Cochain out;
  out.degree = k - 1;
  out.flavor = Flavor::straight;
  VectorX tmp = mesh.incidence_real(k - 1).transpose() *
                (mesh.hodge(k).array() * w.values.array()).matrix();
  out.values = (tmp.array() / mesh.hodge(k - 1).array()).matrix();
  return out;
}

} // namespace demax
