#pragma once

#include <stdexcept>

#include "demax/mesh.hpp"
#include "demax/types.hpp"

namespace demax {

enum class Flavor { straight, twisted };

/// Degrees of freedom of a discrete k-form. Straight cochains live on the
/// k-cells; twisted j-cochains live on the dual cells and are indexed by the
/// primal (n-j)-cells (see ComplexMesh).
struct Cochain {
  int degree = 0;
  Flavor flavor = Flavor::straight;
  VectorX values;

  /// Degree of the primal cells that index this cochain's DOFs.
  int index_degree(const ComplexMesh& mesh) const {
    return flavor == Flavor::straight ? degree : mesh.dimension() - degree;
  }
};

inline Cochain make_cochain(const ComplexMesh& mesh, int degree, Flavor flavor,
                            VectorX values) {
  if (degree < 0 || degree > mesh.dimension())
    throw std::invalid_argument("cochain degree out of range");
  Cochain c{degree, flavor, std::move(values)};
  if (c.values.size() != mesh.cell_count(c.index_degree(mesh)))
    throw std::invalid_argument("cochain value count does not match cell count");
  return c;
}

inline Cochain zero_cochain(const ComplexMesh& mesh, int degree,
                            Flavor flavor = Flavor::straight) {
  int idx = flavor == Flavor::straight ? degree : mesh.dimension() - degree;
  return Cochain{degree, flavor, VectorX::Zero(mesh.cell_count(idx))};
}

} // namespace demax
