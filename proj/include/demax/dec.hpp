#pragma once

#include "demax/cochain.hpp"
#include "demax/mesh.hpp"

namespace demax {

/// Exterior derivative: degree k -> k+1, flavor preserved. Straight cochains
/// use the integer coboundary; twisted cochains use its transpose on the
/// dual complex.
Cochain exterior_derivative(const ComplexMesh& mesh, const Cochain& w);

/// Hodge star: degree k -> n-k, flavor flipped. Diagonal; v -> hodge[k] v for
/// straight input and hodge[n-k]^{-1} v for twisted input, so star(star(w))
/// returns w in this discrete convention.
Cochain hodge_star(const ComplexMesh& mesh, const Cochain& w);

/// L2 inner product of two cochains of equal degree and flavor.
double l2_inner(const ComplexMesh& mesh, const Cochain& a, const Cochain& b);

/// Poincare duality pairing <w, eta> of a straight k-cochain with a twisted
/// (n-k)-cochain: the combinatorial sum of products of complementary DOFs.
/// Contains no metric factors by construction.
double poincare_pair(const ComplexMesh& mesh, const Cochain& w, const Cochain& eta);

/// Codifferential d* = M_{k-1}^{-1} D_{k-1}^T M_k on straight k-cochains, the
/// L2 adjoint of exterior_derivative.
Cochain codifferential(const ComplexMesh& mesh, const Cochain& w);

} // namespace demax
