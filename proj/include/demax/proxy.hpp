#pragma once

#include <functional>

#include "demax/cochain.hpp"
#include "demax/mesh.hpp"

namespace demax {

enum class ProxyTarget { one_form, two_form };

using VectorField = std::function<Vec3(const Vec3&)>;

/// Build the cochain proxy of a vector field by midpoint sampling:
///   one_form  = edge-integrated V-flat,
///   two_form  = face-integrated i_V vol^3 (3D only).
/// Twisted targets are the Hodge star of the complementary straight proxy
/// (caller declares pseudo-vector nature through the flavor).
Cochain vector_proxy_to_forms(const ComplexMesh& mesh, const VectorField& field,
                              ProxyTarget target, Flavor flavor = Flavor::straight);

/// Same, with precomputed samples: one row per carrying cell of the straight
/// proxy (its center), ordered by cell index. Rejects a sample-location
/// mismatch (wrong row count).
Cochain vector_proxy_to_forms(const ComplexMesh& mesh,
                              const Eigen::Matrix<double, Eigen::Dynamic, 3>& samples,
                              ProxyTarget target, Flavor flavor = Flavor::straight);

/// Pointwise vector component (orthonormal frame) back out of a straight
/// 1-cochain, on the edges of the given axis.
VectorX one_form_component(const ComplexMesh& mesh, const Cochain& w, int axis);

/// Component normal to the faces of the type missing `axis`, from a straight
/// (n-1)-cochain built like i_V vol (3D).
VectorX two_form_component(const ComplexMesh& mesh, const Cochain& w, int axis);

} // namespace demax
