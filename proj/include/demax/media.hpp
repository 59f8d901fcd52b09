#pragma once

#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "demax/cochain.hpp"
#include "demax/geometry.hpp"
#include "demax/types.hpp"

namespace demax {

// ---------------------------------------------------------------------------
// Constitutive models. K is the coupling energy functional; polarization and
// magnetization come from its variational derivatives, so
//   D = E - 4 pi dK/dE,   H = B + 4 pi dK/dB   (Gaussian units).
// ---------------------------------------------------------------------------

struct Vacuum {};

struct LinearSusceptibility {
  double chi_e = 0.0;
  double chi_m = 0.0;
};

/// Intensity-dependent index of refraction: P = (chi1 + chi3 |E|^2) E.
struct Kerr {
  double chi1 = 0.0;
  double chi3 = 0.0;
};

/// Spatially nonlocal polarization P = alpha E + beta Laplacian(E), from
/// K = -1/2 int [ alpha |E|^2 + beta (|div E|^2 + |curl E|^2) ].
struct NonlocalDispersive {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Medium defined by a Lorentz-invariant Lagrangian density L(I1, I2) with
/// I1 = |E|^2 - |B|^2 and I2 = E.B, so that D = dL/dE and H = -dL/dB.
struct InvariantLagrangian {
  std::function<double(double, double)> lagrangian;
  std::function<double(double, double)> dL_dI1;
  std::function<double(double, double)> dL_dI2;
};

using MediumModel =
    std::variant<Vacuum, LinearSusceptibility, Kerr, NonlocalDispersive, InvariantLagrangian>;

/// Born-Infeld Lagrangian with field-strength parameter b.
InvariantLagrangian born_infeld(double b);
/// The linear case L = I1 / 2 (reproduces the vacuum).
InvariantLagrangian vacuum_lagrangian();

bool is_pointwise(const MediumModel& medium);

// Pointwise constitutive algebra on orthonormal-frame field values; rejects
// nonlocal media. These are the maps the Lorentz covariance checks exercise.
double pointwise_energy_density(const MediumModel& medium, const Vec3& E, const Vec3& B);
Vec3 pointwise_dK_dE(const MediumModel& medium, const Vec3& E, const Vec3& B);
Vec3 pointwise_dK_dB(const MediumModel& medium, const Vec3& E, const Vec3& B);
Mat3 pointwise_d2K_dEdE(const MediumModel& medium, const Vec3& E, const Vec3& B);
Vec3 pointwise_D(const MediumModel& medium, const Vec3& E, const Vec3& B);
Vec3 pointwise_H(const MediumModel& medium, const Vec3& E, const Vec3& B);

/// dE/dD = (I - 4 pi d2K/dEdE)^{-1} at a point (Appendix-style implicit
/// function Jacobian). Throws on a singular constitutive map.
Mat3 jacobian_dE_dD(const MediumModel& medium, const Vec3& E, const Vec3& B);

// ---------------------------------------------------------------------------
// Mesh-level operations on a Geometry's field blocks.
// ---------------------------------------------------------------------------

/// Discrete coupling energy K[e, b].
double energy_K(const Geometry& geom, const MediumModel& medium, const EMFields& fields);

/// Variational derivatives (dK/de, dK/db) in the L2 identification: cochains
/// of the same degrees as (e, b), i.e. mass-inverse times the DOF gradient.
EMFields variational_derivatives(const Geometry& geom, const MediumModel& medium,
                                 const EMFields& fields);

/// Raw DOF gradient of K (no mass inverse); the metric-free dual object.
EMFields dof_gradient(const Geometry& geom, const MediumModel& medium, const EMFields& fields);

enum class DualityConvention { l2, star };

/// Constitutive maps. In the l2 convention d and h are straight cochains of
/// the e/b degrees; in the star convention they are the twisted Hodge duals.
struct DHFields {
  std::vector<Cochain> d;
  std::vector<Cochain> h;
};
DHFields constitutive_DH(const Geometry& geom, const MediumModel& medium,
                         const EMFields& fields,
                         DualityConvention convention = DualityConvention::l2);

/// h-parts only, as raw block vectors in the l2 convention (b + 4 pi dK/db).
std::vector<VectorX> h_fields(const Geometry& geom, const MediumModel& medium,
                              const EMFields& fields);

struct NewtonOptions {
  double tolerance = 1e-12;
  int max_iterations = 50;
};

/// Solve d(e, b) = d_target for e by Newton iteration on the DOF map,
/// starting from e = d_target (or the supplied warm start). Throws
/// NonConvergenceError with the final residual on failure.
std::vector<VectorX> invert_constitutive(const Geometry& geom, const MediumModel& medium,
                                         const std::vector<VectorX>& d_target,
                                         const std::vector<VectorX>& b,
                                         const NewtonOptions& opts = {},
                                         const std::vector<VectorX>* warm_start = nullptr);

/// H = K - (dK/de, e) + (1/8pi) [ (e,e) + (b,b) ].
double hamiltonian_H(const Geometry& geom, const MediumModel& medium, const EMFields& fields);

/// Evolving pair (d, b) plus the cached (e, h) from constitutive inversion.
struct FieldState {
  EMFields db;       // d in the l2 (same-degree) representation, and b
  EMFields eh;       // cached e and h
  bool cache_clean = false;

  void refresh(const Geometry& geom, const MediumModel& medium, const NewtonOptions& opts = {});
  static FieldState from_eb(const Geometry& geom, const MediumModel& medium, EMFields eb);
};

/// (dHbar/dd, dHbar/db) = (e/4pi, h/4pi), from the state cache.
std::pair<std::vector<VectorX>, std::vector<VectorX>> hamiltonian_gradients(
    const Geometry& geom, const MediumModel& medium, FieldState& state);

struct DispersionPoint {
  double omega;
  double v_group;
  double v_phase;
};

/// Closed-form dispersion of the nonlocal medium: omega^2 = c^2k^2/(alpha + beta k^2).
DispersionPoint dispersion_omega(double alpha, double beta, double c, double k);

} // namespace demax
