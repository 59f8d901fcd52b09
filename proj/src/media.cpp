#include "demax/media.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "demax/errors.hpp"

namespace demax {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

using Mx3 = Eigen::Matrix<double, Eigen::Dynamic, 3>;

struct Invariants {
  double i1, i2;
};

Invariants invariants(const Vec3& E, const Vec3& B) {
  return {E.squaredNorm() - B.squaredNorm(), E.dot(B)};
}

// Quadratic L2 coefficients: dK/de += e_scale * e, dK/db += b_scale * b.
struct QuadraticPart {
  double e_scale = 0.0;
  double b_scale = 0.0;
};

QuadraticPart quadratic_part(const MediumModel& medium) {
  if (const auto* lin = std::get_if<LinearSusceptibility>(&medium))
    return {-lin->chi_e, lin->chi_m};
  if (const auto* kerr = std::get_if<Kerr>(&medium)) return {-kerr->chi1, 0.0};
  return {};
}

bool has_quadrature_part(const MediumModel& medium) {
  if (const auto* kerr = std::get_if<Kerr>(&medium)) return kerr->chi3 != 0.0;
  return std::holds_alternative<InvariantLagrangian>(medium);
}

// Pointwise energy density of the quadrature-handled part only (the Kerr
// quartic term, or the whole kernel for an invariant-Lagrangian medium).
double quad_density(const MediumModel& medium, const Vec3& E, const Vec3& B) {
  if (const auto* kerr = std::get_if<Kerr>(&medium)) {
    const double e2 = E.squaredNorm();
    return -0.25 * kerr->chi3 * e2 * e2;
  }
  const auto& inv = std::get<InvariantLagrangian>(medium);
  const auto [i1, i2] = invariants(E, B);
  return (0.5 * i1 - inv.lagrangian(i1, i2)) / kFourPi;
}

void quad_grad(const MediumModel& medium, const Vec3& E, const Vec3& B, Vec3& dE, Vec3& dB) {
  if (const auto* kerr = std::get_if<Kerr>(&medium)) {
    dE = -kerr->chi3 * E.squaredNorm() * E;
    dB.setZero();
    return;
  }
  const auto& inv = std::get<InvariantLagrangian>(medium);
  const auto [i1, i2] = invariants(E, B);
  const double l1 = inv.dL_dI1(i1, i2);
  const double l2 = inv.dL_dI2(i1, i2);
  dE = (E - (2.0 * l1 * E + l2 * B)) / kFourPi;
  dB = (-B - (-2.0 * l1 * B + l2 * E)) / kFourPi;
}

Mat3 quad_hess_EE(const MediumModel& medium, const Vec3& E, const Vec3& B) {
  if (const auto* kerr = std::get_if<Kerr>(&medium))
    return -kerr->chi3 * (E.squaredNorm() * Mat3::Identity() + 2.0 * E * E.transpose());
  // Invariant Lagrangians carry first partials only; difference the gradient.
  const double step = 1e-6 * (1.0 + E.norm());
  Mat3 hess;
  for (int a = 0; a < 3; ++a) {
    Vec3 ep = E, em = E;
    ep[a] += step;
    em[a] -= step;
    Vec3 gp, gm, dummy;
    quad_grad(medium, ep, B, gp, dummy);
    quad_grad(medium, em, B, gm, dummy);
    hess.col(a) = (gp - gm) / (2.0 * step);
  }
  return 0.5 * (hess + hess.transpose());
}

} // namespace

InvariantLagrangian born_infeld(double b) {
  const double b2 = b * b;
  InvariantLagrangian model;
  model.lagrangian = [b2](double i1, double i2) {
    return b2 * (1.0 - std::sqrt(1.0 - i1 / b2 - i2 * i2 / (b2 * b2)));
  };
  model.dL_dI1 = [b2](double i1, double i2) {
    return 0.5 / std::sqrt(1.0 - i1 / b2 - i2 * i2 / (b2 * b2));
  };
  model.dL_dI2 = [b2](double i1, double i2) {
    return (i2 / b2) / std::sqrt(1.0 - i1 / b2 - i2 * i2 / (b2 * b2));
  };
  return model;
}

InvariantLagrangian vacuum_lagrangian() {
  InvariantLagrangian model;
  model.lagrangian = [](double i1, double) { return 0.5 * i1; };
  model.dL_dI1 = [](double, double) { return 0.5; };
  model.dL_dI2 = [](double, double) { return 0.0; };
  return model;
}

bool is_pointwise(const MediumModel& medium) {
  return !std::holds_alternative<NonlocalDispersive>(medium);
}

double pointwise_energy_density(const MediumModel& medium, const Vec3& E, const Vec3& B) {
  if (!is_pointwise(medium))
    throw std::invalid_argument("pointwise energy: medium is nonlocal");
  const QuadraticPart q = quadratic_part(medium);
  double val = 0.5 * q.e_scale * E.squaredNorm() + 0.5 * q.b_scale * B.squaredNorm();
  if (has_quadrature_part(medium)) val += quad_density(medium, E, B);
  return val;
}

Vec3 pointwise_dK_dE(const MediumModel& medium, const Vec3& E, const Vec3& B) {
  if (!is_pointwise(medium)) throw std::invalid_argument("pointwise dK/dE: medium is nonlocal");
  const QuadraticPart q = quadratic_part(medium);
  Vec3 out = q.e_scale * E;
  if (has_quadrature_part(medium)) {
    Vec3 dE, dB;
    quad_grad(medium, E, B, dE, dB);
    out += dE;
  }
  return out;
}

Vec3 pointwise_dK_dB(const MediumModel& medium, const Vec3& E, const Vec3& B) {
  if (!is_pointwise(medium)) throw std::invalid_argument("pointwise dK/dB: medium is nonlocal");
  const QuadraticPart q = quadratic_part(medium);
  Vec3 out = q.b_scale * B;
  if (has_quadrature_part(medium)) {
    Vec3 dE, dB;
    quad_grad(medium, E, B, dE, dB);
    out += dB;
  }
  return out;
}

Mat3 pointwise_d2K_dEdE(const MediumModel& medium, const Vec3& E, const Vec3& B) {
  if (!is_pointwise(medium)) throw std::invalid_argument("pointwise d2K: medium is nonlocal");
  const QuadraticPart q = quadratic_part(medium);
  Mat3 out = q.e_scale * Mat3::Identity();
  if (has_quadrature_part(medium)) out += quad_hess_EE(medium, E, B);
  return out;
}

Vec3 pointwise_D(const MediumModel& medium, const Vec3& E, const Vec3& B) {
  return E - kFourPi * pointwise_dK_dE(medium, E, B);
}

Vec3 pointwise_H(const MediumModel& medium, const Vec3& E, const Vec3& B) {
  return B + kFourPi * pointwise_dK_dB(medium, E, B);
}

Mat3 jacobian_dE_dD(const MediumModel& medium, const Vec3& E, const Vec3& B) {
  const Mat3 dd_de = Mat3::Identity() - kFourPi * pointwise_d2K_dEdE(medium, E, B);
  Eigen::FullPivLU<Mat3> lu(dd_de);
  if (!lu.isInvertible())
    throw std::runtime_error("jacobian_dE_dD: constitutive map not locally invertible");
  return lu.inverse();
}

// ---------------------------------------------------------------------------
// Mesh-level assembly
// ---------------------------------------------------------------------------

namespace {

ArrayX center_volumes(const Geometry& geom) {
  const ComplexMesh& mesh = geom.mesh();
  double v = 1.0;
  for (int a = 0; a < mesh.dimension(); ++a) v *= mesh.physical_spacing(a);
  return ArrayX::Constant(geom.n_centers(), v);
}

// Energy and raw gradients of the nonlocal quadratic functional
//   K = -1/2 sum_blocks [ alpha (e,e) + beta ( (de,de) + (d*e,d*e) ) ]
double nonlocal_energy(const Geometry& geom, const NonlocalDispersive& nl,
                       const EMFields& f) {
  const ComplexMesh& mesh = geom.mesh();
  const int n = mesh.dimension();
  double total = 0.0;
  for (int i = 0; i < geom.n_blocks(); ++i) {
    const int ke = geom.blocks()[i].e_degree;
    const VectorX& e = f.e[i];
    double part = nl.alpha * e.dot((mesh.hodge(ke) * e.array()).matrix());
    if (ke < n) {
      VectorX de = mesh.incidence_real(ke) * e;
      part += nl.beta * de.dot((mesh.hodge(ke + 1) * de.array()).matrix());
    }
    if (ke >= 1) {
      VectorX tmp = mesh.incidence_real(ke - 1).transpose() * (mesh.hodge(ke) * e.array()).matrix();
      VectorX dstar = (tmp.array() / mesh.hodge(ke - 1)).matrix();
      part += nl.beta * dstar.dot((mesh.hodge(ke - 1) * dstar.array()).matrix());
    }
    total += part;
  }
  return -0.5 * total;
}

void nonlocal_raw_gradient(const Geometry& geom, const NonlocalDispersive& nl,
                           const EMFields& f, std::vector<VectorX>& grad_e) {
  const ComplexMesh& mesh = geom.mesh();
  const int n = mesh.dimension();
  for (int i = 0; i < geom.n_blocks(); ++i) {
    const int ke = geom.blocks()[i].e_degree;
    const VectorX& e = f.e[i];
    VectorX g = nl.alpha * (mesh.hodge(ke) * e.array()).matrix();
    if (ke < n) {
      VectorX de = mesh.incidence_real(ke) * e;
      g += nl.beta * mesh.incidence_real(ke).transpose() *
           (mesh.hodge(ke + 1) * de.array()).matrix();
    }
    if (ke >= 1) {
      VectorX tmp = mesh.incidence_real(ke - 1).transpose() * (mesh.hodge(ke) * e.array()).matrix();
      VectorX dstar = (tmp.array() / mesh.hodge(ke - 1)).matrix();
      g += nl.beta * (mesh.hodge(ke) * (mesh.incidence_real(ke - 1) * dstar).array()).matrix();
    }
    grad_e[i] -= g;
  }
}

} // namespace

double energy_K(const Geometry& geom, const MediumModel& medium, const EMFields& fields) {
  if (const auto* nl = std::get_if<NonlocalDispersive>(&medium))
    return nonlocal_energy(geom, *nl, fields);
  const QuadraticPart q = quadratic_part(medium);
  double total = 0.5 * q.e_scale * geom.inner_e(fields, fields) +
                 0.5 * q.b_scale * geom.inner_b(fields, fields);
  if (has_quadrature_part(medium)) {
    const Mx3 E = geom.sample_E(fields);
    const Mx3 B = geom.sample_B(fields);
    const ArrayX vol = center_volumes(geom);
    double sum = 0.0;
    for (Index c = 0; c < E.rows(); ++c)
      sum += vol[c] * quad_density(medium, E.row(c), B.row(c));
    total += sum;
  }
  return total;
}

EMFields dof_gradient(const Geometry& geom, const MediumModel& medium, const EMFields& fields) {
  EMFields grad = geom.zero_fields();
  if (const auto* nl = std::get_if<NonlocalDispersive>(&medium)) {
    nonlocal_raw_gradient(geom, *nl, fields, grad.e);
    return grad;
  }
  const QuadraticPart q = quadratic_part(medium);
  for (int i = 0; i < geom.n_blocks(); ++i) {
    if (q.e_scale != 0.0)
      grad.e[i] += q.e_scale * (geom.e_mass(i) * fields.e[i].array()).matrix();
    if (q.b_scale != 0.0 && geom.blocks()[i].has_b)
      grad.b[i] += q.b_scale * (geom.b_mass(i) * fields.b[i].array()).matrix();
  }
  if (has_quadrature_part(medium)) {
    const Mx3 E = geom.sample_E(fields);
    const Mx3 B = geom.sample_B(fields);
    const ArrayX vol = center_volumes(geom);
    Mx3 gE(E.rows(), 3), gB(E.rows(), 3);
    for (Index c = 0; c < E.rows(); ++c) {
      Vec3 dE, dB;
      quad_grad(medium, E.row(c), B.row(c), dE, dB);
      gE.row(c) = vol[c] * dE;
      gB.row(c) = vol[c] * dB;
    }
    const auto se = geom.scatter_E(gE);
    const auto sb = geom.scatter_B(gB);
    for (int i = 0; i < geom.n_blocks(); ++i) {
      grad.e[i] += se[i];
      if (geom.blocks()[i].has_b) grad.b[i] += sb[i];
    }
  }
  return grad;
}

EMFields variational_derivatives(const Geometry& geom, const MediumModel& medium,
                                 const EMFields& fields) {
  EMFields grad = dof_gradient(geom, medium, fields);
  for (int i = 0; i < geom.n_blocks(); ++i) {
    grad.e[i] = (grad.e[i].array() / geom.e_mass(i)).matrix();
    if (geom.blocks()[i].has_b)
      grad.b[i] = (grad.b[i].array() / geom.b_mass(i)).matrix();
  }
  return grad;
}

std::vector<VectorX> h_fields(const Geometry& geom, const MediumModel& medium,
                              const EMFields& fields) {
  EMFields dk = variational_derivatives(geom, medium, fields);
  std::vector<VectorX> h;
  h.reserve(geom.n_blocks());
  for (int i = 0; i < geom.n_blocks(); ++i) {
    if (geom.blocks()[i].has_b)
      h.push_back(fields.b[i] + kFourPi * dk.b[i]);
    else
      h.push_back(VectorX());
  }
  return h;
}

DHFields constitutive_DH(const Geometry& geom, const MediumModel& medium,
                         const EMFields& fields, DualityConvention convention) {
  const ComplexMesh& mesh = geom.mesh();
  EMFields dk = variational_derivatives(geom, medium, fields);
  DHFields out;
  for (int i = 0; i < geom.n_blocks(); ++i) {
    const auto& blk = geom.blocks()[i];
    VectorX d = fields.e[i] - kFourPi * dk.e[i];
    Cochain dc{blk.e_degree, Flavor::straight, std::move(d)};
    if (convention == DualityConvention::star) dc = hodge_star(mesh, dc);
    out.d.push_back(std::move(dc));
    if (blk.has_b) {
      VectorX h = fields.b[i] + kFourPi * dk.b[i];
      Cochain hc{blk.e_degree + 1, Flavor::straight, std::move(h)};
      if (convention == DualityConvention::star) hc = hodge_star(mesh, hc);
      out.h.push_back(std::move(hc));
    } else {
      out.h.push_back(Cochain{});
    }
  }
  return out;
}

namespace {

VectorX stack_e(const Geometry& geom, const std::vector<VectorX>& e) {
  VectorX z(geom.e_dof_count());
  Index at = 0;
  for (int i = 0; i < geom.n_blocks(); ++i) {
    z.segment(at, e[i].size()) = e[i];
    at += e[i].size();
  }
  return z;
}

std::vector<VectorX> unstack_e(const Geometry& geom, const VectorX& z) {
  std::vector<VectorX> e;
  Index at = 0;
  for (int i = 0; i < geom.n_blocks(); ++i) {
    const Index nsz = geom.mesh().cell_count(geom.blocks()[i].e_degree);
    e.push_back(z.segment(at, nsz));
    at += nsz;
  }
  return e;
}

// Jacobian of the stacked DOF map e -> d(e, b) = e - 4 pi M^{-1} grad_e K.
SpMat constitutive_jacobian(const Geometry& geom, const MediumModel& medium,
                            const EMFields& fields) {
  const ComplexMesh& mesh = geom.mesh();
  const Index ndof = geom.e_dof_count();
  const QuadraticPart q = quadratic_part(medium);

  SpMat J(ndof, ndof);
  J.setIdentity();

  if (const auto* nl = std::get_if<NonlocalDispersive>(&medium)) {
    // d = (1 + 4 pi alpha) e + 4 pi beta (d*d + dd*) e, blockwise.
    J = J * (1.0 + kFourPi * nl->alpha);
    std::vector<Eigen::Triplet<double>> trips;
    Index at = 0;
    const int n = mesh.dimension();
    for (int i = 0; i < geom.n_blocks(); ++i) {
      const int ke = geom.blocks()[i].e_degree;
      const Index nsz = mesh.cell_count(ke);
      SpMat block(nsz, nsz);
      if (ke < n) {
        SpMat D = mesh.incidence_real(ke);
        block += SpMat(mesh.hodge(ke).inverse().matrix().asDiagonal()) * SpMat(D.transpose()) *
                 SpMat(mesh.hodge(ke + 1).matrix().asDiagonal()) * D;
      }
      if (ke >= 1) {
        SpMat D = mesh.incidence_real(ke - 1);
        SpMat dstar = SpMat(mesh.hodge(ke - 1).inverse().matrix().asDiagonal()) *
                      SpMat(D.transpose()) * SpMat(mesh.hodge(ke).matrix().asDiagonal());
        block += D * dstar;
      }
      for (int kcol = 0; kcol < block.outerSize(); ++kcol)
        for (SpMat::InnerIterator it(block, kcol); it; ++it)
          trips.emplace_back(at + it.row(), at + it.col(), kFourPi * nl->beta * it.value());
      at += nsz;
    }
    SpMat J2(ndof, ndof);
    J2.setFromTriplets(trips.begin(), trips.end());
    return SpMat(J + J2);
  }

  if (q.e_scale != 0.0) J = J * (1.0 - kFourPi * q.e_scale);

  if (has_quadrature_part(medium)) {
    // -4 pi M^{-1} S^T blockdiag(vol * d2K/dE2) S with S the stacked sampler.
    const Mx3 E = geom.sample_E(fields);
    const Mx3 B = geom.sample_B(fields);
    const ArrayX vol = center_volumes(geom);
    const Index nc = E.rows();
    std::vector<Eigen::Triplet<double>> tb;
    tb.reserve(static_cast<std::size_t>(nc) * 9);
    for (Index c = 0; c < nc; ++c) {
      const Mat3 hess = vol[c] * quad_hess_EE(medium, E.row(c), B.row(c));
      for (int a = 0; a < 3; ++a)
        for (int b2 = 0; b2 < 3; ++b2)
          if (hess(a, b2) != 0.0) tb.emplace_back(c + nc * a, c + nc * b2, hess(a, b2));
    }
    SpMat blk(nc * 3, nc * 3);
    blk.setFromTriplets(tb.begin(), tb.end());

    std::vector<Eigen::Triplet<double>> ts;
    Index at = 0;
    for (int i = 0; i < geom.n_blocks(); ++i) {
      const SpMat& S = geom.e_sampler(i);
      for (int kcol = 0; kcol < S.outerSize(); ++kcol)
        for (SpMat::InnerIterator it(S, kcol); it; ++it)
          ts.emplace_back(it.row(), at + it.col(), it.value());
      at += mesh.cell_count(geom.blocks()[i].e_degree);
    }
    SpMat S(nc * 3, ndof);
    S.setFromTriplets(ts.begin(), ts.end());

    SpMat T = SpMat(S.transpose()) * SpMat(blk * S);
    VectorX inv_mass(ndof);
    at = 0;
    for (int i = 0; i < geom.n_blocks(); ++i) {
      const Index nsz = mesh.cell_count(geom.blocks()[i].e_degree);
      inv_mass.segment(at, nsz) = geom.e_mass(i).inverse().matrix();
      at += nsz;
    }
    J = SpMat(J + SpMat((-kFourPi) * SpMat(inv_mass.asDiagonal()) * T));
  }
  return J;
}

} // namespace

std::vector<VectorX> invert_constitutive(const Geometry& geom, const MediumModel& medium,
                                         const std::vector<VectorX>& d_target,
                                         const std::vector<VectorX>& b,
                                         const NewtonOptions& opts,
                                         const std::vector<VectorX>* warm_start) {
  EMFields f = geom.zero_fields();
  f.b = b;
  f.e = warm_start ? *warm_start : d_target;

  const VectorX target = stack_e(geom, d_target);
  const double scale = 1.0 + target.norm();

  double resid = 0.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    EMFields dk = variational_derivatives(geom, medium, f);
    VectorX r(geom.e_dof_count());
    Index at = 0;
    for (int i = 0; i < geom.n_blocks(); ++i) {
      VectorX di = f.e[i] - kFourPi * dk.e[i];
      r.segment(at, di.size()) = di - d_target[i];
      at += di.size();
    }
    resid = r.norm();
    if (resid <= opts.tolerance * scale) return f.e;

    SpMat J = constitutive_jacobian(geom, medium, f);
    Eigen::SparseLU<SpMat> lu(J);
    if (lu.info() != Eigen::Success)
      throw NonConvergenceError("invert_constitutive: singular Jacobian", resid, it);
    VectorX de = lu.solve(r);
    VectorX enew = stack_e(geom, f.e) - de;
    f.e = unstack_e(geom, enew);
  }
  throw NonConvergenceError("invert_constitutive failed", resid, opts.max_iterations,
                            "reduce dt or move the medium into its monotone regime");
}

double hamiltonian_H(const Geometry& geom, const MediumModel& medium, const EMFields& fields) {
  EMFields dk = variational_derivatives(geom, medium, fields);
  double cross = 0.0;
  for (int i = 0; i < geom.n_blocks(); ++i)
    cross += dk.e[i].dot((geom.e_mass(i) * fields.e[i].array()).matrix());
  return energy_K(geom, medium, fields) - cross +
         (geom.inner_e(fields, fields) + geom.inner_b(fields, fields)) / (2.0 * kFourPi);
}

void FieldState::refresh(const Geometry& geom, const MediumModel& medium,
                         const NewtonOptions& opts) {
  const std::vector<VectorX>* warm = eh.e.empty() ? nullptr : &eh.e;
  EMFields f = geom.zero_fields();
  f.e = invert_constitutive(geom, medium, db.e, db.b, opts, warm);
  f.b = db.b;
  eh.e = f.e;
  eh.b = h_fields(geom, medium, f);
  cache_clean = true;
}

FieldState FieldState::from_eb(const Geometry& geom, const MediumModel& medium, EMFields eb) {
  FieldState st;
  EMFields dk = variational_derivatives(geom, medium, eb);
  st.db = geom.zero_fields();
  for (int i = 0; i < geom.n_blocks(); ++i) {
    st.db.e[i] = eb.e[i] - kFourPi * dk.e[i];
    if (geom.blocks()[i].has_b) st.db.b[i] = eb.b[i];
  }
  st.eh.e = eb.e;
  st.eh.b = h_fields(geom, medium, eb);
  st.cache_clean = true;
  return st;
}

std::pair<std::vector<VectorX>, std::vector<VectorX>> hamiltonian_gradients(
    const Geometry& geom, const MediumModel& medium, FieldState& state) {
  if (!state.cache_clean) state.refresh(geom, medium);
  std::vector<VectorX> gd, gb;
  for (int i = 0; i < geom.n_blocks(); ++i) {
    gd.push_back(state.eh.e[i] / kFourPi);
    gb.push_back(geom.blocks()[i].has_b ? VectorX(state.eh.b[i] / kFourPi) : VectorX());
  }
  return {gd, gb};
}

DispersionPoint dispersion_omega(double alpha, double beta, double c, double k) {
  const double denom = alpha + beta * k * k;
  if (!(denom > 0.0))
    throw std::invalid_argument("dispersion_omega: alpha + beta k^2 must be positive");
  DispersionPoint p;
  p.omega = std::sqrt(c * c * k * k / denom);
  p.v_phase = std::sqrt(c * c / denom);
  p.v_group = alpha / (c * c) * std::pow(c * c / denom, 1.5);
  return p;
}

} // namespace demax
