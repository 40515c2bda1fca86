// Time-ordered unitary propagation for small time-dependent Hermitian
// generators, plus a matrix-free stepper for large state vectors.
//
// MidpointExponential evaluates the generator at each substep midpoint and
// applies its exact matrix exponential, so the result is unitary up to
// roundoff at any step size. RK4 integrates the matrix ODE dU/dt = -iH(t)U
// column-wise; it is 4th order but only approximately unitary. Callers must
// split at schedule discontinuities: the generator is assumed smooth on
// [t0, t1].
#pragma once

#include <functional>
#include <vector>

#include "panneal/types.hpp"

namespace panneal {

enum class IntegratorMethod { MidpointExponential, RK4 };

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::MidpointExponential;
  int substeps = 1;
  double unitarity_tol = 1e-10;
};

struct IntegratorStats {
  long long steps = 0;
  long long renormalizations = 0;
  double max_unitarity_defect = 0.0;
  double max_norm_drift = 0.0;

  void merge(const IntegratorStats& o) {
    steps += o.steps;
    renormalizations += o.renormalizations;
    if (o.max_unitarity_defect > max_unitarity_defect)
      max_unitarity_defect = o.max_unitarity_defect;
    if (o.max_norm_drift > max_norm_drift) max_norm_drift = o.max_norm_drift;
  }
};

template <int Dim>
using Generator = std::function<Eigen::Matrix<cd, Dim, Dim>(double)>;

template <int Dim>
double unitarity_defect(const Eigen::Matrix<cd, Dim, Dim>& u) {
  return (u.adjoint() * u - Eigen::Matrix<cd, Dim, Dim>::Identity())
      .cwiseAbs()
      .maxCoeff();
}

namespace detail {

template <int Dim>
Eigen::Matrix<cd, Dim, Dim> hermitian_exp_step(
    const Eigen::Matrix<cd, Dim, Dim>& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<cd, Dim, Dim>> es(h);
  Eigen::Matrix<cd, Dim, 1> phases;
  for (int k = 0; k < Dim; ++k) {
    phases(k) = std::exp(cd(0.0, -dt * es.eigenvalues()(k)));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

template <int Dim>
void orthonormalize_columns(Eigen::Matrix<cd, Dim, Dim>& u) {
  for (int c = 0; c < Dim; ++c) {
    for (int prev = 0; prev < c; ++prev) {
      u.col(c) -= u.col(prev).dot(u.col(c)) * u.col(prev);
    }
    u.col(c) /= u.col(c).norm();
  }
}

}  // namespace detail

/// Approximates the time-ordered exponential of -i * integral of H over
/// [t0, t1]. Throws ConvergenceError if the unitarity defect exceeds
/// cfg.unitarity_tol even after column re-orthonormalization (RK4 path).
template <int Dim>
Eigen::Matrix<cd, Dim, Dim> propagate(const Generator<Dim>& generator,
                                      double t0, double t1,
                                      const IntegratorConfig& cfg,
                                      IntegratorStats* stats = nullptr) {
  using M = Eigen::Matrix<cd, Dim, Dim>;
  if (!(t0 < t1)) {
    throw std::invalid_argument("propagate requires t0 < t1");
  }
  if (cfg.substeps < 1) {
    throw std::invalid_argument("substeps must be >= 1");
  }
  const double dt = (t1 - t0) / cfg.substeps;
  M u = M::Identity();
  if (cfg.method == IntegratorMethod::MidpointExponential) {
    for (int s = 0; s < cfg.substeps; ++s) {
      const double tm = t0 + (s + 0.5) * dt;
      u = (detail::hermitian_exp_step<Dim>(generator(tm), dt) * u).eval();
    }
  } else {
    for (int s = 0; s < cfg.substeps; ++s) {
      const double t = t0 + s * dt;
      const cd mi(0.0, -1.0);
      const M k1 = mi * (generator(t) * u);
      const M hm = generator(t + 0.5 * dt);
      const M k2 = mi * (hm * (u + 0.5 * dt * k1));
      const M k3 = mi * (hm * (u + 0.5 * dt * k2));
      const M k4 = mi * (generator(t + dt) * (u + dt * k3));
      u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  double defect = unitarity_defect<Dim>(u);
  long long renorms = 0;
  if (defect > cfg.unitarity_tol) {
    detail::orthonormalize_columns<Dim>(u);
    ++renorms;
    const double after = unitarity_defect<Dim>(u);
    if (after > cfg.unitarity_tol) {
      throw ConvergenceError("propagate: unitarity defect " +
                             std::to_string(after) + " exceeds tolerance");
    }
  }
  if (stats) {
    stats->steps += cfg.substeps;
    stats->renormalizations += renorms;
    if (defect > stats->max_unitarity_defect)
      stats->max_unitarity_defect = defect;
  }
  return u;
}

/// Matrix-free Hermitian application: out = H(t) * in. The stepper supplies
/// the -i factor.
using GeneratorApply =
    std::function<void(double, const std::vector<cd>&, std::vector<cd>&)>;

/// Advances `state` from t0 to t1 with cfg.substeps RK4 steps. The norm is
/// renormalized (and counted in stats) whenever the drift exceeds 1e-12;
/// drift beyond cfg.unitarity_tol raises ConvergenceError. Only RK4 is
/// supported matrix-free: there is no exponential without the matrix.
void apply_generator_step(std::vector<cd>& state,
                          const GeneratorApply& apply_h, double t0, double t1,
                          const IntegratorConfig& cfg,
                          IntegratorStats* stats = nullptr);

}  // namespace panneal
