#include "panneal/propagator.hpp"

#include <cmath>

namespace panneal {

namespace {

double norm_of(const std::vector<cd>& v) {
  double s = 0.0;
  for (const cd& a : v) s += std::norm(a);
  return std::sqrt(s);
}

}  // namespace

void apply_generator_step(std::vector<cd>& state,
                          const GeneratorApply& apply_h, double t0, double t1,
                          const IntegratorConfig& cfg, IntegratorStats* stats) {
  if (!(t0 < t1)) {
    throw std::invalid_argument("apply_generator_step requires t0 < t1");
  }
  if (cfg.substeps < 1) {
    throw std::invalid_argument("substeps must be >= 1");
  }
  if (cfg.method == IntegratorMethod::MidpointExponential) {
    throw std::invalid_argument(
        "matrix-free midpoint exponential is not available; use RK4");
  }
  const std::size_t dim = state.size();
  const double dt = (t1 - t0) / cfg.substeps;
  std::vector<cd> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  const cd mi(0.0, -1.0);
  for (int s = 0; s < cfg.substeps; ++s) {
    const double t = t0 + s * dt;
    apply_h(t, state, k1);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + 0.5 * dt * mi * k1[i];
    apply_h(t + 0.5 * dt, tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + 0.5 * dt * mi * k2[i];
    apply_h(t + 0.5 * dt, tmp, k3);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + dt * mi * k3[i];
    apply_h(t + dt, tmp, k4);
    for (std::size_t i = 0; i < dim; ++i) {
      state[i] += (dt / 6.0) * mi * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  const double drift = std::abs(norm_of(state) - 1.0);
  if (stats) {
    stats->steps += cfg.substeps;
    if (drift > stats->max_norm_drift) stats->max_norm_drift = drift;
  }
  if (drift > cfg.unitarity_tol) {
    throw ConvergenceError("apply_generator_step: norm drift " +
                           std::to_string(drift) + " exceeds tolerance");
  }
  if (drift > 1e-12) {
    const double inv = 1.0 / norm_of(state);
    for (cd& a : state) a *= inv;
    if (stats) ++stats->renormalizations;
  }
}

}  // namespace panneal
