// Closed-form and effective two-level dynamics: the annealing schedule
// H(t) = -(+/-)(t/T) h sz' - gamma (1 - t/T) sx on the pointer (sz' denotes
// |1><1| - |0><0|), its instantaneous eigensystem and the adiabatic metric.
#pragma once

#include <span>
#include <vector>

#include "panneal/types.hpp"

namespace panneal {

struct TwoLevelHamiltonian {
  Matrix2c m = Matrix2c::Zero();
};

struct EigenPair {
  double ground_energy = 0.0;
  double excited_energy = 0.0;
  double gap = 0.0;
  Vector2c ground_vec = Vector2c::Zero();
  Vector2c excited_vec = Vector2c::Zero();
  bool degenerate = false;
};

/// f(t) = -h t + sqrt((h t)^2 + gamma^2 (t - T)^2).
double f_of_t(double t, const SimParams& p);

/// Adiabatic closed-form solution of the annealing schedule with problem
/// field +h: amp1 = -f(t)/D, amp0 = -gamma(t-T)/D with D the normalizer.
/// t = T is a removable 0/0 point; the analytic limit is |0> for h > 0 and
/// -|1> for h < 0.
QubitPureState closed_form_phi_t(double t, const SimParams& p);

/// Effective pointer Hamiltonian of the measurement dynamics. CasePhi:
/// -(t/T) h sz' - gamma (1 - t/T) sx; CasePsi flips the sign of the h term.
TwoLevelHamiltonian effective_hamiltonian(CaseLabel label, double t,
                                          const SimParams& p);

/// dH/dt of the effective Hamiltonian (constant in t).
TwoLevelHamiltonian effective_hamiltonian_rate(CaseLabel label,
                                               const SimParams& p);

/// Exact 2x2 Hermitian eigendecomposition with a deterministic phase
/// convention (first component of magnitude above 1e-14 made real positive).
/// A degenerate spectrum returns gap = 0, the computational basis pair and
/// the degenerate flag.
EigenPair eigensystem(const TwoLevelHamiltonian& hm);

struct AdiabaticMetric {
  double value = 0.0;
  double gap = 0.0;
  bool degenerate = false;
};

/// |<E1(t)| dH/dt |G(t)>| for the effective Hamiltonian of the given case.
AdiabaticMetric adiabatic_metric(CaseLabel label, double t, const SimParams& p);

struct EffectiveSample {
  double t = 0.0;
  QubitPureState state;
};

/// Schroedinger evolution under the effective Hamiltonian from the driver
/// ground state (|0> + |1>)/sqrt(2), evaluated at the given times (sorted,
/// within [0, T]). Integrates with fine fixed-step RK4; the result is exact to
/// integrator tolerance and serves as the large-N reference.
std::vector<EffectiveSample> integrate_effective_at(
    CaseLabel label, const SimParams& p, std::span<const double> times);

/// Same, on the uniform grid of `samples` intervals over [0, T]
/// (samples + 1 rows). Requires samples >= 2.
std::vector<EffectiveSample> integrate_effective(CaseLabel label,
                                                 const SimParams& p,
                                                 int samples);

}  // namespace panneal
