// Brute-force reference: integrates the joint Schroedinger equation on the
// full 2^(N+1)-dimensional space. Index convention: bit 0 (least significant)
// is the pointer, bit j is qubit j (1-based). Capped at N <= 16.
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "panneal/propagator.hpp"
#include "panneal/types.hpp"

namespace panneal {

inline constexpr int kDenseQubitCap = 16;

struct JointState {
  int n_qubits = 0;
  std::vector<cd> amp;  // size 2^(n_qubits + 1)

  double norm_sq() const;
};

/// Collective case state tensored with the pointer (|0> + |1>)/sqrt(2).
JointState initial_joint_state(const SimParams& p);

/// -i * H_M(t) |state| with half-open window semantics: at t = T every
/// coupling (and the driver) is zero. Throws ResourceError over the cap.
JointState apply_hm(double t, const JointState& state, const SimParams& p);

/// Partial trace over all qubit bits.
PointerDensity pointer_reduced(const JointState& state);

/// <1|rho_j|1> for qubit j (1-based); conserved by the dynamics.
double qubit_excited_population(const JointState& state, int j);

struct DenseRun {
  JointState final_state;
  std::vector<std::pair<double, PointerDensity>> pointer_traj;
  IntegratorStats stats;
};

/// Integrates RK4 matrix-free, splitting at every segment boundary and at
/// every requested sample time (sorted, within [0, T]). `segment_qubit`, when
/// non-empty, assigns window j to qubit segment_qubit[j-1] instead of j.
DenseRun evolve_full(const SimParams& p, std::span<const double> sample_times,
                     std::span<const int> segment_qubit = {});

/// State evolved up to t_end (same stepping as evolve_full).
JointState evolve_to(const SimParams& p, double t_end,
                     IntegratorStats* stats = nullptr);

/// Segment boundaries merged with 64 uniform global samples.
std::vector<double> default_sample_times(const SimParams& p);

/// <Phi|mu(T)|Phi> (or Psi for CasePsi) by overlap projection over the two
/// pointer branches; no N-qubit density matrix is materialized.
double fidelity_before_after(const JointState& state_at_t_final,
                             const SimParams& p);

/// Materialized reduced density matrix over the register (N <= 8 only).
Eigen::MatrixXcd system_density(const JointState& state);

/// Fidelity via the materialized density matrix; cross-check path, N <= 8.
double fidelity_via_density(const JointState& state, const SimParams& p);

}  // namespace panneal
