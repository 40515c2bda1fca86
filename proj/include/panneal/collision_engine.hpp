// Exact O(N)-time simulation of the measurement dynamics. During window j
// only qubit j and the pointer evolve (every other factor is identity), so
// the global propagator factorizes into N sequential 4x4 unitaries. The
// pointer state advances through trace-preserving collision maps and the
// before/after fidelity contracts through 2x2 transfer operators.
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "panneal/propagator.hpp"
#include "panneal/types.hpp"

namespace panneal {

/// One-window unitary on (qubit_j x pointer), basis order (q,k) in
/// {00, 01, 10, 11}. The generator never flips the qubit bit, so the matrix
/// is block-diagonal in q.
struct SegmentPropagator {
  Matrix4c u = Matrix4c::Identity();
  int segment_index = 0;

  /// 2x2 pointer block for qubit value q in {0, 1}.
  Matrix2c block(int q) const;

  /// Largest magnitude among elements coupling q=0 and q=1 (0 up to roundoff).
  double block_coupling_defect() const;
};

/// Pointer-space compression <chi|U|chi> of a segment propagator; operator
/// norm <= 1.
struct TransferOperator {
  Matrix2c m = Matrix2c::Zero();

  double operator_norm() const;
};

struct RunResult {
  std::vector<std::pair<double, PointerDensity>> pointer_samples;
  double final_p0 = 0.0;
  double final_p1 = 0.0;
  double fidelity = 0.0;
  IntegratorStats diagnostics;
};

/// Generator of the active window at time t: the problem term
/// (t/T)(2h/eps) (|00><00| + |11><11|) plus the pointer driver
/// -gamma (1 - t/T) (I x sx). Valid on the closed window of any segment.
Matrix4c segment_generator(double t, const SimParams& p);

/// Time-ordered propagator of window j (1-based).
SegmentPropagator segment_propagator(int j, const SimParams& p,
                                     IntegratorStats* stats = nullptr);

/// tr_qubit[ U (|chi><chi| x rho) U^dagger ]: exact reduced pointer update,
/// valid because qubit j is in product with the pointer before its window and
/// never interacts afterwards. Throws ConsistencyError if the output trace
/// drifts beyond 1e-9.
PointerDensity collide(const SegmentPropagator& prop,
                       const QubitPureState& qubit_in,
                       const PointerDensity& rho);

/// <chi|U|chi> = |a0|^2 B0 + |a1|^2 B1 (valid by block-diagonality).
TransferOperator transfer(const SegmentPropagator& prop,
                          const QubitPureState& qubit_state);

/// Full run with pointer samples at the given times (sorted, in [0, T];
/// boundary times reuse the composed state, interior times use a partial
/// window propagator). Fidelity is ||M_N ... M_1 v||^2 with v the initial
/// pointer vector.
RunResult run_sampled(const SimParams& p, std::span<const double> times);

/// Boundary sampling every `sample_stride` segments (t = 0 and t = T always
/// included).
RunResult run(const SimParams& p, int sample_stride = 1);

/// CasePsi result mapped from a CasePhi run by the global bit flip: pointer
/// samples conjugated by sx, diagonals swapped, fidelity unchanged.
RunResult run_case_psi_via_symmetry(const RunResult& phi_result);

}  // namespace panneal
