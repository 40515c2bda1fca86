// State family, step-function coupling schedule and the distinguishability
// parameter lambda = N * epsilon^2.
#pragma once

#include "panneal/types.hpp"

namespace panneal {

/// PhiBase: (sqrt((1+eps)/2), sqrt((1-eps)/2)); PsiBase swaps the amplitudes.
QubitPureState make_state(double epsilon, StateKind kind);

/// Single-qubit state backing the given run case.
QubitPureState case_state(double epsilon, CaseLabel label);

/// Collective overlap <Phi(N)|Psi(N)> = (1 - eps^2)^(N/2).
double overlap_collective(double epsilon, int n);

/// Step coupling of segment j (1-based): h on [T(j-1)/N, Tj/N), 0 elsewhere.
/// All couplings are 0 at t = T. Throws std::invalid_argument for j out of
/// [1, N].
double coupling_at(int j, double t, const SimParams& p);

/// lambda = N * epsilon^2.
double scaling_lambda(double epsilon, int n);

/// Derived view over SimParams: segment j occupies the half-open window
/// [boundary(j-1), boundary(j)); the windows partition [0, T) exactly.
class CouplingSchedule {
 public:
  explicit CouplingSchedule(const SimParams& p);

  int segments() const { return n_; }
  double boundary(int j) const;      // t_j = T*j/N for j in [0, N]
  double window_start(int j) const { return boundary(j - 1); }
  double window_end(int j) const { return boundary(j); }

  /// 1-based active segment at time t, or 0 if t >= T (no window).
  int segment_at(double t) const;

 private:
  int n_;
  double t_final_;
};

}  // namespace panneal
