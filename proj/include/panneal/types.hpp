// Shared domain types, error categories and parameter validation.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace panneal {

using cd = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector2c = Eigen::Vector2cd;

/// Which collective state the register is prepared in.
enum class CaseLabel { Phi, Psi };

/// Single-qubit member of the state family (Phi uses the heavy-|0> branch).
enum class StateKind { PhiBase, PsiBase };

/// An integrator failed to meet its unitarity or norm contract.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computed quantity violated a numerical consistency bound.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request exceeded a hard resource cap (e.g. dense simulation size).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full run configuration. `substeps_per_segment == 0` selects the default
/// policy, see resolved_substeps().
struct SimParams {
  double epsilon = 0.5;
  int n_qubits = 1;
  double h = 0.5;
  double gamma = 0.5;
  double t_final = 10.0;
  int substeps_per_segment = 0;
  CaseLabel case_label = CaseLabel::Phi;
};

/// Params with the common defaults (h = gamma = 1/2, T = 10).
SimParams make_params(double epsilon, int n_qubits);

/// Throws std::invalid_argument on any violated invariant.
/// epsilon = 0 is rejected: the problem-term coupling 2h/epsilon diverges.
void validate(const SimParams& p);

/// max(4, ceil(4096 / n)): at least 4 substeps per segment, at least 4096
/// over the whole schedule.
int default_substeps_per_segment(int n_qubits);

/// Explicit value if set, default policy otherwise.
int resolved_substeps(const SimParams& p);

/// Pure single-qubit state over (|0>, |1>).
struct QubitPureState {
  cd amp0{0.0, 0.0};
  cd amp1{0.0, 0.0};

  double norm_sq() const { return std::norm(amp0) + std::norm(amp1); }
  double p0() const { return std::norm(amp0); }
  double p1() const { return std::norm(amp1); }
};

/// 2x2 pointer density matrix, basis order (|0>, |1>).
struct PointerDensity {
  Matrix2c m = Matrix2c::Zero();

  double p0() const { return m(0, 0).real(); }
  double p1() const { return m(1, 1).real(); }
  double re01() const { return m(0, 1).real(); }
  double im01() const { return m(0, 1).imag(); }

  double trace_defect() const { return std::abs(m.trace() - cd(1.0)); }
  double hermiticity_defect() const {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
  }
  double min_eigenvalue() const;
  double purity() const { return (m * m).trace().real(); }

  /// Projector onto (|0> + |1>)/sqrt(2), the initial pointer state.
  static PointerDensity plus_state();
};

}  // namespace panneal
