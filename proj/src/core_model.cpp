#include "panneal/core_model.hpp"

#include <cmath>

namespace panneal {

SimParams make_params(double epsilon, int n_qubits) {
  SimParams p;
  p.epsilon = epsilon;
  p.n_qubits = n_qubits;
  return p;
}

void validate(const SimParams& p) {
  if (!(p.epsilon > 0.0) || !(p.epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1], got " +
                                std::to_string(p.epsilon));
  }
  if (p.n_qubits < 1) {
    throw std::invalid_argument("n_qubits must be >= 1, got " +
                                std::to_string(p.n_qubits));
  }
  if (!(p.h > 0.0)) {
    throw std::invalid_argument("h must be positive");
  }
  if (!(p.gamma > 0.0)) {
    throw std::invalid_argument("gamma must be positive");
  }
  if (!(p.t_final > 0.0)) {
    throw std::invalid_argument("t_final must be positive");
  }
  if (p.substeps_per_segment < 0) {
    throw std::invalid_argument("substeps_per_segment must be >= 0");
  }
}

int default_substeps_per_segment(int n_qubits) {
  const int floor_total = 4096;
  int s = (floor_total + n_qubits - 1) / n_qubits;
  return s < 4 ? 4 : s;
}

int resolved_substeps(const SimParams& p) {
  return p.substeps_per_segment > 0 ? p.substeps_per_segment
                                    : default_substeps_per_segment(p.n_qubits);
}

double PointerDensity::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix2c> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

PointerDensity PointerDensity::plus_state() {
  PointerDensity rho;
  rho.m << 0.5, 0.5, 0.5, 0.5;
  return rho;
}

QubitPureState make_state(double epsilon, StateKind kind) {
  if (!(epsilon > 0.0) || !(epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  }
  const double heavy = std::sqrt((1.0 + epsilon) / 2.0);
  const double light = std::sqrt((1.0 - epsilon) / 2.0);
  QubitPureState s;
  if (kind == StateKind::PhiBase) {
    s.amp0 = heavy;
    s.amp1 = light;
  } else {
    s.amp0 = light;
    s.amp1 = heavy;
  }
  return s;
}

QubitPureState case_state(double epsilon, CaseLabel label) {
  return make_state(epsilon, label == CaseLabel::Phi ? StateKind::PhiBase
                                                     : StateKind::PsiBase);
}

double overlap_collective(double epsilon, int n) {
  if (!(epsilon > 0.0) || !(epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  }
  if (n < 1) {
    throw std::invalid_argument("n must be >= 1");
  }
  return std::pow(1.0 - epsilon * epsilon, 0.5 * n);
}

double coupling_at(int j, double t, const SimParams& p) {
  if (j < 1 || j > p.n_qubits) {
    throw std::invalid_argument("segment index out of range: " +
                                std::to_string(j));
  }
  const double start = p.t_final * (j - 1) / p.n_qubits;
  const double end = p.t_final * j / p.n_qubits;
  return (start <= t && t < end) ? p.h : 0.0;
}

double scaling_lambda(double epsilon, int n) {
  return static_cast<double>(n) * epsilon * epsilon;
}

CouplingSchedule::CouplingSchedule(const SimParams& p)
    : n_(p.n_qubits), t_final_(p.t_final) {}

double CouplingSchedule::boundary(int j) const {
  if (j < 0 || j > n_) {
    throw std::invalid_argument("boundary index out of range");
  }
  return t_final_ * j / n_;
}

int CouplingSchedule::segment_at(double t) const {
  if (t < 0.0 || t >= t_final_) {
    return 0;
  }
  int j = static_cast<int>(t * n_ / t_final_) + 1;
  if (j > n_) j = n_;
  // the float estimate can land one off at window edges; nudge to the
  // window whose half-open bounds actually contain t
  while (j > 1 && t < boundary(j - 1)) --j;
  while (j < n_ && t >= boundary(j)) ++j;
  return j;
}

}  // namespace panneal
