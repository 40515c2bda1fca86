#include "panneal/dense_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "panneal/core_model.hpp"

namespace panneal {

namespace {

void check_cap(int n_qubits) {
  if (n_qubits > kDenseQubitCap) {
    throw ResourceError("dense oracle capped at N <= " +
                        std::to_string(kDenseQubitCap) + ", got " +
                        std::to_string(n_qubits));
  }
}

std::size_t dense_dim(int n_qubits) {
  return std::size_t{1} << (n_qubits + 1);
}

// Product-state coefficient of basis index q over the register.
std::vector<cd> collective_coefficients(const SimParams& p) {
  const QubitPureState single = case_state(p.epsilon, p.case_label);
  const std::size_t reg_dim = std::size_t{1} << p.n_qubits;
  std::vector<cd> coeff(reg_dim);
  for (std::size_t q = 0; q < reg_dim; ++q) {
    cd a = 1.0;
    for (int j = 0; j < p.n_qubits; ++j) {
      a *= ((q >> j) & 1u) ? single.amp1 : single.amp0;
    }
    coeff[q] = a;
  }
  return coeff;
}

// H_seg(t) |in> for a fixed active qubit bit; valid on the closed window.
void apply_segment_h(double t, int qubit_bit, const SimParams& p,
                     const std::vector<cd>& in, std::vector<cd>& out) {
  const std::size_t dim = in.size();
  const double couple = (t / p.t_final) * (2.0 * p.h / p.epsilon);
  const double drive = -p.gamma * (1.0 - t / p.t_final);
  for (std::size_t i = 0; i < dim; ++i) {
    const unsigned k = i & 1u;
    const unsigned q = (i >> qubit_bit) & 1u;
    cd acc = drive * in[i ^ 1u];
    if (q == k) acc += couple * in[i];
    out[i] = acc;
  }
}

}  // namespace

double JointState::norm_sq() const {
  double s = 0.0;
  for (const cd& a : amp) s += std::norm(a);
  return s;
}

JointState initial_joint_state(const SimParams& p) {
  validate(p);
  check_cap(p.n_qubits);
  const std::vector<cd> coeff = collective_coefficients(p);
  JointState st;
  st.n_qubits = p.n_qubits;
  st.amp.resize(dense_dim(p.n_qubits));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t q = 0; q < coeff.size(); ++q) {
    st.amp[2 * q] = coeff[q] * inv_sqrt2;
    st.amp[2 * q + 1] = coeff[q] * inv_sqrt2;
  }
  return st;
}

JointState apply_hm(double t, const JointState& state, const SimParams& p) {
  validate(p);
  check_cap(state.n_qubits);
  if (state.amp.size() != dense_dim(state.n_qubits)) {
    throw std::invalid_argument("joint state has wrong dimension");
  }
  const CouplingSchedule sched(p);
  const int j = sched.segment_at(t);

  JointState out;
  out.n_qubits = state.n_qubits;
  out.amp.resize(state.amp.size());
  const double drive = -p.gamma * (1.0 - t / p.t_final);
  const double couple =
      j > 0 ? (t / p.t_final) * (2.0 * p.h / p.epsilon) : 0.0;
  const cd mi(0.0, -1.0);
  for (std::size_t i = 0; i < state.amp.size(); ++i) {
    const unsigned k = i & 1u;
    cd acc = drive * state.amp[i ^ 1u];
    if (j > 0 && (((i >> j) & 1u) == k)) acc += couple * state.amp[i];
    out.amp[i] = mi * acc;
  }
  return out;
}

PointerDensity pointer_reduced(const JointState& state) {
  PointerDensity rho;
  cd r00 = 0.0, r11 = 0.0, r01 = 0.0;
  const std::size_t reg_dim = state.amp.size() / 2;
  for (std::size_t q = 0; q < reg_dim; ++q) {
    const cd a0 = state.amp[2 * q];
    const cd a1 = state.amp[2 * q + 1];
    r00 += a0 * std::conj(a0);
    r11 += a1 * std::conj(a1);
    r01 += a0 * std::conj(a1);
  }
  rho.m << r00, r01, std::conj(r01), r11;
  return rho;
}

double qubit_excited_population(const JointState& state, int j) {
  if (j < 1 || j > state.n_qubits) {
    throw std::invalid_argument("qubit index out of range");
  }
  double pop = 0.0;
  for (std::size_t i = 0; i < state.amp.size(); ++i) {
    if ((i >> j) & 1u) pop += std::norm(state.amp[i]);
  }
  return pop;
}

namespace {

struct DenseStepper {
  const SimParams& p;
  std::vector<int> qubit_of_segment;  // 1-based window -> qubit bit
  JointState state;
  IntegratorStats stats;
  double t_now = 0.0;

  DenseStepper(const SimParams& params, std::span<const int> segment_qubit)
      : p(params), state(initial_joint_state(params)) {
    qubit_of_segment.resize(p.n_qubits);
    if (segment_qubit.empty()) {
      for (int j = 1; j <= p.n_qubits; ++j) qubit_of_segment[j - 1] = j;
    } else {
      if (static_cast<int>(segment_qubit.size()) != p.n_qubits) {
        throw std::invalid_argument("segment_qubit needs one entry per segment");
      }
      std::vector<bool> seen(p.n_qubits + 1, false);
      for (int q : segment_qubit) {
        if (q < 1 || q > p.n_qubits || seen[q]) {
          throw std::invalid_argument("segment_qubit must be a permutation");
        }
        seen[q] = true;
      }
      std::copy(segment_qubit.begin(), segment_qubit.end(),
                qubit_of_segment.begin());
    }
  }

  // advance within segment j (window is closed here: the per-segment
  // generator is the smooth continuation of the step schedule)
  void advance(int j, double t_to) {
    if (t_to <= t_now) return;
    const double seg_len = p.t_final / p.n_qubits;
    const int seg_steps = resolved_substeps(p);
    const int qbit = qubit_of_segment[j - 1];
    IntegratorConfig cfg;
    cfg.method = IntegratorMethod::RK4;
    cfg.substeps = std::max(
        1, static_cast<int>(std::ceil(seg_steps * (t_to - t_now) / seg_len)));
    cfg.unitarity_tol = 1e-9;
    GeneratorApply apply = [&](double t, const std::vector<cd>& in,
                               std::vector<cd>& out) {
      apply_segment_h(t, qbit, p, in, out);
    };
    apply_generator_step(state.amp, apply, t_now, t_to, cfg, &stats);
    t_now = t_to;
  }
};

}  // namespace

DenseRun evolve_full(const SimParams& p, std::span<const double> sample_times,
                     std::span<const int> segment_qubit) {
  validate(p);
  check_cap(p.n_qubits);
  std::vector<double> times(sample_times.begin(), sample_times.end());
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  for (double t : times) {
    if (t < 0.0 || t > p.t_final) {
      throw std::invalid_argument("sample time outside [0, T]");
    }
  }

  DenseStepper stepper(p, segment_qubit);
  const CouplingSchedule sched(p);
  DenseRun run;
  std::size_t next = 0;
  if (next < times.size() && times[next] == 0.0) {
    run.pointer_traj.emplace_back(0.0, pointer_reduced(stepper.state));
    ++next;
  }
  for (int j = 1; j <= p.n_qubits; ++j) {
    const double end = sched.boundary(j);
    while (next < times.size() && times[next] < end) {
      stepper.advance(j, times[next]);
      run.pointer_traj.emplace_back(times[next],
                                    pointer_reduced(stepper.state));
      ++next;
    }
    stepper.advance(j, end);
    if (next < times.size() && times[next] == end) {
      run.pointer_traj.emplace_back(end, pointer_reduced(stepper.state));
      ++next;
    }
  }
  run.final_state = std::move(stepper.state);
  run.stats = stepper.stats;
  return run;
}

JointState evolve_to(const SimParams& p, double t_end, IntegratorStats* stats) {
  validate(p);
  check_cap(p.n_qubits);
  if (t_end < 0.0 || t_end > p.t_final) {
    throw std::invalid_argument("t_end outside [0, T]");
  }
  DenseStepper stepper(p, {});
  const CouplingSchedule sched(p);
  for (int j = 1; j <= p.n_qubits && stepper.t_now < t_end; ++j) {
    stepper.advance(j, std::min(t_end, sched.boundary(j)));
  }
  if (stats) stats->merge(stepper.stats);
  return std::move(stepper.state);
}

std::vector<double> default_sample_times(const SimParams& p) {
  const CouplingSchedule sched(p);
  std::vector<double> times;
  for (int j = 0; j <= p.n_qubits; ++j) times.push_back(sched.boundary(j));
  for (int i = 0; i <= 64; ++i) times.push_back(p.t_final * i / 64.0);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

double fidelity_before_after(const JointState& state_at_t_final,
                             const SimParams& p) {
  validate(p);
  const std::vector<cd> coeff = collective_coefficients(p);
  if (coeff.size() * 2 != state_at_t_final.amp.size()) {
    throw std::invalid_argument("state dimension does not match params");
  }
  double fid = 0.0;
  for (unsigned k = 0; k < 2; ++k) {
    cd overlap = 0.0;
    for (std::size_t q = 0; q < coeff.size(); ++q) {
      overlap += std::conj(coeff[q]) * state_at_t_final.amp[2 * q + k];
    }
    fid += std::norm(overlap);
  }
  return fid;
}

Eigen::MatrixXcd system_density(const JointState& state) {
  if (state.n_qubits > 8) {
    throw ResourceError("materialized register density capped at N <= 8");
  }
  const std::size_t reg_dim = state.amp.size() / 2;
  Eigen::MatrixXcd mu = Eigen::MatrixXcd::Zero(reg_dim, reg_dim);
  for (unsigned k = 0; k < 2; ++k) {
    Eigen::VectorXcd branch(reg_dim);
    for (std::size_t q = 0; q < reg_dim; ++q) {
      branch(q) = state.amp[2 * q + k];
    }
    mu += branch * branch.adjoint();
  }
  return mu;
}

double fidelity_via_density(const JointState& state, const SimParams& p) {
  const Eigen::MatrixXcd mu = system_density(state);
  const std::vector<cd> coeff = collective_coefficients(p);
  Eigen::VectorXcd phi(coeff.size());
  for (std::size_t q = 0; q < coeff.size(); ++q) phi(q) = coeff[q];
  return (phi.adjoint() * mu * phi)(0, 0).real();
}

}  // namespace panneal
