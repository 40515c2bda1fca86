#include "panneal/collision_engine.hpp"

#include <algorithm>
#include <cmath>

#include "panneal/core_model.hpp"

namespace panneal {

Matrix2c SegmentPropagator::block(int q) const {
  if (q != 0 && q != 1) {
    throw std::invalid_argument("qubit value must be 0 or 1");
  }
  return u.block<2, 2>(2 * q, 2 * q);
}

double SegmentPropagator::block_coupling_defect() const {
  const double a = u.block<2, 2>(0, 2).cwiseAbs().maxCoeff();
  const double b = u.block<2, 2>(2, 0).cwiseAbs().maxCoeff();
  return std::max(a, b);
}

double TransferOperator::operator_norm() const {
  Eigen::JacobiSVD<Matrix2c> svd(m);
  return svd.singularValues()(0);
}

Matrix4c segment_generator(double t, const SimParams& p) {
  const double couple = (t / p.t_final) * (2.0 * p.h / p.epsilon);
  const double drive = -p.gamma * (1.0 - t / p.t_final);
  Matrix4c h = Matrix4c::Zero();
  h(0, 0) = couple;  // q=0, k=0
  h(3, 3) = couple;  // q=1, k=1
  h(0, 1) = drive;
  h(1, 0) = drive;
  h(2, 3) = drive;
  h(3, 2) = drive;
  return h;
}

namespace {

Matrix4c window_propagator(double t0, double t1, const SimParams& p,
                           int substeps, IntegratorStats* stats) {
  Generator<4> gen = [&p](double t) { return segment_generator(t, p); };
  IntegratorConfig cfg;
  cfg.method = IntegratorMethod::MidpointExponential;
  cfg.substeps = substeps;
  cfg.unitarity_tol = 1e-10;
  return propagate<4>(gen, t0, t1, cfg, stats);
}

}  // namespace

SegmentPropagator segment_propagator(int j, const SimParams& p,
                                     IntegratorStats* stats) {
  if (j < 1 || j > p.n_qubits) {
    throw std::invalid_argument("segment index out of range: " +
                                std::to_string(j));
  }
  const CouplingSchedule sched(p);
  SegmentPropagator prop;
  prop.segment_index = j;
  prop.u = window_propagator(sched.window_start(j), sched.window_end(j), p,
                             resolved_substeps(p), stats);
  return prop;
}

PointerDensity collide(const SegmentPropagator& prop,
                       const QubitPureState& qubit_in,
                       const PointerDensity& rho) {
  // joint input (qubit x pointer), qubit in the high bit pair
  Matrix4c joint = Matrix4c::Zero();
  const cd chi[2] = {qubit_in.amp0, qubit_in.amp1};
  for (int q = 0; q < 2; ++q) {
    for (int qp = 0; qp < 2; ++qp) {
      joint.block<2, 2>(2 * q, 2 * qp) = chi[q] * std::conj(chi[qp]) * rho.m;
    }
  }
  const Matrix4c evolved = prop.u * joint * prop.u.adjoint();
  PointerDensity out;
  out.m = evolved.block<2, 2>(0, 0) + evolved.block<2, 2>(2, 2);
  if (out.trace_defect() > 1e-9) {
    throw ConsistencyError("collision output trace deviates from 1 by " +
                           std::to_string(out.trace_defect()));
  }
  return out;
}

TransferOperator transfer(const SegmentPropagator& prop,
                          const QubitPureState& qubit_state) {
  TransferOperator op;
  op.m = qubit_state.p0() * prop.block(0) + qubit_state.p1() * prop.block(1);
  return op;
}

RunResult run_sampled(const SimParams& p, std::span<const double> times) {
  validate(p);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || times[i] > p.t_final) {
      throw std::invalid_argument("sample time outside [0, T]");
    }
    if (i > 0 && times[i] <= times[i - 1]) {
      throw std::invalid_argument("sample times must be strictly increasing");
    }
  }
  const QubitPureState chi = case_state(p.epsilon, p.case_label);
  const CouplingSchedule sched(p);
  const int substeps = resolved_substeps(p);

  RunResult res;
  PointerDensity rho = PointerDensity::plus_state();
  Vector2c v;
  v << cd(1.0 / std::sqrt(2.0)), cd(1.0 / std::sqrt(2.0));

  std::size_t next = 0;
  if (next < times.size() && times[next] == 0.0) {
    res.pointer_samples.emplace_back(0.0, rho);
    ++next;
  }
  for (int j = 1; j <= p.n_qubits; ++j) {
    const double start = sched.window_start(j);
    const double end = sched.window_end(j);
    // interior samples: partial-window propagator from the last boundary
    while (next < times.size() && times[next] < end) {
      const double t = times[next];
      const int partial_steps = std::max(
          1, static_cast<int>(std::ceil(substeps * (t - start) /
                                        (end - start))));
      SegmentPropagator part;
      part.segment_index = j;
      part.u = window_propagator(start, t, p, partial_steps, nullptr);
      res.pointer_samples.emplace_back(t, collide(part, chi, rho));
      ++next;
    }
    SegmentPropagator prop = segment_propagator(j, p, &res.diagnostics);
    rho = collide(prop, chi, rho);
    v = (transfer(prop, chi).m * v).eval();
    if (next < times.size() && times[next] == end) {
      res.pointer_samples.emplace_back(end, rho);
      ++next;
    }
  }
  res.final_p0 = rho.p0();
  res.final_p1 = rho.p1();
  res.fidelity = v.squaredNorm();
  return res;
}

RunResult run(const SimParams& p, int sample_stride) {
  if (sample_stride < 1) {
    throw std::invalid_argument("sample_stride must be >= 1");
  }
  validate(p);
  const CouplingSchedule sched(p);
  std::vector<double> times;
  times.push_back(0.0);
  for (int j = sample_stride; j <= p.n_qubits; j += sample_stride) {
    times.push_back(sched.boundary(j));
  }
  if (times.back() != p.t_final) times.push_back(p.t_final);
  return run_sampled(p, times);
}

RunResult run_case_psi_via_symmetry(const RunResult& phi_result) {
  RunResult res;
  res.pointer_samples.reserve(phi_result.pointer_samples.size());
  for (const auto& [t, rho] : phi_result.pointer_samples) {
    PointerDensity flipped;
    flipped.m << rho.m(1, 1), rho.m(1, 0), rho.m(0, 1), rho.m(0, 0);
    res.pointer_samples.emplace_back(t, flipped);
  }
  res.final_p0 = phi_result.final_p1;
  res.final_p1 = phi_result.final_p0;
  res.fidelity = phi_result.fidelity;
  res.diagnostics = phi_result.diagnostics;
  return res;
}

}  // namespace panneal
