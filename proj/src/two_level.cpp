#include "panneal/two_level.hpp"

#include <algorithm>
#include <cmath>

#include "panneal/propagator.hpp"

namespace panneal {

double f_of_t(double t, const SimParams& p) {
  return -p.h * t + std::hypot(p.h * t, p.gamma * (t - p.t_final));
}

QubitPureState closed_form_phi_t(double t, const SimParams& p) {
  QubitPureState s;
  if (t == p.t_final) {
    if (p.h > 0.0) {
      s.amp0 = 1.0;
    } else {
      s.amp1 = -1.0;
    }
    return s;
  }
  const double f = f_of_t(t, p);
  const double g = p.gamma * (t - p.t_final);
  const double d = std::hypot(g, f);
  s.amp0 = -g / d;
  s.amp1 = -f / d;
  return s;
}

TwoLevelHamiltonian effective_hamiltonian(CaseLabel label, double t,
                                          const SimParams& p) {
  const double sign = (label == CaseLabel::Phi) ? -1.0 : 1.0;
  const double a = sign * (t / p.t_final) * p.h;   // coefficient of sz'
  const double b = -p.gamma * (1.0 - t / p.t_final);  // coefficient of sx
  TwoLevelHamiltonian hm;
  hm.m << -a, b, b, a;
  return hm;
}

TwoLevelHamiltonian effective_hamiltonian_rate(CaseLabel label,
                                               const SimParams& p) {
  const double sign = (label == CaseLabel::Phi) ? -1.0 : 1.0;
  const double a = sign * p.h / p.t_final;
  const double b = p.gamma / p.t_final;
  TwoLevelHamiltonian hm;
  hm.m << -a, b, b, a;
  return hm;
}

namespace {

void fix_phase(Vector2c& v) {
  for (int k = 0; k < 2; ++k) {
    const double mag = std::abs(v(k));
    if (mag > 1e-14) {
      v *= std::conj(v(k)) / mag;
      return;
    }
  }
}

}  // namespace

EigenPair eigensystem(const TwoLevelHamiltonian& hm) {
  const double h00 = hm.m(0, 0).real();
  const double h11 = hm.m(1, 1).real();
  const cd h01 = hm.m(0, 1);
  const double mean = 0.5 * (h00 + h11);
  const double del = 0.5 * (h00 - h11);
  const double r = std::hypot(del, std::abs(h01));

  EigenPair ep;
  ep.ground_energy = mean - r;
  ep.excited_energy = mean + r;
  ep.gap = 2.0 * r;

  const double scale = std::max({std::abs(h00), std::abs(h11), std::abs(h01), 1.0});
  if (r <= 1e-14 * scale) {
    ep.degenerate = true;
    ep.gap = 0.0;
    ep.ground_vec << 1.0, 0.0;
    ep.excited_vec << 0.0, 1.0;
    return ep;
  }

  // (H - lambda I) v = 0; pick the better-conditioned row per eigenvector
  auto eigvec = [&](double lambda) {
    Vector2c v;
    if (std::abs(lambda - h00) > std::abs(lambda - h11)) {
      v << h01, cd(lambda - h00);
    } else {
      v << cd(lambda - h11), std::conj(h01);
    }
    v /= v.norm();
    fix_phase(v);
    return v;
  };
  ep.ground_vec = eigvec(ep.ground_energy);
  ep.excited_vec = eigvec(ep.excited_energy);
  return ep;
}

AdiabaticMetric adiabatic_metric(CaseLabel label, double t,
                                 const SimParams& p) {
  const EigenPair ep = eigensystem(effective_hamiltonian(label, t, p));
  const Matrix2c rate = effective_hamiltonian_rate(label, p).m;
  AdiabaticMetric out;
  out.value = std::abs(ep.excited_vec.dot(rate * ep.ground_vec));
  out.gap = ep.gap;
  out.degenerate = ep.degenerate;
  return out;
}

std::vector<EffectiveSample> integrate_effective_at(
    CaseLabel label, const SimParams& p, std::span<const double> times) {
  validate(p);
  if (times.empty()) {
    throw std::invalid_argument("integrate_effective_at needs >= 1 time");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || times[i] > p.t_final) {
      throw std::invalid_argument("sample time outside [0, T]");
    }
    if (i > 0 && times[i] <= times[i - 1]) {
      throw std::invalid_argument("sample times must be strictly increasing");
    }
  }

  Generator<2> gen = [&](double t) {
    return effective_hamiltonian(label, t, p).m;
  };
  // fine fixed grid: at least 2^15 steps over [0, T], at least 16 per gap
  const double step_target = p.t_final / 32768.0;

  std::vector<EffectiveSample> out;
  out.reserve(times.size());
  Vector2c v;
  v << cd(1.0 / std::sqrt(2.0)), cd(1.0 / std::sqrt(2.0));
  double t_prev = 0.0;
  for (double t : times) {
    if (t > t_prev) {
      IntegratorConfig cfg;
      cfg.method = IntegratorMethod::RK4;
      cfg.substeps = std::max(
          16, static_cast<int>(std::ceil((t - t_prev) / step_target)));
      cfg.unitarity_tol = 1e-9;
      v = (propagate<2>(gen, t_prev, t, cfg) * v).eval();
      t_prev = t;
    }
    EffectiveSample s;
    s.t = t;
    s.state.amp0 = v(0);
    s.state.amp1 = v(1);
    out.push_back(s);
  }
  return out;
}

std::vector<EffectiveSample> integrate_effective(CaseLabel label,
                                                 const SimParams& p,
                                                 int samples) {
  if (samples < 2) {
    throw std::invalid_argument("samples must be >= 2");
  }
  std::vector<double> times(samples + 1);
  for (int i = 0; i <= samples; ++i) times[i] = p.t_final * i / samples;
  return integrate_effective_at(label, p, times);
}

}  // namespace panneal
