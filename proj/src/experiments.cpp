#include "panneal/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "panneal/collision_engine.hpp"
#include "panneal/dense_oracle.hpp"
#include "panneal/two_level.hpp"

namespace panneal {

namespace {

TimePoint to_time_point(double t, const PointerDensity& rho) {
  TimePoint row;
  row.t = t;
  row.p0 = rho.p0();
  row.p1 = rho.p1();
  row.re01 = rho.re01();
  row.im01 = rho.im01();
  return row;
}

double probe_quantity(const ThresholdQuery& q, const SimParams& base, int n) {
  SimParams p = base;
  p.epsilon = q.epsilon;
  p.n_qubits = n;
  const RunResult r = run(p, n);  // endpoints only
  return q.quantity == ThresholdQuantity::SuccessP1 ? r.final_p1 : r.fidelity;
}

}  // namespace

std::vector<TimePoint> time_series(const SimParams& p, int samples,
                                   EngineKind engine) {
  validate(p);
  if (samples < 1) {
    throw std::invalid_argument("samples must be >= 1");
  }
  std::vector<double> times(samples + 1);
  for (int i = 0; i <= samples; ++i) times[i] = p.t_final * i / samples;

  std::vector<TimePoint> rows;
  rows.reserve(times.size());
  if (engine == EngineKind::Collision) {
    const RunResult r = run_sampled(p, times);
    for (const auto& [t, rho] : r.pointer_samples) {
      rows.push_back(to_time_point(t, rho));
    }
  } else {
    const DenseRun r = evolve_full(p, times);
    for (const auto& [t, rho] : r.pointer_traj) {
      rows.push_back(to_time_point(t, rho));
    }
  }
  return rows;
}

ThresholdResult min_n(const ThresholdQuery& q, const SimParams& base) {
  if (!(q.target > 0.0) || !(q.target < 1.0)) {
    throw std::invalid_argument("target must lie in (0, 1)");
  }
  if (q.n_cap < 1) {
    throw std::invalid_argument("n_cap must be >= 1");
  }
  {
    SimParams check = base;
    check.epsilon = q.epsilon;
    validate(check);
  }

  ThresholdResult res;
  auto probe = [&](int n) {
    const double v = probe_quantity(q, base, n);
    res.probes.push_back({n, v});
    return v;
  };

  int last_fail = 0;
  int first_hit = 0;
  double hit_value = 0.0;
  for (long long n = 1; n <= q.n_cap; n *= 2) {
    const double v = probe(static_cast<int>(n));
    if (v >= q.target) {
      first_hit = static_cast<int>(n);
      hit_value = v;
      break;
    }
    last_fail = static_cast<int>(n);
  }
  if (first_hit == 0) {
    return res;  // not found below the cap
  }
  if (q.grid == SearchGrid::PowersOfTwo || first_hit <= last_fail + 1) {
    res.n_min = first_hit;
    res.value_at_n_min = hit_value;
    return res;
  }
  // integer refinement inside the doubling bracket
  int lo = last_fail;
  int hi = first_hit;
  double hi_value = hit_value;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    const double v = probe(mid);
    if (v >= q.target) {
      hi = mid;
      hi_value = v;
    } else {
      lo = mid;
    }
  }
  res.n_min = hi;
  res.value_at_n_min = hi_value;
  return res;
}

std::vector<FidelityPoint> fidelity_vs_n(double epsilon,
                                         std::span<const int> n_list,
                                         const SimParams& base) {
  std::vector<FidelityPoint> out(n_list.size());
  std::vector<int> ns(n_list.begin(), n_list.end());
  parallel_for(static_cast<int>(ns.size()), [&](int i) {
    SimParams p = base;
    p.epsilon = epsilon;
    p.n_qubits = ns[i];
    out[i] = {ns[i], run(p, ns[i]).fidelity};
  });
  return out;
}

ScalingFit fit_lambda(std::span<const std::pair<double, int>> points) {
  if (points.empty()) {
    throw std::invalid_argument("fit_lambda needs at least one point");
  }
  ScalingFit fit;
  double acc = 0.0;
  for (const auto& [eps, n] : points) {
    if (!(eps > 0.0) || n < 1) {
      throw std::invalid_argument("fit point must have eps > 0 and n >= 1");
    }
    fit.points.emplace_back(eps, n);
    acc += std::log(static_cast<double>(n) * eps * eps);
  }
  const double log_lambda = acc / static_cast<double>(points.size());
  fit.lambda_hat = std::exp(log_lambda);
  double ss = 0.0;
  for (const auto& [eps, n] : points) {
    const double r = std::log(static_cast<double>(n) * eps * eps) - log_lambda;
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(points.size()));
  return fit;
}

std::vector<AdiabaticPoint> adiabatic_report(const SimParams& p, int samples) {
  validate(p);
  if (samples < 1) {
    throw std::invalid_argument("samples must be >= 1");
  }
  std::vector<AdiabaticPoint> rows(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    const double t = p.t_final * i / samples;
    const AdiabaticMetric m = adiabatic_metric(CaseLabel::Phi, t, p);
    rows[i] = {t, m.value, m.gap};
  }
  return rows;
}

int worker_count() {
  if (const char* env = std::getenv("PANNEAL_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int task_count, const std::function<void(int)>& fn) {
  if (task_count <= 0) return;
  const int workers = std::min(worker_count(), task_count);
  if (workers <= 1) {
    for (int i = 0; i < task_count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= task_count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace panneal
