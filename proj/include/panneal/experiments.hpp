// Figure-level harnesses: pointer time series, threshold-N searches,
// fidelity-vs-N curves and lambda = N eps^2 scaling fits.
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "panneal/types.hpp"

namespace panneal {

enum class EngineKind { Collision, Dense };

struct TimePoint {
  double t = 0.0;
  double p0 = 0.0;
  double p1 = 0.0;
  double re01 = 0.0;
  double im01 = 0.0;
};

/// Pointer trajectory on the uniform grid of `samples` intervals over [0, T]
/// (samples + 1 rows, first row t = 0). The dense engine honors the N <= 16
/// cap.
std::vector<TimePoint> time_series(const SimParams& p, int samples,
                                   EngineKind engine = EngineKind::Collision);

enum class ThresholdQuantity { SuccessP1, Fidelity };
enum class SearchGrid { PowersOfTwo, IntegerBisection };

struct ThresholdQuery {
  double epsilon = 0.5;
  double target = 0.9;
  ThresholdQuantity quantity = ThresholdQuantity::SuccessP1;
  SearchGrid grid = SearchGrid::PowersOfTwo;
  int n_cap = 1 << 18;
};

struct ProbeValue {
  int n = 0;
  double value = 0.0;
};

struct ThresholdResult {
  std::optional<int> n_min;     // empty when n_cap is reached without success
  double value_at_n_min = 0.0;
  std::vector<ProbeValue> probes;  // every probed point, in probe order
};

/// Doubles N from 1 until the target is met (or n_cap), then refines on the
/// chosen grid. Monotonicity is not assumed: all probe values are recorded.
/// `base` supplies h, gamma, T and the case; substeps re-resolve per probe.
ThresholdResult min_n(const ThresholdQuery& q, const SimParams& base);

struct FidelityPoint {
  int n = 0;
  double fidelity = 0.0;
};

/// Before/after fidelity per N (collision engine).
std::vector<FidelityPoint> fidelity_vs_n(double epsilon,
                                         std::span<const int> n_list,
                                         const SimParams& base);

struct ScalingFit {
  std::vector<std::pair<double, int>> points;  // (epsilon, n_min)
  double lambda_hat = 0.0;
  double residual = 0.0;  // RMS residual of log(n eps^2 / lambda_hat)
};

/// Least-squares fit of n_min = lambda / eps^2 in log space.
ScalingFit fit_lambda(std::span<const std::pair<double, int>> points);

struct AdiabaticPoint {
  double t = 0.0;
  double metric = 0.0;
  double gap = 0.0;
};

/// Adiabatic metric and gap of the effective CasePhi Hamiltonian on a uniform
/// grid of `samples` intervals.
std::vector<AdiabaticPoint> adiabatic_report(const SimParams& p, int samples);

/// PANNEAL_WORKERS when set (positive), hardware concurrency otherwise.
int worker_count();

/// Runs fn(0..task_count-1) on a bounded pool. Tasks own disjoint output
/// slots, so results do not depend on the worker count.
void parallel_for(int task_count, const std::function<void(int)>& fn);

}  // namespace panneal
