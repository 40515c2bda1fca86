// Plot-ready CSV emission and the JSON run manifest. Schemas are stable:
//   trajectories: t,p0,p1,re01,im01
//   sweeps:       epsilon,n,final_p1,final_p0,fidelity
//   thresholds:   epsilon,n_min,value_at_n_min   (empty n_min = not found)
//   adiabatic:    t,metric,gap
// Floats are written with %.17g so that values round-trip bit-exactly.
#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "panneal/experiments.hpp"
#include "panneal/types.hpp"

namespace panneal {

inline constexpr const char* kVersion = "panneal 0.1.0";

std::string format_double(double v);

void write_trajectory_csv(const std::filesystem::path& path,
                          std::span<const TimePoint> rows);
void write_trajectory_json(const std::filesystem::path& path,
                           std::span<const TimePoint> rows);

struct SweepRow {
  double epsilon = 0.0;
  int n = 0;
  double final_p1 = 0.0;
  double final_p0 = 0.0;
  double fidelity = 0.0;
};
void write_sweep_csv(const std::filesystem::path& path,
                     std::span<const SweepRow> rows);

struct ThresholdRow {
  double epsilon = 0.0;
  std::optional<int> n_min;
  double value_at_n_min = 0.0;
};
void write_threshold_csv(const std::filesystem::path& path,
                         std::span<const ThresholdRow> rows);
std::vector<ThresholdRow> read_threshold_csv(const std::filesystem::path& path);

void write_adiabatic_csv(const std::filesystem::path& path,
                         std::span<const AdiabaticPoint> rows);

struct RunManifest {
  SimParams params;            // substeps echoed as resolved
  std::string engine;          // "collision" or "dense"
  std::string version = kVersion;
  std::string integrator_method = "midpoint-exponential";
  double unitarity_tol = 1e-10;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;
  double final_p0 = 0.0;
  double final_p1 = 0.0;
  double fidelity = 0.0;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

std::string iso_timestamp_now();

}  // namespace panneal
