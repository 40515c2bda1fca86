#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "panneal/collision_engine.hpp"
#include "panneal/report.hpp"

using namespace panneal;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("panneal_report_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("format_double round-trips bit-exactly") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double v = std::ldexp(dist(rng), i % 60 - 30);
    const double back = std::strtod(format_double(v).c_str(), nullptr);
    CHECK(back == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("trajectory CSV schema") {
  const std::vector<TimePoint> rows = {{0.0, 0.5, 0.5, 0.5, 0.0},
                                       {1.25, 0.25, 0.75, -0.125, 0.0625}};
  const fs::path path = temp_dir() / "traj.csv";
  write_trajectory_csv(path, rows);
  std::ifstream in(path);
  std::string header, line1, line2;
  std::getline(in, header);
  std::getline(in, line1);
  std::getline(in, line2);
  CHECK(header == "t,p0,p1,re01,im01");
  CHECK(line1 == "0,0.5,0.5,0.5,0");
  CHECK(line2 == "1.25,0.25,0.75,-0.125,0.0625");
}

TEST_CASE("trajectory JSON matches the CSV schema") {
  const std::vector<TimePoint> rows = {{0.0, 0.5, 0.5, 0.5, 0.0}};
  const fs::path path = temp_dir() / "traj.json";
  write_trajectory_json(path, rows);
  const nlohmann::json j = nlohmann::json::parse(read_file(path));
  REQUIRE(j.at("columns").size() == 5);
  CHECK(j.at("columns")[0] == "t");
  REQUIRE(j.at("rows").size() == 1);
  CHECK(j.at("rows")[0][1].get<double>() == 0.5);
}

TEST_CASE("sweep CSV schema") {
  const std::vector<SweepRow> rows = {{0.5, 64, 0.9375, 0.0625, 0.5}};
  const fs::path path = temp_dir() / "sweep.csv";
  write_sweep_csv(path, rows);
  std::ifstream in(path);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(header == "epsilon,n,final_p1,final_p0,fidelity");
  CHECK(line == "0.5,64,0.9375,0.0625,0.5");
}

TEST_CASE("threshold CSV: not-found rows keep an empty n_min") {
  std::vector<ThresholdRow> rows(2);
  rows[0].epsilon = 0.5;
  rows[0].n_min = 64;
  rows[0].value_at_n_min = 0.9375;
  rows[1].epsilon = 0.75;  // not found
  const fs::path path = temp_dir() / "threshold.csv";
  write_threshold_csv(path, rows);
  std::ifstream in(path);
  std::string header, line1, line2;
  std::getline(in, header);
  std::getline(in, line1);
  std::getline(in, line2);
  CHECK(header == "epsilon,n_min,value_at_n_min");
  CHECK(line1 == "0.5,64,0.9375");
  CHECK(line2 == "0.75,,");

  const std::vector<ThresholdRow> parsed = read_threshold_csv(path);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].epsilon == 0.5);
  REQUIRE(parsed[0].n_min.has_value());
  CHECK(*parsed[0].n_min == 64);
  CHECK(parsed[0].value_at_n_min == 0.9375);
  CHECK_FALSE(parsed[1].n_min.has_value());
}

TEST_CASE("adiabatic CSV schema") {
  const std::vector<AdiabaticPoint> rows = {{0.0, 0.0625, 1.0}};
  const fs::path path = temp_dir() / "adiabatic.csv";
  write_adiabatic_csv(path, rows);
  std::ifstream in(path);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(header == "t,metric,gap");
  CHECK(line == "0,0.0625,1");
}

TEST_CASE("manifest JSON round-trips") {
  RunManifest m;
  m.params = make_params(0.25, 64);
  m.params.case_label = CaseLabel::Psi;
  m.engine = "collision";
  m.started_at = iso_timestamp_now();
  m.finished_at = iso_timestamp_now();
  m.outputs = {"a.csv", "b.json"};
  m.final_p0 = 1.0 / 3.0;
  m.final_p1 = 2.0 / 3.0;
  m.fidelity = 0.1234567890123456789;

  const RunManifest back = RunManifest::from_json(m.to_json());
  CHECK(back.params.epsilon == m.params.epsilon);
  CHECK(back.params.n_qubits == 64);
  CHECK(back.params.case_label == CaseLabel::Psi);
  CHECK(back.params.substeps_per_segment == resolved_substeps(m.params));
  CHECK(back.engine == "collision");
  CHECK(back.outputs == m.outputs);
  CHECK(back.final_p0 == m.final_p0);      // bitwise
  CHECK(back.final_p1 == m.final_p1);
  CHECK(back.fidelity == m.fidelity);

  const fs::path path = temp_dir() / "run.manifest.json";
  write_manifest(path, m);
  const RunManifest from_file = read_manifest(path);
  CHECK(from_file.final_p1 == m.final_p1);
  CHECK(from_file.version == kVersion);
}

TEST_CASE("re-running from a manifest echo reproduces the summary bitwise") {
  SimParams p = make_params(0.5, 8);
  const RunResult first = run(p, 8);
  RunManifest m;
  m.params = p;
  m.engine = "collision";
  m.final_p0 = first.final_p0;
  m.final_p1 = first.final_p1;
  m.fidelity = first.fidelity;

  const RunManifest echoed = RunManifest::from_json(m.to_json());
  const RunResult second = run(echoed.params, 8);
  CHECK(second.final_p0 == m.final_p0);
  CHECK(second.final_p1 == m.final_p1);
  CHECK(second.fidelity == m.fidelity);
}

TEST_CASE("timestamps look like UTC ISO-8601") {
  const std::string ts = iso_timestamp_now();
  REQUIRE(ts.size() == 20);
  CHECK(ts[4] == '-');
  CHECK(ts[10] == 'T');
  CHECK(ts[19] == 'Z');
}
