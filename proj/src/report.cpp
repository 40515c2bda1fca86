#include "panneal/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace panneal {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path.string());
  }
  return out;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open input file: " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trajectory_csv(const std::filesystem::path& path,
                          std::span<const TimePoint> rows) {
  std::ofstream out = open_out(path);
  out << "t,p0,p1,re01,im01\n";
  for (const TimePoint& r : rows) {
    out << format_double(r.t) << ',' << format_double(r.p0) << ','
        << format_double(r.p1) << ',' << format_double(r.re01) << ','
        << format_double(r.im01) << '\n';
  }
}

void write_trajectory_json(const std::filesystem::path& path,
                           std::span<const TimePoint> rows) {
  nlohmann::json j;
  j["columns"] = {"t", "p0", "p1", "re01", "im01"};
  auto& data = j["rows"];
  data = nlohmann::json::array();
  for (const TimePoint& r : rows) {
    data.push_back({r.t, r.p0, r.p1, r.re01, r.im01});
  }
  open_out(path) << j.dump(2) << '\n';
}

void write_sweep_csv(const std::filesystem::path& path,
                     std::span<const SweepRow> rows) {
  std::ofstream out = open_out(path);
  out << "epsilon,n,final_p1,final_p0,fidelity\n";
  for (const SweepRow& r : rows) {
    out << format_double(r.epsilon) << ',' << r.n << ','
        << format_double(r.final_p1) << ',' << format_double(r.final_p0)
        << ',' << format_double(r.fidelity) << '\n';
  }
}

void write_threshold_csv(const std::filesystem::path& path,
                         std::span<const ThresholdRow> rows) {
  std::ofstream out = open_out(path);
  out << "epsilon,n_min,value_at_n_min\n";
  for (const ThresholdRow& r : rows) {
    out << format_double(r.epsilon) << ',';
    if (r.n_min) {
      out << *r.n_min << ',' << format_double(r.value_at_n_min);
    } else {
      out << ',';
    }
    out << '\n';
  }
}

std::vector<ThresholdRow> read_threshold_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open input file: " + path.string());
  }
  std::vector<ThresholdRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("epsilon", 0) == 0) continue;  // header
    }
    std::istringstream ss(line);
    std::string eps_s, n_s, v_s;
    std::getline(ss, eps_s, ',');
    std::getline(ss, n_s, ',');
    std::getline(ss, v_s, ',');
    ThresholdRow row;
    row.epsilon = std::stod(eps_s);
    if (!n_s.empty()) {
      row.n_min = std::stoi(n_s);
      row.value_at_n_min = v_s.empty() ? 0.0 : std::stod(v_s);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_adiabatic_csv(const std::filesystem::path& path,
                         std::span<const AdiabaticPoint> rows) {
  std::ofstream out = open_out(path);
  out << "t,metric,gap\n";
  for (const AdiabaticPoint& r : rows) {
    out << format_double(r.t) << ',' << format_double(r.metric) << ','
        << format_double(r.gap) << '\n';
  }
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["version"] = version;
  j["engine"] = engine;
  j["params"] = {
      {"epsilon", params.epsilon},
      {"n_qubits", params.n_qubits},
      {"h", params.h},
      {"gamma", params.gamma},
      {"t_final", params.t_final},
      {"substeps_per_segment", resolved_substeps(params)},
      {"case", params.case_label == CaseLabel::Phi ? "phi" : "psi"},
  };
  j["integrator"] = {
      {"method", integrator_method},
      {"unitarity_tol", unitarity_tol},
  };
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["outputs"] = outputs;
  j["summary"] = {
      {"final_p0", final_p0},
      {"final_p1", final_p1},
      {"fidelity", fidelity},
  };
  return j.dump(2);
}

RunManifest RunManifest::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  RunManifest m;
  m.version = j.at("version").get<std::string>();
  m.engine = j.at("engine").get<std::string>();
  const auto& p = j.at("params");
  m.params.epsilon = p.at("epsilon").get<double>();
  m.params.n_qubits = p.at("n_qubits").get<int>();
  m.params.h = p.at("h").get<double>();
  m.params.gamma = p.at("gamma").get<double>();
  m.params.t_final = p.at("t_final").get<double>();
  m.params.substeps_per_segment = p.at("substeps_per_segment").get<int>();
  m.params.case_label = p.at("case").get<std::string>() == "psi"
                            ? CaseLabel::Psi
                            : CaseLabel::Phi;
  m.integrator_method = j.at("integrator").at("method").get<std::string>();
  m.unitarity_tol = j.at("integrator").at("unitarity_tol").get<double>();
  m.started_at = j.at("started_at").get<std::string>();
  m.finished_at = j.at("finished_at").get<std::string>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  m.final_p0 = j.at("summary").at("final_p0").get<double>();
  m.final_p1 = j.at("summary").at("final_p1").get<double>();
  m.fidelity = j.at("summary").at("fidelity").get<double>();
  return m;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  open_out(path) << m.to_json() << '\n';
}

RunManifest read_manifest(const std::filesystem::path& path) {
  return RunManifest::from_json(slurp(path));
}

std::string iso_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace panneal
