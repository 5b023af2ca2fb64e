#include "mrecon/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mrecon::report {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text, const std::string& header) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || line != header)
    throw std::invalid_argument("unexpected CSV header, wanted '" + header + "'");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

constexpr const char* kIterHeader = "iteration,objective,fidelity,grad_norm,step,ms";
constexpr const char* kMetricHeader = "frame,mse,psnr,ssim";

}  // namespace

std::string iterations_csv(const SolveReport& rep, bool include_timing) {
  std::string out = std::string(kIterHeader) + "\n";
  for (const auto& r : rep.iterations) {
    out += std::to_string(r.iteration) + "," + fmt(r.objective) + "," + fmt(r.fidelity) + "," +
           fmt(r.grad_norm) + "," + fmt(r.step) + "," + fmt(include_timing ? r.ms : 0.0) + "\n";
  }
  return out;
}

std::vector<IterationRecord> parse_iterations_csv(const std::string& text) {
  std::vector<IterationRecord> out;
  for (const auto& row : csv_rows(text, kIterHeader)) {
    if (row.size() != 6) throw std::invalid_argument("iteration CSV row must have 6 fields");
    IterationRecord r;
    r.iteration = static_cast<std::size_t>(std::stoull(row[0]));
    r.objective = parse_double(row[1]);
    r.fidelity = parse_double(row[2]);
    r.grad_norm = parse_double(row[3]);
    r.step = parse_double(row[4]);
    r.ms = parse_double(row[5]);
    out.push_back(r);
  }
  return out;
}

std::string metrics_csv(const MetricReport& m) {
  std::string out = std::string(kMetricHeader) + "\n";
  for (std::size_t t = 0; t < m.frame_mse.size(); ++t)
    out += std::to_string(t) + "," + fmt(m.frame_mse[t]) + "," + fmt(m.frame_psnr[t]) + "," +
           fmt(m.frame_ssim[t]) + "\n";
  out += "all," + fmt(m.mse) + "," + fmt(m.psnr) + "," + fmt(m.ssim) + "\n";
  return out;
}

MetricReport parse_metrics_csv(const std::string& text) {
  MetricReport m;
  bool have_total = false;
  for (const auto& row : csv_rows(text, kMetricHeader)) {
    if (row.size() != 4) throw std::invalid_argument("metric CSV row must have 4 fields");
    if (row[0] == "all") {
      m.mse = parse_double(row[1]);
      m.psnr = parse_double(row[2]);
      m.ssim = parse_double(row[3]);
      have_total = true;
    } else {
      m.frame_mse.push_back(parse_double(row[1]));
      m.frame_psnr.push_back(parse_double(row[2]));
      m.frame_ssim.push_back(parse_double(row[3]));
    }
  }
  if (!have_total) throw std::invalid_argument("metric CSV lacks the 'all' row");
  return m;
}

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

double number_from(const nlohmann::json& j) {
  if (j.is_string()) return parse_double(j.get<std::string>());
  return j.get<double>();
}

nlohmann::json to_json(const MetricReport& m) {
  nlohmann::json j;
  j["mse"] = number(m.mse);
  j["psnr"] = number(m.psnr);
  j["ssim"] = number(m.ssim);
  auto arr = [](const std::vector<double>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (double x : v) a.push_back(number(x));
    return a;
  };
  j["frame_mse"] = arr(m.frame_mse);
  j["frame_psnr"] = arr(m.frame_psnr);
  j["frame_ssim"] = arr(m.frame_ssim);
  return j;
}

nlohmann::json to_json(const SolverConfig& cfg) {
  return {
      {"algorithm", to_string(cfg.algorithm)},
      {"rank", cfg.rank},
      {"max_iterations", cfg.max_iterations},
      {"step_rule", to_string(cfg.step_rule)},
      {"step", cfg.step},
      {"armijo_c", cfg.armijo_c},
      {"armijo_beta", cfg.armijo_beta},
      {"tolerance", cfg.tolerance},
      {"seed", cfg.seed},
  };
}

nlohmann::json to_json(const RegularizerConfig& cfg) {
  return {{"kind", to_string(cfg.kind)}, {"epsilon", cfg.epsilon}, {"lambda", cfg.lambda}};
}

nlohmann::json to_json(const SolveReport& rep) {
  return {
      {"status", to_string(rep.status)},
      {"converged", rep.converged()},
      {"message", rep.message},
      {"iterations", rep.iterations.size()},
      {"initial_objective", number(rep.initial_objective)},
      {"final_objective", number(rep.final_objective)},
      {"counts",
       {{"forward", rep.counts.forward},
        {"adjoint", rep.counts.adjoint},
        {"projections", rep.counts.projections},
        {"retractions", rep.counts.retractions},
        {"truncations", rep.counts.truncations},
        {"linesearch_forward", rep.counts.linesearch_forward},
        {"linesearch_rejected", rep.counts.linesearch_rejected}}},
  };
}

}  // namespace mrecon::report
