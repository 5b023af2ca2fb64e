#pragma once

#include <string>
#include <vector>

#include "mrecon/metrics.hpp"
#include "mrecon/solvers.hpp"
#include <json.hpp>

namespace mrecon::report {

// iteration,objective,fidelity,grad_norm,step,ms
// `ms` is written as 0 unless include_timing is set, keeping files reproducible.
std::string iterations_csv(const SolveReport& rep, bool include_timing);
std::vector<IterationRecord> parse_iterations_csv(const std::string& text);

// frame,mse,psnr,ssim with a final "all" row for the volume.
std::string metrics_csv(const MetricReport& m);
MetricReport parse_metrics_csv(const std::string& text);

nlohmann::json to_json(const MetricReport& m);
nlohmann::json to_json(const SolverConfig& cfg);
nlohmann::json to_json(const RegularizerConfig& cfg);
nlohmann::json to_json(const SolveReport& rep);

// Non-finite values become the strings "inf", "-inf" or "nan".
nlohmann::json number(double v);
double number_from(const nlohmann::json& j);

}  // namespace mrecon::report
