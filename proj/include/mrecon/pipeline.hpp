#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mrecon/metrics.hpp"
#include "mrecon/solvers.hpp"
#include <json.hpp>

namespace mrecon {

// Everything a reconstruction run needs besides its input data.
struct RunSpec {
  SolverConfig solver;
  RegularizerConfig reg;
  EncodingKind encoding = EncodingKind::Fourier;
  bool write_png = true;
  std::vector<std::size_t> png_frames;  // empty: first and middle frame
  std::optional<std::size_t> yt_column;  // default nx / 2
  double error_range = 0.07;             // error-map display range on unit-normalized magnitudes
  bool include_timing = false;
};

// Defaults used by the command-line tool.
RunSpec default_run_spec();
// (n_x/4, n_y/4, n_t/4) rounded down, at least 1 per mode.
RankTuple default_rank(const Dims& dims);

DenseTensor simulate_measurements(const DenseTensor& truth, const SamplingMask& mask,
                                  EncodingKind encoding);

struct ReconOutcome {
  DenseTensor zero_filled;
  SolveResult result;
  std::optional<MetricReport> metrics;     // recon vs truth
  std::optional<MetricReport> zf_metrics;  // zero-filled vs truth
};

// Empty spec.solver.rank selects default_rank.
ReconOutcome run_recon(const DenseTensor& y, const SamplingMask& mask, const RunSpec& spec,
                       const DenseTensor* truth = nullptr);

nlohmann::json summary_json(const ReconOutcome& out, const RunSpec& spec);

// recon.cten, recon.ctkr, zero_filled.cten, iterations.csv, summary.json and,
// with a truth, metrics.csv / metrics_zero_filled.csv; PNG snapshots if enabled.
void write_recon_outputs(const std::filesystem::path& dir, const ReconOutcome& out,
                         const RunSpec& spec, const DenseTensor* truth);

enum class SweepParam { TemporalRank, Acceleration };
SweepParam parse_sweep_param(const std::string& s);
std::string to_string(SweepParam p);

struct SweepRow {
  double value = 0.0;
  RankTuple rank;
  double sampling_fraction = 0.0;
  std::string status;
  std::size_t iterations = 0;
  MetricReport metrics;
  MetricReport zf_metrics;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool aborted = false;
  std::string message;
};

// One full reconstruction per value against the truth. For TemporalRank the
// value replaces r_3 (spatial ranks from the run settings or default); for Acceleration
// `mask_for(value)` supplies the mask. `on_row` sees each finished row.
// The first failing sub-run stops the sweep with the rows so far.
SweepResult run_sweep(SweepParam param, const std::vector<double>& values, const DenseTensor& truth,
                      const std::function<SamplingMask(double)>& mask_for, const RunSpec& spec,
                      const std::function<void(const SweepResult&)>& on_row = {});

std::string sweep_csv(SweepParam param, const std::vector<SweepRow>& rows);

}  // namespace mrecon
