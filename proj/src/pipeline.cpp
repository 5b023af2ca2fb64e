#include "mrecon/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mrecon/io.hpp"
#include "mrecon/png.hpp"
#include "mrecon/report.hpp"

namespace mrecon {

RunSpec default_run_spec() {
  RunSpec spec;
  spec.solver.algorithm = Algorithm::RiemannianGD;
  spec.solver.max_iterations = 300;
  spec.solver.step_rule = StepRule::Armijo;
  spec.solver.step = 1.0;
  spec.reg.kind = RegularizerKind::TemporalDifference;
  spec.reg.lambda = 3e-3;
  spec.reg.epsilon = 1e-3;
  return spec;
}

RankTuple default_rank(const Dims& dims) {
  RankTuple r;
  for (auto n : dims) r.push_back(std::max<std::size_t>(1, n / 4));
  return r;
}

DenseTensor simulate_measurements(const DenseTensor& truth, const SamplingMask& mask,
                                  EncodingKind encoding) {
  if (truth.dims() != mask.dims())
    throw std::invalid_argument("mask dims do not match the image dims");
  return EncodingOperator(encoding, mask).forward(truth);
}

ReconOutcome run_recon(const DenseTensor& y, const SamplingMask& mask, const RunSpec& spec,
                       const DenseTensor* truth) {
  if (y.dims() != mask.dims())
    throw std::invalid_argument("measurement dims do not match the mask dims");
  if (truth && truth->dims() != y.dims())
    throw std::invalid_argument("truth dims do not match the measurement dims");
  ReconProblem problem{EncodingOperator(spec.encoding, mask), y, spec.reg};
  SolverConfig cfg = spec.solver;
  if (cfg.rank.empty()) cfg.rank = default_rank(y.dims());
  if (truth) cfg.truth = *truth;

  ReconOutcome out{zero_filled(problem), solve(problem, cfg), std::nullopt, std::nullopt};
  if (truth) {
    out.metrics = evaluate_metrics(*truth, out.result.x);
    out.zf_metrics = evaluate_metrics(*truth, out.zero_filled);
  }
  return out;
}

nlohmann::json summary_json(const ReconOutcome& out, const RunSpec& spec) {
  nlohmann::json j;
  SolverConfig cfg = spec.solver;
  if (cfg.rank.empty()) cfg.rank = default_rank(out.result.x.dims());
  j["dims"] = out.result.x.dims();
  j["solver"] = report::to_json(cfg);
  j["regularizer"] = report::to_json(spec.reg);
  j["encoding"] = spec.encoding == EncodingKind::Fourier ? "fourier" : "pointwise";
  j["report"] = report::to_json(out.result.report);
  if (out.metrics) j["metrics"] = report::to_json(*out.metrics);
  if (out.zf_metrics) j["zero_filled_metrics"] = report::to_json(*out.zf_metrics);
  return j;
}

namespace {

double peak_magnitude(const DenseTensor& x) {
  double m = 0.0;
  for (const auto& z : x.data()) m = std::max(m, std::abs(z));
  return m > 0.0 ? m : 1.0;
}

std::string frame_name(const char* stem, std::size_t t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03zu.png", stem, t);
  return buf;
}

}  // namespace

void write_recon_outputs(const std::filesystem::path& dir, const ReconOutcome& out,
                         const RunSpec& spec, const DenseTensor* truth) {
  std::filesystem::create_directories(dir);
  io::write_tensor(dir / "recon.cten", out.result.x);
  if (out.result.tucker) io::write_tucker(dir / "recon.ctkr", *out.result.tucker);
  io::write_tensor(dir / "zero_filled.cten", out.zero_filled);
  io::write_file_atomic(dir / "iterations.csv",
                        report::iterations_csv(out.result.report, spec.include_timing));
  if (out.metrics) io::write_file_atomic(dir / "metrics.csv", report::metrics_csv(*out.metrics));
  if (out.zf_metrics)
    io::write_file_atomic(dir / "metrics_zero_filled.csv", report::metrics_csv(*out.zf_metrics));
  io::write_file_atomic(dir / "summary.json", summary_json(out, spec).dump(2) + "\n");

  if (!spec.write_png || out.result.x.ndim() != 3) return;
  const DenseTensor& x = out.result.x;
  const std::size_t nx = x.dim(0), nt = x.dim(2);
  const double scale = peak_magnitude(truth ? *truth : x);
  std::vector<std::size_t> frames = spec.png_frames;
  if (frames.empty()) {
    frames.push_back(0);
    if (nt / 2 != 0) frames.push_back(nt / 2);
  }
  const std::size_t column = spec.yt_column.value_or(nx / 2);
  for (auto t : frames) {
    png::write(dir / frame_name("recon", t), png::frame_image(x, t, scale));
    png::write(dir / frame_name("zero_filled", t), png::frame_image(out.zero_filled, t, scale));
    if (truth) {
      png::write(dir / frame_name("error", t), png::error_image(*truth, x, t, scale, spec.error_range));
      png::write(dir / frame_name("error_zero_filled", t),
                 png::error_image(*truth, out.zero_filled, t, scale, spec.error_range));
    }
  }
  png::write(dir / "yt_recon.png", png::yt_image(x, column, scale));
  png::write(dir / "yt_zero_filled.png", png::yt_image(out.zero_filled, column, scale));
  if (truth) {
    png::write(dir / "yt_truth.png", png::yt_image(*truth, column, scale));
    png::write(dir / "yt_error.png", png::yt_error_image(*truth, x, column, scale, spec.error_range));
  }
}

SweepParam parse_sweep_param(const std::string& s) {
  if (s == "rank" || s == "rank-r3") return SweepParam::TemporalRank;
  if (s == "accel" || s == "acceleration") return SweepParam::Acceleration;
  throw std::invalid_argument("unknown sweep parameter '" + s + "'");
}

std::string to_string(SweepParam p) { return p == SweepParam::TemporalRank ? "rank" : "accel"; }

SweepResult run_sweep(SweepParam param, const std::vector<double>& values, const DenseTensor& truth,
                      const std::function<SamplingMask(double)>& mask_for, const RunSpec& spec,
                      const std::function<void(const SweepResult&)>& on_row) {
  if (values.empty()) throw std::invalid_argument("sweep range is empty");
  if (truth.ndim() != 3) throw std::invalid_argument("sweeps need an (nx, ny, nt) truth");
  SweepResult res;
  std::optional<SamplingMask> fixed_mask;
  for (double v : values) {
    RunSpec run = spec;
    run.write_png = false;
    if (run.solver.rank.empty()) run.solver.rank = default_rank(truth.dims());
    if (param == SweepParam::TemporalRank) {
      if (!(v >= 1.0) || v != std::floor(v))
        throw std::invalid_argument("temporal rank values must be positive integers");
      run.solver.rank[2] = static_cast<std::size_t>(v);
    }
    require_feasible_rank(truth.dims(), run.solver.rank);
    const SamplingMask mask = [&] {
      if (param == SweepParam::Acceleration) return mask_for(v);
      if (!fixed_mask) fixed_mask = mask_for(v);
      return *fixed_mask;
    }();
    const DenseTensor y = simulate_measurements(truth, mask, run.encoding);
    ReconOutcome out = run_recon(y, mask, run, &truth);
    const auto& rep = out.result.report;
    if (is_failure(rep.status)) {
      res.aborted = true;
      res.message = "sub-run at " + std::to_string(v) + " failed: " + to_string(rep.status) +
                    (rep.message.empty() ? "" : " (" + rep.message + ")");
      return res;
    }
    SweepRow row;
    row.value = v;
    row.rank = run.solver.rank;
    row.sampling_fraction = mask.sampling_fraction();
    row.status = to_string(rep.status);
    row.iterations = rep.iterations.size();
    row.metrics = *out.metrics;
    row.zf_metrics = *out.zf_metrics;
    res.rows.push_back(std::move(row));
    if (on_row) on_row(res);
  }
  return res;
}

std::string sweep_csv(SweepParam param, const std::vector<SweepRow>& rows) {
  auto fmt = [](double v) {
    if (std::isnan(v)) return std::string("nan");
    if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string out = to_string(param) +
                    ",rank,sampling_fraction,status,iterations,mse,psnr,ssim,zf_mse,zf_psnr,zf_ssim\n";
  for (const auto& r : rows) {
    std::string rank;
    for (std::size_t i = 0; i < r.rank.size(); ++i) rank += (i ? "x" : "") + std::to_string(r.rank[i]);
    out += fmt(r.value) + "," + rank + "," + fmt(r.sampling_fraction) + "," + r.status + "," +
           std::to_string(r.iterations) + "," + fmt(r.metrics.mse) + "," + fmt(r.metrics.psnr) + "," +
           fmt(r.metrics.ssim) + "," + fmt(r.zf_metrics.mse) + "," + fmt(r.zf_metrics.psnr) + "," +
           fmt(r.zf_metrics.ssim) + "\n";
  }
  return out;
}

}  // namespace mrecon
