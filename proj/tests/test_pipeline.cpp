#include <gtest/gtest.h>

#include <filesystem>
#include <limits>

#include "mrecon/io.hpp"
#include "mrecon/masks.hpp"
#include "mrecon/phantom.hpp"
#include "mrecon/pipeline.hpp"
#include "mrecon/report.hpp"
#include "support.hpp"

using namespace mrecon;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

DenseTensor small_phantom(const Dims& dims, double motion = 0.12) {
  PhantomConfig pc;
  pc.dims = dims;
  pc.ellipses = 4;
  pc.motion = motion;
  return gen_phantom(pc);
}

RunSpec quick_spec(std::size_t iters) {
  RunSpec spec = default_run_spec();
  spec.solver.max_iterations = iters;
  spec.write_png = false;
  return spec;
}

}  // namespace

TEST(Pipeline, DefaultRank) {
  EXPECT_EQ(default_rank({64, 64, 16}), (RankTuple{16, 16, 4}));
  EXPECT_EQ(default_rank({3, 8, 2}), (RankTuple{1, 2, 1}));
}

TEST(Pipeline, FullMaskFullRankReturnsZeroFilled) {
  const Dims dims{16, 16, 4};
  const DenseTensor truth = small_phantom(dims);
  RunSpec spec = quick_spec(5);
  spec.reg.lambda = 0.0;
  spec.solver.rank = dims;
  spec.encoding = EncodingKind::Pointwise;
  const SamplingMask full(dims, true);
  const ReconOutcome out = run_recon(simulate_measurements(truth, full, spec.encoding), full, spec, &truth);
  EXPECT_EQ(out.result.x, out.zero_filled);
  EXPECT_EQ(out.metrics->psnr, std::numeric_limits<double>::infinity());
  EXPECT_EQ(out.metrics->mse, 0.0);

  spec.encoding = EncodingKind::Fourier;
  const ReconOutcome f = run_recon(simulate_measurements(truth, full, spec.encoding), full, spec, &truth);
  EXPECT_LT(rel_diff(f.result.x, f.zero_filled), 1e-12);
  EXPECT_GT(f.metrics->psnr, 200.0);
}

TEST(Pipeline, RejectsMismatchedInputs) {
  const DenseTensor truth = small_phantom({16, 16, 4});
  const SamplingMask m({16, 16, 5}, true);
  EXPECT_THROW(simulate_measurements(truth, m, EncodingKind::Fourier), std::invalid_argument);
  EXPECT_THROW(run_recon(truth, m, quick_spec(1)), std::invalid_argument);
}

TEST(Pipeline, WritesOutputs) {
  const Dims dims{16, 16, 4};
  const DenseTensor truth = small_phantom(dims);
  const SamplingMask mask = gen_mask_gaussian(dims, 2.0, 1);
  RunSpec spec = quick_spec(3);
  spec.write_png = true;
  const ReconOutcome out = run_recon(simulate_measurements(truth, mask, spec.encoding), mask, spec, &truth);
  const fs::path dir = fs::temp_directory_path() / "mrecon_pipeline_out";
  fs::remove_all(dir);
  write_recon_outputs(dir, out, spec, &truth);
  for (const char* f : {"recon.cten", "recon.ctkr", "zero_filled.cten", "iterations.csv", "metrics.csv",
                        "metrics_zero_filled.csv", "summary.json", "recon_000.png", "recon_002.png",
                        "yt_recon.png", "yt_error.png"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  EXPECT_EQ(io::read_tensor(dir / "recon.cten").dims(), dims);
  const auto j = nlohmann::json::parse(io::read_file(dir / "summary.json"));
  EXPECT_EQ(j["solver"]["rank"], (std::vector<std::size_t>{4, 4, 1}));
  const auto iters = report::parse_iterations_csv(io::read_file(dir / "iterations.csv"));
  EXPECT_EQ(iters.size(), out.result.report.iterations.size());
  fs::remove_all(dir);
}

TEST(Sweep, ParseParam) {
  EXPECT_EQ(parse_sweep_param("rank"), SweepParam::TemporalRank);
  EXPECT_EQ(parse_sweep_param("accel"), SweepParam::Acceleration);
  EXPECT_THROW(parse_sweep_param("lambda"), std::invalid_argument);
}

TEST(Sweep, OneRowPerValue) {
  const Dims dims{16, 16, 4};
  const DenseTensor truth = small_phantom(dims);
  auto mask_for = [&](double r) { return gen_mask_gaussian(dims, r, 3); };
  std::size_t callbacks = 0;
  const SweepResult res = run_sweep(SweepParam::Acceleration, {2.0, 4.0}, truth, mask_for, quick_spec(3),
                                    [&](const SweepResult&) { ++callbacks; });
  ASSERT_FALSE(res.aborted) << res.message;
  ASSERT_EQ(res.rows.size(), 2u);
  EXPECT_EQ(callbacks, 2u);
  EXPECT_GT(res.rows[0].sampling_fraction, res.rows[1].sampling_fraction);
  const std::string csv = sweep_csv(SweepParam::Acceleration, res.rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(csv.substr(0, csv.find(',')), "accel");
}

TEST(Sweep, TemporalRankOneOnStaticPhantom) {
  const Dims dims{16, 16, 4};
  const DenseTensor truth = small_phantom(dims, 0.0);
  auto mask_for = [&](double) { return gen_mask_gaussian(dims, 2.0, 5); };
  const SweepResult res = run_sweep(SweepParam::TemporalRank, {1.0}, truth, mask_for, quick_spec(20));
  ASSERT_FALSE(res.aborted) << res.message;
  ASSERT_EQ(res.rows.size(), 1u);
  EXPECT_EQ(res.rows[0].rank, (RankTuple{4, 4, 1}));
  EXPECT_GT(res.rows[0].metrics.psnr, res.rows[0].zf_metrics.psnr);
  EXPECT_THROW(run_sweep(SweepParam::TemporalRank, {1.5}, truth, mask_for, quick_spec(1)),
               std::invalid_argument);
  EXPECT_THROW(run_sweep(SweepParam::TemporalRank, {}, truth, mask_for, quick_spec(1)),
               std::invalid_argument);
}
