// Acceptance checks 1-9. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>

#include "../support.hpp"
#include "mrecon/io.hpp"
#include "mrecon/masks.hpp"
#include "mrecon/metrics.hpp"
#include "mrecon/phantom.hpp"
#include "mrecon/pipeline.hpp"
#include "mrecon/report.hpp"

using namespace mrecon;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, bool ok, const std::string& what) {
  if (!ok) o.pass = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += (ok ? "" : "FAILED ") + what;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt2(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

DenseTensor unit(DenseTensor a) {
  a *= cplx(1.0 / a.norm(), 0.0);
  return a;
}

// 1. Projection idempotence, gauge, residual orthogonality, retraction order.
Outcome manifold_suite() {
  Outcome o;
  Rng rng(101);
  const Dims dims{16, 16, 8};
  const RankTuple r{4, 4, 3};
  double worst_idem = 0, worst_gauge = 0, worst_orth = 0, worst_ratio_dev = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const ManifoldPoint x(random_tucker(dims, r, rng));
    const DenseTensor a = unit(random_tensor(dims, rng));
    const TangentVector p = project_tangent(x, a);
    worst_gauge = std::max(worst_gauge, gauge_error(x, p));
    const DenseTensor pa = tangent_embed(x, p);
    worst_idem = std::max(worst_idem, rel_diff(tangent_embed(x, project_tangent(x, pa)), pa));
    const DenseTensor residual = a - pa;
    for (int k = 0; k < 5; ++k) {
      const DenseTensor t = tangent_embed(x, random_tangent(x, rng));
      worst_orth = std::max(worst_orth, std::abs(inner(residual, t)) / (a.norm() * t.norm()));
    }
    const TangentVector xi = random_tangent(x, rng);
    const DenseTensor e = tangent_embed(x, xi);
    auto err = [&](double t) {
      DenseTensor lin = x.ambient();
      lin.axpy(cplx(t, 0.0), e);
      return (retract(x, xi, t).ambient() - lin).norm() / t;
    };
    double t = 1e-1, prev = err(t);
    while (t > 1e-4) {
      t /= 2;
      const double cur = err(t);
      worst_ratio_dev = std::max(worst_ratio_dev, std::abs(prev / cur - 2.0));
      prev = cur;
    }
  }
  note(o, worst_idem <= 1e-9, fmt("idempotence %.1e <= 1e-9", worst_idem));
  note(o, worst_gauge <= 1e-10, fmt("gauge %.1e <= 1e-10", worst_gauge));
  note(o, worst_orth <= 1e-9, fmt("orthogonality %.1e <= 1e-9", worst_orth));
  note(o, worst_ratio_dev <= 0.25, fmt("retraction |ratio - 2| max %.3f <= 0.25", worst_ratio_dev));
  return o;
}

// 2. HOSVD error bound and exact-rank recovery.
Outcome hosvd_suite() {
  Outcome o;
  Rng rng(202);
  const RankTuple r{3, 3, 2};
  double worst_bound = 0, worst_exact = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const DenseTensor x = random_tensor({12, 12, 6}, rng);
    const double err2 = (x - tucker_assemble(hosvd_truncate(x, r))).squared_norm();
    double bound = 0;
    for (std::size_t i = 0; i < 3; ++i) bound += tail_energy(singular_values_oracle(unfold_oracle(x, i)), r[i]);
    worst_bound = std::max(worst_bound, err2 / bound);
    const DenseTensor low = tucker_assemble(random_tucker({12, 12, 6}, r, rng));
    worst_exact = std::max(worst_exact, rel_diff(tucker_assemble(hosvd_truncate(low, r)), low));
  }
  note(o, worst_bound <= 1.0 + 1e-12, fmt("max err^2 / bound %.4f <= 1", worst_bound));
  note(o, worst_exact <= 1e-10, fmt("exact-rank recovery %.1e <= 1e-10", worst_exact));
  return o;
}

// 3. Data, regularizer and Riemannian gradients against central differences.
Outcome gradient_suite() {
  Outcome o;
  Rng rng(303);
  const Dims dims{16, 16, 8};
  const SamplingMask mask = gen_mask_gaussian(dims, 4.0, 3);
  const DenseTensor x = random_tensor(dims, rng), y = forward(random_tensor(dims, rng), mask);
  auto fd_check = [&](const std::function<double(const DenseTensor&)>& f, const DenseTensor& g,
                      double h) {
    double worst = 0;
    for (int k = 0; k < 10; ++k) {
      const DenseTensor d = unit(random_tensor(dims, rng));
      DenseTensor xp = x, xm = x;
      xp.axpy(cplx(h, 0), d);
      xm.axpy(cplx(-h, 0), d);
      const double fd = (f(xp) - f(xm)) / (2 * h), an = inner_real(g, d);
      worst = std::max(worst, std::abs(fd - an) / std::abs(an));
    }
    return worst;
  };
  auto fid = [&](const DenseTensor& z) { return 0.5 * (forward(z, mask) - y).squared_norm(); };
  // quadratic, so central differences are exact up to rounding at any step
  const double data = fd_check(fid, data_gradient(x, y, mask), 1e-2);
  note(o, data <= 1e-6, fmt("data %.1e <= 1e-6", data));

  double reg = 0;
  for (RegularizerKind kind : {RegularizerKind::TemporalDifference, RegularizerKind::SpatialDifference}) {
    const RegularizerConfig cfg{kind, 1e-2, 1.0};
    reg = std::max(reg, fd_check([&](const DenseTensor& z) { return reg_value(z, cfg); },
                                 reg_gradient(x, cfg), 1e-4));
  }
  note(o, reg <= 1e-5, fmt("regularizer %.1e <= 1e-5", reg));

  const ManifoldPoint p(random_tucker(dims, {4, 4, 3}, rng));
  const ReconProblem prob{EncodingOperator(EncodingKind::Fourier, mask), y,
                          {RegularizerKind::TemporalDifference, 1e-2, 1e-2}};
  const DenseTensor grad = tangent_embed(p, riemannian_gradient(p, euclidean_gradient(p.ambient(), prob)));
  double riem = 0;
  const double h = 1e-5;
  for (int k = 0; k < 10; ++k) {
    const TangentVector t = random_tangent(p, rng);
    const double fd = (objective(retract(p, t, h).ambient(), prob) -
                       objective(retract(p, t, -h).ambient(), prob)) / (2 * h);
    const double an = inner_real(grad, tangent_embed(p, t));
    riem = std::max(riem, std::abs(fd - an) / std::abs(an));
  }
  note(o, riem <= 1e-6, fmt("riemannian %.1e <= 1e-6", riem));
  return o;
}

// 4. Noiseless completion: RGD within 300 iterations and ahead of IHT at a matched fixed step.
Outcome completion_suite() {
  Outcome o;
  Rng rng(7);
  const Dims dims{30, 30, 15};
  const RankTuple r{4, 4, 3};
  const DenseTensor truth = tucker_assemble(random_tucker(dims, r, rng));
  const SamplingMask mask = gen_mask_random_points(dims, 0.35, 11);
  EncodingOperator op(EncodingKind::Pointwise, mask);
  DenseTensor y = op.forward(truth);
  const ReconProblem prob{std::move(op), std::move(y), {RegularizerKind::None, 1e-3, 0.0}};
  auto first_below = [&](Algorithm a) -> long {
    SolverConfig cfg;
    cfg.algorithm = a;
    cfg.rank = r;
    cfg.max_iterations = 300;
    cfg.step_rule = StepRule::Fixed;
    cfg.step = 1.0;
    cfg.truth = truth;
    const SolveResult res = solve(prob, cfg);
    for (const auto& it : res.report.iterations)
      if (it.rel_error >= 0 && it.rel_error < 1e-3) return static_cast<long>(it.iteration) + 1;
    return -1;
  };
  const long rgd = first_below(Algorithm::RiemannianGD), iht = first_below(Algorithm::IHT);
  note(o, rgd > 0, "RGD below 1e-3 after " + (rgd > 0 ? std::to_string(rgd) : std::string("> 300")) +
                       " iterations");
  note(o, rgd > 0 && (iht < 0 || rgd < iht),
       "RGD strictly fewer than IHT at fixed step 1 (RGD " + std::to_string(rgd) + ", IHT " +
           (iht > 0 ? std::to_string(iht) : std::string("> 300")) + ")");
  return o;
}

struct PhantomRun {
  DenseTensor truth;
  SamplingMask mask;
  ReconOutcome out;
};

DenseTensor default_phantom() { return gen_phantom(PhantomConfig{}); }

PhantomRun phantom_run(const SamplingMask& mask, const RunSpec& spec) {
  PhantomRun run{default_phantom(), mask, {}};
  const DenseTensor y = simulate_measurements(run.truth, mask, spec.encoding);
  run.out = run_recon(y, mask, spec, &run.truth);
  return run;
}

RunSpec acceptance_spec() {
  RunSpec spec = default_run_spec();
  spec.write_png = false;
  return spec;
}

void margins(Outcome& o, const std::string& label, const ReconOutcome& out) {
  const double dp = out.metrics->psnr - out.zf_metrics->psnr;
  const double ds = out.metrics->ssim - out.zf_metrics->ssim;
  note(o, !is_failure(out.result.report.status), label + " status " + to_string(out.result.report.status));
  note(o, dp >= 5.0, label + fmt2(" PSNR %.2f dB vs zero-filled %.2f", out.metrics->psnr, out.zf_metrics->psnr) +
                         fmt(" (+%.2f >= 5)", dp));
  note(o, ds >= 0.05, label + fmt2(" SSIM %.3f vs %.3f", out.metrics->ssim, out.zf_metrics->ssim) +
                          fmt(" (+%.3f >= 0.05)", ds));
}

const Dims kPhantomDims{64, 64, 16};

// 5. Default phantom, Gaussian R = 8, default settings. Reference run:
// 35.74 dB / 0.906 against zero-filled 27.20 dB / 0.686.
Outcome phantom_suite(PhantomRun& run) {
  Outcome o;
  run = phantom_run(gen_mask_gaussian(kPhantomDims, 8.0, 1), acceptance_spec());
  margins(o, "gaussian R=8", run.out);
  note(o, run.out.metrics->psnr >= 35.2, fmt("PSNR %.2f >= pinned 35.2", run.out.metrics->psnr));
  note(o, run.out.metrics->ssim >= 0.89, fmt("SSIM %.3f >= pinned 0.89", run.out.metrics->ssim));
  return o;
}

// 6. Same margins for radial and interleaved masks at a similar sampling fraction.
Outcome mask_family_suite() {
  Outcome o;
  const SamplingMask radial = gen_mask_radial(kPhantomDims, 7, 1);
  const SamplingMask inter = gen_mask_uniform_interleaved(kPhantomDims, 8);
  for (const auto& [label, m] : {std::pair<std::string, const SamplingMask&>{"radial 7 spokes", radial},
                                 {"interleaved R=8", inter}}) {
    const PhantomRun run = phantom_run(m, acceptance_spec());
    margins(o, label + fmt(" (fraction %.3f)", m.sampling_fraction()), run.out);
  }
  return o;
}

// 7. PSNR against r3 peaks strictly inside the swept range.
Outcome rank_sweep_suite() {
  Outcome o;
  const DenseTensor truth = default_phantom();
  const std::vector<double> values{1, 2, 4, 8, 16};
  auto mask_for = [&](double) { return gen_mask_gaussian(kPhantomDims, 8.0, 1); };
  const SweepResult res = run_sweep(SweepParam::TemporalRank, values, truth, mask_for, acceptance_spec());
  if (res.aborted || res.rows.size() != values.size()) {
    note(o, false, "sweep aborted: " + res.message);
    return o;
  }
  std::string curve;
  std::size_t best = 0;
  for (std::size_t k = 0; k < res.rows.size(); ++k) {
    curve += (k ? " " : "") + fmt("%.0f:", values[k]) + fmt("%.2f", res.rows[k].metrics.psnr);
    if (res.rows[k].metrics.psnr > res.rows[best].metrics.psnr) best = k;
  }
  const double peak = res.rows[best].metrics.psnr;
  note(o, peak > res.rows.front().metrics.psnr && peak > res.rows.back().metrics.psnr,
       "PSNR by r3 " + curve + fmt(", best r3 = %.0f interior", values[best]));
  return o;
}

// 8. Metric identities and the direct-convolution SSIM oracle.
double ssim_oracle(const std::vector<double>& a, const std::vector<double>& b, std::size_t nx,
                   std::size_t ny, double range) {
  constexpr int w = 11;
  double win[w][w], total = 0;
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j) total += win[i][j] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / 4.5);
  const double c1 = std::pow(0.01 * range, 2), c2 = std::pow(0.03 * range, 2);
  double acc = 0;
  std::size_t count = 0;
  for (std::size_t y0 = 0; y0 + w <= ny; ++y0)
    for (std::size_t x0 = 0; x0 + w <= nx; ++x0, ++count) {
      double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
      for (int j = 0; j < w; ++j)
        for (int i = 0; i < w; ++i) {
          const std::size_t k = (x0 + i) + nx * (y0 + j);
          const double g = win[i][j] / total;
          ma += g * a[k];
          mb += g * b[k];
          saa += g * a[k] * a[k];
          sbb += g * b[k] * b[k];
          sab += g * a[k] * b[k];
        }
      acc += ((2 * ma * mb + c1) * (2 * (sab - ma * mb) + c2)) /
             ((ma * ma + mb * mb + c1) * (saa - ma * ma + sbb - mb * mb + c2));
    }
  return acc / static_cast<double>(count);
}

Outcome metrics_suite() {
  Outcome o;
  Rng rng(808);
  const DenseTensor x = default_phantom();
  note(o, std::abs(ssim(x, x) - 1.0) <= 1e-12, fmt("ssim(x,x) = %.15f", ssim(x, x)));
  note(o, mse(x, x) == 0.0, "mse(x,x) = 0");
  DenseTensor ref(Dims{100, 100}), rec(Dims{100, 100});
  ref[0] = 1.0;
  rec = ref;
  rec[5] = 1.0;
  note(o, std::abs(psnr(ref, rec) - 40.0) <= 1e-12, fmt("closed-form PSNR %.12f dB", psnr(ref, rec)));
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t nx = 11 + trial % 17, ny = 11 + (trial * 7) % 23;
    std::vector<double> a(nx * ny), b(nx * ny);
    for (std::size_t k = 0; k < a.size(); ++k) {
      a[k] = rng.uniform();
      b[k] = std::abs(a[k] + 0.3 * rng.normal());
    }
    const double range = *std::max_element(a.begin(), a.end());
    worst = std::max(worst, std::abs(ssim_real(a, b, nx, ny, range) - ssim_oracle(a, b, nx, ny, range)));
  }
  note(o, worst <= 1e-9, fmt("SSIM vs oracle %.1e <= 1e-9", worst));
  return o;
}

// 9. Two identical criterion-5 runs give byte-identical outputs.
Outcome determinism_suite(const PhantomRun& first) {
  Outcome o;
  const PhantomRun second = phantom_run(gen_mask_gaussian(kPhantomDims, 8.0, 1), acceptance_spec());
  const fs::path base = fs::temp_directory_path() / "mrecon_acceptance";
  fs::remove_all(base);
  RunSpec spec = acceptance_spec();
  spec.write_png = true;
  write_recon_outputs(base / "a", first.out, spec, &first.truth);
  write_recon_outputs(base / "b", second.out, spec, &second.truth);
  std::size_t files = 0, same = 0;
  for (const auto& e : fs::directory_iterator(base / "a")) {
    ++files;
    const fs::path other = base / "b" / e.path().filename();
    if (fs::exists(other) && io::read_file(e.path()) == io::read_file(other)) ++same;
  }
  note(o, files > 0 && same == files, std::to_string(same) + "/" + std::to_string(files) + " files identical");
  fs::remove_all(base);
  return o;
}

}  // namespace

// Optional arguments pick criteria by number.
int main(int argc, char** argv) {
  using Clock = std::chrono::steady_clock;
  PhantomRun phantom;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"manifold algebra", manifold_suite},
      {"HOSVD quasi-optimality", hosvd_suite},
      {"gradient correctness", gradient_suite},
      {"tensor completion", completion_suite},
      {"phantom reconstruction", [&] { return phantom_suite(phantom); }},
      {"mask-family robustness", mask_family_suite},
      {"rank-sweep shape", rank_sweep_suite},
      {"metrics self-consistency", metrics_suite},
      {"determinism", [&] { return determinism_suite(phantom); }},
  };
  std::vector<bool> selected(criteria.size(), argc == 1);
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k >= 1 && k <= static_cast<int>(criteria.size())) selected[k - 1] = true;
  }
  if (selected[8]) selected[4] = true;  // determinism reuses the criterion 5 run
  int failed = 0, ran = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (!selected[k]) continue;
    ++ran;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("criterion %zu %-26s %s  %s [%.1f s]\n", k + 1, criteria[k].first.c_str(),
                o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
