// mrecon: phantoms, masks, reconstructions and parameter sweeps from the command line.
// Exit codes: 0 success, 1 numerical failure, 2 usage or I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mrecon/io.hpp"
#include "mrecon/linalg.hpp"
#include "mrecon/masks.hpp"
#include "mrecon/phantom.hpp"
#include "mrecon/pipeline.hpp"
#include "mrecon/png.hpp"

namespace fs = std::filesystem;
using namespace mrecon;

namespace {

constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Dims parse_dims(const std::string& text) {
  Dims d = parse_size_list(text);
  for (auto n : d)
    if (n == 0) throw UsageError("dims must be positive: '" + text + "'");
  return d;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find(',', start);
    const std::string item = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw UsageError("cannot parse number list '" + text + "'");
    }
    if (pos != item.size()) throw UsageError("cannot parse number list '" + text + "'");
    out.push_back(v);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

// "r1,r2,r3" or a single temporal rank with default spatial ranks.
RankTuple resolve_rank(const std::string& text, const Dims& dims) {
  if (text.empty()) return default_rank(dims);
  RankTuple r = parse_size_list(text);
  if (r.size() == 1 && dims.size() == 3) {
    RankTuple full = default_rank(dims);
    full[2] = r[0];
    r = full;
  }
  require_feasible_rank(dims, r);
  return r;
}

struct MaskOptions {
  std::string kind = "gaussian";
  double accel = 8.0;
  std::size_t spokes = 0;
  std::uint64_t seed = 1;
  bool shared = false;
  double fraction = 0.35;
};

void add_mask_options(CLI::App* cmd, MaskOptions& m) {
  cmd->add_option("--kind", m.kind, "gaussian | radial | interleaved | points")->capture_default_str();
  cmd->add_option("--accel", m.accel, "acceleration factor R")->capture_default_str();
  cmd->add_option("--spokes", m.spokes, "radial spokes per frame (0: about ny / R)");
  cmd->add_option("--mask-seed", m.seed, "mask seed")->capture_default_str();
  cmd->add_flag("--shared-lines", m.shared, "gaussian: reuse frame 0's lines in every frame");
  cmd->add_option("--fraction", m.fraction, "points: kept fraction")->capture_default_str();
}

SamplingMask make_mask(const Dims& dims, const MaskOptions& m, double accel) {
  if (m.kind == "gaussian") return gen_mask_gaussian(dims, accel, m.seed, !m.shared);
  if (m.kind == "radial") {
    std::size_t spokes = m.spokes;
    if (spokes == 0) {
      if (!(accel > 0.0)) throw UsageError("acceleration must be positive");
      spokes = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(dims[1] / accel)));
    }
    return gen_mask_radial(dims, spokes, m.seed);
  }
  if (m.kind == "interleaved") {
    if (!(accel >= 1.0) || accel != std::floor(accel))
      throw UsageError("interleaved masks need an integer acceleration >= 1");
    return gen_mask_uniform_interleaved(dims, static_cast<std::size_t>(accel));
  }
  if (m.kind == "points") return gen_mask_random_points(dims, m.fraction, m.seed);
  throw UsageError("unknown mask kind '" + m.kind + "'");
}

struct ReconOptions {
  std::string algorithm = "rgd";
  std::string rank;
  std::size_t max_iterations = 300;
  std::string step_rule = "armijo";
  double step = 1.0;
  double armijo_c = 1e-4;
  double armijo_beta = 0.5;
  double tolerance = 0.0;
  double min_step = 1e-12;
  std::uint64_t seed = 0;
  double init_perturbation = 1e-3;
  std::string reg = "temporal";
  double lambda = 3e-3;
  double epsilon = 1e-3;
  std::string encoding = "fourier";
  bool no_png = false;
  std::string frames;
  long yt_column = -1;
  bool timing = false;
};

void add_recon_options(CLI::App* cmd, ReconOptions& o) {
  cmd->add_option("--algorithm", o.algorithm, "rgd | iht")->capture_default_str();
  cmd->add_option("--rank", o.rank, "r1,r2,r3 or a temporal rank r3 (default n/4 per mode)");
  cmd->add_option("--max-iterations", o.max_iterations)->capture_default_str();
  cmd->add_option("--step-rule", o.step_rule, "armijo | fixed")->capture_default_str();
  cmd->add_option("--step", o.step, "fixed step, or initial Armijo step")->capture_default_str();
  cmd->add_option("--armijo-c", o.armijo_c)->capture_default_str();
  cmd->add_option("--armijo-beta", o.armijo_beta)->capture_default_str();
  cmd->add_option("--tolerance", o.tolerance, "stop when the relative iterate change is below")
      ->capture_default_str();
  cmd->add_option("--min-step", o.min_step)->capture_default_str();
  cmd->add_option("--seed", o.seed, "solver seed")->capture_default_str();
  cmd->add_option("--init-perturbation", o.init_perturbation)->capture_default_str();
  cmd->add_option("--reg", o.reg, "none | temporal | spatial")->capture_default_str();
  cmd->add_option("--lambda", o.lambda)->capture_default_str();
  cmd->add_option("--epsilon", o.epsilon)->capture_default_str();
  cmd->add_option("--encoding", o.encoding, "fourier | pointwise")->capture_default_str();
  cmd->add_flag("--no-png", o.no_png, "skip PNG snapshots");
  cmd->add_option("--frames", o.frames, "frames to snapshot, e.g. 0,8");
  cmd->add_option("--yt-column", o.yt_column, "image column for y-t profiles (default nx/2)");
  cmd->add_flag("--timing", o.timing, "record per-iteration wall time in iterations.csv");
}

RunSpec build_spec(const ReconOptions& o, const Dims& dims) {
  RunSpec s = default_run_spec();
  s.solver.algorithm = parse_algorithm(o.algorithm);
  s.solver.rank = resolve_rank(o.rank, dims);
  s.solver.max_iterations = o.max_iterations;
  s.solver.step_rule = parse_step_rule(o.step_rule);
  s.solver.step = o.step;
  s.solver.armijo_c = o.armijo_c;
  s.solver.armijo_beta = o.armijo_beta;
  s.solver.tolerance = o.tolerance;
  s.solver.min_step = o.min_step;
  s.solver.seed = o.seed;
  s.solver.init_perturbation = o.init_perturbation;
  s.solver.validate();
  s.reg.kind = parse_regularizer_kind(o.reg);
  s.reg.lambda = o.lambda;
  s.reg.epsilon = o.epsilon;
  s.reg.validate();
  if (o.encoding == "fourier") s.encoding = EncodingKind::Fourier;
  else if (o.encoding == "pointwise") s.encoding = EncodingKind::Pointwise;
  else throw UsageError("unknown encoding '" + o.encoding + "'");
  s.write_png = !o.no_png;
  if (!o.frames.empty()) {
    s.png_frames = parse_size_list(o.frames);
    for (auto t : s.png_frames)
      if (dims.size() != 3 || t >= dims[2]) throw UsageError("snapshot frame out of range");
  }
  if (o.yt_column >= 0) {
    if (dims.size() != 3 || static_cast<std::size_t>(o.yt_column) >= dims[0])
      throw UsageError("y-t column out of range");
    s.yt_column = static_cast<std::size_t>(o.yt_column);
  }
  s.include_timing = o.timing;
  return s;
}

std::string fmt_db(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// --- subcommands ---

struct PhantomOptions {
  std::string dims = "64,64,16";
  std::size_t ellipses = 6;
  double motion = 0.12;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_gen_phantom(const PhantomOptions& o) {
  PhantomConfig cfg;
  cfg.dims = parse_dims(o.dims);
  cfg.ellipses = o.ellipses;
  cfg.motion = o.motion;
  cfg.seed = o.seed;
  const DenseTensor x = gen_phantom(cfg);
  io::write_tensor(o.out, x);
  std::cout << "wrote " << o.out << " (" << x.size() << " samples)\n";
  if (x.ndim() == 3) {
    const auto s = singular_values(matricize(x, 2));
    double total = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) total += s[k] * s[k];
    std::cout << "mode-3 spectrum (sigma_k / sigma_1):";
    for (Eigen::Index k = 0; k < std::min<Eigen::Index>(s.size(), 8); ++k)
      std::printf(" %.3g", s[0] > 0 ? s[k] / s[0] : 0.0);
    std::cout << "\n";
    double acc = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      acc += s[k] * s[k];
      if (total > 0 && acc / total >= 0.999) {
        std::cout << "99.9% of the energy within the first " << k + 1 << " temporal components\n";
        break;
      }
    }
  }
  return 0;
}

int cmd_gen_mask(const std::string& dims_text, const MaskOptions& m, const std::string& out) {
  const Dims dims = parse_dims(dims_text);
  if (dims.size() != 3 && m.kind != "points") throw UsageError("line masks need dims nx,ny,nt");
  const SamplingMask mask = make_mask(dims, m, m.accel);
  io::write_mask(out, mask);
  std::printf("wrote %s: %zu of %zu samples kept, fraction %.4f, realized acceleration %.3f\n",
              out.c_str(), mask.kept_count(), mask.size(), mask.sampling_fraction(),
              mask.acceleration());
  return 0;
}

struct ReconInputs {
  std::string truth;
  std::string kspace;
  std::string mask;
  std::string out_dir = "recon_out";
};

int cmd_recon(const ReconInputs& in, const ReconOptions& o) {
  if (in.truth.empty() == in.kspace.empty())
    throw UsageError("give exactly one of --truth or --kspace");
  const SamplingMask mask = io::read_mask(in.mask);
  std::optional<DenseTensor> truth;
  DenseTensor y;
  if (!in.truth.empty()) truth = io::read_tensor(in.truth);
  const Dims dims = truth ? truth->dims() : io::read_tensor(in.kspace).dims();
  if (dims != mask.dims()) throw UsageError("mask dims do not match the data dims");
  const RunSpec spec = build_spec(o, dims);
  if (truth) y = simulate_measurements(*truth, mask, spec.encoding);
  else {
    y = io::read_tensor(in.kspace);
    apply_mask(y, mask);
  }

  const ReconOutcome out = run_recon(y, mask, spec, truth ? &*truth : nullptr);
  write_recon_outputs(in.out_dir, out, spec, truth ? &*truth : nullptr);

  const auto& rep = out.result.report;
  std::printf("%s: %zu iterations, status %s, objective %.6g -> %.6g\n",
              to_string(spec.solver.algorithm).c_str(), rep.iterations.size(),
              to_string(rep.status).c_str(), rep.initial_objective, rep.final_objective);
  if (out.metrics)
    std::printf("PSNR %s dB (zero-filled %s dB), SSIM %.4f (zero-filled %.4f)\n",
                fmt_db(out.metrics->psnr).c_str(), fmt_db(out.zf_metrics->psnr).c_str(),
                out.metrics->ssim, out.zf_metrics->ssim);
  if (is_failure(rep.status)) {
    std::cerr << "error: reconstruction failed: " << to_string(rep.status)
              << (rep.message.empty() ? "" : " (" + rep.message + ")") << "\n";
    return kExitNumerical;
  }
  return 0;
}

struct SweepOptions {
  std::string truth;
  std::string param = "rank";
  std::string values;
  std::string mask;
  std::string out_dir = "sweep_out";
};

int cmd_sweep(const SweepOptions& so, const MaskOptions& m, const ReconOptions& o) {
  const SweepParam param = parse_sweep_param(so.param);
  const std::vector<double> values = parse_double_list(so.values);
  if (values.empty()) throw UsageError("sweep range is empty");
  const DenseTensor truth = io::read_tensor(so.truth);
  if (truth.ndim() != 3) throw UsageError("sweeps need an nx,ny,nt truth tensor");
  ReconOptions base = o;
  if (param == SweepParam::TemporalRank) {
    // spatial ranks from --rank, r3 from the sweep value
    RankTuple r = resolve_rank(o.rank, truth.dims());
    base.rank = std::to_string(r[0]) + "," + std::to_string(r[1]) + ",1";
  }
  RunSpec spec = build_spec(base, truth.dims());
  std::optional<SamplingMask> file_mask;
  if (!so.mask.empty()) {
    if (param == SweepParam::Acceleration) throw UsageError("--mask cannot be combined with accel sweeps");
    file_mask = io::read_mask(so.mask);
    if (file_mask->dims() != truth.dims()) throw UsageError("mask dims do not match the truth");
  }
  auto mask_for = [&](double v) {
    if (file_mask) return *file_mask;
    return make_mask(truth.dims(), m, param == SweepParam::Acceleration ? v : m.accel);
  };

  fs::create_directories(so.out_dir);
  const fs::path csv = fs::path(so.out_dir) / "sweep.csv";
  auto flush = [&](const SweepResult& r) {
    io::write_file_atomic(csv, sweep_csv(param, r.rows));
    std::vector<double> xs, ys;
    for (const auto& row : r.rows) {
      xs.push_back(row.value);
      ys.push_back(row.metrics.psnr);
    }
    png::write(fs::path(so.out_dir) / "sweep_psnr.png", png::line_plot(xs, ys));
    const auto& last = r.rows.back();
    std::printf("%s=%g: PSNR %s dB, SSIM %.4f, MSE %.3g (%s)\n", to_string(param).c_str(),
                last.value, fmt_db(last.metrics.psnr).c_str(), last.metrics.ssim, last.metrics.mse,
                last.status.c_str());
    std::fflush(stdout);
  };
  const SweepResult res = run_sweep(param, values, truth, mask_for, spec, flush);
  if (res.rows.empty()) io::write_file_atomic(csv, sweep_csv(param, res.rows));
  if (res.aborted) {
    std::cerr << "error: " << res.message << "; " << res.rows.size()
              << " completed rows kept in " << csv.string() << "\n";
    return kExitNumerical;
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < res.rows.size(); ++i)
    if (res.rows[i].metrics.psnr > res.rows[best].metrics.psnr) best = i;
  std::printf("best %s = %g (PSNR %s dB)\n", to_string(param).c_str(), res.rows[best].value,
              fmt_db(res.rows[best].metrics.psnr).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank dynamic MRI reconstruction on fixed-rank tensor manifolds"};
  app.set_config("--config", "", "TOML-style file supplying any flag; the command line wins");
  app.require_subcommand(1);

  PhantomOptions ph;
  auto* gp = app.add_subcommand("gen-phantom", "write a synthetic dynamic phantom (CTEN)");
  gp->add_option("--dims", ph.dims, "nx,ny,nt")->capture_default_str();
  gp->add_option("--ellipses", ph.ellipses)->capture_default_str();
  gp->add_option("--motion", ph.motion, "relative motion amplitude")->capture_default_str();
  gp->add_option("--seed", ph.seed)->capture_default_str();
  gp->add_option("--out", ph.out)->required();

  MaskOptions gm_mask;
  std::string gm_dims = "64,64,16", gm_out;
  auto* gm = app.add_subcommand("gen-mask", "write a k-space sampling mask (MASK)");
  gm->add_option("--dims", gm_dims, "nx,ny,nt")->capture_default_str();
  add_mask_options(gm, gm_mask);
  gm->add_option("--seed", gm_mask.seed, "mask seed (alias of --mask-seed)");
  gm->add_option("--out", gm_out)->required();

  ReconInputs rin;
  ReconOptions ropt;
  auto* rc = app.add_subcommand("recon", "reconstruct from a truth image or k-space data");
  rc->add_option("--truth", rin.truth, "ground-truth image (CTEN); measurements are simulated");
  rc->add_option("--kspace", rin.kspace, "measured k-space (CTEN)");
  rc->add_option("--mask", rin.mask, "sampling mask (MASK)")->required();
  rc->add_option("--out-dir", rin.out_dir)->capture_default_str();
  add_recon_options(rc, ropt);

  SweepOptions sw;
  MaskOptions sw_mask;
  ReconOptions sw_opt;
  auto* sp = app.add_subcommand("sweep", "one reconstruction per parameter value");
  sp->add_option("--truth", sw.truth, "ground-truth image (CTEN)")->required();
  sp->add_option("--param", sw.param, "rank | accel")->capture_default_str();
  sp->add_option("--values", sw.values, "comma-separated values")->required();
  sp->add_option("--mask", sw.mask, "fixed mask for rank sweeps (default: generated)");
  sp->add_option("--out-dir", sw.out_dir)->capture_default_str();
  add_mask_options(sp, sw_mask);
  add_recon_options(sp, sw_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gp) return cmd_gen_phantom(ph);
    if (*gm) return cmd_gen_mask(gm_dims, gm_mask, gm_out);
    if (*rc) return cmd_recon(rin, ropt);
    if (*sp) return cmd_sweep(sw, sw_mask, sw_opt);
  } catch (const io::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RankDeficientError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
