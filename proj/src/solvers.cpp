#include "mrecon/solvers.hpp"

#include "mrecon/random.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mrecon {

void SolverConfig::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("max iterations must be >= 1");
  if (!(step > 0.0)) throw std::invalid_argument("step size must be > 0");
  if (!(armijo_beta > 0.0 && armijo_beta < 1.0))
    throw std::invalid_argument("Armijo shrink factor must be in (0, 1)");
  if (!(armijo_c > 0.0 && armijo_c < 1.0))
    throw std::invalid_argument("Armijo constant must be in (0, 1)");
  if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
  if (rank.empty()) throw std::invalid_argument("rank tuple must be set");
  if (!(init_perturbation >= 0.0)) throw std::invalid_argument("initial perturbation must be >= 0");
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "rgd" || s == "riemannian-gd") return Algorithm::RiemannianGD;
  if (s == "iht") return Algorithm::IHT;
  throw std::invalid_argument("unknown algorithm '" + s + "'");
}

std::string to_string(Algorithm a) { return a == Algorithm::IHT ? "iht" : "rgd"; }

StepRule parse_step_rule(const std::string& s) {
  if (s == "armijo") return StepRule::Armijo;
  if (s == "fixed") return StepRule::Fixed;
  throw std::invalid_argument("unknown step rule '" + s + "'");
}

std::string to_string(StepRule r) { return r == StepRule::Armijo ? "armijo" : "fixed"; }

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Stalled: return "stalled";
    case SolveStatus::Diverged: return "diverged";
    case SolveStatus::RankDeficient: return "rank_deficient";
  }
  return "unknown";
}

bool is_failure(SolveStatus s) {
  return s == SolveStatus::Diverged || s == SolveStatus::RankDeficient;
}

double fidelity(const DenseTensor& x, const ReconProblem& problem) {
  DenseTensor r = problem.op.forward(x);
  r -= problem.y;
  return 0.5 * r.squared_norm();
}

double objective(const DenseTensor& x, const ReconProblem& problem) {
  return fidelity(x, problem) + reg_value(x, problem.reg);
}

DenseTensor euclidean_gradient(const DenseTensor& x, const ReconProblem& problem) {
  DenseTensor r = problem.op.forward(x);
  r -= problem.y;
  DenseTensor g = problem.op.adjoint(r);
  g += reg_gradient(x, problem.reg);
  return g;
}

DenseTensor zero_filled(const ReconProblem& problem) { return problem.op.adjoint(problem.y); }

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double relative_change(const DenseTensor& next, const DenseTensor& cur) {
  const double diff = (next - cur).norm();
  const double base = cur.norm();
  if (base == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / base;
}

double relative_error(const SolverConfig& cfg, const DenseTensor& x) {
  if (!cfg.truth) return -1.0;
  const double base = cfg.truth->norm();
  const double diff = (x - *cfg.truth).norm();
  return base > 0.0 ? diff / base : diff;
}

// Residual, fidelity, objective and Euclidean gradient at x, sharing A x.
struct Evaluation {
  double fidelity;
  double objective;
  DenseTensor gradient;
};

Evaluation evaluate(const DenseTensor& x, const ReconProblem& problem, OperationCounts& counts) {
  DenseTensor r = problem.op.forward(x);
  ++counts.forward;
  r -= problem.y;
  const double fid = 0.5 * r.squared_norm();
  DenseTensor g = problem.op.adjoint(r);
  ++counts.adjoint;
  g += reg_gradient(x, problem.reg);
  return {fid, fid + reg_value(x, problem.reg), std::move(g)};
}

void check_problem(const ReconProblem& problem, const SolverConfig& cfg) {
  cfg.validate();
  problem.reg.validate();
  if (problem.y.dims() != problem.op.mask().dims())
    throw std::invalid_argument("measurement dims do not match the sampling mask");
  require_feasible_rank(problem.y.dims(), cfg.rank);
  if (cfg.truth && cfg.truth->dims() != problem.y.dims())
    throw std::invalid_argument("ground truth dims do not match the problem");
}

bool diverging(double obj, double initial, const SolverConfig& cfg) {
  return !std::isfinite(obj) || obj > cfg.divergence_factor * std::max(initial, 1e-300);
}

// x_0 = P_r^HO(A^H y). Structured masks can leave that truncation with a
// rank-deficient core, which is off the manifold; a small seeded perturbation
// of the core then restores full multilinear rank.
ManifoldPoint initial_point(const ReconProblem& problem, const SolverConfig& cfg) {
  TuckerTensor tk = hosvd_truncate(zero_filled(problem), cfg.rank);
  try {
    return ManifoldPoint(tk);
  } catch (const RankDeficientError&) {
    if (cfg.init_perturbation <= 0.0) throw;
  }
  Rng rng(cfg.seed);
  const DenseTensor noise = random_tensor(tk.core.dims(), rng);
  const double scale = cfg.init_perturbation * tk.core.norm() / noise.norm();
  tk.core.axpy(cplx(scale, 0.0), noise);
  return ManifoldPoint(std::move(tk));
}

}  // namespace

SolveResult solve_iht(const ReconProblem& problem, const SolverConfig& cfg) {
  check_problem(problem, cfg);
  SolveResult out;
  SolveReport& rep = out.report;
  TuckerTensor tk = hosvd_truncate(zero_filled(problem), cfg.rank);
  DenseTensor x = tucker_assemble(tk);

  for (std::size_t k = 0; k < cfg.max_iterations; ++k) {
    const auto t0 = Clock::now();
    Evaluation ev = evaluate(x, problem, rep.counts);
    if (k == 0) rep.initial_objective = ev.objective;
    if (diverging(ev.objective, rep.initial_objective, cfg)) {
      rep.status = SolveStatus::Diverged;
      rep.message = "objective exceeded the divergence bound";
      break;
    }
    IterationRecord rec;
    rec.iteration = k;
    rec.objective = ev.objective;
    rec.fidelity = ev.fidelity;
    rec.grad_norm = ev.gradient.norm();
    if (rec.grad_norm == 0.0) {
      rec.rel_error = relative_error(cfg, x);
      rec.ms = elapsed_ms(t0);
      rep.iterations.push_back(rec);
      rep.status = SolveStatus::Converged;
      rep.message = "zero gradient";
      break;
    }

    double eta = cfg.step;
    TuckerTensor next_tk;
    DenseTensor next;
    bool stalled = false;
    for (;;) {
      DenseTensor r = x;
      r.axpy(cplx{-eta, 0.0}, ev.gradient);
      next_tk = hosvd_truncate(r, cfg.rank);
      ++rep.counts.truncations;
      next = tucker_assemble(next_tk);
      if (cfg.step_rule == StepRule::Fixed) break;
      const double f_next = objective(next, problem);
      ++rep.counts.linesearch_forward;
      const double moved = (next - x).squared_norm();
      if (f_next <= ev.objective - cfg.armijo_c * moved / eta) break;
      ++rep.counts.linesearch_rejected;
      eta *= cfg.armijo_beta;
      if (eta < cfg.min_step) {
        stalled = true;
        break;
      }
    }
    if (stalled) {
      rec.rel_error = relative_error(cfg, x);
      rec.ms = elapsed_ms(t0);
      rep.iterations.push_back(rec);
      rep.status = SolveStatus::Stalled;
      rep.message = "step size fell below the floor";
      break;
    }
    rec.step = eta;
    rec.rel_change = relative_change(next, x);
    x = std::move(next);
    tk = std::move(next_tk);
    rec.rel_error = relative_error(cfg, x);
    rec.ms = elapsed_ms(t0);
    rep.iterations.push_back(rec);
    if (rec.rel_change < cfg.tolerance) {
      rep.status = SolveStatus::Converged;
      rep.message = "relative change below tolerance";
      break;
    }
  }
  rep.final_objective = objective(x, problem);
  out.x = std::move(x);
  out.tucker = std::move(tk);
  return out;
}

SolveResult solve_riemannian_gd(const ReconProblem& problem, const SolverConfig& cfg) {
  check_problem(problem, cfg);
  SolveResult out;
  SolveReport& rep = out.report;

  std::optional<ManifoldPoint> point;
  try {
    point.emplace(initial_point(problem, cfg));
  } catch (const RankDeficientError& e) {
    rep.status = SolveStatus::RankDeficient;
    rep.message = std::string("initial point: ") + e.what();
    out.x = DenseTensor(problem.y.dims());
    rep.final_objective = objective(out.x, problem);
    return out;
  }

  for (std::size_t k = 0; k < cfg.max_iterations; ++k) {
    const auto t0 = Clock::now();
    const DenseTensor& x = point->ambient();
    Evaluation ev = evaluate(x, problem, rep.counts);
    if (k == 0) rep.initial_objective = ev.objective;
    if (diverging(ev.objective, rep.initial_objective, cfg)) {
      rep.status = SolveStatus::Diverged;
      rep.message = "objective exceeded the divergence bound";
      break;
    }
    const TangentVector xi = riemannian_gradient(*point, ev.gradient);
    ++rep.counts.projections;

    IterationRecord rec;
    rec.iteration = k;
    rec.objective = ev.objective;
    rec.fidelity = ev.fidelity;
    rec.grad_norm = tangent_norm(*point, xi);
    if (rec.grad_norm == 0.0) {
      rec.rel_error = relative_error(cfg, x);
      rec.ms = elapsed_ms(t0);
      rep.iterations.push_back(rec);
      rep.status = SolveStatus::Converged;
      rep.message = "zero Riemannian gradient";
      break;
    }

    const TangentVector direction = -xi;
    double eta = cfg.step;
    std::optional<ManifoldPoint> next;
    std::string failure;
    for (;;) {
      try {
        next.emplace(retract(*point, direction, eta));
      } catch (const RankDeficientError& e) {
        next.reset();
        failure = e.what();
        if (cfg.step_rule == StepRule::Fixed) break;
      }
      if (cfg.step_rule == StepRule::Fixed) break;
      if (next) {
        const double f_next = objective(next->ambient(), problem);
        ++rep.counts.linesearch_forward;
        if (f_next <= ev.objective - cfg.armijo_c * eta * rec.grad_norm * rec.grad_norm) break;
        next.reset();
      }
      ++rep.counts.linesearch_rejected;
      eta *= cfg.armijo_beta;
      if (eta < cfg.min_step) break;
    }

    if (!next) {
      rec.rel_error = relative_error(cfg, x);
      rec.ms = elapsed_ms(t0);
      rep.iterations.push_back(rec);
      if (cfg.step_rule == StepRule::Fixed) {
        rep.status = SolveStatus::RankDeficient;
        rep.message = "retraction: " + failure;
      } else {
        rep.status = SolveStatus::Stalled;
        rep.message = "step size fell below the floor";
      }
      break;
    }
    ++rep.counts.retractions;

    if (cfg.check_invariants) {
      const double orth = next->tucker().orthonormality_error();
      if (orth > kOrthonormalTol || next->ranks() != cfg.rank) {
        std::ostringstream os;
        os << "manifold feasibility violated at iteration " << k << " (orthonormality " << orth
           << ")";
        throw std::logic_error(os.str());
      }
    }

    rec.step = eta;
    rec.rel_change = relative_change(next->ambient(), x);
    point = std::move(next);
    rec.rel_error = relative_error(cfg, point->ambient());
    rec.ms = elapsed_ms(t0);
    rep.iterations.push_back(rec);
    if (rec.rel_change < cfg.tolerance) {
      rep.status = SolveStatus::Converged;
      rep.message = "relative change below tolerance";
      break;
    }
  }
  out.x = point->ambient();
  out.tucker = point->tucker();
  rep.final_objective = objective(out.x, problem);
  return out;
}

SolveResult solve(const ReconProblem& problem, const SolverConfig& cfg) {
  return cfg.algorithm == Algorithm::IHT ? solve_iht(problem, cfg)
                                         : solve_riemannian_gd(problem, cfg);
}

}  // namespace mrecon
