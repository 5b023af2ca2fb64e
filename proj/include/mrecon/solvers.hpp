#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrecon/manifold.hpp"
#include "mrecon/mri_model.hpp"
#include "mrecon/regularizer.hpp"
#include "mrecon/tucker.hpp"

namespace mrecon {

enum class Algorithm { IHT, RiemannianGD };
enum class StepRule { Fixed, Armijo };

struct SolverConfig {
  Algorithm algorithm = Algorithm::RiemannianGD;
  RankTuple rank;
  std::size_t max_iterations = 10;
  StepRule step_rule = StepRule::Armijo;
  double step = 1.0;            // fixed step, or initial step for Armijo
  double armijo_c = 1e-4;
  double armijo_beta = 0.5;
  double tolerance = 0.0;       // on ||x_{k+1} - x_k|| / ||x_k||
  double min_step = 1e-12;
  double divergence_factor = 1e3;
  std::uint64_t seed = 0;
  // Relative size of the seeded core perturbation applied when the truncated
  // zero-filled start is rank deficient (RGD only); 0 disables it.
  double init_perturbation = 1e-3;
  // Verify manifold feasibility after every iteration (tests).
  bool check_invariants = false;
  // Optional ground truth; when set, the relative error is recorded per iteration.
  std::optional<DenseTensor> truth;

  void validate() const;
};

Algorithm parse_algorithm(const std::string& s);
std::string to_string(Algorithm a);
StepRule parse_step_rule(const std::string& s);
std::string to_string(StepRule r);

struct ReconProblem {
  EncodingOperator op;
  DenseTensor y;
  RegularizerConfig reg;
};

enum class SolveStatus {
  MaxIterations,
  Converged,   // relative change below tolerance, or zero gradient
  Stalled,     // backtracking hit the step floor
  Diverged,    // objective exceeded divergence_factor * initial objective
  RankDeficient,
};

std::string to_string(SolveStatus s);
// True for statuses that signal a numerical failure.
bool is_failure(SolveStatus s);

struct IterationRecord {
  std::size_t iteration = 0;
  double objective = 0.0;  // f(x_k) at the start of the iteration
  double fidelity = 0.0;   // 1/2 ||A x_k - y||^2
  double grad_norm = 0.0;  // Euclidean for IHT, Riemannian for RGD
  double step = 0.0;       // step accepted
  double rel_change = 0.0;
  double rel_error = -1.0; // vs truth, -1 when unknown
  double ms = 0.0;
};

struct OperationCounts {
  std::size_t forward = 0;              // gradient evaluations of A x
  std::size_t adjoint = 0;
  std::size_t projections = 0;
  std::size_t retractions = 0;          // accepted steps
  std::size_t truncations = 0;          // IHT HOSVD truncations
  std::size_t linesearch_forward = 0;   // objective evaluations of trial points
  std::size_t linesearch_rejected = 0;  // rejected trial retractions/truncations

  bool operator==(const OperationCounts&) const = default;
};

struct SolveReport {
  std::vector<IterationRecord> iterations;
  SolveStatus status = SolveStatus::MaxIterations;
  std::string message;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  OperationCounts counts;
  bool converged() const { return status == SolveStatus::Converged; }
};

struct SolveResult {
  DenseTensor x;
  std::optional<TuckerTensor> tucker;  // final iterate in Tucker form
  SolveReport report;
};

// f(x) = 1/2 ||A x - y||^2 + lambda D(x)
double objective(const DenseTensor& x, const ReconProblem& problem);
double fidelity(const DenseTensor& x, const ReconProblem& problem);
// A^H (A x - y) + lambda grad D(x)
DenseTensor euclidean_gradient(const DenseTensor& x, const ReconProblem& problem);

// Zero-filled reconstruction A^H y.
DenseTensor zero_filled(const ReconProblem& problem);

// r_{k+1} = x_k - eta (A^H(A x_k - y) + lambda grad D(x_k)); x_{k+1} = P_r^HO(r_{k+1}).
SolveResult solve_iht(const ReconProblem& problem, const SolverConfig& cfg);

// Riemannian gradient descent on the fixed-rank manifold:
// xi_k = P_T(grad f(x_k)); x_{k+1} = R(x_k, -eta_k xi_k).
SolveResult solve_riemannian_gd(const ReconProblem& problem, const SolverConfig& cfg);

// Dispatches on cfg.algorithm.
SolveResult solve(const ReconProblem& problem, const SolverConfig& cfg);

}  // namespace mrecon
