#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dgnn/assembly.hpp"
#include "dgnn/field.hpp"
#include "dgnn/metrics.hpp"
#include "dgnn/schedule.hpp"

namespace dgnn {

struct TrainConfig {
  int maxit = 10;
  int traincount = 2;
  double rho = 1e-4;    // inner stop on ||Phi^{l+1} - Phi^l||_inf
  double tol = 1e-3;    // outer stop on relative L2 error
  double beta = 0.1;    // relaxation blend
  int gd_steps = 50;    // K
  double alpha = 1e-2;  // initial step of each backtracking search
  int max_halvings = 30;
  /// Start each search at twice the last accepted step (capped at alpha)
  /// instead of at alpha.
  bool warm_start = true;
  std::uint64_t seed = 1;

  FamilyTag family = FamilyTag::SigmoidOneLayer;
  Schedule width = Schedule::parse("2r+9");  // n_r, or m2 for two layers
  Schedule m1 = Schedule::parse("7");        // first hidden layer (two layers only)

  bool trefftz_shortcut = true;
  bool closing_solve = true;  // re-solve the coefficients after the last epoch
  bool adapt_lambda = true;
  bool orthonormalize = true;  // element-wise basis orthonormalization in Step 1
  double truncation = 1e-12;
};

/// Per-epoch snapshot; epoch 0 of iteration 0 describes u_0.
struct EpochRecord {
  int iteration = 0;
  int epoch = 0;
  int cumulative_epoch = 0;
  LossBreakdown loss;
  ErrorReport error;
  int width = 0;
  int dofs = 0;
  int neurons = 0;
  double wall_ms = 0.0;
  // diagnostics
  double ridge = 0.0;
  double ls_residual = 0.0;
  double j_before_ls = 0.0, j_after_ls = 0.0;
  double j_before_gd = 0.0, j_after_gd = 0.0;
  int gd_steps = 0;
  double param_change = 0.0;
  bool lambda_updated = false;
};

struct ConvergenceRecord {
  std::vector<EpochRecord> epochs;
  std::string status;
  int iterations = 0;
  /// Accepted epochs whose fixed-lambda segments increased J.
  int monotonicity_violations = 0;

  const EpochRecord& last() const { return epochs.back(); }
};

/// Per-element networks of width `width` (m2 for two layers, with m1 in the
/// first layer) initialized by the model's template.
NetworkSet init_candidate(const PDEModel& model, const Mesh& mesh, FamilyTag family, int width, int m1, int r,
                          std::uint64_t seed);

/// First m1 columns of a seeded random orthogonal n x n matrix (column-major).
std::vector<double> random_orthogonal_columns(int n, int m1, std::uint64_t seed);

/// lambda_i <- (1 - beta) lambda_i + beta lambda_0 max|grad L_0| / mean|grad L_i| for
/// i >= 1. Components with a zero mean gradient keep their weight; nothing
/// changes when the interior gradient vanishes. Returns true if any changed.
bool relax_lambda(std::vector<double>& lambda, const GradientStats& stats, double beta);

/// The outer residual-correction loop with its alternating inner epochs.
class Trainer {
 public:
  Trainer(const PDEModel& model, const Mesh& mesh, TrainConfig cfg, std::shared_ptr<const Field> u0,
          int points_per_axis);

  /// Records the u_0 row. Called by run() if not done yet.
  void start();
  /// One outer iteration: fresh candidate, inner epochs, freeze. Returns
  /// false when the outer loop should stop.
  bool galerkin_iterate();
  /// One alternating epoch on the current candidate.
  EpochRecord inner_epoch(NetworkSet& candidate, int iteration, int epoch, bool last_allowed);
  const ConvergenceRecord& run();

  const DGSolution& solution() const { return solution_; }
  const ConvergenceRecord& record() const { return record_; }
  const std::vector<double>& lambda() const { return lambda_; }
  void set_lambda(std::vector<double> l) { lambda_ = std::move(l); }
  const LossPlan& plan() const { return plan_; }
  const TrainConfig& config() const { return cfg_; }
  /// Invoked after every recorded epoch (streaming output).
  std::function<void(const EpochRecord&)> on_epoch;

  /// Step 1 on a candidate: LS solve with ridge escalation, never increasing J.
  void least_squares(NetworkSet& candidate, bool skip, EpochRecord& rec);
  /// Step 3: up to K monotone backtracking gradient steps. Returns steps taken.
  int gradient_descent(NetworkSet& candidate, bool skip, double& j_before, double& j_after);
  /// Step 2: lambda blend from gradient statistics. Returns true if any changed.
  bool update_lambda(const NetworkSet& candidate, bool skip);

 private:
  const PDEModel& model_;
  const Mesh& mesh_;
  TrainConfig cfg_;
  LossPlan plan_;
  ErrorEvaluator errors_;
  DGSolution solution_;
  std::vector<double> lambda_;
  ConvergenceRecord record_;
  bool started_ = false;
  int cumulative_epoch_ = 0;
  double last_rel_l2_ = 1.0;
  std::int64_t t0_ = 0;

  bool use_shortcut(const NetworkSet& candidate) const;
  double elapsed_ms() const;
};

}  // namespace dgnn
