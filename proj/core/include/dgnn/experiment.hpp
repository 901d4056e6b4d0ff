#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dgnn/initseed.hpp"
#include "dgnn/trainer.hpp"

namespace dgnn {

enum class InitKind { Zero, Spectral };

struct ExperimentConfig {
  std::string name;
  std::string model = "poisson";
  std::string coefficient;  // helmholtz: const|radial, wave: const|linear
  double omega = 0.0;
  double speed = 10.0;
  std::vector<int> cells;  // per axis
  int quadrature = 0;      // points per axis; 0 selects the default rule
  InitKind init = InitKind::Zero;
  int init_order = 0;  // 0: model default (3 Helmholtz, 5 wave)
  double init_factor = 1.1;
  WaveLocalForm init_form = WaveLocalForm::Galerkin;  // wave only
  std::vector<double> lambda;  // empty: model defaults
  TrainConfig train;
  std::string output_dir = "out";
};

/// Sectioned key = value text (INI). Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
/// A file path, or the name of a bundled config.
ExperimentConfig load_config(const std::string& path_or_name, const std::vector<std::string>& overrides = {});

std::vector<std::string> bundled_config_names();
/// Text of a bundled config; throws ConfigError listing valid names.
const std::string& bundled_config_text(const std::string& name);

/// Model, mesh and quadrature resolved from a config.
struct ResolvedExperiment {
  PDEModel model;
  std::unique_ptr<Mesh> mesh;
  int points_per_axis = 0;
};
ResolvedExperiment resolve(const ExperimentConfig& cfg);

/// Builds u_0 for the config (nullptr for zero).
std::shared_ptr<const Field> make_initial_field(const ExperimentConfig& cfg, const ResolvedExperiment& ex);

struct SummaryRow {
  std::string experiment;
  std::string status;
  int iterations = 0;
  int neurons = 0;
  int dofs = 0;
  double rel_l2 = 0.0;
  double rel_h1 = 0.0;
  double wall_ms = 0.0;
};

struct ExperimentResult {
  ConvergenceRecord record;
  SummaryRow summary;
  std::vector<double> final_lambda;
};

std::string csv_header(const PDEModel& model);
std::string csv_row(const EpochRecord& rec);

/// Runs the experiment; when `write_files` is set, streams convergence.csv
/// and writes summary.csv into cfg.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files = true, std::ostream* log = nullptr);

/// Resolved schedule and DOF forecast per iteration, without running.
void describe_plan(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace dgnn
