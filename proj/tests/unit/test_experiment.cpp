#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dgnn/experiment.hpp"

using namespace dgnn;

namespace {

int forecast_dofs(const std::string& name, int r) {
  const ExperimentConfig cfg = load_config(name);
  const ResolvedExperiment ex = resolve(cfg);
  return static_cast<int>(cfg.train.width(r)) * ex.mesh->num_elements();
}

}  // namespace

TEST(Config, ParsesSectionsAndOverrides) {
  const std::string text = R"([experiment]
model = helmholtz
coefficient = const
omega = 4pi

[mesh]
cells = 6

[network]
family = plane-wave
width = 2r+1

[train]
maxit = 3
tol = 1e-4
warm_start = false
)";
  const ExperimentConfig c = parse_config(text, {"train.maxit=5", "mesh.cells=4"});
  EXPECT_EQ(c.model, "helmholtz");
  EXPECT_DOUBLE_EQ(c.omega, 4 * M_PI);
  EXPECT_EQ(c.train.family, FamilyTag::PlaneWave);
  EXPECT_EQ(c.train.maxit, 5);
  EXPECT_DOUBLE_EQ(c.train.tol, 1e-4);
  EXPECT_FALSE(c.train.warm_start);
  EXPECT_EQ(c.train.width(3), 7);
  const ResolvedExperiment ex = resolve(c);
  EXPECT_EQ(ex.mesh->num_elements(), 16);
}

TEST(Config, RejectsBadInput) {
  const std::string base = "[experiment]\nmodel = poisson\n[mesh]\ncells = 4\n";
  EXPECT_NO_THROW(parse_config(base));
  EXPECT_THROW(parse_config(base + "[train]\nmaxiter = 3\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "[solver]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse_config(base, {"train.maxit"}), ConfigError);
  EXPECT_THROW(parse_config(base, {"train.tol=abc"}), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nmodel = poisson\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nmodel = helmholtz\n[mesh]\ncells = 4\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "[network]\nfamily = sigmoid-2-layer\nwidth = 5\nm1 = 7\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "[network]\nwidth = 5-2r\n[train]\nmaxit = 4\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "[train]\nlambda = 1, 0, 1, 1\n"), ConfigError);
  EXPECT_THROW(parse_config(base, {"init.form=collocation"}), ConfigError);
}

TEST(Config, BundledNames) {
  const auto names = bundled_config_names();
  ASSERT_EQ(names.size(), 7u);
  for (const auto& n : names) {
    const ExperimentConfig c = load_config(n);
    EXPECT_EQ(c.name, n);
    EXPECT_NO_THROW(resolve(c)) << n;
  }
  try {
    bundled_config_text("nope");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("poisson-h16"), std::string::npos);
  }
}

TEST(Config, DofForecasts) {
  EXPECT_EQ(forecast_dofs("helmholtz-var-2layer", 4), 2448);
  EXPECT_EQ(forecast_dofs("wave-const-dgtnn", 4), 1296);
  EXPECT_EQ(forecast_dofs("wave-const-2layer", 6), 2160);
  EXPECT_EQ(forecast_dofs("wave-var-2layer", 4), 2816);
}

TEST(Config, WaveInitializerForm) {
  EXPECT_EQ(load_config("wave-const-dgtnn").init_form, WaveLocalForm::SpatialCauchy);
  EXPECT_EQ(load_config("wave-const-dgtnn", {"init.form=galerkin"}).init_form, WaveLocalForm::Galerkin);
}

TEST(Config, DefaultQuadrature) {
  EXPECT_EQ(resolve(load_config("poisson-h16")).points_per_axis, 10);
  EXPECT_EQ(resolve(load_config("helmholtz-const-dgnn")).points_per_axis, 10);
  EXPECT_EQ(resolve(load_config("poisson-h16", {"mesh.quadrature=7"})).points_per_axis, 7);
}

TEST(Output, CsvHeaderNamesEveryComponent) {
  EXPECT_EQ(csv_header(poisson_2d()),
            "iteration,epoch,J,L_interior,L_boundary,L_jump_u,L_jump_grad,lambda_interior,lambda_boundary,"
            "lambda_jump_u,lambda_jump_grad,rel_l2,rel_h1_x,rel_h1_t,rel_h1,width,dofs,cumulative_epoch,wall_ms");
}

TEST(Output, RunWritesFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "dgnn_experiment_test";
  std::filesystem::remove_all(dir);
  ExperimentConfig c = load_config("poisson-h16", {"mesh.cells=2", "train.maxit=1", "train.gd_steps=2"});
  c.output_dir = dir.string();
  std::ostringstream log;
  const ExperimentResult res = run_experiment(c, true, &log);
  EXPECT_EQ(res.summary.iterations, 1);
  std::ifstream conv(dir / "convergence.csv");
  std::string line;
  int rows = 0;
  while (std::getline(conv, line)) ++rows;
  EXPECT_EQ(rows, 1 + static_cast<int>(res.record.epochs.size()));
  std::ifstream sum(dir / "summary.csv");
  std::getline(sum, line);
  EXPECT_EQ(line, "experiment,status,iterations,neurons,dofs,rel_l2,rel_h1,wall_ms");
  std::filesystem::remove_all(dir);
}
