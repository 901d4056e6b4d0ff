#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "dgnn/experiment.hpp"
#include "dgnn/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Discontinuous Galerkin neural network PDE solver"};
  app.require_subcommand(1);

  std::string target;
  std::string out_dir;
  long seed = -1;
  bool dry_run = false;
  bool quiet = false;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "Run a config file or bundled experiment");
  run->add_option("config", target, "Config path or bundled name")->required();
  run->add_option("--out", out_dir, "Output directory (default: out/<name>)");
  run->add_option("--seed", seed, "Seed for the random orthogonal factors");
  run->add_flag("--dry-run", dry_run, "Print the resolved plan and DOF forecast only");
  run->add_option("--set", overrides, "Override a key, e.g. --set train.maxit=3");
  run->add_flag("-q,--quiet", quiet, "No per-epoch log");

  bool porcelain = false;
  auto* list = app.add_subcommand("list", "List bundled experiments");
  list->add_flag("--porcelain", porcelain, "One name per line");

  std::string show_name;
  auto* show = app.add_subcommand("show", "Print the text of a bundled config");
  show->add_option("name", show_name)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (const char* env = std::getenv("DGNN_THREADS")) dgnn::set_num_threads(std::max(1, std::atoi(env)));

    if (*list) {
      for (const auto& name : dgnn::bundled_config_names()) {
        if (porcelain) {
          std::cout << name << '\n';
        } else {
          const auto cfg = dgnn::parse_config(dgnn::bundled_config_text(name));
          std::cout << "  " << name << std::string(24 - std::min<std::size_t>(22, name.size()), ' ') << cfg.model;
          if (!cfg.coefficient.empty()) std::cout << " (" << cfg.coefficient << ")";
          std::cout << ", " << dgnn::to_string(cfg.train.family) << ", width " << cfg.train.width.text() << '\n';
        }
      }
      return 0;
    }
    if (*show) {
      std::cout << dgnn::bundled_config_text(show_name);
      return 0;
    }

    dgnn::ExperimentConfig cfg = dgnn::load_config(target, overrides);
    if (seed >= 0) cfg.train.seed = static_cast<std::uint64_t>(seed);
    if (!out_dir.empty()) {
      cfg.output_dir = out_dir;
    } else if (cfg.output_dir == "out") {
      cfg.output_dir = "out/" + cfg.name;
    }
    if (dry_run) {
      dgnn::describe_plan(cfg, std::cout);
      return 0;
    }
    const auto res = dgnn::run_experiment(cfg, true, quiet ? nullptr : &std::cerr);
    const auto& s = res.summary;
    std::cout << s.experiment << ": " << s.status << " after " << s.iterations << " iterations, neurons " << s.neurons
              << ", dofs " << s.dofs << ", rel L2 " << s.rel_l2 << ", rel H1 " << s.rel_h1 << '\n'
              << "wrote " << cfg.output_dir << "/convergence.csv and summary.csv\n";
  } catch (const dgnn::ConfigError& e) {
    std::cerr << "dgnn: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dgnn: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
