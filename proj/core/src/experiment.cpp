#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include "dgnn/experiment.hpp"
#include "dgnn/initseed.hpp"
#include "dgnn/quadrature.hpp"

namespace dgnn {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"experiment", {"name", "model", "coefficient", "omega", "speed"}},
      {"mesh", {"cells", "quadrature"}},
      {"network", {"family", "width", "m1"}},
      {"init", {"kind", "order", "factor", "form"}},
      {"train",
       {"maxit", "traincount", "rho", "tol", "beta", "gd_steps", "alpha", "max_halvings", "warm_start", "seed",
        "trefftz_shortcut", "closing_solve", "adapt_lambda", "orthonormalize", "truncation", "lambda"}},
      {"output", {"dir"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// "12.5", "4pi", "pi", "1e-3"
double parse_real(const std::string& key, const std::string& raw) {
  std::string s = trim(raw);
  double mult = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    mult = std::numbers::pi;
    s = trim(s.substr(0, s.size() - 2));
    if (s.empty()) return mult;
    if (s.back() == '*') s = trim(s.substr(0, s.size() - 1));
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v * mult;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': expected a number, got '" + raw + "'");
  }
}

long parse_int(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': expected an integer, got '" + raw + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("'" + key + "': expected a boolean, got '" + raw + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!trim(item).empty()) out.push_back(trim(item));
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    const auto dot = ov.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw ConfigError("override '" + ov + "' must look like section.key=value");
    }
    tree.put(pt::ptree::path_type(trim(ov.substr(0, eq)), '.'), trim(ov.substr(eq + 1)));
  }
  const auto& keys = known_keys();
  for (const auto& [section, body] : tree) {
    auto it = keys.find(section);
    if (it == keys.end()) throw ConfigError("unknown config section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
    }
  }

  auto get = [&](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return trim(*v);
    return std::nullopt;
  };

  ExperimentConfig c;
  if (auto v = get("experiment.name")) c.name = *v;
  if (auto v = get("experiment.model")) c.model = *v;
  if (auto v = get("experiment.coefficient")) c.coefficient = *v;
  if (auto v = get("experiment.omega")) c.omega = parse_real("omega", *v);
  if (auto v = get("experiment.speed")) c.speed = parse_real("speed", *v);
  if (auto v = get("mesh.cells")) {
    for (const auto& part : split(*v, ',')) c.cells.push_back(static_cast<int>(parse_int("cells", part)));
  }
  if (auto v = get("mesh.quadrature")) c.quadrature = static_cast<int>(parse_int("quadrature", *v));
  if (auto v = get("network.family")) c.train.family = family_from_string(*v);
  if (auto v = get("network.width")) c.train.width = Schedule::parse(*v);
  if (auto v = get("network.m1")) c.train.m1 = Schedule::parse(*v);
  if (auto v = get("init.kind")) {
    if (*v == "zero") {
      c.init = InitKind::Zero;
    } else if (*v == "spectral") {
      c.init = InitKind::Spectral;
    } else {
      throw ConfigError("init.kind must be zero or spectral");
    }
  }
  if (auto v = get("init.order")) c.init_order = static_cast<int>(parse_int("order", *v));
  if (auto v = get("init.factor")) c.init_factor = parse_real("factor", *v);
  if (auto v = get("init.form")) {
    if (*v == "galerkin") {
      c.init_form = WaveLocalForm::Galerkin;
    } else if (*v == "spatial-cauchy") {
      c.init_form = WaveLocalForm::SpatialCauchy;
    } else {
      throw ConfigError("init.form must be galerkin or spatial-cauchy");
    }
  }
  TrainConfig& t = c.train;
  if (auto v = get("train.maxit")) t.maxit = static_cast<int>(parse_int("maxit", *v));
  if (auto v = get("train.traincount")) t.traincount = static_cast<int>(parse_int("traincount", *v));
  if (auto v = get("train.rho")) t.rho = parse_real("rho", *v);
  if (auto v = get("train.tol")) t.tol = parse_real("tol", *v);
  if (auto v = get("train.beta")) t.beta = parse_real("beta", *v);
  if (auto v = get("train.gd_steps")) t.gd_steps = static_cast<int>(parse_int("gd_steps", *v));
  if (auto v = get("train.alpha")) t.alpha = parse_real("alpha", *v);
  if (auto v = get("train.max_halvings")) t.max_halvings = static_cast<int>(parse_int("max_halvings", *v));
  if (auto v = get("train.warm_start")) t.warm_start = parse_bool("warm_start", *v);
  if (auto v = get("train.seed")) t.seed = static_cast<std::uint64_t>(parse_int("seed", *v));
  if (auto v = get("train.trefftz_shortcut")) t.trefftz_shortcut = parse_bool("trefftz_shortcut", *v);
  if (auto v = get("train.closing_solve")) t.closing_solve = parse_bool("closing_solve", *v);
  if (auto v = get("train.adapt_lambda")) t.adapt_lambda = parse_bool("adapt_lambda", *v);
  if (auto v = get("train.orthonormalize")) t.orthonormalize = parse_bool("orthonormalize", *v);
  if (auto v = get("train.truncation")) t.truncation = parse_real("truncation", *v);
  if (auto v = get("train.lambda")) {
    for (const auto& part : split(*v, ',')) c.lambda.push_back(parse_real("lambda", part));
  }
  if (auto v = get("output.dir")) c.output_dir = *v;

  if (c.cells.empty()) throw ConfigError("mesh.cells is required");
  if (c.model == "helmholtz" && !(c.omega > 0.0)) throw ConfigError("helmholtz needs experiment.omega > 0");
  for (int r = 1; r <= c.train.maxit; ++r) {
    if (c.train.width(r) < 1) throw ConfigError("network.width must be positive for r = " + std::to_string(r));
    if (c.train.family == FamilyTag::SigmoidTwoLayer && (c.train.m1(r) < 1 || c.train.m1(r) > c.train.width(r))) {
      throw ConfigError("network.m1 must satisfy 1 <= m1 <= width for r = " + std::to_string(r));
    }
  }
  for (double l : c.lambda) {
    if (!(l > 0.0)) throw ConfigError("lambda entries must be positive");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path_or_name, const std::vector<std::string>& overrides) {
  std::ifstream in(path_or_name);
  if (in) {
    std::stringstream ss;
    ss << in.rdbuf();
    ExperimentConfig c = parse_config(ss.str(), overrides);
    if (c.name.empty()) c.name = std::filesystem::path(path_or_name).stem().string();
    return c;
  }
  ExperimentConfig c = parse_config(bundled_config_text(path_or_name), overrides);
  if (c.name.empty()) c.name = path_or_name;
  return c;
}

ResolvedExperiment resolve(const ExperimentConfig& cfg) {
  ResolvedExperiment ex;
  ex.model = make_model(cfg.model, cfg.omega, cfg.coefficient, cfg.speed);
  std::vector<int> cells = cfg.cells;
  if (cells.size() == 1) cells.assign(ex.model.dim, cells[0]);
  if (static_cast<int>(cells.size()) != ex.model.dim) throw ConfigError("mesh.cells needs one entry or one per axis");
  if (!cfg.lambda.empty()) {
    if (static_cast<int>(cfg.lambda.size()) != ex.model.num_lambda()) {
      throw ConfigError("train.lambda needs " + std::to_string(ex.model.num_lambda()) + " entries for model " +
                        ex.model.name);
    }
    ex.model.lambda_init = cfg.lambda;
  }
  ex.mesh = std::make_unique<Mesh>(build_mesh(ex.model.bounds, cells, ex.model.time_axis));
  if (cfg.quadrature > 0) {
    ex.points_per_axis = cfg.quadrature;
  } else {
    int degree = 0;
    if (cfg.train.family == FamilyTag::PolyWave) {
      degree = static_cast<int>((cfg.train.width(std::max(1, cfg.train.maxit)) - 1) / 2);
    }
    for (int a = 0; a < ex.mesh->dim(); ++a) {
      ex.points_per_axis = std::max(ex.points_per_axis, default_points_per_axis(ex.model.omega, ex.mesh->h(a), degree));
    }
  }
  return ex;
}

std::shared_ptr<const Field> make_initial_field(const ExperimentConfig& cfg, const ResolvedExperiment& ex) {
  if (cfg.init == InitKind::Zero) return nullptr;
  switch (ex.model.kind) {
    case ModelKind::Helmholtz:
      return spectral_init_helmholtz(ex.model, *ex.mesh, cfg.init_order > 0 ? cfg.init_order : 3, cfg.init_factor);
    case ModelKind::Wave:
      return spectral_init_wave(ex.model, *ex.mesh, cfg.init_order > 0 ? cfg.init_order : 5, cfg.init_factor,
                                cfg.init_form);
    default:
      throw ConfigError("spectral initialization is available for helmholtz and wave models");
  }
}

std::string csv_header(const PDEModel& model) {
  std::ostringstream os;
  os << "iteration,epoch,J";
  for (const auto& n : model.lambda_names) os << ",L_" << n;
  for (const auto& n : model.lambda_names) os << ",lambda_" << n;
  os << ",rel_l2,rel_h1_x,rel_h1_t,rel_h1,width,dofs,cumulative_epoch,wall_ms";
  return os.str();
}

std::string csv_row(const EpochRecord& r) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << r.iteration << ',' << r.epoch << ',' << r.loss.total;
  for (double c : r.loss.components) os << ',' << c;
  for (double l : r.loss.lambda) os << ',' << l;
  os << ',' << r.error.rel_l2 << ',' << r.error.rel_h1_x << ',' << r.error.rel_h1_t << ',' << r.error.rel_h1 << ','
     << r.width << ',' << r.dofs << ',' << r.cumulative_epoch << ',' << std::fixed << std::setprecision(1)
     << r.wall_ms;
  return os.str();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files, std::ostream* log) {
  const ResolvedExperiment ex = resolve(cfg);
  std::ofstream csv;
  if (write_files) {
    std::filesystem::create_directories(cfg.output_dir);
    csv.open(std::filesystem::path(cfg.output_dir) / "convergence.csv");
    if (!csv) throw ConfigError("cannot write to " + cfg.output_dir);
    csv << csv_header(ex.model) << '\n' << std::flush;
  }
  const auto u0 = make_initial_field(cfg, ex);
  Trainer trainer(ex.model, *ex.mesh, cfg.train, u0, ex.points_per_axis);
  trainer.on_epoch = [&](const EpochRecord& rec) {
    if (write_files) csv << csv_row(rec) << '\n' << std::flush;
    if (log) {
      *log << "r=" << rec.iteration << " epoch=" << rec.epoch << " J=" << std::setprecision(4) << std::scientific
           << rec.loss.total << " rel_l2=" << rec.error.rel_l2 << " rel_h1=" << rec.error.rel_h1
           << std::defaultfloat << " dofs=" << rec.dofs << " t=" << std::fixed << std::setprecision(1)
           << rec.wall_ms / 1000.0 << "s" << std::defaultfloat << std::endl;
    }
  };
  ExperimentResult res;
  res.record = trainer.run();
  res.final_lambda = trainer.lambda();
  const EpochRecord& last = res.record.last();
  SummaryRow& s = res.summary;
  s.experiment = cfg.name;
  s.status = res.record.status;
  s.iterations = res.record.iterations;
  s.neurons = last.neurons;
  s.dofs = last.dofs;
  s.rel_l2 = last.error.rel_l2;
  s.rel_h1 = last.error.rel_h1;
  s.wall_ms = last.wall_ms;
  if (write_files) {
    std::ofstream sum(std::filesystem::path(cfg.output_dir) / "summary.csv");
    sum << "experiment,status,iterations,neurons,dofs,rel_l2,rel_h1,wall_ms\n";
    sum << s.experiment << ',' << s.status << ',' << s.iterations << ',' << s.neurons << ',' << s.dofs << ','
        << fmt(s.rel_l2) << ',' << fmt(s.rel_h1) << ',' << std::fixed << std::setprecision(1) << s.wall_ms << '\n';
  }
  return res;
}

void describe_plan(const ExperimentConfig& cfg, std::ostream& out) {
  const ResolvedExperiment ex = resolve(cfg);
  const int N = ex.mesh->num_elements();
  out << "experiment " << cfg.name << '\n'
      << "model      " << ex.model.name << '\n'
      << "mesh       " << N << " elements, h = " << fmt(ex.mesh->h()) << '\n'
      << "quadrature " << ex.points_per_axis << " points per axis\n"
      << "family     " << to_string(cfg.train.family) << ", width " << cfg.train.width.text();
  if (cfg.train.family == FamilyTag::SigmoidTwoLayer) out << ", m1 " << cfg.train.m1.text();
  out << '\n' << "init       " << (cfg.init == InitKind::Zero ? "zero" : "spectral") << '\n';
  out << "lambda    ";
  for (double l : ex.model.lambda_init) out << ' ' << fmt(l);
  out << "\n\n r  width  neurons   dofs\n";
  for (int r = 1; r <= cfg.train.maxit; ++r) {
    const long w = cfg.train.width(r);
    const long m1 = cfg.train.family == FamilyTag::SigmoidTwoLayer ? cfg.train.m1(r) : 0;
    out << std::setw(2) << r << std::setw(7) << w << std::setw(9) << N * (w + m1) << std::setw(7) << N * w << '\n';
  }
}

}  // namespace dgnn
