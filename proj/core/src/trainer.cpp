#include <Eigen/QR>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "dgnn/linear_solve.hpp"
#include "dgnn/trainer.hpp"

namespace dgnn {

namespace {

using std::numbers::pi;

std::int64_t now_us() {
  return std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::vector<double> circle_angles(int n) {
  std::vector<double> a(n);
  for (int j = 1; j <= n; ++j) a[j - 1] = 2.0 * pi * j / n;
  return a;
}

// J with NumericDomainError mapped to +inf (rejected line-search trials).
double safe_loss(const LossPlan& plan, const NetworkSet& cand, const std::vector<double>& lambda, bool skip) {
  try {
    const double j = evaluate_loss(plan, &cand, lambda, skip).total;
    return std::isfinite(j) ? j : std::numeric_limits<double>::infinity();
  } catch (const NumericDomainError&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

std::vector<double> random_orthogonal_columns(int n, int m1, std::uint64_t seed) {
  if (m1 > n) throw InputError("orthogonal factor needs m2 >= m1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd A(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) A(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  // sign fix makes Q Haar distributed and independent of the QR convention
  for (int j = 0; j < n; ++j) {
    if (R(j, j) < 0.0) Q.col(j) *= -1.0;
  }
  std::vector<double> out(static_cast<std::size_t>(n) * m1);
  for (int j = 0; j < m1; ++j) {
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(j) * n + i] = Q(i, j);
  }
  return out;
}

NetworkSet init_candidate(const PDEModel& model, const Mesh& mesh, FamilyTag family, int width, int m1, int r,
                          std::uint64_t seed) {
  if (width < 1) throw InputError("network width must be positive");
  const int d = model.dim;
  std::vector<ElementNetwork> nets;
  nets.reserve(mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const Box& box = mesh.element(k).box;
    switch (family) {
      case FamilyTag::SigmoidOneLayer: {
        if (d != 2) throw ConfigError("sigmoid templates are defined for two input dimensions");
        const Complex scale = model.kind == ModelKind::Helmholtz ? Complex(0.0, model.omega) : Complex(1.0);
        std::vector<Complex> w(static_cast<std::size_t>(width) * d), b(width, 1.0);
        const auto th = circle_angles(width);
        for (int j = 0; j < width; ++j) {
          w[j * d] = scale * std::cos(th[j]);
          w[j * d + 1] = scale * std::sin(th[j]);
        }
        nets.push_back(ElementNetwork::sigmoid_one_layer(d, std::move(w), std::move(b)));
        break;
      }
      case FamilyTag::SigmoidTwoLayer: {
        if (d != 2) throw ConfigError("sigmoid templates are defined for two input dimensions");
        if (m1 < 1 || width < m1) throw InputError("two-layer template requires m2 >= m1 >= 1");
        std::vector<Complex> w1(static_cast<std::size_t>(m1) * d), b1(m1, 1.0), w2(static_cast<std::size_t>(width) * m1),
            b2(width, 1.0);
        const auto th = circle_angles(m1);
        for (int j = 0; j < m1; ++j) {
          w1[j * d] = std::cos(th[j]);
          w1[j * d + 1] = std::sin(th[j]);
        }
        Complex scale = 1.0;
        if (model.kind == ModelKind::Helmholtz) scale = Complex(0.0, model.omega);
        if (model.kind == ModelKind::Wave) scale = -model.wavespeed(box.center());
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(k)};
        std::uint32_t s2[2];
        seq.generate(s2, s2 + 2);
        const auto Q = random_orthogonal_columns(width, m1, (static_cast<std::uint64_t>(s2[0]) << 32) | s2[1]);
        for (int l = 0; l < width; ++l) {
          for (int i = 0; i < m1; ++i) w2[static_cast<std::size_t>(l) * m1 + i] = scale * Q[static_cast<std::size_t>(i) * width + l];
        }
        nets.push_back(ElementNetwork::sigmoid_two_layer(d, m1, width, std::move(w1), std::move(b1), std::move(w2),
                                                         std::move(b2)));
        break;
      }
      case FamilyTag::PlaneWave:
        if (model.kind != ModelKind::Helmholtz) throw ConfigError("plane-wave family pairs with the Helmholtz model");
        nets.push_back(ElementNetwork::plane_wave(d, model.omega, circle_angles(width)));
        break;
      case FamilyTag::PolyWave: {
        if (model.kind != ModelKind::Wave || !model.constant_speed) {
          throw ConfigError("poly-wave family pairs with the constant-speed wave model");
        }
        if (width % 2 == 0) throw ConfigError("poly-wave width must be odd (2p+1)");
        nets.push_back(ElementNetwork::poly_wave(box, *model.time_axis, *model.constant_speed, (width - 1) / 2));
        break;
      }
    }
  }
  return NetworkSet(std::move(nets));
}

Trainer::Trainer(const PDEModel& model, const Mesh& mesh, TrainConfig cfg, std::shared_ptr<const Field> u0,
                 int points_per_axis)
    : model_(model),
      mesh_(mesh),
      cfg_(std::move(cfg)),
      plan_(model, mesh, points_per_axis),
      errors_(model, mesh, points_per_axis),
      solution_(u0 ? u0 : std::make_shared<ZeroField>()),
      lambda_(model.lambda_init) {
  if (!(cfg_.beta > 0.0 && cfg_.beta <= 1.0)) throw ConfigError("beta must be in (0, 1]");
  if (!(cfg_.tol > 0.0)) throw ConfigError("tol must be positive");
  if (cfg_.maxit < 0 || cfg_.traincount < 1 || cfg_.gd_steps < 0) throw ConfigError("bad iteration counts");
  plan_.set_frozen(solution_.initial());
  errors_.absorb(solution_.initial());
}

double Trainer::elapsed_ms() const { return (now_us() - t0_) / 1000.0; }

bool Trainer::use_shortcut(const NetworkSet& candidate) const {
  if (!cfg_.trefftz_shortcut || candidate.size() == 0) return false;
  if (!model_.trefftz_for(candidate[0].family())) return false;
  return trefftz_spot_check(candidate, model_, mesh_);
}

void Trainer::start() {
  if (started_) return;
  started_ = true;
  t0_ = now_us();
  EpochRecord rec;
  rec.loss = evaluate_loss(plan_, nullptr, lambda_);
  rec.error = errors_.report();
  rec.j_before_ls = rec.j_after_ls = rec.j_before_gd = rec.j_after_gd = rec.loss.total;
  rec.wall_ms = elapsed_ms();
  last_rel_l2_ = rec.error.rel_l2;
  record_.epochs.push_back(rec);
  if (on_epoch) on_epoch(rec);
}

void Trainer::least_squares(NetworkSet& candidate, bool skip, EpochRecord& rec) {
  const std::vector<Complex> old = candidate.flat_coeffs();
  const double j_old = evaluate_loss(plan_, &candidate, lambda_, skip).total;
  rec.j_before_ls = j_old;
  GramOptions opt;
  opt.skip_volume = skip;
  opt.orthonormalize = cfg_.orthonormalize;
  opt.truncation = cfg_.truncation;
  const GramSystem sys = assemble_gram(plan_, candidate, lambda_, opt);
  double best = j_old;
  bool accepted = false;
  std::string failure;
  for (double ridge : ridge_ladder()) {
    SolveReport rep;
    try {
      rep = solve_linear(sys, ridge);
    } catch (const ConditioningError& e) {
      failure = e.what();
      continue;
    }
    std::vector<Complex> c = sys.coefficients(rep.coefficients);
    if (!model_.complex_valued) {
      for (auto& v : c) v = v.real();
    }
    candidate.set_flat_coeffs(c);
    const double j = evaluate_loss(plan_, &candidate, lambda_, skip).total;
    if (j <= j_old) {
      best = j;
      rec.ridge = ridge;
      rec.ls_residual = rep.relative_residual;
      accepted = true;
      break;
    }
  }
  if (!accepted) {
    if (!failure.empty() && j_old == 0.0) throw ConditioningError(failure);
    candidate.set_flat_coeffs(old);
    best = j_old;
    rec.ridge = -1.0;
  }
  rec.j_after_ls = best;
}

bool relax_lambda(std::vector<double>& lambda, const GradientStats& stats, double beta) {
  const double top = stats.max_abs[0];
  if (!(top > 0.0)) return false;
  bool changed = false;
  for (std::size_t i = 1; i < lambda.size(); ++i) {
    if (!(stats.mean_abs[i] > 0.0)) continue;
    const double hat = lambda[0] * top / stats.mean_abs[i];
    lambda[i] = (1.0 - beta) * lambda[i] + beta * hat;
    changed = true;
  }
  return changed;
}

bool Trainer::update_lambda(const NetworkSet& candidate, bool skip) {
  if (!cfg_.adapt_lambda) return false;
  return relax_lambda(lambda_, component_gradient_stats(plan_, candidate, skip), cfg_.beta);
}

int Trainer::gradient_descent(NetworkSet& candidate, bool skip, double& j_before, double& j_after) {
  std::vector<Complex> grad;
  double j = loss_gradient(plan_, candidate, lambda_, skip, grad);
  j_before = j;
  int steps = 0;
  const bool real_model = !model_.complex_valued;
  std::vector<Complex> phi = candidate.flat_params();
  double alpha_start = cfg_.alpha;
  for (int step = 0; step < cfg_.gd_steps; ++step) {
    if (step > 0) j = loss_gradient(plan_, candidate, lambda_, skip, grad);
    if (real_model) {
      for (auto& g : grad) g = g.real();
    }
    bool zero = true;
    for (const auto& g : grad) {
      if (g != Complex{}) {
        zero = false;
        break;
      }
    }
    if (zero) break;
    double alpha = alpha_start;
    bool accepted = false;
    std::vector<Complex> trial(phi.size());
    for (int h = 0; h <= cfg_.max_halvings; ++h, alpha *= 0.5) {
      for (std::size_t i = 0; i < phi.size(); ++i) trial[i] = phi[i] - alpha * grad[i];
      candidate.set_flat_params(trial);
      const double jt = safe_loss(plan_, candidate, lambda_, skip);
      if (jt < j) {
        j = jt;
        phi = trial;
        accepted = true;
        if (cfg_.warm_start) alpha_start = std::min(cfg_.alpha, 2.0 * alpha);
        break;
      }
    }
    if (!accepted) {
      candidate.set_flat_params(phi);
      break;
    }
    ++steps;
  }
  j_after = j;
  return steps;
}

EpochRecord Trainer::inner_epoch(NetworkSet& candidate, int iteration, int epoch, bool last_allowed) {
  EpochRecord rec;
  rec.iteration = iteration;
  rec.epoch = epoch;
  const bool skip = use_shortcut(candidate);
  const std::vector<Complex> phi0 = candidate.flat_params();

  least_squares(candidate, skip, rec);
  if (rec.j_after_ls > rec.j_before_ls) ++record_.monotonicity_violations;
  rec.lambda_updated = update_lambda(candidate, skip);
  rec.gd_steps = gradient_descent(candidate, skip, rec.j_before_gd, rec.j_after_gd);
  if (rec.j_after_gd > rec.j_before_gd) ++record_.monotonicity_violations;

  const std::vector<Complex> phi1 = candidate.flat_params();
  double change = 0.0;
  for (std::size_t i = 0; i < phi0.size(); ++i) change = std::max(change, std::abs(phi1[i] - phi0[i]));
  rec.param_change = change;

  const bool last = last_allowed || change < cfg_.rho;
  if (last && cfg_.closing_solve && rec.gd_steps > 0) {
    EpochRecord closing;
    least_squares(candidate, skip, closing);
    if (closing.j_after_ls > closing.j_before_ls) ++record_.monotonicity_violations;
    rec.ridge = closing.ridge;
    rec.ls_residual = closing.ls_residual;
  }
  rec.loss = evaluate_loss(plan_, &candidate, lambda_, skip);
  rec.error = errors_.report(&candidate);
  rec.width = candidate.size() ? candidate[0].width() : 0;
  rec.dofs = candidate.dofs();
  rec.neurons = candidate.neurons();
  rec.cumulative_epoch = ++cumulative_epoch_;
  rec.wall_ms = elapsed_ms();
  return rec;
}

bool Trainer::galerkin_iterate() {
  start();
  const int r = record_.iterations + 1;
  if (r > cfg_.maxit) {
    record_.status = "maxit";
    return false;
  }
  if (last_rel_l2_ < cfg_.tol) {
    record_.status = "converged";
    return false;
  }
  const long width = cfg_.width(r);
  const long m1 = cfg_.family == FamilyTag::SigmoidTwoLayer ? cfg_.m1(r) : 0;
  if (width < 1 || (cfg_.family == FamilyTag::SigmoidTwoLayer && m1 < 1)) {
    record_.status = "schedule-exhausted";
    return false;
  }
  NetworkSet candidate = init_candidate(model_, mesh_, cfg_.family, static_cast<int>(width), static_cast<int>(m1), r,
                                        cfg_.seed);
  for (int epoch = 1; epoch <= cfg_.traincount; ++epoch) {
    EpochRecord rec = inner_epoch(candidate, r, epoch, epoch == cfg_.traincount);
    const bool stop = epoch == cfg_.traincount || rec.param_change < cfg_.rho;
    record_.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);
    if (stop) break;
  }
  plan_.absorb(candidate);
  errors_.absorb(candidate);
  last_rel_l2_ = record_.epochs.back().error.rel_l2;
  solution_.freeze(std::move(candidate));
  record_.iterations = r;
  if (last_rel_l2_ < cfg_.tol) {
    record_.status = "converged";
    return false;
  }
  if (r >= cfg_.maxit) {
    record_.status = "maxit";
    return false;
  }
  return true;
}

const ConvergenceRecord& Trainer::run() {
  start();
  if (cfg_.maxit == 0) {
    record_.status = "maxit";
    return record_;
  }
  while (galerkin_iterate()) {
  }
  return record_;
}

}  // namespace dgnn
