#include <cmath>
#include <cstdlib>

#include "dgnn/assembly.hpp"
#include "dgnn/parallel.hpp"
#include "dgnn/quadrature.hpp"

namespace dgnn {

namespace {

int g_thread_override = 0;

std::vector<Bundle>& basis_scratch(int side) {
  thread_local std::vector<Bundle> s[2];
  return s[side];
}

// Bundles of the candidate at one sample, per side.
struct SideEval {
  Bundle eta[2];
};

}  // namespace

int num_threads() {
  if (g_thread_override > 0) return g_thread_override;
  if (const char* env = std::getenv("DGNN_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

void set_num_threads(int n) { g_thread_override = n; }

LossPlan::LossPlan(const PDEModel& model, const Mesh& mesh, int points_per_axis)
    : model_(&model), mesh_(&mesh), q_(points_per_axis), num_lambda_(model.num_lambda()) {
  if (points_per_axis < 1) throw InputError("points per axis must be >= 1");
  if (mesh.dim() != model.dim) throw ConfigError("mesh and model dimensions differ");
  const LossTerm* interior = model.interior_term();
  if (!interior) throw ConfigError("model has no interior operator");

  for (int k = 0; k < mesh.num_elements(); ++k) {
    const QuadratureRule rule = element_rule(mesh.element(k).box, q_);
    PlanGroup g;
    g.elements = {k, -1};
    g.sides = 1;
    g.volume = true;
    g.first_sample = static_cast<int>(samples_.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
      PlanSample s;
      s.x = rule.points[i];
      s.weight = rule.weights[i];
      s.first_row = static_cast<int>(rows_.size());
      s.num_rows = 1;
      PlanRow row;
      row.lambda_index = interior->lambda_index;
      row.coef[0] = interior->coef(s.x, Point{});
      row.data = model.source(s.x);
      rows_.push_back(row);
      samples_.push_back(s);
    }
    g.num_samples = static_cast<int>(rule.size());
    groups_.push_back(g);
  }

  for (const Face& face : mesh.faces()) {
    std::vector<const LossTerm*> active;
    for (const LossTerm& t : model.terms) {
      if (t.kind == TermKind::Interior || t.category != face.category) continue;
      if ((t.kind == TermKind::Interface) != face.interior()) continue;
      active.push_back(&t);
    }
    if (active.empty()) continue;
    const QuadratureRule rule = face_rule(face, q_);
    PlanGroup g;
    g.elements = {face.neighbors[0], face.interior() ? face.neighbors[1] : -1};
    g.sides = face.interior() ? 2 : 1;
    g.first_sample = static_cast<int>(samples_.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
      PlanSample s;
      s.x = rule.points[i];
      s.weight = rule.weights[i];
      s.first_row = static_cast<int>(rows_.size());
      s.num_rows = static_cast<int>(active.size());
      for (const LossTerm* t : active) {
        PlanRow row;
        row.lambda_index = t->lambda_index;
        for (int side = 0; side < g.sides; ++side) {
          row.coef[side] = t->coef(s.x, face.interior() ? face.outward_normal(side) : face.normal);
        }
        row.data = model.term_data(*t, s.x, face.normal);
        rows_.push_back(row);
      }
      samples_.push_back(s);
    }
    g.num_samples = static_cast<int>(rule.size());
    groups_.push_back(g);
  }
  for (PlanRow& row : rows_) row.r0 = row.data;
  refresh_constants();
}

void LossPlan::set_frozen(const Field& u) {
  for (PlanRow& row : rows_) row.r0 = row.data;
  absorb(u);
}

void LossPlan::absorb(const Field& xi) {
  if (xi.is_zero()) return;
  const int dim = model_->dim;
  parallel_chunks(static_cast<int>(groups_.size()), num_threads(), [&](int, int b, int e) {
    for (int gi = b; gi < e; ++gi) {
      const PlanGroup& g = groups_[gi];
      for (int si = g.first_sample; si < g.first_sample + g.num_samples; ++si) {
        const PlanSample& s = samples_[si];
        Bundle u[2];
        for (int side = 0; side < g.sides; ++side) u[side] = xi.eval(g.elements[side], s.x);
        for (int ri = s.first_row; ri < s.first_row + s.num_rows; ++ri) {
          PlanRow& row = rows_[ri];
          for (int side = 0; side < g.sides; ++side) row.r0 -= apply(row.coef[side], u[side], dim);
        }
      }
    }
  });
  refresh_constants();
}

void LossPlan::refresh_constants() {
  volume_constant_.assign(num_lambda_, 0.0);
  for (const PlanGroup& g : groups_) {
    if (!g.volume) continue;
    for (int si = g.first_sample; si < g.first_sample + g.num_samples; ++si) {
      const PlanSample& s = samples_[si];
      for (int ri = s.first_row; ri < s.first_row + s.num_rows; ++ri) {
        volume_constant_[rows_[ri].lambda_index] += s.weight * std::norm(rows_[ri].r0);
      }
    }
  }
}

std::vector<double> LossPlan::frozen_components() const {
  std::vector<double> c(num_lambda_, 0.0);
  for (const PlanSample& s : samples_) {
    for (int ri = s.first_row; ri < s.first_row + s.num_rows; ++ri) {
      c[rows_[ri].lambda_index] += s.weight * std::norm(rows_[ri].r0);
    }
  }
  return c;
}

LossBreakdown evaluate_loss(const LossPlan& plan, const NetworkSet* candidate, const std::vector<double>& lambda,
                            bool skip_volume) {
  const int L = plan.num_lambda();
  if (static_cast<int>(lambda.size()) != L) throw InputError("lambda length does not match the model");
  const int dim = plan.model().dim;
  const auto& groups = plan.groups();
  const auto& samples = plan.samples();
  const auto& rows = plan.rows();
  const int workers = num_threads();
  std::vector<std::vector<double>> partial(workers, std::vector<double>(L, 0.0));

  parallel_chunks(static_cast<int>(groups.size()), workers, [&](int w, int b, int e) {
    std::vector<double>& acc = partial[w];
    for (int gi = b; gi < e; ++gi) {
      const PlanGroup& g = groups[gi];
      if (skip_volume && g.volume) continue;
      for (int si = g.first_sample; si < g.first_sample + g.num_samples; ++si) {
        const PlanSample& s = samples[si];
        Bundle eta[2];
        if (candidate) {
          for (int side = 0; side < g.sides; ++side) eta[side] = (*candidate)[g.elements[side]].eval(s.x);
        }
        for (int ri = s.first_row; ri < s.first_row + s.num_rows; ++ri) {
          const PlanRow& row = rows[ri];
          Complex r = -row.r0;
          if (candidate) {
            for (int side = 0; side < g.sides; ++side) r += apply(row.coef[side], eta[side], dim);
          }
          acc[row.lambda_index] += s.weight * std::norm(r);
        }
      }
    }
  });

  LossBreakdown out;
  out.lambda = lambda;
  out.components.assign(L, 0.0);
  for (const auto& p : partial) {
    for (int i = 0; i < L; ++i) out.components[i] += p[i];
  }
  if (skip_volume) {
    for (int i = 0; i < L; ++i) out.components[i] += plan.volume_constant()[i];
  }
  for (int i = 0; i < L; ++i) out.total += lambda[i] * out.components[i];
  return out;
}

LossBreakdown evaluate_loss(const Field& v, const PDEModel& model, const Mesh& mesh, const std::vector<double>& lambda,
                            int points_per_axis) {
  LossPlan plan(model, mesh, points_per_axis);
  plan.set_frozen(v);
  return evaluate_loss(plan, nullptr, lambda);
}

std::vector<Complex> GramSystem::coefficients(const Eigen::VectorXcd& y) const {
  if (transform.empty()) return std::vector<Complex>(y.data(), y.data() + y.size());
  std::vector<Complex> c;
  for (std::size_t k = 0; k < transform.size(); ++k) {
    const Eigen::VectorXcd ck = transform[k] * y.segment(offsets[k], offsets[k + 1] - offsets[k]);
    c.insert(c.end(), ck.data(), ck.data() + ck.size());
  }
  return c;
}

GramSystem assemble_gram(const LossPlan& plan, const NetworkSet& basis, const std::vector<double>& lambda,
                         const GramOptions& options) {
  using Triplet = Eigen::Triplet<Complex>;
  const int dim = plan.model().dim;
  const auto& groups = plan.groups();
  const auto& samples = plan.samples();
  const auto& rows = plan.rows();
  const int workers = num_threads();
  const bool skip_volume = options.skip_volume;
  const int N = basis.size();

  GramSystem sys;
  if (options.orthonormalize) {
    sys.transform.resize(N);
    parallel_chunks(N, workers, [&](int, int b, int e) {
      std::vector<Bundle> phi;
      for (int k = b; k < e; ++k) {
        const PlanGroup& g = groups[k];  // volume groups come first, in element order
        const ElementNetwork& net = basis[k];
        Eigen::MatrixXcd A(g.num_samples, net.width());
        phi.resize(net.width());
        for (int i = 0; i < g.num_samples; ++i) {
          const PlanSample& s = samples[g.first_sample + i];
          net.eval_basis(s.x, phi);
          const double sw = std::sqrt(s.weight);
          for (int j = 0; j < net.width(); ++j) A(i, j) = sw * phi[j].value;
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        int r = 0;
        while (r < sv.size() && sv(r) > options.truncation * sv(0)) ++r;
        sys.transform[k] = svd.matrixV().leftCols(r) * sv.head(r).cwiseInverse().asDiagonal();
      }
    });
    sys.offsets.assign(N + 1, 0);
    for (int k = 0; k < N; ++k) sys.offsets[k + 1] = sys.offsets[k] + static_cast<int>(sys.transform[k].cols());
  } else {
    sys.offsets = basis.coeff_offsets();
  }
  const std::vector<int>& off = sys.offsets;
  const int n = off.back();

  std::vector<std::vector<Triplet>> trip(workers);
  std::vector<Eigen::VectorXcd> rhs(workers, Eigen::VectorXcd::Zero(n));
  std::vector<double> constant(workers, 0.0);

  parallel_chunks(static_cast<int>(groups.size()), workers, [&](int w, int b, int e) {
    Eigen::MatrixXcd O, Ot;
    Eigen::VectorXcd r0;
    for (int gi = b; gi < e; ++gi) {
      const PlanGroup& g = groups[gi];
      int nrows = 0;
      for (int si = g.first_sample; si < g.first_sample + g.num_samples; ++si) nrows += samples[si].num_rows;
      const int raw[2] = {basis[g.elements[0]].width(), g.sides == 2 ? basis[g.elements[1]].width() : 0};
      O.setZero(nrows, raw[0] + raw[1]);
      r0.resize(nrows);
      int row_index = 0;
      for (int si = g.first_sample; si < g.first_sample + g.num_samples; ++si) {
        const PlanSample& s = samples[si];
        if (!(skip_volume && g.volume)) {
          for (int side = 0; side < g.sides; ++side) {
            auto& phi = basis_scratch(side);
            phi.resize(raw[side]);
            basis[g.elements[side]].eval_basis(s.x, phi);
          }
        }
        for (int ri = s.first_row; ri < s.first_row + s.num_rows; ++ri, ++row_index) {
          const PlanRow& row = rows[ri];
          const double sw = std::sqrt(lambda[row.lambda_index] * s.weight);
          r0(row_index) = sw * row.r0;
          constant[w] += lambda[row.lambda_index] * s.weight * std::norm(row.r0);
          if (skip_volume && g.volume) continue;
          int col = 0;
          for (int side = 0; side < g.sides; ++side) {
            const auto& phi = basis_scratch(side);
            for (int j = 0; j < raw[side]; ++j, ++col) O(row_index, col) = sw * apply(row.coef[side], phi[j], dim);
          }
        }
      }
      if (skip_volume && g.volume) continue;
      int width[2] = {raw[0], raw[1]};
      const Eigen::MatrixXcd* Op = &O;
      if (options.orthonormalize) {
        for (int side = 0; side < g.sides; ++side) width[side] = static_cast<int>(sys.transform[g.elements[side]].cols());
        Ot.resize(nrows, width[0] + width[1]);
        Ot.leftCols(width[0]).noalias() = O.leftCols(raw[0]) * sys.transform[g.elements[0]];
        if (g.sides == 2) Ot.rightCols(width[1]).noalias() = O.rightCols(raw[1]) * sys.transform[g.elements[1]];
        Op = &Ot;
      }
      const Eigen::MatrixXcd G = Op->adjoint() * (*Op);
      const Eigen::VectorXcd f = Op->adjoint() * r0;
      const int col_base[2] = {off[g.elements[0]], g.sides == 2 ? off[g.elements[1]] : 0};
      for (int a = 0; a < g.sides; ++a) {
        const int ca = a == 0 ? 0 : width[0];
        for (int i = 0; i < width[a]; ++i) rhs[w](col_base[a] + i) += f(ca + i);
        for (int bb = 0; bb < g.sides; ++bb) {
          const int cb = bb == 0 ? 0 : width[0];
          for (int i = 0; i < width[a]; ++i) {
            for (int j = 0; j < width[bb]; ++j) {
              trip[w].emplace_back(col_base[a] + i, col_base[bb] + j, G(ca + i, cb + j));
            }
          }
        }
      }
    }
  });

  sys.matrix.resize(n, n);
  std::vector<Triplet> all;
  std::size_t total = 0;
  for (const auto& t : trip) total += t.size();
  all.reserve(total);
  for (auto& t : trip) all.insert(all.end(), t.begin(), t.end());
  sys.matrix.setFromTriplets(all.begin(), all.end());
  sys.rhs = Eigen::VectorXcd::Zero(n);
  for (int w = 0; w < workers; ++w) {
    sys.rhs += rhs[w];
    sys.data_constant += constant[w];
  }
  return sys;
}

double loss_gradient(const LossPlan& plan, const NetworkSet& candidate, const std::vector<double>& lambda,
                     bool skip_volume, std::vector<Complex>& grad) {
  const int dim = plan.model().dim;
  const int K = bundle_size(dim);
  const auto& groups = plan.groups();
  const auto& samples = plan.samples();
  const auto& rows = plan.rows();
  const std::vector<int> poff = candidate.param_offsets();
  const int workers = num_threads();
  std::vector<std::vector<Complex>> part(workers, std::vector<Complex>(poff.back()));
  std::vector<double> J(workers, 0.0);

  parallel_chunks(static_cast<int>(groups.size()), workers, [&](int w, int b, int e) {
    auto& gbuf = part[w];
    for (int gi = b; gi < e; ++gi) {
      const PlanGroup& g = groups[gi];
      if (skip_volume && g.volume) continue;
      for (int si = g.first_sample; si < g.first_sample + g.num_samples; ++si) {
        const PlanSample& s = samples[si];
        Bundle eta[2], ybar[2];
        for (int side = 0; side < g.sides; ++side) eta[side] = candidate[g.elements[side]].eval(s.x);
        for (int ri = s.first_row; ri < s.first_row + s.num_rows; ++ri) {
          const PlanRow& row = rows[ri];
          Complex r = -row.r0;
          for (int side = 0; side < g.sides; ++side) r += apply(row.coef[side], eta[side], dim);
          const double lw = lambda[row.lambda_index] * s.weight;
          J[w] += lw * std::norm(r);
          const Complex t = lw * r;
          for (int side = 0; side < g.sides; ++side) {
            for (int k = 0; k < K; ++k) ybar[side].entry(k, dim) += t * std::conj(row.coef[side].entry(k, dim));
          }
        }
        for (int side = 0; side < g.sides; ++side) {
          const int el = g.elements[side];
          const ElementNetwork& net = candidate[el];
          net.accumulate_param_gradient(s.x, ybar[side], std::span<Complex>(gbuf.data() + poff[el], net.num_params()));
        }
      }
    }
  });

  grad.assign(poff.back(), Complex{});
  double total = 0.0;
  for (int w = 0; w < workers; ++w) {
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += part[w][i];
    total += J[w];
  }
  if (skip_volume) {
    for (int i = 0; i < plan.num_lambda(); ++i) total += lambda[i] * plan.volume_constant()[i];
  }
  return total;
}

GradientStats component_gradient_stats(const LossPlan& plan, const NetworkSet& candidate, bool skip_volume) {
  const int dim = plan.model().dim;
  const int K = bundle_size(dim);
  const int L = plan.num_lambda();
  const auto& groups = plan.groups();
  const auto& samples = plan.samples();
  const auto& rows = plan.rows();
  const std::vector<int> poff = candidate.param_offsets();
  const std::vector<int> coff = candidate.coeff_offsets();
  const int np = poff.back();
  const int nc = coff.back();
  const int ntheta = np + nc;
  const int workers = num_threads();
  // layout: [component][theta], theta = params then coefficients
  std::vector<std::vector<Complex>> part(workers, std::vector<Complex>(static_cast<std::size_t>(L) * ntheta));

  parallel_chunks(static_cast<int>(groups.size()), workers, [&](int w, int b, int e) {
    auto& gbuf = part[w];
    std::vector<Bundle> phi;
    for (int gi = b; gi < e; ++gi) {
      const PlanGroup& g = groups[gi];
      if (skip_volume && g.volume) continue;
      for (int si = g.first_sample; si < g.first_sample + g.num_samples; ++si) {
        const PlanSample& s = samples[si];
        Bundle eta[2];
        for (int side = 0; side < g.sides; ++side) eta[side] = candidate[g.elements[side]].eval(s.x);
        for (int ri = s.first_row; ri < s.first_row + s.num_rows; ++ri) {
          const PlanRow& row = rows[ri];
          Complex r = -row.r0;
          for (int side = 0; side < g.sides; ++side) r += apply(row.coef[side], eta[side], dim);
          const Complex t = s.weight * r;
          Complex* base = gbuf.data() + static_cast<std::size_t>(row.lambda_index) * ntheta;
          for (int side = 0; side < g.sides; ++side) {
            Bundle ybar;
            for (int k = 0; k < K; ++k) ybar.entry(k, dim) = t * std::conj(row.coef[side].entry(k, dim));
            const int el = g.elements[side];
            const ElementNetwork& net = candidate[el];
            net.accumulate_param_gradient(s.x, ybar, std::span<Complex>(base + poff[el], net.num_params()));
            phi.resize(net.width());
            net.eval_basis(s.x, phi);
            for (int j = 0; j < net.width(); ++j) {
              Complex acc{};
              for (int k = 0; k < K; ++k) acc += std::conj(phi[j].entry(k, dim)) * ybar.entry(k, dim);
              base[np + coff[el] + j] += 2.0 * acc;
            }
          }
        }
      }
    }
  });

  const bool real_model = !plan.model().complex_valued;
  GradientStats st;
  st.max_abs.assign(L, 0.0);
  st.mean_abs.assign(L, 0.0);
  for (int c = 0; c < L; ++c) {
    for (int i = 0; i < ntheta; ++i) {
      Complex v{};
      for (int w = 0; w < workers; ++w) v += part[w][static_cast<std::size_t>(c) * ntheta + i];
      const double a = real_model ? std::abs(v.real()) : std::abs(v);
      st.max_abs[c] = std::max(st.max_abs[c], a);
      st.mean_abs[c] += a;
    }
    if (ntheta > 0) st.mean_abs[c] /= ntheta;
  }
  return st;
}

bool trefftz_spot_check(const NetworkSet& candidate, const PDEModel& model, const Mesh& mesh, double tol) {
  const LossTerm* interior = model.interior_term();
  const int checks = std::min(candidate.size(), 4);
  std::vector<Bundle> phi;
  for (int k = 0; k < checks; ++k) {
    const ElementNetwork& net = candidate[k];
    const Box& box = mesh.element(k).box;
    phi.resize(net.width());
    for (double f : {0.2, 0.5, 0.9}) {
      Point x{};
      for (int a = 0; a < box.dim; ++a) x[a] = box.lo[a] + f * box.width(a);
      net.eval_basis(x, phi);
      const Bundle coef = interior->coef(x, Point{});
      for (const Bundle& p : phi) {
        double scale = std::abs(p.value);
        for (int a = 0; a < box.dim; ++a) scale += std::abs(coef.second[a] * p.second[a]);
        if (std::abs(apply(coef, p, model.dim)) > tol * std::max(1.0, scale)) return false;
      }
    }
  }
  return true;
}

}  // namespace dgnn
