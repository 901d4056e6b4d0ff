#include <cmath>

#include "dgnn/metrics.hpp"
#include "dgnn/quadrature.hpp"

namespace dgnn {

ErrorEvaluator::ErrorEvaluator(const PDEModel& model, const Mesh& mesh, int points_per_axis) : model_(&model) {
  if (!model.exact) throw ConfigError("model '" + model.name + "' has no exact solution");
  const int t = model.time_axis.value_or(-1);
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const QuadratureRule rule = element_rule(mesh.element(k).box, points_per_axis);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      element_.push_back(k);
      x_.push_back(rule.points[i]);
      w_.push_back(rule.weights[i]);
      const Bundle u = model.exact(rule.points[i]);
      exact_.push_back(u);
      exact_l2_ += rule.weights[i] * std::norm(u.value);
      for (int a = 0; a < model.dim; ++a) (a == t ? exact_ht_ : exact_hx_) += rule.weights[i] * std::norm(u.grad[a]);
    }
  }
  if (!(exact_l2_ > 0.0)) throw ConfigError("exact solution has zero L2 norm");
  frozen_.assign(x_.size(), Bundle{});
}

void ErrorEvaluator::absorb(const Field& xi) {
  if (xi.is_zero()) return;
  for (std::size_t i = 0; i < x_.size(); ++i) frozen_[i] += xi.eval(element_[i], x_[i]);
}

ErrorReport ErrorEvaluator::report(const NetworkSet* candidate) const {
  const int t = model_->time_axis.value_or(-1);
  double e2 = 0.0, ex = 0.0, et = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    Bundle v = frozen_[i];
    if (candidate) v += (*candidate)[element_[i]].eval(x_[i]);
    e2 += w_[i] * std::norm(v.value - exact_[i].value);
    for (int a = 0; a < model_->dim; ++a) (a == t ? et : ex) += w_[i] * std::norm(v.grad[a] - exact_[i].grad[a]);
  }
  ErrorReport r;
  r.exact_l2 = std::sqrt(exact_l2_);
  r.exact_h1_x = std::sqrt(exact_hx_);
  r.exact_h1_t = std::sqrt(exact_ht_);
  r.rel_l2 = std::sqrt(e2 / exact_l2_);
  r.rel_h1_x = exact_hx_ > 0.0 ? std::sqrt(ex / exact_hx_) : 0.0;
  r.rel_h1_t = exact_ht_ > 0.0 ? std::sqrt(et / exact_ht_) : 0.0;
  const double den = exact_hx_ + exact_ht_;
  r.rel_h1 = den > 0.0 ? std::sqrt((ex + et) / den) : 0.0;
  return r;
}

ErrorReport error_norms(const Field& u, const PDEModel& model, const Mesh& mesh, int points_per_axis) {
  ErrorEvaluator ev(model, mesh, points_per_axis);
  ev.absorb(u);
  return ev.report();
}

}  // namespace dgnn
