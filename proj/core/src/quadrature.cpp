#include "dgnn/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace dgnn {

double QuadratureRule::weight_sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

GaussLegendre1D gauss_legendre(int n) {
  if (n < 1) throw InputError("quadrature needs at least one point per axis");
  GaussLegendre1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  // Newton on P_n from the Chebyshev-type initial guess; symmetric fill.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

namespace {

QuadratureRule tensor_rule(const Box& box, int q, int skip_axis) {
  static RuleCache cache;
  const GaussLegendre1D& g = cache.get(q);
  QuadratureRule rule;
  rule.dim = box.dim;
  std::vector<int> axes;
  for (int a = 0; a < box.dim; ++a) {
    if (a != skip_axis) axes.push_back(a);
  }
  std::size_t total = 1;
  for (std::size_t i = 0; i < axes.size(); ++i) total *= q;
  rule.points.reserve(total);
  rule.weights.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Point x{};
    double w = 1.0;
    std::size_t rem = idx;
    for (int a : axes) {
      const int i = static_cast<int>(rem % q);
      rem /= q;
      const double half = 0.5 * box.width(a);
      x[a] = box.lo[a] + half * (g.nodes[i] + 1.0);
      w *= half * g.weights[i];
    }
    if (skip_axis >= 0) x[skip_axis] = box.lo[skip_axis];
    rule.points.push_back(x);
    rule.weights.push_back(w);
  }
  return rule;
}

}  // namespace

QuadratureRule element_rule(const Box& box, int points_per_axis) {
  return tensor_rule(box, points_per_axis, -1);
}

QuadratureRule face_rule(const Face& face, int points_per_axis) {
  return tensor_rule(face.box, points_per_axis, face.axis);
}

int default_points_per_axis(double omega, double h_axis, int degree) {
  return std::max(10, static_cast<int>(std::ceil(omega * h_axis)) + degree + 2);
}

const GaussLegendre1D& RuleCache::get(int points) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = rules_.find(points);
  if (it == rules_.end()) it = rules_.emplace(points, gauss_legendre(points)).first;
  return it->second;
}

}  // namespace dgnn
