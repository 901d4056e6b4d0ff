#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "dgnn/mesh.hpp"

namespace dgnn {

struct QuadratureRule {
  int dim = 0;
  std::vector<Point> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double weight_sum() const;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre1D gauss_legendre(int points);

/// Tensor Gauss rule with `points_per_axis` nodes along every axis of the box.
QuadratureRule element_rule(const Box& box, int points_per_axis);
/// Tensor Gauss rule over the codimension-1 face box.
QuadratureRule face_rule(const Face& face, int points_per_axis);

/// q = max(10, ceil(omega * h_axis) + degree + 2)
int default_points_per_axis(double omega, double h_axis, int degree);

/// Reuses reference 1D rules across the (few) distinct sizes of a tensor mesh.
class RuleCache {
 public:
  const GaussLegendre1D& get(int points);

 private:
  std::mutex mutex_;
  std::map<int, GaussLegendre1D> rules_;
};

}  // namespace dgnn
