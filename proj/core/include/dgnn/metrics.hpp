#pragma once

#include <vector>

#include "dgnn/field.hpp"
#include "dgnn/mesh.hpp"
#include "dgnn/models.hpp"

namespace dgnn {

struct ErrorReport {
  double rel_l2 = 0.0;
  double rel_h1_x = 0.0;  // broken seminorm, spatial gradient only
  double rel_h1_t = 0.0;  // broken seminorm, time derivative only (0 when stationary)
  double rel_h1 = 0.0;    // full broken gradient
  double exact_l2 = 0.0;
  double exact_h1_x = 0.0;
  double exact_h1_t = 0.0;
};

ErrorReport error_norms(const Field& u, const PDEModel& model, const Mesh& mesh, int points_per_axis);

/// Error norms of u_frozen + candidate with u_frozen cached at the quadrature
/// points, so each report only evaluates the candidate.
class ErrorEvaluator {
 public:
  ErrorEvaluator(const PDEModel& model, const Mesh& mesh, int points_per_axis);

  void absorb(const Field& xi);
  ErrorReport report(const NetworkSet* candidate = nullptr) const;

 private:
  const PDEModel* model_;
  std::vector<int> element_;
  std::vector<Point> x_;
  std::vector<double> w_;
  std::vector<Bundle> exact_;
  std::vector<Bundle> frozen_;
  double exact_l2_ = 0.0, exact_hx_ = 0.0, exact_ht_ = 0.0;
};

}  // namespace dgnn
