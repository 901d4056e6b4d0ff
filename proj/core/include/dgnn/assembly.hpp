#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "dgnn/field.hpp"
#include "dgnn/mesh.hpp"
#include "dgnn/models.hpp"

namespace dgnn {

/// One operator row at a sample: residual = sum_s coef[s] . B_s(v) - data.
struct PlanRow {
  int lambda_index = 0;
  std::array<Bundle, 2> coef;
  Complex data{};
  Complex r0{};  // data - sum_s coef[s] . B_s(u_frozen)
};

struct PlanSample {
  Point x{};
  double weight = 0.0;
  int first_row = 0;
  int num_rows = 0;
};

/// Samples sharing the same element(s): an element volume or a face.
struct PlanGroup {
  std::array<int, 2> elements{-1, -1};
  int sides = 1;
  bool volume = false;
  int first_sample = 0;
  int num_samples = 0;
};

/// Quadrature-discretized loss of a model on a mesh with the residual of
/// the frozen part cached per row, so frozen fields are evaluated once.
class LossPlan {
 public:
  LossPlan(const PDEModel& model, const Mesh& mesh, int points_per_axis);

  const PDEModel& model() const { return *model_; }
  const Mesh& mesh() const { return *mesh_; }
  int points_per_axis() const { return q_; }
  int num_lambda() const { return num_lambda_; }

  /// r0 = data - a . B(u) for every row.
  void set_frozen(const Field& u);
  /// r0 -= a . B(xi); used when a correction is frozen.
  void absorb(const Field& xi);

  const std::vector<PlanGroup>& groups() const { return groups_; }
  const std::vector<PlanSample>& samples() const { return samples_; }
  const std::vector<PlanRow>& rows() const { return rows_; }
  /// Per-lambda sum of w |r0|^2 over volume rows.
  const std::vector<double>& volume_constant() const { return volume_constant_; }
  /// Per-lambda sum of w |r0|^2 over all rows (J of the frozen part, unweighted).
  std::vector<double> frozen_components() const;

 private:
  const PDEModel* model_;
  const Mesh* mesh_;
  int q_;
  int num_lambda_;
  std::vector<PlanGroup> groups_;
  std::vector<PlanSample> samples_;
  std::vector<PlanRow> rows_;
  std::vector<double> volume_constant_;

  void refresh_constants();
};

struct LossBreakdown {
  std::vector<double> components;  // unweighted, one per lambda index
  std::vector<double> lambda;
  double total = 0.0;
};

/// J(u_frozen + candidate). With `skip_volume` the candidate is taken to be
/// Trefftz and volume rows contribute their cached constant.
LossBreakdown evaluate_loss(const LossPlan& plan, const NetworkSet* candidate, const std::vector<double>& lambda,
                            bool skip_volume = false);
/// Convenience: J of an arbitrary field (plan's cached residual is ignored).
LossBreakdown evaluate_loss(const Field& v, const PDEModel& model, const Mesh& mesh, const std::vector<double>& lambda,
                            int points_per_axis);

struct GramOptions {
  bool skip_volume = false;
  /// Replace each element's basis by an L2(K)-orthonormal combination
  /// psi = phi T_k computed by SVD of the sampled values, dropping singular
  /// values below `truncation` times the largest. Keeps the normal equations
  /// usable for nearly collinear bases.
  bool orthonormalize = false;
  double truncation = 1e-12;
};

struct GramSystem {
  Eigen::SparseMatrix<Complex> matrix;  // full Hermitian storage
  Eigen::VectorXcd rhs;
  double data_constant = 0.0;  // sum lambda w |r0|^2
  /// Per-element basis transforms (empty without orthonormalization).
  std::vector<Eigen::MatrixXcd> transform;
  std::vector<int> offsets;  // unknown offsets per element

  /// Network coefficients c = T y for a solution y of the system.
  std::vector<Complex> coefficients(const Eigen::VectorXcd& y) const;
};

/// Normal equations a(phi_p, phi_q) c = L(phi_q) - a(u_frozen, phi_q) over
/// the candidate's basis (its coefficients are ignored).
GramSystem assemble_gram(const LossPlan& plan, const NetworkSet& basis, const std::vector<double>& lambda,
                         const GramOptions& options = {});

/// Conjugate-Wirtinger gradient of J over the candidate's nonlinear parameters
/// (flat, element order). Returns J.
double loss_gradient(const LossPlan& plan, const NetworkSet& candidate, const std::vector<double>& lambda,
                     bool skip_volume, std::vector<Complex>& grad);

/// Per-component gradient magnitudes over all trainable parameters
/// (coefficients and nonlinear parameters), without lambda weighting.
struct GradientStats {
  std::vector<double> max_abs;
  std::vector<double> mean_abs;
};
GradientStats component_gradient_stats(const LossPlan& plan, const NetworkSet& candidate, bool skip_volume);

/// Spot check that every basis function of the first elements satisfies the
/// homogeneous interior equation (justifies skipping volume rows).
bool trefftz_spot_check(const NetworkSet& candidate, const PDEModel& model, const Mesh& mesh, double tol = 1e-9);

}  // namespace dgnn
