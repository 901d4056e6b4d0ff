#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dgnn/mesh.hpp"
#include "dgnn/netfn.hpp"
#include "dgnn/types.hpp"

namespace dgnn {

enum class ModelKind { Poisson, Helmholtz, Wave };

enum class TermKind { Interior, Boundary, Initial, Interface };

/// One residual operator of the loss together with where it lives.
///
/// `coef(x, n)` is the operator row at x. On faces `n` is the outward normal
/// of the side being evaluated; interface terms sum the row over both sides,
/// which yields the jump. Interior terms ignore `n`.
struct LossTerm {
  std::string name;
  TermKind kind = TermKind::Interior;
  FaceCategory category = FaceCategory::Boundary;  // faces carrying the term (non-interior kinds)
  int lambda_index = 0;
  std::function<Bundle(const Point& x, const Point& n)> coef;
};

/// Operator bundle, data and reference solution of one experiment.
struct PDEModel {
  std::string name;
  ModelKind kind = ModelKind::Poisson;
  int dim = 2;
  std::optional<int> time_axis;
  std::vector<std::pair<double, double>> bounds;
  bool complex_valued = false;

  double omega = 0.0;                       // Helmholtz wavenumber
  std::optional<double> constant_rho;       // set when rho is constant
  std::optional<double> constant_speed;     // set when c is constant
  std::function<double(const Point&)> rho;  // Helmholtz coefficient
  std::function<double(const Point&)> wavespeed;

  std::vector<LossTerm> terms;
  std::vector<std::string> lambda_names;
  std::vector<double> lambda_init;

  std::function<Complex(const Point&)> source;
  std::function<Bundle(const Point&)> exact;

  int num_lambda() const { return static_cast<int>(lambda_init.size()); }
  const LossTerm* interior_term() const;
  /// Data of a face/initial term: the operator applied to the exact solution.
  Complex term_data(const LossTerm& term, const Point& x, const Point& n) const;
  /// Residual A(v) - f of a field bundle at x.
  Complex interior_residual(const Bundle& v, const Point& x) const;
  /// Members of `family` satisfy the homogeneous interior equation.
  bool trefftz_for(const ActivationFamily& family) const;
};

PDEModel poisson_2d();
/// rho_kind: "const" (rho = 1) or "radial" (rho = x^2 + y^2).
PDEModel helmholtz_2d(double omega, const std::string& rho_kind);
/// speed_kind: "const" (c = speed) or "linear" (c = x + 1).
PDEModel wave_1p1d(const std::string& speed_kind, double speed = 10.0);

/// Model by name: "poisson", "helmholtz", "wave".
PDEModel make_model(const std::string& name, double omega, const std::string& coefficient, double speed);

/// max |A(net)| over the sample points; zero for Trefftz pairs.
double trefftz_residual(const ElementNetwork& net, const PDEModel& model, const std::vector<Point>& samples);

}  // namespace dgnn
