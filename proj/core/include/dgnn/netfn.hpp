#pragma once

#include <span>
#include <string>
#include <vector>

#include "dgnn/mesh.hpp"
#include "dgnn/types.hpp"

namespace dgnn {

enum class FamilyTag { SigmoidOneLayer, SigmoidTwoLayer, PlaneWave, PolyWave };

const char* to_string(FamilyTag tag);
FamilyTag family_from_string(const std::string& name);

struct ActivationFamily {
  FamilyTag tag = FamilyTag::SigmoidOneLayer;
  double omega = 0.0;      // plane-wave wavenumber
  double wavespeed = 0.0;  // poly-wave speed c

  bool is_trefftz() const { return tag == FamilyTag::PlaneWave || tag == FamilyTag::PolyWave; }
};

/// Complex logistic function and its first three derivatives.
struct SigmoidJet {
  Complex s, d1, d2, d3;
};
/// Throws NumericDomainError when |1 + e^{-xi}| < 1e-12 (pole of the sigmoid).
SigmoidJet sigmoid_jet(Complex xi);

/// One element's trainable function: a family, its nonlinear parameters and
/// the linear output coefficients.
///
/// Parameter layouts (flat, row-major):
///   sigmoid-1-layer  [W_1 b_1 W_2 b_2 ...], W_j in C^dim
///   sigmoid-2-layer  [W1 (m1 x dim), b1 (m1), W2 (m2 x m1), b2 (m2)]
///   plane-wave       [theta_1 .. theta_n]    (real, stored with zero imaginary part)
///   poly-wave        none in one space dimension (directions are +-1)
class ElementNetwork {
 public:
  ElementNetwork() = default;

  static ElementNetwork sigmoid_one_layer(int input_dim, std::vector<Complex> weights, std::vector<Complex> biases);
  static ElementNetwork sigmoid_two_layer(int input_dim, int m1, int m2, std::vector<Complex> w1,
                                          std::vector<Complex> b1, std::vector<Complex> w2, std::vector<Complex> b2);
  static ElementNetwork plane_wave(int input_dim, double omega, const std::vector<double>& angles);
  /// Degrees 0..degree in the moving variable d*x - c*t, shifted and scaled to
  /// the element so the monomials stay well conditioned. Width 2*degree+1.
  static ElementNetwork poly_wave(const Box& element, int time_axis, double wavespeed, int degree);

  const ActivationFamily& family() const { return family_; }
  int input_dim() const { return dim_; }
  /// Number of basis functions (= linear coefficients).
  int width() const { return width_; }
  /// Hidden neurons: n for single-layer families, m1 + m2 for two layers.
  int hidden_neurons() const;
  int m1() const { return m1_; }
  int m2() const { return m2_; }
  int degree() const { return degree_; }

  std::vector<Complex>& coefficients() { return coeffs_; }
  const std::vector<Complex>& coefficients() const { return coeffs_; }
  std::vector<Complex>& params() { return params_; }
  const std::vector<Complex>& params() const { return params_; }
  int num_params() const { return static_cast<int>(params_.size()); }
  /// Parameters are constrained to the real line (wave-family angles).
  bool real_params() const { return family_.tag == FamilyTag::PlaneWave; }

  /// Bundles of every basis function at `x`; out.size() == width().
  void eval_basis(const Point& x, std::span<Bundle> out) const;
  /// sum_j c_j phi_j(x)
  Bundle eval(const Point& x) const;

  /// grad[p] += 2 * sum_k conj(d eta_k / d p) * ybar_k where eta = eval(x),
  /// i.e. the conjugate-Wirtinger gradient of Re<ybar, eta> style kernels.
  /// For real parameters only the real part is accumulated.
  void accumulate_param_gradient(const Point& x, const Bundle& ybar, std::span<Complex> grad) const;
  /// Same contraction for the linear coefficients: grad[j] += 2 sum_k conj(phi_jk) ybar_k.
  void accumulate_coeff_gradient(const Point& x, const Bundle& ybar, std::span<Complex> grad) const;

 private:
  ActivationFamily family_;
  int dim_ = 0;
  int width_ = 0;
  int m1_ = 0;
  int m2_ = 0;
  int degree_ = 0;
  int time_axis_ = -1;
  Point center_{};
  double scale_ = 1.0;
  std::vector<Complex> params_;
  std::vector<Complex> coeffs_;

  void eval_sigmoid1(const Point& x, std::span<Bundle> out) const;
  void eval_sigmoid2(const Point& x, std::span<Bundle> out) const;
  void eval_plane_wave(const Point& x, std::span<Bundle> out) const;
  void eval_poly_wave(const Point& x, std::span<Bundle> out) const;
  void grad_sigmoid1(const Point& x, const Bundle& ybar, std::span<Complex> grad) const;
  void grad_sigmoid2(const Point& x, const Bundle& ybar, std::span<Complex> grad) const;
  void grad_plane_wave(const Point& x, const Bundle& ybar, std::span<Complex> grad) const;
};

/// One quadrature sample of a residual kernel: residual r = coef . eta(x) - offset.
struct KernelSample {
  Point x{};
  double weight = 0.0;
  Bundle coef;
  Complex offset{};
};

/// Quadrature-discretized functional sum_i w_i |coef_i . eta(x_i) - offset_i|^2
/// of a single element network (the shape of every term of the loss).
struct ResidualKernel {
  std::vector<KernelSample> samples;
};

double kernel_value(const ElementNetwork& net, const ResidualKernel& kernel);
/// Conjugate-Wirtinger gradient over the nonlinear parameters (real part only
/// for real parameters). Steepest descent direction is -gradient.
std::vector<Complex> param_gradient(const ElementNetwork& net, const ResidualKernel& kernel);

}  // namespace dgnn
