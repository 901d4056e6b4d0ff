#include <cmath>
#include <numbers>

#include "dgnn/netfn.hpp"

namespace dgnn {

const char* to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::SigmoidOneLayer: return "sigmoid-1-layer";
    case FamilyTag::SigmoidTwoLayer: return "sigmoid-2-layer";
    case FamilyTag::PlaneWave: return "plane-wave";
    case FamilyTag::PolyWave: return "poly-wave";
  }
  return "?";
}

FamilyTag family_from_string(const std::string& name) {
  for (FamilyTag t : {FamilyTag::SigmoidOneLayer, FamilyTag::SigmoidTwoLayer, FamilyTag::PlaneWave,
                      FamilyTag::PolyWave}) {
    if (name == to_string(t)) return t;
  }
  throw ConfigError("unknown activation family '" + name + "'");
}

SigmoidJet sigmoid_jet(Complex xi) {
  SigmoidJet j;
  if (xi.imag() == 0.0) {
    const double r = xi.real();
    const double s = r >= 0.0 ? 1.0 / (1.0 + std::exp(-r)) : std::exp(r) / (1.0 + std::exp(r));
    const double d1 = s * (1.0 - s);
    j.s = s;
    j.d1 = d1;
    j.d2 = d1 * (1.0 - 2.0 * s);
    j.d3 = d1 * (1.0 - 6.0 * s + 6.0 * s * s);
    return j;
  }
  Complex s;
  if (xi.real() >= 0.0) {
    const Complex e = std::exp(-xi);
    const Complex den = 1.0 + e;
    if (std::abs(den) < 1e-12) throw NumericDomainError("sigmoid argument at a pole");
    s = 1.0 / den;
  } else {
    const Complex e = std::exp(xi);
    const Complex den = 1.0 + e;
    if (std::abs(den) < 1e-12) throw NumericDomainError("sigmoid argument at a pole");
    s = e / den;
  }
  const Complex d1 = s * (1.0 - s);
  j.s = s;
  j.d1 = d1;
  j.d2 = d1 * (1.0 - 2.0 * s);
  j.d3 = d1 * (1.0 - 6.0 * s + 6.0 * s * s);
  return j;
}

ElementNetwork ElementNetwork::sigmoid_one_layer(int input_dim, std::vector<Complex> weights,
                                                 std::vector<Complex> biases) {
  if (input_dim < 1 || input_dim > kMaxDim) throw InputError("bad input dimension");
  const std::size_t n = biases.size();
  if (n == 0 || weights.size() != n * input_dim) throw InputError("sigmoid-1-layer: weights must be n x dim");
  ElementNetwork net;
  net.family_.tag = FamilyTag::SigmoidOneLayer;
  net.dim_ = input_dim;
  net.width_ = static_cast<int>(n);
  net.params_.reserve(n * (input_dim + 1));
  for (std::size_t j = 0; j < n; ++j) {
    for (int a = 0; a < input_dim; ++a) net.params_.push_back(weights[j * input_dim + a]);
    net.params_.push_back(biases[j]);
  }
  net.coeffs_.assign(n, Complex{});
  return net;
}

ElementNetwork ElementNetwork::sigmoid_two_layer(int input_dim, int m1, int m2, std::vector<Complex> w1,
                                                 std::vector<Complex> b1, std::vector<Complex> w2,
                                                 std::vector<Complex> b2) {
  if (input_dim < 1 || input_dim > kMaxDim) throw InputError("bad input dimension");
  if (m1 < 1 || m2 < 1) throw InputError("sigmoid-2-layer: layer widths must be positive");
  if (w1.size() != static_cast<std::size_t>(m1 * input_dim) || b1.size() != static_cast<std::size_t>(m1) ||
      w2.size() != static_cast<std::size_t>(m2 * m1) || b2.size() != static_cast<std::size_t>(m2)) {
    throw InputError("sigmoid-2-layer: parameter shapes do not match (m1, m2)");
  }
  ElementNetwork net;
  net.family_.tag = FamilyTag::SigmoidTwoLayer;
  net.dim_ = input_dim;
  net.m1_ = m1;
  net.m2_ = m2;
  net.width_ = m2;
  net.params_ = std::move(w1);
  net.params_.insert(net.params_.end(), b1.begin(), b1.end());
  net.params_.insert(net.params_.end(), w2.begin(), w2.end());
  net.params_.insert(net.params_.end(), b2.begin(), b2.end());
  net.coeffs_.assign(m2, Complex{});
  return net;
}

ElementNetwork ElementNetwork::plane_wave(int input_dim, double omega, const std::vector<double>& angles) {
  if (input_dim != 2) throw ConfigError("plane-wave family is implemented for two space dimensions");
  if (angles.empty()) throw InputError("plane-wave: need at least one direction");
  ElementNetwork net;
  net.family_.tag = FamilyTag::PlaneWave;
  net.family_.omega = omega;
  net.dim_ = input_dim;
  net.width_ = static_cast<int>(angles.size());
  for (double t : angles) net.params_.emplace_back(t, 0.0);
  net.coeffs_.assign(angles.size(), Complex{});
  return net;
}

ElementNetwork ElementNetwork::poly_wave(const Box& element, int time_axis, double wavespeed, int degree) {
  if (element.dim != 2 || time_axis < 0 || time_axis > 1) {
    throw ConfigError("poly-wave family is implemented for one space dimension plus time");
  }
  if (degree < 0) throw InputError("poly-wave: negative degree");
  if (!(wavespeed > 0.0)) throw InputError("poly-wave: wavespeed must be positive");
  ElementNetwork net;
  net.family_.tag = FamilyTag::PolyWave;
  net.family_.wavespeed = wavespeed;
  net.dim_ = 2;
  net.degree_ = degree;
  net.time_axis_ = time_axis;
  net.width_ = 2 * degree + 1;
  net.center_ = element.center();
  const int space_axis = 1 - time_axis;
  net.scale_ = 0.5 * (element.width(space_axis) + wavespeed * element.width(time_axis));
  net.coeffs_.assign(net.width_, Complex{});
  return net;
}

int ElementNetwork::hidden_neurons() const {
  return family_.tag == FamilyTag::SigmoidTwoLayer ? m1_ + m2_ : width_;
}

void ElementNetwork::eval_basis(const Point& x, std::span<Bundle> out) const {
  switch (family_.tag) {
    case FamilyTag::SigmoidOneLayer: eval_sigmoid1(x, out); break;
    case FamilyTag::SigmoidTwoLayer: eval_sigmoid2(x, out); break;
    case FamilyTag::PlaneWave: eval_plane_wave(x, out); break;
    case FamilyTag::PolyWave: eval_poly_wave(x, out); break;
  }
}

Bundle ElementNetwork::eval(const Point& x) const {
  Bundle basis[64];
  std::vector<Bundle> heap;
  std::span<Bundle> out;
  if (width_ <= 64) {
    out = std::span<Bundle>(basis, width_);
  } else {
    heap.resize(width_);
    out = heap;
  }
  eval_basis(x, out);
  Bundle sum;
  for (int j = 0; j < width_; ++j) sum += coeffs_[j] * out[j];
  return sum;
}

void ElementNetwork::accumulate_param_gradient(const Point& x, const Bundle& ybar, std::span<Complex> grad) const {
  switch (family_.tag) {
    case FamilyTag::SigmoidOneLayer: grad_sigmoid1(x, ybar, grad); break;
    case FamilyTag::SigmoidTwoLayer: grad_sigmoid2(x, ybar, grad); break;
    case FamilyTag::PlaneWave: grad_plane_wave(x, ybar, grad); break;
    case FamilyTag::PolyWave: break;
  }
}

void ElementNetwork::accumulate_coeff_gradient(const Point& x, const Bundle& ybar, std::span<Complex> grad) const {
  std::vector<Bundle> basis(width_);
  eval_basis(x, basis);
  const int K = bundle_size(dim_);
  for (int j = 0; j < width_; ++j) {
    Complex s{};
    for (int k = 0; k < K; ++k) s += std::conj(basis[j].entry(k, dim_)) * ybar.entry(k, dim_);
    grad[j] += 2.0 * s;
  }
}

double kernel_value(const ElementNetwork& net, const ResidualKernel& kernel) {
  double j = 0.0;
  for (const KernelSample& s : kernel.samples) {
    const Complex r = apply(s.coef, net.eval(s.x), net.input_dim()) - s.offset;
    j += s.weight * std::norm(r);
  }
  return j;
}

std::vector<Complex> param_gradient(const ElementNetwork& net, const ResidualKernel& kernel) {
  std::vector<Complex> g(net.num_params());
  const int dim = net.input_dim();
  const int K = bundle_size(dim);
  for (const KernelSample& s : kernel.samples) {
    const Complex r = apply(s.coef, net.eval(s.x), dim) - s.offset;
    // J = w |r|^2, dJ/d conj(eta_k) = w r conj(coef_k)
    Bundle ybar;
    for (int k = 0; k < K; ++k) ybar.entry(k, dim) = s.weight * r * std::conj(s.coef.entry(k, dim));
    net.accumulate_param_gradient(s.x, ybar, g);
  }
  return g;
}

}  // namespace dgnn
