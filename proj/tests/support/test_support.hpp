#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "dgnn/assembly.hpp"
#include "dgnn/field.hpp"
#include "dgnn/mesh.hpp"
#include "dgnn/models.hpp"
#include "dgnn/trainer.hpp"

namespace dgnn::support {

inline double rel_diff(Complex a, Complex b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

inline Mesh model_mesh(const PDEModel& model, int cells) {
  return build_mesh(model.bounds, std::vector<int>(model.dim, cells), model.time_axis);
}

// Homogeneous Helmholtz problem whose solution is a single plane wave.
inline PDEModel plane_wave_model(double omega, double theta) {
  PDEModel m = helmholtz_2d(omega, "const");
  m.source = [](const Point&) { return Complex(0); };
  m.exact = [omega, theta](const Point& x) {
    const double d0 = std::cos(theta), d1 = std::sin(theta);
    const Complex e = std::exp(Complex(0, omega * (d0 * x[0] + d1 * x[1])));
    Bundle b;
    b.value = e;
    b.grad[0] = Complex(0, omega * d0) * e;
    b.grad[1] = Complex(0, omega * d1) * e;
    b.second[0] = -omega * omega * d0 * d0 * e;
    b.second[1] = -omega * omega * d1 * d1 * e;
    return b;
  };
  return m;
}

/// Max relative error between the analytic flat parameter gradient of J and
/// central differences of J along real and imaginary directions.
inline double fd_gradient_error(const LossPlan& plan, NetworkSet cand, const std::vector<double>& lambda, bool skip,
                                double step = 1e-6, int max_checks = 24) {
  std::vector<Complex> grad;
  loss_gradient(plan, cand, lambda, skip, grad);
  std::vector<Complex> p = cand.flat_params();
  const int n = static_cast<int>(p.size());
  double gmax = 0.0;
  for (const Complex& g : grad) gmax = std::max(gmax, std::abs(g));
  double worst = 0.0;
  const int stride = std::max(1, n / max_checks);
  bool real_only = false;
  for (const auto& net : cand.networks()) real_only = real_only || net.real_params();
  for (int k = 0; k < n; k += stride) {
    for (int part = 0; part < (real_only ? 1 : 2); ++part) {
      const Complex dir = part == 0 ? Complex(1, 0) : Complex(0, 1);
      std::vector<Complex> q = p;
      q[k] = p[k] + step * dir;
      cand.set_flat_params(q);
      const double jp = evaluate_loss(plan, &cand, lambda, skip).total;
      q[k] = p[k] - step * dir;
      cand.set_flat_params(q);
      const double jm = evaluate_loss(plan, &cand, lambda, skip).total;
      cand.set_flat_params(p);
      const double fd = (jp - jm) / (2 * step);
      // dJ along dir = Re(conj(grad) * dir)
      const double an = std::real(std::conj(grad[k]) * dir);
      worst = std::max(worst, std::abs(fd - an) / std::max(gmax, 1e-300));
    }
  }
  return worst;
}

/// Random complex perturbation of every coefficient (and, if `params`, of
/// every nonlinear parameter, keeping real families real).
inline void perturb(NetworkSet& set, std::uint64_t seed, double scale, bool params) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  for (auto& net : set.networks()) {
    for (auto& c : net.coefficients()) c = Complex(n(rng), n(rng));
    if (!params) continue;
    for (auto& p : net.params()) p += scale * (net.real_params() ? Complex(n(rng), 0) : Complex(n(rng), n(rng)));
  }
}

}  // namespace dgnn::support
