#include <cmath>

#include "dgnn/netfn.hpp"

namespace dgnn {

namespace {

constexpr Complex kI{0.0, 1.0};

}  // namespace

void ElementNetwork::eval_plane_wave(const Point& x, std::span<Bundle> out) const {
  const double w = family_.omega;
  for (int j = 0; j < width_; ++j) {
    const double th = params_[j].real();
    const double d[2] = {std::cos(th), std::sin(th)};
    const Complex e = std::exp(kI * (w * (d[0] * x[0] + d[1] * x[1])));
    Bundle& b = out[j];
    b.value = e;
    for (int a = 0; a < 2; ++a) {
      b.grad[a] = kI * w * d[a] * e;
      b.second[a] = -w * w * d[a] * d[a] * e;
    }
  }
}

void ElementNetwork::grad_plane_wave(const Point& x, const Bundle& ybar, std::span<Complex> grad) const {
  const double w = family_.omega;
  for (int j = 0; j < width_; ++j) {
    const double th = params_[j].real();
    const double d[2] = {std::cos(th), std::sin(th)};
    const double dp[2] = {-std::sin(th), std::cos(th)};
    const Complex e = std::exp(kI * (w * (d[0] * x[0] + d[1] * x[1])));
    const Complex de = kI * w * (dp[0] * x[0] + dp[1] * x[1]) * e;
    const Complex c = coeffs_[j];
    Complex s = std::conj(c * de) * ybar.value;
    for (int a = 0; a < 2; ++a) {
      const Complex dg = kI * w * (dp[a] * e + d[a] * de);
      const Complex dh = -w * w * (2.0 * d[a] * dp[a] * e + d[a] * d[a] * de);
      s += std::conj(c * dg) * ybar.grad[a] + std::conj(c * dh) * ybar.second[a];
    }
    grad[j] += Complex(2.0 * s.real(), 0.0);
  }
}

void ElementNetwork::eval_poly_wave(const Point& x, std::span<Bundle> out) const {
  const int ts = time_axis_;
  const int xs = 1 - ts;
  const double c = family_.wavespeed;
  const double dx = x[xs] - center_[xs];
  const double dt = x[ts] - center_[ts];
  out[0] = Bundle{};
  out[0].value = 1.0;
  int j = 1;
  for (int dir : {1, -1}) {
    const double s = (dir * dx - c * dt) / scale_;
    const double sx = dir / scale_;
    const double st = -c / scale_;
    double pw_m2 = 1.0, pw_m1 = 1.0, pw = s;  // s^{l-2}, s^{l-1}, s^l for l = 1
    for (int l = 1; l <= degree_; ++l) {
      if (l >= 2) {
        pw_m2 = pw_m1;
        pw_m1 = pw;
        pw *= s;
      }
      const double d1 = l * pw_m1;
      const double d2 = l >= 2 ? l * (l - 1) * pw_m2 : 0.0;
      Bundle& b = out[j++];
      b = Bundle{};
      b.value = pw;
      b.grad[xs] = d1 * sx;
      b.grad[ts] = d1 * st;
      b.second[xs] = d2 * sx * sx;
      b.second[ts] = d2 * st * st;
    }
  }
}

}  // namespace dgnn
