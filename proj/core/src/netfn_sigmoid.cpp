#include <vector>

#include "dgnn/netfn.hpp"

namespace dgnn {

namespace {

// Per-thread scratch for the two-layer forward/backward passes.
struct TwoLayerScratch {
  std::vector<SigmoidJet> j1, j2;
  std::vector<Complex> dz1, hz1;  // m1 x dim
  std::vector<Complex> g, h;      // m2 x dim
  std::vector<Complex> u2bar, gbar, hbar, z1bar, dz1bar, hz1bar;

  void resize(int m1, int m2, int dim) {
    j1.resize(m1);
    j2.resize(m2);
    dz1.resize(m1 * dim);
    hz1.resize(m1 * dim);
    g.resize(m2 * dim);
    h.resize(m2 * dim);
    u2bar.resize(m2);
    gbar.resize(m2 * dim);
    hbar.resize(m2 * dim);
    z1bar.resize(m1);
    dz1bar.resize(m1 * dim);
    hz1bar.resize(m1 * dim);
  }
};

TwoLayerScratch& scratch() {
  thread_local TwoLayerScratch s;
  return s;
}

}  // namespace

void ElementNetwork::eval_sigmoid1(const Point& x, std::span<Bundle> out) const {
  const int d = dim_;
  const int stride = d + 1;
  for (int j = 0; j < width_; ++j) {
    const Complex* w = &params_[j * stride];
    Complex u = w[d];
    for (int a = 0; a < d; ++a) u += w[a] * x[a];
    const SigmoidJet s = sigmoid_jet(u);
    Bundle& b = out[j];
    b.value = s.s;
    for (int a = 0; a < d; ++a) {
      b.grad[a] = s.d1 * w[a];
      b.second[a] = s.d2 * w[a] * w[a];
    }
  }
}

void ElementNetwork::grad_sigmoid1(const Point& x, const Bundle& ybar, std::span<Complex> grad) const {
  const int d = dim_;
  const int stride = d + 1;
  Complex yv = std::conj(ybar.value);
  std::array<Complex, kMaxDim> yg{}, yh{};
  for (int a = 0; a < d; ++a) {
    yg[a] = std::conj(ybar.grad[a]);
    yh[a] = std::conj(ybar.second[a]);
  }
  for (int j = 0; j < width_; ++j) {
    const Complex* w = &params_[j * stride];
    Complex u = w[d];
    for (int a = 0; a < d; ++a) u += w[a] * x[a];
    const SigmoidJet s = sigmoid_jet(u);
    const Complex c = coeffs_[j];
    Complex db = yv * s.d1;
    for (int a = 0; a < d; ++a) db += yg[a] * s.d2 * w[a] + yh[a] * s.d3 * w[a] * w[a];
    db *= c;
    for (int a = 0; a < d; ++a) {
      const Complex dw = x[a] * db + c * (yg[a] * s.d1 + 2.0 * yh[a] * s.d2 * w[a]);
      grad[j * stride + a] += 2.0 * std::conj(dw);
    }
    grad[j * stride + d] += 2.0 * std::conj(db);
  }
}

void ElementNetwork::eval_sigmoid2(const Point& x, std::span<Bundle> out) const {
  const int d = dim_;
  const Complex* W1 = params_.data();
  const Complex* b1 = W1 + m1_ * d;
  const Complex* W2 = b1 + m1_;
  const Complex* b2 = W2 + m2_ * m1_;
  TwoLayerScratch& sc = scratch();
  sc.resize(m1_, m2_, d);
  for (int i = 0; i < m1_; ++i) {
    Complex u = b1[i];
    for (int a = 0; a < d; ++a) u += W1[i * d + a] * x[a];
    sc.j1[i] = sigmoid_jet(u);
    for (int a = 0; a < d; ++a) {
      const Complex w = W1[i * d + a];
      sc.dz1[i * d + a] = sc.j1[i].d1 * w;
      sc.hz1[i * d + a] = sc.j1[i].d2 * w * w;
    }
  }
  for (int l = 0; l < m2_; ++l) {
    Complex u = b2[l];
    std::array<Complex, kMaxDim> G{}, H{};
    for (int i = 0; i < m1_; ++i) {
      const Complex w = W2[l * m1_ + i];
      u += w * sc.j1[i].s;
      for (int a = 0; a < d; ++a) {
        G[a] += w * sc.dz1[i * d + a];
        H[a] += w * sc.hz1[i * d + a];
      }
    }
    const SigmoidJet s = sigmoid_jet(u);
    Bundle& b = out[l];
    b.value = s.s;
    for (int a = 0; a < d; ++a) {
      b.grad[a] = s.d1 * G[a];
      b.second[a] = s.d2 * G[a] * G[a] + s.d1 * H[a];
    }
  }
}

void ElementNetwork::grad_sigmoid2(const Point& x, const Bundle& ybar, std::span<Complex> grad) const {
  const int d = dim_;
  const Complex* W1 = params_.data();
  const Complex* b1 = W1 + m1_ * d;
  const Complex* W2 = b1 + m1_;
  const Complex* b2 = W2 + m2_ * m1_;
  const int off_b1 = m1_ * d;
  const int off_W2 = off_b1 + m1_;
  const int off_b2 = off_W2 + m2_ * m1_;
  TwoLayerScratch& sc = scratch();
  sc.resize(m1_, m2_, d);

  // forward
  for (int i = 0; i < m1_; ++i) {
    Complex u = b1[i];
    for (int a = 0; a < d; ++a) u += W1[i * d + a] * x[a];
    sc.j1[i] = sigmoid_jet(u);
    for (int a = 0; a < d; ++a) {
      const Complex w = W1[i * d + a];
      sc.dz1[i * d + a] = sc.j1[i].d1 * w;
      sc.hz1[i * d + a] = sc.j1[i].d2 * w * w;
    }
  }
  for (int l = 0; l < m2_; ++l) {
    Complex u = b2[l];
    for (int a = 0; a < d; ++a) sc.g[l * d + a] = sc.h[l * d + a] = Complex{};
    for (int i = 0; i < m1_; ++i) {
      const Complex w = W2[l * m1_ + i];
      u += w * sc.j1[i].s;
      for (int a = 0; a < d; ++a) {
        sc.g[l * d + a] += w * sc.dz1[i * d + a];
        sc.h[l * d + a] += w * sc.hz1[i * d + a];
      }
    }
    sc.j2[l] = sigmoid_jet(u);
  }

  // reverse, holomorphic derivatives of S = sum_k conj(ybar_k) eta_k
  const Complex yv = std::conj(ybar.value);
  std::array<Complex, kMaxDim> yg{}, yh{};
  for (int a = 0; a < d; ++a) {
    yg[a] = std::conj(ybar.grad[a]);
    yh[a] = std::conj(ybar.second[a]);
  }
  for (int l = 0; l < m2_; ++l) {
    const SigmoidJet& s = sc.j2[l];
    const Complex c = coeffs_[l];
    Complex u2 = yv * s.d1;
    for (int a = 0; a < d; ++a) {
      const Complex G = sc.g[l * d + a];
      const Complex H = sc.h[l * d + a];
      u2 += yg[a] * s.d2 * G + yh[a] * (s.d3 * G * G + s.d2 * H);
      sc.gbar[l * d + a] = c * (yg[a] * s.d1 + 2.0 * yh[a] * s.d2 * G);
      sc.hbar[l * d + a] = c * yh[a] * s.d1;
    }
    sc.u2bar[l] = c * u2;
    grad[off_b2 + l] += 2.0 * std::conj(sc.u2bar[l]);
  }
  for (int i = 0; i < m1_; ++i) {
    sc.z1bar[i] = Complex{};
    for (int a = 0; a < d; ++a) sc.dz1bar[i * d + a] = sc.hz1bar[i * d + a] = Complex{};
  }
  for (int l = 0; l < m2_; ++l) {
    for (int i = 0; i < m1_; ++i) {
      const Complex w = W2[l * m1_ + i];
      Complex dw = sc.u2bar[l] * sc.j1[i].s;
      sc.z1bar[i] += sc.u2bar[l] * w;
      for (int a = 0; a < d; ++a) {
        dw += sc.gbar[l * d + a] * sc.dz1[i * d + a] + sc.hbar[l * d + a] * sc.hz1[i * d + a];
        sc.dz1bar[i * d + a] += sc.gbar[l * d + a] * w;
        sc.hz1bar[i * d + a] += sc.hbar[l * d + a] * w;
      }
      grad[off_W2 + l * m1_ + i] += 2.0 * std::conj(dw);
    }
  }
  for (int i = 0; i < m1_; ++i) {
    const SigmoidJet& s = sc.j1[i];
    Complex u1 = sc.z1bar[i] * s.d1;
    for (int a = 0; a < d; ++a) {
      const Complex w = W1[i * d + a];
      u1 += sc.dz1bar[i * d + a] * s.d2 * w + sc.hz1bar[i * d + a] * s.d3 * w * w;
    }
    for (int a = 0; a < d; ++a) {
      const Complex w = W1[i * d + a];
      const Complex dw = u1 * x[a] + sc.dz1bar[i * d + a] * s.d1 + 2.0 * sc.hz1bar[i * d + a] * s.d2 * w;
      grad[i * d + a] += 2.0 * std::conj(dw);
    }
    grad[off_b1 + i] += 2.0 * std::conj(u1);
  }
}

}  // namespace dgnn
