#include <Eigen/Dense>
#include <cmath>

#include "dgnn/initseed.hpp"
#include "dgnn/parallel.hpp"
#include "dgnn/quadrature.hpp"

namespace dgnn {

namespace {

constexpr int kMaxFactors = 16;

void legendre(int n, double s, double* p, double* dp, double* ddp) {
  p[0] = 1.0;
  dp[0] = 0.0;
  ddp[0] = 0.0;
  if (n == 1) return;
  p[1] = s;
  dp[1] = 1.0;
  ddp[1] = 0.0;
  for (int k = 1; k + 1 < n; ++k) {
    p[k + 1] = ((2 * k + 1) * s * p[k] - k * p[k - 1]) / (k + 1);
    dp[k + 1] = dp[k - 1] + (2 * k + 1) * p[k];
    ddp[k + 1] = ddp[k - 1] + (2 * k + 1) * dp[k];
  }
}

struct TensorEval {
  int dim = 0;
  int size = 0;
  double v[kMaxDim][kMaxFactors], d1[kMaxDim][kMaxFactors], d2[kMaxDim][kMaxFactors];
  int count[kMaxDim] = {};

  TensorEval(const std::vector<Basis1D>& axes, const Point& x) : dim(static_cast<int>(axes.size())) {
    size = 1;
    for (int a = 0; a < dim; ++a) {
      count[a] = axes[a].count;
      axes[a].eval(x[a], v[a], d1[a], d2[a]);
      size *= count[a];
    }
  }

  // Bundle of tensor function p (axis 0 fastest)
  Bundle at(int p) const {
    int idx[kMaxDim];
    for (int a = 0; a < dim; ++a) {
      idx[a] = p % count[a];
      p /= count[a];
    }
    Bundle b;
    double val = 1.0;
    for (int a = 0; a < dim; ++a) val *= v[a][idx[a]];
    b.value = val;
    for (int a = 0; a < dim; ++a) {
      double g = d1[a][idx[a]], h = d2[a][idx[a]];
      for (int c = 0; c < dim; ++c) {
        if (c == a) continue;
        g *= v[c][idx[c]];
        h *= v[c][idx[c]];
      }
      b.grad[a] = g;
      b.second[a] = h;
    }
    return b;
  }
};

Eigen::VectorXcd solve_local(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& rhs, int element) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  if (!(lu.rcond() > 1e-14)) {
    throw ConditioningError("local spectral problem on element " + std::to_string(element) + " is singular");
  }
  return lu.solve(rhs);
}

}  // namespace

void Basis1D::eval(double x, double* v, double* d1, double* d2) const {
  if (count < 1 || count > kMaxFactors) throw InputError("unsupported local basis size");
  const double s = 2.0 / (hi - lo);
  const double xi = (x - lo) * s - 1.0;
  double p[kMaxFactors], dp[kMaxFactors], ddp[kMaxFactors];
  legendre(count, xi, p, dp, ddp);
  for (int i = 0; i < count; ++i) {
    const double P = p[i], P1 = dp[i] * s, P2 = ddp[i] * s * s;
    switch (kind) {
      case Kind::Legendre:
        v[i] = P;
        d1[i] = P1;
        d2[i] = P2;
        break;
      case Kind::Bubble: {
        const double q = (x - lo) * (hi - x), q1 = lo + hi - 2.0 * x;
        v[i] = q * P;
        d1[i] = q1 * P + q * P1;
        d2[i] = -2.0 * P + 2.0 * q1 * P1 + q * P2;
        break;
      }
      case Kind::InitialZero: {
        const double q = x - lo;
        v[i] = q * P;
        d1[i] = P + q * P1;
        d2[i] = 2.0 * P1 + q * P2;
        break;
      }
      case Kind::InitialDoubleZero: {
        const double q = x - lo;
        v[i] = q * q * P;
        d1[i] = 2.0 * q * P + q * q * P1;
        d2[i] = 2.0 * P + 4.0 * q * P1 + q * q * P2;
        break;
      }
    }
  }
}

Bundle LocalSpectralField::eval(int element, const Point& x) const {
  const Local& loc = locals_[element];
  const TensorEval te(loc.axes, x);
  Bundle sum;
  for (int p = 0; p < te.size; ++p) {
    if (loc.coeffs[p] != Complex{}) sum += loc.coeffs[p] * te.at(p);
  }
  return sum;
}

bool LocalSpectralField::is_zero() const {
  for (const Local& l : locals_) {
    for (const Complex& c : l.coeffs) {
      if (c != Complex{}) return false;
    }
  }
  return true;
}

std::shared_ptr<LocalSpectralField> spectral_init_helmholtz(const PDEModel& model, const Mesh& mesh, int order,
                                                            double factor) {
  if (model.kind != ModelKind::Helmholtz) throw ConfigError("Helmholtz initializer needs a Helmholtz model");
  if (order < 1 || order + 1 > kMaxFactors) throw InputError("spectral order out of range");
  if (!(factor >= 1.0)) throw InputError("fictitious-domain factor must be >= 1");
  const int q = order + 6;
  const double w = model.omega;
  std::vector<LocalSpectralField::Local> locals(mesh.num_elements());
  parallel_chunks(mesh.num_elements(), num_threads(), [&](int, int b, int e) {
    for (int k = b; k < e; ++k) {
      LocalSpectralField::Local& loc = locals[k];
      loc.fictitious = mesh.element(k).box.scaled(factor);
      const Box& box = loc.fictitious;
      for (int a = 0; a < box.dim; ++a) loc.axes.push_back({Basis1D::Kind::Legendre, order + 1, box.lo[a], box.hi[a]});
      const int n = static_cast<int>(std::pow(order + 1, box.dim));
      Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
      Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
      std::vector<Bundle> phi(n);
      const QuadratureRule vol = element_rule(box, q);
      for (std::size_t i = 0; i < vol.size(); ++i) {
        const Point& x = vol.points[i];
        const TensorEval te(loc.axes, x);
        for (int p = 0; p < n; ++p) phi[p] = te.at(p);
        const double wr = w * w * model.rho(x);
        const Complex f = model.source(x);
        for (int p = 0; p < n; ++p) {
          rhs(p) += vol.weights[i] * f * phi[p].value;
          for (int r = 0; r < n; ++r) {
            Complex s = -wr * phi[r].value * phi[p].value;
            for (int a = 0; a < box.dim; ++a) s += phi[r].grad[a] * phi[p].grad[a];
            A(p, r) += vol.weights[i] * s;
          }
        }
      }
      // impedance term on every side of the fictitious box
      for (int axis = 0; axis < box.dim; ++axis) {
        for (int side = 0; side < 2; ++side) {
          Face f;
          f.axis = axis;
          f.box = box;
          f.box.lo[axis] = f.box.hi[axis] = side == 0 ? box.lo[axis] : box.hi[axis];
          const QuadratureRule sr = face_rule(f, q);
          for (std::size_t i = 0; i < sr.size(); ++i) {
            const TensorEval te(loc.axes, sr.points[i]);
            for (int p = 0; p < n; ++p) phi[p] = te.at(p);
            for (int p = 0; p < n; ++p) {
              for (int r = 0; r < n; ++r) A(p, r) += sr.weights[i] * Complex(0.0, w) * phi[r].value * phi[p].value;
            }
          }
        }
      }
      const Eigen::VectorXcd c = solve_local(A, rhs, k);
      loc.coeffs.assign(c.data(), c.data() + n);
    }
  });
  return std::make_shared<LocalSpectralField>(std::move(locals));
}

namespace {

// Galerkin solve of the space-time problem on a box that vanishes at its
// initial time and on its lateral sides.
void wave_galerkin(const PDEModel& model, int order, LocalSpectralField::Local& loc, int k) {
  const int q = order + 6;
  const int t = *model.time_axis;
  const Box& box = loc.fictitious;
  int n = 1;
  for (int a = 0; a < box.dim; ++a) {
    if (a == t) {
      loc.axes.push_back({Basis1D::Kind::InitialZero, order, box.lo[a], box.hi[a]});
    } else {
      loc.axes.push_back({Basis1D::Kind::Bubble, order - 1, box.lo[a], box.hi[a]});
    }
    n *= loc.axes.back().count;
  }
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  std::vector<Bundle> phi(n);
  const QuadratureRule vol = element_rule(box, q);
  for (std::size_t i = 0; i < vol.size(); ++i) {
    const Point& x = vol.points[i];
    const TensorEval te(loc.axes, x);
    for (int p = 0; p < n; ++p) phi[p] = te.at(p);
    const double c = model.wavespeed(x);
    const double ic2 = 1.0 / (c * c);
    const Complex f = model.source(x);
    for (int p = 0; p < n; ++p) {
      rhs(p) += vol.weights[i] * f * phi[p].value;
      for (int r = 0; r < n; ++r) {
        Complex s = -ic2 * phi[r].grad[t] * phi[p].grad[t];
        for (int a = 0; a < box.dim; ++a) {
          if (a != t) s += phi[r].grad[a] * phi[p].grad[a];
        }
        A(p, r) += vol.weights[i] * s;
      }
    }
  }
  Face top;
  top.axis = t;
  top.box = box;
  top.box.lo[t] = box.hi[t];
  const QuadratureRule sr = face_rule(top, q);
  for (std::size_t i = 0; i < sr.size(); ++i) {
    const TensorEval te(loc.axes, sr.points[i]);
    for (int p = 0; p < n; ++p) phi[p] = te.at(p);
    const double c = model.wavespeed(sr.points[i]);
    for (int p = 0; p < n; ++p) {
      for (int r = 0; r < n; ++r) A(p, r) += sr.weights[i] * phi[r].grad[t] * phi[p].value / (c * c);
    }
  }
  const Eigen::VectorXcd c = solve_local(A, rhs, k);
  loc.coeffs.assign(c.data(), c.data() + n);
}

// Least-squares fit of the equation by polynomials with zero value and zero
// x-derivative on the left side of the box. Only the zero polynomial solves
// the homogeneous equation with that data, so the fit is unique, and
// u - u_0 is a wave that varies slowly along characteristics.
void wave_spatial_cauchy(const PDEModel& model, int order, LocalSpectralField::Local& loc, int k) {
  const int q = order + 6;
  const int t = *model.time_axis;
  const Box& box = loc.fictitious;
  int n = 1;
  for (int a = 0; a < box.dim; ++a) {
    if (a == t) {
      loc.axes.push_back({Basis1D::Kind::Legendre, order + 1, box.lo[a], box.hi[a]});
    } else {
      loc.axes.push_back({Basis1D::Kind::InitialDoubleZero, order - 1, box.lo[a], box.hi[a]});
    }
    n *= loc.axes.back().count;
  }
  const QuadratureRule vol = element_rule(box, q);
  const int m = static_cast<int>(vol.size());
  Eigen::MatrixXcd M(m, n);
  Eigen::VectorXcd rhs(m);
  for (int i = 0; i < m; ++i) {
    const Point& x = vol.points[i];
    const TensorEval te(loc.axes, x);
    const double sw = std::sqrt(vol.weights[i]);
    const double c = model.wavespeed(x);
    for (int p = 0; p < n; ++p) {
      const Bundle phi = te.at(p);
      Complex op = phi.second[t] / (c * c);
      for (int a = 0; a < box.dim; ++a) {
        if (a != t) op -= phi.second[a];
      }
      M(i, p) = sw * op;
    }
    rhs(i) = sw * model.source(x);
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(M);
  if (qr.rank() < n) {
    throw ConditioningError("local spectral problem on element " + std::to_string(k) + " is rank deficient");
  }
  const Eigen::VectorXcd c = qr.solve(rhs);
  loc.coeffs.assign(c.data(), c.data() + n);
}

}  // namespace

std::shared_ptr<LocalSpectralField> spectral_init_wave(const PDEModel& model, const Mesh& mesh, int order,
                                                       double factor, WaveLocalForm form) {
  if (model.kind != ModelKind::Wave || !model.time_axis) throw ConfigError("wave initializer needs a wave model");
  if (order < 2 || order + 1 > kMaxFactors) throw InputError("spectral order out of range");
  if (!(factor >= 1.0)) throw InputError("fictitious-domain factor must be >= 1");
  const int t = *model.time_axis;
  std::vector<LocalSpectralField::Local> locals(mesh.num_elements());
  parallel_chunks(mesh.num_elements(), num_threads(), [&](int, int b, int e) {
    for (int k = b; k < e; ++k) {
      locals[k].fictitious = mesh.element(k).box.scaled(factor, ~(1u << t));
      if (form == WaveLocalForm::SpatialCauchy) {
        wave_spatial_cauchy(model, order, locals[k], k);
      } else {
        wave_galerkin(model, order, locals[k], k);
      }
    }
  });
  return std::make_shared<LocalSpectralField>(std::move(locals));
}

}  // namespace dgnn
