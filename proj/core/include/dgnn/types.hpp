#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace dgnn {

using Complex = std::complex<double>;

/// Largest supported total (space or space-time) dimension.
inline constexpr int kMaxDim = 4;

/// Number of entries of a Bundle for a problem of dimension `dim`.
constexpr int bundle_size(int dim) { return 1 + 2 * dim; }

using Point = std::array<double, kMaxDim>;

/// Pointwise jet of a scalar field: value, first derivatives and the pure
/// second derivatives along each axis (enough for Laplacians and d_tt).
///
/// The same layout doubles as the coefficient row of a linear differential
/// operator, so an operator applied to a field is a dot product of bundles.
struct Bundle {
  Complex value{};
  std::array<Complex, kMaxDim> grad{};
  std::array<Complex, kMaxDim> second{};

  Bundle& operator+=(const Bundle& o) {
    value += o.value;
    for (int a = 0; a < kMaxDim; ++a) {
      grad[a] += o.grad[a];
      second[a] += o.second[a];
    }
    return *this;
  }
  Bundle& operator*=(Complex s) {
    value *= s;
    for (int a = 0; a < kMaxDim; ++a) {
      grad[a] *= s;
      second[a] *= s;
    }
    return *this;
  }
  friend Bundle operator+(Bundle a, const Bundle& b) { return a += b; }
  friend Bundle operator*(Complex s, Bundle b) { return b *= s; }

  // flat access: 0 -> value, 1..dim -> grad, dim+1..2dim -> second
  Complex& entry(int k, int dim) {
    if (k == 0) return value;
    return k <= dim ? grad[k - 1] : second[k - 1 - dim];
  }
  Complex entry(int k, int dim) const {
    if (k == 0) return value;
    return k <= dim ? grad[k - 1] : second[k - 1 - dim];
  }
};

/// Sum_k coef_k * field_k, i.e. the operator row `coef` applied to `field`.
inline Complex apply(const Bundle& coef, const Bundle& field, int dim) {
  Complex s = coef.value * field.value;
  for (int a = 0; a < dim; ++a) s += coef.grad[a] * field.grad[a] + coef.second[a] * field.second[a];
  return s;
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed geometry, counts or parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Evaluation left the domain where the activation is defined (sigmoid poles).
class NumericDomainError : public Error {
 public:
  using Error::Error;
};

/// The Galerkin system could not be factorized even after ridge escalation.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent experiment or family/model configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dgnn
