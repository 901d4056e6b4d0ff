#pragma once

#include <memory>
#include <vector>

#include "dgnn/field.hpp"
#include "dgnn/mesh.hpp"
#include "dgnn/models.hpp"

namespace dgnn {

/// 1D polynomial factors of the local tensor bases, on [lo, hi].
///   Legendre:     P_i(s),                  i < count
///   Bubble:       (x - lo)(hi - x) P_i(s)  (vanishes at both ends)
///   InitialZero:  (x - lo) P_i(s)          (vanishes at lo)
struct Basis1D {
  enum class Kind { Legendre, Bubble, InitialZero, InitialDoubleZero };
  Kind kind = Kind::Legendre;
  int count = 0;
  double lo = -1.0;
  double hi = 1.0;

  int degree() const { return kind == Kind::Legendre ? count - 1 : kind == Kind::InitialDoubleZero || kind == Kind::Bubble ? count + 1 : count; }
  /// value, first and second derivative of every factor at x.
  void eval(double x, double* v, double* d1, double* d2) const;
};

/// Piecewise polynomial u_0 from independent local solves on fictitious
/// boxes; element k evaluates its own local solution.
class LocalSpectralField final : public Field {
 public:
  struct Local {
    Box fictitious;
    std::vector<Basis1D> axes;
    std::vector<Complex> coeffs;  // tensor order, axis 0 fastest
  };

  explicit LocalSpectralField(std::vector<Local> locals) : locals_(std::move(locals)) {}

  Bundle eval(int element, const Point& x) const override;
  bool is_zero() const override;

  int num_elements() const { return static_cast<int>(locals_.size()); }
  const Local& local(int k) const { return locals_[k]; }
  int local_size() const { return locals_.empty() ? 0 : static_cast<int>(locals_[0].coeffs.size()); }

 private:
  std::vector<Local> locals_;
};

/// Local impedance problems in S_m on each element scaled by `factor`:
/// (grad u, grad v) - w^2 (rho u, v) + i w <u, v>_boundary = (f, v).
std::shared_ptr<LocalSpectralField> spectral_init_helmholtz(const PDEModel& model, const Mesh& mesh, int order = 3,
                                                            double factor = 1.1);

/// Local space-time problems in S_m constrained to vanish at the element's
/// initial time and on the lateral boundary of the spatially enlarged box:
/// (u_x, v_x) - (c^-2 u_t, v_t) + <c^-2 u_t, v>_top = (f, v).
/// Galerkin: the constrained space-time problem below. Its continuous form
/// leaves the initial velocity free, and for fast waves the discrete solution
/// picks up oscillations the polynomial space cannot follow.
/// SpatialCauchy: least-squares particular solution in the full tensor space
/// of degree `order` with zero Cauchy data on the left side of the box.
enum class WaveLocalForm { Galerkin, SpatialCauchy };

std::shared_ptr<LocalSpectralField> spectral_init_wave(const PDEModel& model, const Mesh& mesh, int order = 5,
                                                       double factor = 1.1,
                                                       WaveLocalForm form = WaveLocalForm::Galerkin);

}  // namespace dgnn
