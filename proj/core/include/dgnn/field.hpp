#pragma once

#include <memory>
#include <vector>

#include "dgnn/models.hpp"
#include "dgnn/netfn.hpp"

namespace dgnn {

/// Piecewise field on a mesh: evaluation needs the owning element because
/// the DG space is discontinuous across faces.
class Field {
 public:
  virtual ~Field() = default;
  virtual Bundle eval(int element, const Point& x) const = 0;
  virtual bool is_zero() const { return false; }
};

class ZeroField final : public Field {
 public:
  Bundle eval(int, const Point&) const override { return {}; }
  bool is_zero() const override { return true; }
};

/// The model's closed-form solution, identical on every element.
class ExactField final : public Field {
 public:
  explicit ExactField(const PDEModel& model) : exact_(model.exact) {}
  Bundle eval(int, const Point& x) const override { return exact_(x); }

 private:
  std::function<Bundle(const Point&)> exact_;
};

/// One network per element (a candidate or a frozen correction).
class NetworkSet final : public Field {
 public:
  NetworkSet() = default;
  explicit NetworkSet(std::vector<ElementNetwork> nets) : nets_(std::move(nets)) {}

  Bundle eval(int element, const Point& x) const override { return nets_[element].eval(x); }

  int size() const { return static_cast<int>(nets_.size()); }
  ElementNetwork& operator[](int k) { return nets_[k]; }
  const ElementNetwork& operator[](int k) const { return nets_[k]; }
  std::vector<ElementNetwork>& networks() { return nets_; }
  const std::vector<ElementNetwork>& networks() const { return nets_; }

  /// Total linear coefficients.
  int dofs() const;
  int neurons() const;
  int num_params() const;
  /// Offsets of each element's coefficients / parameters in flat vectors.
  std::vector<int> coeff_offsets() const;
  std::vector<int> param_offsets() const;

  std::vector<Complex> flat_params() const;
  void set_flat_params(const std::vector<Complex>& p);
  std::vector<Complex> flat_coeffs() const;
  void set_flat_coeffs(const std::vector<Complex>& c);

 private:
  std::vector<ElementNetwork> nets_;
};

/// u_r = u_0 + sum_j xi_j. Frozen corrections are shared read-only.
class DGSolution final : public Field {
 public:
  explicit DGSolution(std::shared_ptr<const Field> u0 = std::make_shared<ZeroField>()) : u0_(std::move(u0)) {}

  Bundle eval(int element, const Point& x) const override;
  bool is_zero() const override { return u0_->is_zero() && frozen_.empty(); }

  void freeze(NetworkSet correction) { frozen_.push_back(std::make_shared<const NetworkSet>(std::move(correction))); }
  const Field& initial() const { return *u0_; }
  std::shared_ptr<const Field> initial_ptr() const { return u0_; }
  int num_corrections() const { return static_cast<int>(frozen_.size()); }
  const NetworkSet& correction(int j) const { return *frozen_[j]; }

 private:
  std::shared_ptr<const Field> u0_;
  std::vector<std::shared_ptr<const NetworkSet>> frozen_;
};

/// Sum of two fields (used to evaluate u_{r-1} + candidate).
class SumField final : public Field {
 public:
  SumField(const Field& a, const Field& b) : a_(a), b_(b) {}
  Bundle eval(int element, const Point& x) const override { return a_.eval(element, x) + b_.eval(element, x); }

 private:
  const Field& a_;
  const Field& b_;
};

}  // namespace dgnn
