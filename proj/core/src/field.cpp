#include "dgnn/field.hpp"

namespace dgnn {

int NetworkSet::dofs() const {
  int n = 0;
  for (const auto& net : nets_) n += net.width();
  return n;
}

int NetworkSet::neurons() const {
  int n = 0;
  for (const auto& net : nets_) n += net.hidden_neurons();
  return n;
}

int NetworkSet::num_params() const {
  int n = 0;
  for (const auto& net : nets_) n += net.num_params();
  return n;
}

std::vector<int> NetworkSet::coeff_offsets() const {
  std::vector<int> off(nets_.size() + 1, 0);
  for (std::size_t k = 0; k < nets_.size(); ++k) off[k + 1] = off[k] + nets_[k].width();
  return off;
}

std::vector<int> NetworkSet::param_offsets() const {
  std::vector<int> off(nets_.size() + 1, 0);
  for (std::size_t k = 0; k < nets_.size(); ++k) off[k + 1] = off[k] + nets_[k].num_params();
  return off;
}

std::vector<Complex> NetworkSet::flat_params() const {
  std::vector<Complex> p;
  p.reserve(num_params());
  for (const auto& net : nets_) p.insert(p.end(), net.params().begin(), net.params().end());
  return p;
}

void NetworkSet::set_flat_params(const std::vector<Complex>& p) {
  std::size_t i = 0;
  for (auto& net : nets_) {
    for (auto& v : net.params()) v = p.at(i++);
  }
  if (i != p.size()) throw InputError("parameter vector length mismatch");
}

std::vector<Complex> NetworkSet::flat_coeffs() const {
  std::vector<Complex> c;
  c.reserve(dofs());
  for (const auto& net : nets_) c.insert(c.end(), net.coefficients().begin(), net.coefficients().end());
  return c;
}

void NetworkSet::set_flat_coeffs(const std::vector<Complex>& c) {
  std::size_t i = 0;
  for (auto& net : nets_) {
    for (auto& v : net.coefficients()) v = c.at(i++);
  }
  if (i != c.size()) throw InputError("coefficient vector length mismatch");
}

Bundle DGSolution::eval(int element, const Point& x) const {
  Bundle b = u0_->eval(element, x);
  for (const auto& xi : frozen_) b += xi->eval(element, x);
  return b;
}

}  // namespace dgnn
