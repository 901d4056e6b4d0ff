#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "dgnn/linear_solve.hpp"

namespace dgnn {

std::vector<double> ridge_ladder() { return {1e-12, 1e-11, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6}; }

SolveReport solve_linear(const GramSystem& system, double ridge) {
  const Eigen::SparseMatrix<Complex>& M = system.matrix;
  const int n = static_cast<int>(M.rows());
  if (M.cols() != n || system.rhs.size() != n) throw InputError("Gram system shape mismatch");
  if (!system.rhs.allFinite()) throw ConditioningError("right-hand side is not finite");
  SolveReport rep;
  rep.ridge = ridge;
  rep.attempts = 1;
  if (n == 0) return rep;

  Eigen::VectorXd scale(n);
  for (int i = 0; i < n; ++i) {
    const double d = M.coeff(i, i).real();
    if (!std::isfinite(d)) throw ConditioningError("Gram diagonal is not finite");
    scale(i) = d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
  }
  Eigen::SparseMatrix<Complex> S = scale.cast<Complex>().asDiagonal() * M * scale.cast<Complex>().asDiagonal();
  // After scaling the nonzero diagonal entries are 1, so the ridge is
  // relative to the mean diagonal.
  for (int i = 0; i < n; ++i) S.coeffRef(i, i) += ridge;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<Complex>, Eigen::Lower> ldlt;
  ldlt.compute(S);
  if (ldlt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "LDL factorization failed (n=" << n << ", ridge=" << ridge << ")";
    throw ConditioningError(msg.str());
  }
  const auto& D = ldlt.vectorD();
  for (int i = 0; i < D.size(); ++i) {
    if (!(D(i).real() > 0.0) || !std::isfinite(D(i).real())) {
      std::ostringstream msg;
      msg << "non-positive pivot " << D(i).real() << " at " << i << " (n=" << n << ", ridge=" << ridge << ")";
      throw ConditioningError(msg.str());
    }
  }
  const Eigen::VectorXcd b = scale.cast<Complex>().cwiseProduct(system.rhs);
  Eigen::VectorXcd y = ldlt.solve(b);
  if (!y.allFinite()) throw ConditioningError("solution is not finite");

  // Refine against the unridged system; the ridged factor is the preconditioner,
  // which damps each error component by ridge / (lambda + ridge).
  for (int i = 0; i < n; ++i) S.coeffRef(i, i) -= ridge;
  Eigen::VectorXcd r = b - S * y;
  double rres = r.norm();
  for (int step = 0; step < 4 && rres > 0.0; ++step) {
    const Eigen::VectorXcd cand = y + ldlt.solve(r);
    const Eigen::VectorXcd rc = b - S * cand;
    const double cres = rc.norm();
    if (!(cres < 0.5 * rres)) break;
    y = cand;
    r = rc;
    rres = cres;
  }

  rep.coefficients = scale.cast<Complex>().cwiseProduct(y);
  const double rn = system.rhs.norm();
  rep.relative_residual = rn > 0.0 ? (M * rep.coefficients - system.rhs).norm() / rn : 0.0;
  return rep;
}

SolveReport solve_with_escalation(const GramSystem& system) {
  std::string last;
  int attempts = 0;
  for (double ridge : ridge_ladder()) {
    ++attempts;
    try {
      SolveReport rep = solve_linear(system, ridge);
      rep.attempts = attempts;
      return rep;
    } catch (const ConditioningError& e) {
      last = e.what();
    }
  }
  throw ConditioningError("Gram system could not be factorized up to ridge 1e-6: " + last);
}

}  // namespace dgnn
