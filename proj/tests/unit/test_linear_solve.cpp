#include <gtest/gtest.h>

#include "dgnn/linear_solve.hpp"

using namespace dgnn;

namespace {

GramSystem dense_system(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& b) {
  GramSystem s;
  s.matrix = M.sparseView();
  s.rhs = b;
  return s;
}

}  // namespace

TEST(LinearSolve, Identity) {
  const Eigen::VectorXcd e1 = Eigen::VectorXcd::Unit(5, 0);
  const SolveReport r = solve_linear(dense_system(Eigen::MatrixXcd::Identity(5, 5), e1), 0.0);
  EXPECT_LT((r.coefficients - e1).norm(), 1e-15);
  EXPECT_LT(r.relative_residual, 1e-15);
}

TEST(LinearSolve, HermitianComplexSystem) {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Random(8, 8);
  const Eigen::MatrixXcd M = A.adjoint() * A + 0.1 * Eigen::MatrixXcd::Identity(8, 8);
  const Eigen::VectorXcd x = Eigen::VectorXcd::Random(8);
  const SolveReport r = solve_linear(dense_system(M, M * x), 0.0);
  EXPECT_LT((r.coefficients - x).norm() / x.norm(), 1e-10);
}

TEST(LinearSolve, BadlyScaledDiagonal) {
  // Jacobi scaling makes the scale of each unknown irrelevant
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(3, 3);
  M(0, 0) = 1e12;
  M(2, 2) = 1e-10;
  M(0, 1) = M(1, 0) = 1e5;
  const Eigen::VectorXcd x(Eigen::Vector3cd(1.0, Complex(0, 2), -3.0));
  const SolveReport r = solve_linear(dense_system(M, M * x), 0.0);
  EXPECT_LT((r.coefficients - x).norm(), 1e-8);
}

TEST(LinearSolve, RidgeLadder) {
  const std::vector<double> l = ridge_ladder();
  ASSERT_EQ(l.size(), 7u);
  EXPECT_DOUBLE_EQ(l.front(), 1e-12);
  EXPECT_DOUBLE_EQ(l.back(), 1e-6);
  for (std::size_t i = 1; i < l.size(); ++i) EXPECT_NEAR(l[i] / l[i - 1], 10.0, 1e-12);
}

TEST(LinearSolve, SingularNeedsRidge) {
  Eigen::MatrixXcd M(2, 2);
  M << 1, 1, 1, 1;
  const GramSystem s = dense_system(M, Eigen::Vector2cd(1, 1));
  EXPECT_THROW(solve_linear(s, 0.0), ConditioningError);
  const SolveReport r = solve_with_escalation(s);
  EXPECT_GT(r.ridge, 0.0);
  EXPECT_EQ(r.attempts, 1);  // the first rung already regularizes
  EXPECT_TRUE(r.coefficients.allFinite());
  // minimum-norm-like answer, splitting the load evenly
  EXPECT_NEAR(std::abs(r.coefficients(0) - r.coefficients(1)), 0.0, 1e-6);
}

TEST(LinearSolve, RejectsNonFinite) {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(2, 2);
  EXPECT_THROW(solve_linear(dense_system(M, Eigen::Vector2cd(std::nan(""), 1)), 0.0), ConditioningError);
  M(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(solve_with_escalation(dense_system(M, Eigen::Vector2cd(1, 1))), ConditioningError);
}

TEST(LinearSolve, RefinementRemovesRidgeBias) {
  // eigenvalues 1 .. 1e-4 against a ridge of 1e-6: the plain ridged solve is off by ~1e-2
  const Eigen::MatrixXcd Q = Eigen::MatrixXcd::Random(6, 6).householderQr().householderQ();
  Eigen::VectorXd lam(6);
  lam << 1, 0.3, 1e-1, 1e-2, 1e-3, 1e-4;
  const Eigen::MatrixXcd M = Q * lam.cast<Complex>().asDiagonal() * Q.adjoint();
  const Eigen::VectorXcd x = Eigen::VectorXcd::Random(6);
  const SolveReport r = solve_linear(dense_system(M, M * x), 1e-6);
  EXPECT_LT(r.relative_residual, 1e-12);
  EXPECT_LT((r.coefficients - x).norm() / x.norm(), 1e-9);
}
