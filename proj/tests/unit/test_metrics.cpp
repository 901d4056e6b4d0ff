#include <gtest/gtest.h>

#include "dgnn/metrics.hpp"
#include "dgnn/trainer.hpp"
#include "test_support.hpp"

using namespace dgnn;

TEST(Metrics, ExactSolutionHasNoError) {
  for (const PDEModel& m : {poisson_2d(), helmholtz_2d(4 * M_PI, "radial"), wave_1p1d("const", 10)}) {
    const Mesh mesh = support::model_mesh(m, 3);
    const ErrorReport e = error_norms(ExactField(m), m, mesh, 8);
    EXPECT_EQ(e.rel_l2, 0.0);
    EXPECT_EQ(e.rel_h1, 0.0);
  }
}

TEST(Metrics, ZeroFieldIsRelativeOne) {
  const PDEModel m = wave_1p1d("const", 10);
  const Mesh mesh = support::model_mesh(m, 3);
  const ErrorReport e = error_norms(ZeroField(), m, mesh, 8);
  EXPECT_DOUBLE_EQ(e.rel_l2, 1.0);
  EXPECT_DOUBLE_EQ(e.rel_h1, 1.0);
  EXPECT_DOUBLE_EQ(e.rel_h1_x, 1.0);
  EXPECT_DOUBLE_EQ(e.rel_h1_t, 1.0);
  // |u|_1^2 splits into the space and time parts
  EXPECT_NEAR(e.exact_h1_x * e.exact_h1_x + e.exact_h1_t * e.exact_h1_t,
              std::pow(error_norms(ZeroField(), m, mesh, 12).exact_h1_x, 2) +
                  std::pow(error_norms(ZeroField(), m, mesh, 12).exact_h1_t, 2),
              1e-10);
}

TEST(Metrics, ExactNormsClosedForm) {
  // ||x cos y||^2 = (1/3)(1/2 + sin 2 / 4)
  const PDEModel m = poisson_2d();
  const ErrorReport e = error_norms(ZeroField(), m, support::model_mesh(m, 2), 10);
  EXPECT_NEAR(e.exact_l2 * e.exact_l2, (0.5 + std::sin(2.0) / 4) / 3, 1e-14);
  EXPECT_EQ(e.rel_h1_t, 0.0);
}

TEST(Metrics, QuadratureAgreesWithDenserSampling) {
  const PDEModel m = helmholtz_2d(4 * M_PI, "const");
  // the bundled resolution, omega h = pi / 3
  const Mesh mesh = support::model_mesh(m, 12);
  NetworkSet u = init_candidate(m, mesh, FamilyTag::SigmoidOneLayer, 3, 0, 1, 1);
  support::perturb(u, 3, 0.0, false);
  const ErrorReport a = error_norms(u, m, mesh, 12);
  const ErrorReport b = error_norms(u, m, mesh, 120);
  EXPECT_NEAR(a.rel_l2, b.rel_l2, 1e-8 * b.rel_l2);
  EXPECT_NEAR(a.rel_h1, b.rel_h1, 1e-8 * b.rel_h1);
}

TEST(Metrics, EvaluatorMatchesDirectNorms) {
  const PDEModel m = poisson_2d();
  const Mesh mesh = support::model_mesh(m, 3);
  NetworkSet xi = init_candidate(m, mesh, FamilyTag::SigmoidOneLayer, 3, 0, 1, 1);
  NetworkSet cand = init_candidate(m, mesh, FamilyTag::SigmoidOneLayer, 4, 0, 2, 1);
  support::perturb(xi, 4, 0.0, false);
  support::perturb(cand, 5, 0.0, false);
  ErrorEvaluator ev(m, mesh, 8);
  ev.absorb(xi);
  const ErrorReport a = ev.report(&cand);
  const ErrorReport b = error_norms(SumField(xi, cand), m, mesh, 8);
  EXPECT_NEAR(a.rel_l2, b.rel_l2, 1e-12 * b.rel_l2);
  EXPECT_NEAR(a.rel_h1, b.rel_h1, 1e-12 * b.rel_h1);
}

TEST(Metrics, ZeroExactSolutionRejected) {
  PDEModel m = poisson_2d();
  m.exact = [](const Point&) { return Bundle{}; };
  EXPECT_THROW(error_norms(ZeroField(), m, support::model_mesh(m, 2), 4), ConfigError);
}
