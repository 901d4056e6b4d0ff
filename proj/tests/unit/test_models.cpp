#include <gtest/gtest.h>

#include <random>

#include "dgnn/models.hpp"
#include "test_support.hpp"

using namespace dgnn;

namespace {

std::vector<PDEModel> all_models() {
  return {poisson_2d(), helmholtz_2d(4 * M_PI, "const"), helmholtz_2d(4 * M_PI, "radial"), wave_1p1d("const", 10.0),
          wave_1p1d("linear")};
}

std::vector<Point> random_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Point> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return pts;
}

}  // namespace

TEST(Models, PoissonSourceIsMinusLaplacianOfExact) {
  const PDEModel m = poisson_2d();
  const Point x{0.3, 0.7};
  EXPECT_NEAR(m.source(x).real(), 0.3 * std::cos(0.7), 1e-15);
  EXPECT_NEAR(std::abs(m.interior_residual(m.exact(x), x)), 0.0, 1e-15);
}

TEST(Models, DefaultLambdas) {
  const double pi = M_PI, w = 4 * M_PI;
  const std::vector<double> poisson{1, 200 * pi, 200 * pi, 1};
  const std::vector<double> helm{1, w * w, w * w * w * w, w * w};
  const std::vector<double> wave{1 / (pi * pi), 1, pi * pi, 1, pi * pi, 1, 1, pi * pi, 1};
  auto expect_eq = [](const std::vector<double>& a, const std::vector<double>& b) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12 * b[i]);
  };
  expect_eq(poisson_2d().lambda_init, poisson);
  expect_eq(helmholtz_2d(w, "const").lambda_init, helm);
  expect_eq(wave_1p1d("const", 10).lambda_init, wave);
  EXPECT_EQ(wave_1p1d("const", 10).lambda_names.size(), 9u);
}

TEST(Models, HelmholtzSources) {
  const double w = 4 * M_PI;
  const Point x{0.41, 0.83};
  EXPECT_NEAR(helmholtz_2d(w, "const").source(x).real(), (1 - w * w) * w * x[0] * std::cos(x[1]), 1e-11);
  const double rho = x[0] * x[0] + x[1] * x[1];
  EXPECT_NEAR(helmholtz_2d(w, "radial").source(x).real(), w * w * x[1] * std::sin(w * x[0]) * (1 - rho), 1e-11);
}

TEST(Models, WaveSource) {
  const Point x{0.27, 0.66};
  const double expected = (M_PI * M_PI - 2 * M_PI * M_PI / 100) * std::sin(M_PI * x[0]) *
                          std::sin(std::sqrt(2.0) * M_PI * x[1]);
  EXPECT_NEAR(wave_1p1d("const", 10).source(x).real(), expected, 1e-13);
}

TEST(Models, ExactSolvesEveryModel) {
  for (const PDEModel& m : all_models()) {
    for (const Point& x : random_points(50, 5)) {
      const double scale = 1.0 + std::abs(m.source(x));
      EXPECT_LT(std::abs(m.interior_residual(m.exact(x), x)), 1e-10 * scale) << m.name;
    }
  }
}

// The exact bundles are hand-differentiated; check them against differences.
TEST(Models, ExactJetMatchesDifferences) {
  const double h = 1e-5;
  for (const PDEModel& m : all_models()) {
    for (const Point& x : random_points(10, 6)) {
      const Bundle b = m.exact(x);
      for (int a = 0; a < m.dim; ++a) {
        Point p = x, q = x;
        p[a] += h;
        q[a] -= h;
        const Complex fp = m.exact(p).value, fq = m.exact(q).value;
        const double scale = 1.0 + std::abs(b.value) + std::abs(b.second[a]);
        EXPECT_LT(std::abs((fp - fq) / (2 * h) - b.grad[a]), 1e-7 * scale) << m.name;
        EXPECT_LT(std::abs((fp - 2.0 * b.value + fq) / (h * h) - b.second[a]), 1e-3 * scale) << m.name;
      }
    }
  }
}

TEST(Models, WaveDirichletDataIsTimeDerivative) {
  const PDEModel m = wave_1p1d("const", 10);
  for (const LossTerm& t : m.terms) {
    if (t.kind != TermKind::Boundary) continue;
    const Point x{1.0, 0.37};
    EXPECT_NEAR(std::abs(m.term_data(t, x, {1, 0}) - m.exact(x).grad[1]), 0.0, 1e-14);
  }
}

TEST(Models, InterfaceTermsVanishOnSmoothFields) {
  for (const PDEModel& m : all_models()) {
    for (const LossTerm& t : m.terms) {
      if (t.kind != TermKind::Interface) continue;
      for (const Point& x : random_points(5, 7)) {
        for (int axis = 0; axis < m.dim; ++axis) {
          Point n1{}, n2{};
          n1[axis] = 1;
          n2[axis] = -1;
          const Complex jump = apply(t.coef(x, n1), m.exact(x), m.dim) + apply(t.coef(x, n2), m.exact(x), m.dim);
          EXPECT_LT(std::abs(jump), 1e-13) << m.name << " " << t.name;
        }
        EXPECT_EQ(m.term_data(t, x, {1, 0}), Complex(0));
      }
    }
  }
}

TEST(Models, Registry) {
  EXPECT_EQ(make_model("poisson", 0, "", 0).kind, ModelKind::Poisson);
  EXPECT_EQ(make_model("helmholtz", 4 * M_PI, "radial", 0).name, "helmholtz-radial");
  EXPECT_EQ(make_model("wave", 0, "linear", 10).name, "wave-linear");
  EXPECT_THROW(make_model("maxwell", 0, "", 0), ConfigError);
  EXPECT_THROW(make_model("helmholtz", 1, "cubic", 0), ConfigError);
  EXPECT_THROW(wave_1p1d("const", -1), ConfigError);
}

TEST(Models, EveryLambdaHasATerm) {
  for (const PDEModel& m : all_models()) {
    std::vector<int> used(m.num_lambda(), 0);
    for (const LossTerm& t : m.terms) {
      ASSERT_LT(t.lambda_index, m.num_lambda());
      ++used[t.lambda_index];
    }
    for (int u : used) EXPECT_GT(u, 0) << m.name;
  }
}
