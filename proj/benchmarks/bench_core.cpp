#include <benchmark/benchmark.h>

#include <vector>

#include "dgnn/assembly.hpp"
#include "dgnn/initseed.hpp"
#include "dgnn/linear_solve.hpp"
#include "dgnn/trainer.hpp"

using namespace dgnn;

namespace {

struct Setup {
  PDEModel model = helmholtz_2d(4 * M_PI, "const");
  Mesh mesh;
  LossPlan plan;
  NetworkSet cand;

  explicit Setup(int width)
      : mesh(build_mesh(model.bounds, {12, 12})),
        plan(model, mesh, 10),
        cand(init_candidate(model, mesh, FamilyTag::SigmoidOneLayer, width, 0, 1, 1)) {
    plan.set_frozen(ZeroField());
    for (auto& net : cand.networks())
      for (auto& c : net.coefficients()) c = 0.1;
  }
};

void BM_NetworkEval(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  std::vector<Bundle> phi(s.cand[0].width());
  const Point x{0.03, 0.04};
  for (auto _ : state) {
    s.cand[0].eval_basis(x, phi);
    benchmark::DoNotOptimize(phi.data());
  }
}
BENCHMARK(BM_NetworkEval)->Arg(9)->Arg(17);

void BM_Loss(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_loss(s.plan, &s.cand, s.model.lambda_init).total);
}
BENCHMARK(BM_Loss)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_GramAssembly(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  GramOptions opt;
  opt.orthonormalize = true;
  for (auto _ : state) benchmark::DoNotOptimize(assemble_gram(s.plan, s.cand, s.model.lambda_init, opt).rhs.data());
}
BENCHMARK(BM_GramAssembly)->Arg(9)->Arg(17)->Unit(benchmark::kMillisecond);

void BM_LinearSolve(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  GramOptions opt;
  opt.orthonormalize = true;
  const GramSystem sys = assemble_gram(s.plan, s.cand, s.model.lambda_init, opt);
  for (auto _ : state) benchmark::DoNotOptimize(solve_with_escalation(sys).coefficients.data());
}
BENCHMARK(BM_LinearSolve)->Arg(9)->Arg(17)->Unit(benchmark::kMillisecond);

void BM_LossGradient(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  std::vector<Complex> grad;
  for (auto _ : state) benchmark::DoNotOptimize(loss_gradient(s.plan, s.cand, s.model.lambda_init, false, grad));
}
BENCHMARK(BM_LossGradient)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_SpectralInit(benchmark::State& state) {
  const PDEModel m = helmholtz_2d(4 * M_PI, "const");
  const Mesh mesh = build_mesh(m.bounds, {12, 12});
  for (auto _ : state) benchmark::DoNotOptimize(spectral_init_helmholtz(m, mesh, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SpectralInit)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
