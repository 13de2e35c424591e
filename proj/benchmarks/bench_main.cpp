#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fourier_ocp/auglag.hpp"
#include "fourier_ocp/fourier_basis.hpp"
#include "fourier_ocp/reference.hpp"

namespace fo = fourier_ocp;

namespace {

fo::LagrangianAssembler particle(int order, int positions) {
  std::vector<std::vector<double>> ics;
  for (int i = 0; i < positions; ++i) ics.push_back({5.0 * i / (positions - 1), 1.0});
  fo::DomainBox box(10.0, {0.0, 1.0}, {5.0, 1.0});
  return fo::LagrangianAssembler(fo::lq_particle_problem(10.0, 4.0, {5.0, 0.0}),
                                 fo::SurfaceLayout(box, order, {order, 0}), ics,
                                 fo::QuadratureGrid(fo::QuadratureRule::simpson, 201, 0.0, 10.0));
}

fo::LagrangianAssembler replicator(int order) {
  std::vector<std::vector<double>> ics{{7.0 / 30, 1.0 / 3, 13.0 / 30}};
  fo::DomainBox box(6.0, ics[0], ics[0]);
  return fo::LagrangianAssembler(fo::rps_problem(fo::build_circulant_game(3), 6.0, 1.0),
                                 fo::SurfaceLayout(box, fo::SurfaceShape{order, order - 1, {0, 0, 0}, false}), ics,
                                 fo::QuadratureGrid(fo::QuadratureRule::simpson, 201, 0.0, 6.0));
}

void perturb(std::vector<double>& x, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-0.1, 0.1);
  for (auto& v : x) v += U(rng);
}

void BM_ParticleLagrangianGradient(benchmark::State& st) {
  const auto a = particle(static_cast<int>(st.range(0)), 11);
  auto x = fo::initial_coefficients(a);
  perturb(x, 1);
  const auto state = fo::AugLagState::initial(a.residuals().size(), fo::AugLagParams{});
  std::vector<double> g(x.size());
  for (auto _ : st) benchmark::DoNotOptimize(a.value_and_gradient(x, state, g));
  st.counters["coefficients"] = static_cast<double>(x.size());
}
BENCHMARK(BM_ParticleLagrangianGradient)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ReplicatorLagrangianGradient(benchmark::State& st) {
  const auto a = replicator(static_cast<int>(st.range(0)));
  auto x = fo::initial_coefficients(a);
  perturb(x, 2);
  const auto state = fo::AugLagState::initial(a.residuals().size(), fo::AugLagParams{});
  std::vector<double> g(x.size());
  for (auto _ : st) benchmark::DoNotOptimize(a.value_and_gradient(x, state, g));
}
BENCHMARK(BM_ReplicatorLagrangianGradient)->Arg(5)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_ReplicatorLagrangianValue(benchmark::State& st) {
  const auto a = replicator(5);
  auto x = fo::initial_coefficients(a);
  perturb(x, 3);
  const auto state = fo::AugLagState::initial(a.residuals().size(), fo::AugLagParams{});
  for (auto _ : st) benchmark::DoNotOptimize(a.evaluate(x, state).lagrangian);
}
BENCHMARK(BM_ReplicatorLagrangianValue)->Unit(benchmark::kMicrosecond);

void BM_SurfaceEval(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const fo::SurfaceLayout layout(fo::DomainBox(10.0, {0.0, 1.0}, {5.0, 3.0}), n, {n, n});
  std::vector<double> c(layout.size(), 0.0);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> N;
  for (auto& v : c) v = N(rng);
  const fo::FourierSurface s(layout, c);
  const std::vector<double> ic{2.3, 1.7};
  double t = 0.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(s.eval(t, ic));
    t = t > 9.9 ? 0.0 : t + 0.01;
  }
}
BENCHMARK(BM_SurfaceEval)->Arg(2)->Arg(4)->Arg(8);

void BM_ShootingReference(benchmark::State& st) {
  const auto p = fo::rps_problem(fo::build_circulant_game(3), 6.0, 1.0);
  const std::vector<double> u0{7.0 / 30, 1.0 / 3, 13.0 / 30};
  for (auto _ : st) benchmark::DoNotOptimize(fo::rps_shooting_reference(p, u0).trajectory.cost);
}
BENCHMARK(BM_ShootingReference)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace
BENCHMARK_MAIN();
