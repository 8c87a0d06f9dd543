#include <benchmark/benchmark.h>

#include <random>

#include "ccinterp/boys.hpp"
#include "ccinterp/exc_tensor.hpp"
#include "ccinterp/interp.hpp"

using namespace ccinterp;

namespace {

const std::string kSourceDir = CCINTERP_SOURCE_DIR;

TransformPair random_pair(std::size_t nb, std::size_t no, std::mt19937& rng) {
  std::normal_distribution<double> nd(0.0, 0.15);
  const auto n = static_cast<Eigen::Index>(nb);
  Matrix A(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = nd(rng);
  const Matrix S = Matrix::Identity(n, n) + A * A.transpose();
  return TransformPair::from_spatial(S, lowdin(S).inv_half, no);
}

AmplitudeSet random_amplitudes(std::size_t nv, std::size_t no, std::mt19937& rng) {
  std::normal_distribution<double> nd(0.0, 0.1);
  auto t = AmplitudeSet::zeros(nv, no);
  for (double& x : t.t1.flat()) x = nd(rng);
  for (double& x : t.t2.flat()) x = nd(rng);
  return t;
}

void BM_Boys(benchmark::State& state) {
  double z = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(boys(4, z));
    z = z > 60.0 ? 0.0 : z + 0.37;
  }
}
BENCHMARK(BM_Boys);

void BM_CrossTransform(benchmark::State& state) {
  const auto no = static_cast<std::size_t>(state.range(0));
  const auto nv = static_cast<std::size_t>(state.range(1));
  std::mt19937 rng(1);
  const auto src = random_pair(no + nv, no, rng), dst = random_pair(no + nv, no, rng);
  const auto t = random_amplitudes(2 * nv, 2 * no, rng);
  for (auto _ : state) benchmark::DoNotOptimize(cross_transform(t, dst, src));
}
BENCHMARK(BM_CrossTransform)->Args({2, 6})->Args({4, 12})->Args({5, 24})->Unit(benchmark::kMicrosecond);

void BM_MoToAo(benchmark::State& state) {
  const auto no = static_cast<std::size_t>(state.range(0));
  const auto nv = static_cast<std::size_t>(state.range(1));
  std::mt19937 rng(2);
  const auto tp = random_pair(no + nv, no, rng);
  const auto t = random_amplitudes(2 * nv, 2 * no, rng);
  for (auto _ : state) benchmark::DoNotOptimize(mo_to_ao(ExcTensor::mo(t.t2), tp));
}
BENCHMARK(BM_MoToAo)->Args({2, 6})->Args({4, 12})->Unit(benchmark::kMicrosecond);

void BM_Integrals(benchmark::State& state) {
  const auto lib = load_basis_library(kSourceDir + "/data/basis/sto-3g.gbs");
  const auto g = load_geometry(kSourceDir + "/data/geometries/water.xyz");
  const auto basis = BasisSet::build(lib, g);
  for (auto _ : state) benchmark::DoNotOptimize(compute_integrals(g, basis));
}
BENCHMARK(BM_Integrals)->Unit(benchmark::kMillisecond);

void BM_OnlineEvalH4(benchmark::State& state) {
  SystemSpec spec;
  spec.trajectory = load_trajectory(kSourceDir + "/data/trajectories/h4_breathing.traj");
  spec.basis = load_basis_library(kSourceDir + "/data/basis/sto-3g.gbs");
  const auto itp = offline_build(spec, static_cast<std::size_t>(state.range(0)));
  const auto tp = compute_frame(spec, 0.37).tp;
  for (auto _ : state) benchmark::DoNotOptimize(online_eval(itp, 0.37, tp));
}
BENCHMARK(BM_OnlineEvalH4)->Arg(6)->Arg(12)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
