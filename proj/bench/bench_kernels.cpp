#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "snum/kernels.hpp"
#include "snum/oracle.hpp"

using namespace snum;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

std::vector<double> noisy_decay(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  double x = 1.0;
  for (auto& a : v) {
    a = x;
    x *= 0.9 + 0.1 * u(rng);
  }
  return v;
}

Eigen::MatrixXd gaussian(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

void BM_ChordInfimum(benchmark::State& state) {
  const auto alpha = noisy_decay(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(chord_infimum(alpha, alpha.size(), exec_of(state)));
}

void BM_SectionMaxNorm(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(1));
  const auto b = gaussian(12, d, 11);
  const auto a = gaussian(12, d, 12);
  for (auto _ : state) benchmark::DoNotOptimize(section_max_norm(a, b, Norm::inf, Norm::one, exec_of(state)));
}

void BM_DecayEnvelope(benchmark::State& state) {
  const auto tail = noisy_decay(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(decay_envelope(tail, tail.size(), 1.8, exec_of(state)));
}

void BM_GelfandRestarts(benchmark::State& state) {
  std::vector<double> d(8);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = 1.0 / static_cast<double>(i + 1);
  const TaggedMatrix m(Eigen::VectorXd::Map(d.data(), 8).asDiagonal().toDenseMatrix(), Norm::inf, Norm::one);
  OracleOptions o;
  o.restarts = static_cast<std::size_t>(state.range(1));
  o.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(gelfand_oracle(m, 3, o));
}

}  // namespace

// first argument: 0 = serial reference, 1 = OpenMP
BENCHMARK(BM_ChordInfimum)->ArgsProduct({{0, 1}, {256, 1024}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SectionMaxNorm)->ArgsProduct({{0, 1}, {4, 6}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecayEnvelope)->ArgsProduct({{0, 1}, {2000, 8000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GelfandRestarts)->ArgsProduct({{0, 1}, {16, 64}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
