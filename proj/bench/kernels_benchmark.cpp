// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to compare scaling.
#include <benchmark/benchmark.h>

#include <vector>

#include "vhmc/kernels.hpp"

namespace {

using vhmc::RowMatrix;
using vhmc::Vector;

struct LogisticData {
  RowMatrix design;
  Vector labels;
  Vector w;
};

LogisticData logistic_data(Eigen::Index n) {
  LogisticData d;
  d.design = RowMatrix::Random(n, 9);
  d.labels = (Vector::Random(n).array() > 0.0).cast<double>();
  d.w = Vector::Random(9);
  return d;
}

template <class F>
void bm_logistic(benchmark::State& state, F f) {
  const LogisticData d = logistic_data(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(f(d.design, d.labels, d.w));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LogisticGradSerial(benchmark::State& s) { bm_logistic(s, vhmc::kernels::serial::logistic_nll_gradient); }
void BM_LogisticGradParallel(benchmark::State& s) { bm_logistic(s, vhmc::kernels::parallel::logistic_nll_gradient); }
void BM_LogisticNllSerial(benchmark::State& s) { bm_logistic(s, vhmc::kernels::serial::logistic_nll); }
void BM_LogisticNllParallel(benchmark::State& s) { bm_logistic(s, vhmc::kernels::parallel::logistic_nll); }

template <class F>
void bm_mmd(benchmark::State& state, F f) {
  const RowMatrix x = RowMatrix::Random(state.range(0), 2);
  const RowMatrix y = RowMatrix::Random(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(f(x, y));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_KernelSumSerial(benchmark::State& s) { bm_mmd(s, vhmc::kernels::serial::quadratic_kernel_sum); }
void BM_KernelSumParallel(benchmark::State& s) { bm_mmd(s, vhmc::kernels::parallel::quadratic_kernel_sum); }

template <class F>
void bm_acov(benchmark::State& state, F f) {
  const Vector x = Vector::Random(state.range(0));
  const std::span<const double> view(x.data(), static_cast<std::size_t>(x.size()));
  for (auto _ : state) benchmark::DoNotOptimize(f(view, 0.0, 200));
}

void BM_AutocovSerial(benchmark::State& s) { bm_acov(s, vhmc::kernels::serial::autocovariance_sums); }
void BM_AutocovParallel(benchmark::State& s) { bm_acov(s, vhmc::kernels::parallel::autocovariance_sums); }

}  // namespace

BENCHMARK(BM_LogisticGradSerial)->Arg(768)->Arg(100000);
BENCHMARK(BM_LogisticGradParallel)->Arg(768)->Arg(100000);
BENCHMARK(BM_LogisticNllSerial)->Arg(768)->Arg(100000);
BENCHMARK(BM_LogisticNllParallel)->Arg(768)->Arg(100000);
BENCHMARK(BM_KernelSumSerial)->Arg(2000);
BENCHMARK(BM_KernelSumParallel)->Arg(2000);
BENCHMARK(BM_AutocovSerial)->Arg(10000)->Arg(100000);
BENCHMARK(BM_AutocovParallel)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
