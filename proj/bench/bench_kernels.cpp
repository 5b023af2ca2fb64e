// OpenMP kernels against their serial references on phantom-sized inputs.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "mrecon/kernels.hpp"
#include "mrecon/random.hpp"

using namespace mrecon;

namespace {

const Dims kDims{64, 64, 16};

const DenseTensor& input() {
  static const DenseTensor x = [] {
    Rng rng(1);
    return random_tensor(kDims, rng);
  }();
  return x;
}

const Matrix& factor() {
  static const Matrix m = [] {
    Rng rng(2);
    return random_matrix(16, 64, rng);
  }();
  return m;
}

template <auto Fn>
void mode_product_bench(benchmark::State& state) {
  const auto mode = static_cast<std::size_t>(state.range(0));
  const Matrix m = mode == 2 ? Matrix(factor().leftCols(16)) : factor();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(input(), m, mode));
}

template <auto Fn>
void fft_bench(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Fn(input(), FftDirection::Forward));
}

template <auto Fn>
void difference_bench(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Fn(input(), 2, true));
}

template <auto Fn>
void ssim_bench(benchmark::State& state) {
  Rng rng(3);
  std::vector<double> a(64 * 64), b(64 * 64);
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k] = rng.uniform();
    b[k] = a[k] + 0.1 * rng.normal();
  }
  for (auto _ : state) benchmark::DoNotOptimize(Fn(a, b, 64, 64, 1.0));
}

}  // namespace

BENCHMARK(mode_product_bench<kernels::mode_product>)->Name("mode_product/parallel")->Arg(0)->Arg(1)->Arg(2);
BENCHMARK(mode_product_bench<reference::mode_product>)->Name("mode_product/serial")->Arg(0)->Arg(1)->Arg(2);
BENCHMARK(fft_bench<kernels::centered_fft2_frames>)->Name("fft2_frames/parallel");
BENCHMARK(fft_bench<reference::centered_dft2_frames>)->Name("dft2_frames/serial");
BENCHMARK(difference_bench<kernels::forward_difference>)->Name("temporal_difference/parallel");
BENCHMARK(difference_bench<reference::forward_difference>)->Name("temporal_difference/serial");
BENCHMARK(ssim_bench<kernels::ssim_frame>)->Name("ssim_frame/parallel");
BENCHMARK(ssim_bench<reference::ssim_frame>)->Name("ssim_frame/serial");

BENCHMARK_MAIN();
