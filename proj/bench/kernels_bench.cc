// Copyright 2026 The certremove Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Parallel kernels against their serial references on a pixel-scale problem.

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "certremove/kernels.h"
#include "certremove/kernels_reference.h"
#include "certremove/synthetic.h"

namespace certremove {
namespace {

struct Fixture {
  Dataset data;
  std::vector<RowIndex> rows;
  Eigen::VectorXd w;
  Eigen::VectorXd weights;

  Fixture(Eigen::Index n, Eigen::Index d)
      : data(synthetic::PixelTask(n, d, 3)),
        rows(static_cast<size_t>(n)),
        w(Eigen::VectorXd::Constant(d, 0.01)),
        weights(Eigen::VectorXd::Constant(n, 0.2)) {
    std::iota(rows.begin(), rows.end(), RowIndex{0});
  }
};

const Fixture& Get(Eigen::Index n, Eigen::Index d) {
  static Fixture small(2000, 100);
  static Fixture large(10000, 784);
  return n == 2000 && d == 100 ? small : large;
}

template <bool kParallel>
void BM_Margins(benchmark::State& state) {
  const Fixture& f = Get(state.range(0), state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kParallel ? kernels::Margins(f.data.features, f.rows, f.w)
                                       : reference::Margins(f.data.features, f.rows, f.w));
  }
}

template <bool kParallel>
void BM_LossValueAndGradient(benchmark::State& state) {
  const Fixture& f = Get(state.range(0), state.range(1));
  for (auto _ : state) {
    auto sums = kParallel
                    ? kernels::LossValueAndGradient(f.data, f.rows, f.w, LossKind::kLogistic)
                    : reference::LossValueAndGradient(f.data, f.rows, f.w, LossKind::kLogistic);
    benchmark::DoNotOptimize(sums);
  }
}

template <bool kParallel>
void BM_WeightedGramian(benchmark::State& state) {
  const Fixture& f = Get(state.range(0), state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kParallel ? kernels::WeightedGramian(f.data.features, f.rows, f.weights)
                  : reference::WeightedGramian(f.data.features, f.rows, f.weights));
  }
}

#define CERTREMOVE_BENCH(fn)                                                         \
  BENCHMARK_TEMPLATE(fn, true)->Args({2000, 100})->Args({10000, 784})->Unit(         \
      benchmark::kMillisecond);                                                      \
  BENCHMARK_TEMPLATE(fn, false)->Args({2000, 100})->Args({10000, 784})->Unit(        \
      benchmark::kMillisecond)

CERTREMOVE_BENCH(BM_Margins);
CERTREMOVE_BENCH(BM_LossValueAndGradient);
CERTREMOVE_BENCH(BM_WeightedGramian);

}  // namespace
}  // namespace certremove

BENCHMARK_MAIN();
