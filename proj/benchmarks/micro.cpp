#include <benchmark/benchmark.h>

#include "ppedcrf/metrics.hpp"
#include "ppedcrf/retrieval.hpp"
#include "ppedcrf/sanitize.hpp"
#include "ppedcrf/synthetic.hpp"

namespace {

using namespace ppedcrf;

const Frame& frame() {
  static const Frame f = synthetic_frame(1);
  return f;
}

void BM_DcrfRefine(benchmark::State& state) {
  const LogitMap u = predict_unary_heuristic(frame());
  const MaskMap prev(frame().width(), frame().height());
  for (auto _ : state) benchmark::DoNotOptimize(dcrf_refine(u, prev, {}));
}
BENCHMARK(BM_DcrfRefine)->Unit(benchmark::kMillisecond);

void BM_Ssim(benchmark::State& state) {
  Rng rng(1);
  const Frame noisy = global_gaussian(frame(), 8.0, rng).frame;
  for (auto _ : state) benchmark::DoNotOptimize(ssim(frame(), noisy));
}
BENCHMARK(BM_Ssim)->Unit(benchmark::kMillisecond);

void BM_SanitizeFrame(benchmark::State& state) {
  const MaskMap p = dcrf_refine(predict_unary_heuristic(frame()),
                                MaskMap(frame().width(), frame().height()), {});
  const ControlMap a = ncp_control(p, 1.0);
  for (auto _ : state) {
    Rng rng(7);
    benchmark::DoNotOptimize(sanitize_frame(frame(), p, a, 8.0, rng));
  }
}
BENCHMARK(BM_SanitizeFrame)->Unit(benchmark::kMillisecond);

void BM_TopK(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  Rng rng(3);
  std::vector<EmbeddingRecord> gallery, queries;
  for (int i = 0; i < n; ++i) {
    Embedding v(192);
    for (float& x : v) x = static_cast<float>(rng.normal());
    gallery.push_back({"g" + std::to_string(i), "L" + std::to_string(i), v, "e"});
    if (i < 12) queries.push_back({"q" + std::to_string(i), "L" + std::to_string(i), v, "e"});
  }
  const std::vector<int> ks{1, 5, 10};
  for (auto _ : state) benchmark::DoNotOptimize(topk_accuracy(queries, gallery, ks));
}
BENCHMARK(BM_TopK)->Arg(48)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
