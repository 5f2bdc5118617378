#include <benchmark/benchmark.h>

#include "gqt/completion.hpp"
#include "gqt/gqt_algebra.hpp"
#include "gqt/media_io.hpp"
#include "gqt/qdft.hpp"
#include "gqt/rng.hpp"

using namespace gqt;

namespace {

QTensor3 random_tensor(int n1, int n2, int n3, std::uint64_t seed) {
    SplitMix64 rng(seed);
    QTensor3 T(n1, n2, n3);
    for (auto& q : T.data())
        q = {rng.next_normal(), rng.next_normal(), rng.next_normal(), rng.next_normal()};
    return T;
}

void BM_fft_mode3(benchmark::State& state) {
    const int n = int(state.range(0));
    const QTensor3 A = random_tensor(n, n, n, 1);
    QdftPlan plan(PureUnitQuaternion::symmetric(), n);
    for (auto _ : state) benchmark::DoNotOptimize(fft_mode(A, 3, plan));
    state.SetItemsProcessed(state.iterations() * A.size());
}
BENCHMARK(BM_fft_mode3)->Arg(8)->Arg(16)->Arg(32);

void BM_gqt_product(benchmark::State& state) {
    const int n = int(state.range(0));
    const QTensor3 A = random_tensor(n, n, n, 2), B = random_tensor(n, n, n, 3);
    const PureUnitQuaternion mu = PureUnitQuaternion::symmetric();
    for (auto _ : state) benchmark::DoNotOptimize(gqt_product(A, B, mu));
}
BENCHMARK(BM_gqt_product)->Arg(8)->Arg(16)->Arg(32);

void BM_gqt_svd(benchmark::State& state) {
    const int n = int(state.range(0));
    const QTensor3 A = random_tensor(n, n, n, 4);
    const PureUnitQuaternion mu = PureUnitQuaternion::symmetric();
    for (auto _ : state) benchmark::DoNotOptimize(gqt_svd(A, mu));
}
BENCHMARK(BM_gqt_svd)->Arg(8)->Arg(16);

void BM_qrtc_small(benchmark::State& state) {
    const int n = int(state.range(0));
    QTensor3 M = random_tensor(n, n, 4, 5);
    for (auto& q : M.data()) q.w = 0;
    const ObservationMask mask = sample_mask(n, n, 4, 0.5, 6);
    SolverConfig cfg;
    cfg.rank = {4};
    cfg.epsilon = 0;
    cfg.max_outer = 10;
    for (auto _ : state) benchmark::DoNotOptimize(qrtc(M, mask, cfg));
}
BENCHMARK(BM_qrtc_small)->Arg(8)->Arg(16);

void BM_mqrtc_small(benchmark::State& state) {
    const int n = int(state.range(0));
    QTensor3 M = random_tensor(n, n, n, 7);
    for (auto& q : M.data()) q.w = 0;
    const ObservationMask mask = sample_mask(n, n, n, 0.5, 8);
    SolverConfig cfg;
    cfg.rank = {4};
    cfg.epsilon = 0;
    cfg.max_outer = 10;
    for (auto _ : state) benchmark::DoNotOptimize(mqrtc(M, mask, cfg));
}
BENCHMARK(BM_mqrtc_small)->Arg(8);

} // namespace

BENCHMARK_MAIN();
