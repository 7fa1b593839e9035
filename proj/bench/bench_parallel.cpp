#include <benchmark/benchmark.h>

#include "spectrakit/altmethods.hpp"
#include "spectrakit/distribution.hpp"
#include "spectrakit/rayleigh_ritz.hpp"

using namespace spectrakit;

namespace {

Execution exec_of(const benchmark::State& st) { return st.range(0) ? Execution::Parallel : Execution::Serial; }

void BM_GramK2001(benchmark::State& st) {
    KernelSpec k;
    k.id = KernelId::K2001;
    GramOptions o;
    o.exec = exec_of(st);
    for (auto _ : st) benchmark::DoNotOptimize(gram_matrix(k, BasisFamily::laguerre(1.0), 30, o).entries.data());
}
BENCHMARK(BM_GramK2001)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GramReference(benchmark::State& st) {
    KernelSpec k;
    k.id = KernelId::K2001;
    for (auto _ : st)
        benchmark::DoNotOptimize(gram_matrix_reference(k, BasisFamily::laguerre(1.0), 30).entries.data());
}
BENCHMARK(BM_GramReference)->Unit(benchmark::kMillisecond);

void BM_GramBhep3(benchmark::State& st) {
    KernelSpec k;
    k.id = KernelId::BHEP;
    k.d = 3;
    GramOptions o;
    o.exec = exec_of(st);
    for (auto _ : st)
        benchmark::DoNotOptimize(gram_matrix(k, BasisFamily::tensor_hermite(1.0, 3), 15, o).entries.data());
}
BENCHMARK(BM_GramBhep3)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GridMatrix(benchmark::State& st) {
    GridConfig g;
    g.kernel.id = KernelId::DEH_K;
    g.A = 4;
    g.m = 1000;
    for (auto _ : st) benchmark::DoNotOptimize(grid_matrix(g, exec_of(st)).data());
}
BENCHMARK(BM_GridMatrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GridReference(benchmark::State& st) {
    GridConfig g;
    g.kernel.id = KernelId::DEH_K;
    g.A = 4;
    g.m = 1000;
    for (auto _ : st) benchmark::DoNotOptimize(grid_matrix_reference(g).data());
}
BENCHMARK(BM_GridReference)->Unit(benchmark::kMillisecond);

void BM_Nystrom(benchmark::State& st) {
    MCConfig c;
    c.kernel.id = KernelId::CvM;
    c.weight = BasisFamily::legendre01();
    c.N = 800;
    c.replications = 4;
    for (auto _ : st) benchmark::DoNotOptimize(mc_replicate(c, exec_of(st)).mean.data());
}
BENCHMARK(BM_Nystrom)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SimulateW(benchmark::State& st) {
    std::vector<double> eigs;
    for (int j = 1; j <= 50; ++j) eigs.push_back(1.0 / (j * j * 9.8696044010893586));
    TailModel model(eigs);
    for (auto _ : st) benchmark::DoNotOptimize(simulate_w(model, 200000, 7, {0.95}, exec_of(st)).mean);
}
BENCHMARK(BM_SimulateW)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
