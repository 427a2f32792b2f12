#include "monge2/boundary_data.hpp"
#include "monge2/concavity.hpp"
#include "monge2/dirichlet.hpp"
#include "monge2/random.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace monge2;

std::vector<SymMatrix3> random_matrices(std::size_t n) {
    std::vector<SymMatrix3> out;
    for (std::size_t i = 0; i < n; ++i) {
        CounterRng rng(1, i);
        out.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                       rng.uniform(-1, 1), rng.uniform(-1, 1)});
    }
    return out;
}

void BM_EigSym3(benchmark::State& state) {
    const auto ms = random_matrices(1024);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(eig_sym3(ms[i++ & 1023]));
}
BENCHMARK(BM_EigSym3);

void BM_Eigenvalues(benchmark::State& state) {
    const auto ms = random_matrices(1024);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_sym3(ms[i++ & 1023]));
}
BENCHMARK(BM_Eigenvalues);

void BM_DetForm(benchmark::State& state) {
    const auto ms = random_matrices(1024);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(m2_det_form(ms[i++ & 1023]));
}
BENCHMARK(BM_DetForm);

void BM_QFormReport(benchmark::State& state) {
    VerifierConfig c;
    c.samples = 3000;
    const SampleBatch b = sample_level_set(c);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(qform_report(b.spectra[i++ % b.spectra.size()], c.delta()));
}
BENCHMARK(BM_QFormReport);

void BM_Residual(benchmark::State& state) {
    GridField g = GridField::ball(state.range(0), 1.0);
    g.fill([](const Vec3& x) { return 0.25 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); });
    const SolverConfig c;
    for (auto _ : state) benchmark::DoNotOptimize(residual(g, c));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.interior_nodes().size()));
}
BENCHMARK(BM_Residual)->Arg(17)->Arg(33)->Arg(65);

void BM_NewtonStep(benchmark::State& state) {
    const Problem p = make_problem("manufactured");
    SolverConfig c;
    c.boundary = p.boundary;
    c.rhs = p.rhs;
    GridField g = GridField::ball(state.range(0), 1.0);
    g.fill([](const Vec3& x) { return 0.3 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); });
    for (auto _ : state) benchmark::DoNotOptimize(newton_step(g, c));
}
BENCHMARK(BM_NewtonStep)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

void BM_ConcavityScan(benchmark::State& state) {
    VerifierConfig c;
    c.samples = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(concavity_scan(c));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ConcavityScan)->Arg(10000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
