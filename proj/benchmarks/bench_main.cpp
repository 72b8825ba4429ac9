// Microbenchmarks for the pipeline's hot paths: FEM assembly, eigensolves,
// kernel regression, and the EC-density evaluation inside p-value code.

#include "mspm/fem.hpp"
#include "mspm/kernel.hpp"
#include "mspm/rft.hpp"
#include "mspm/spectral.hpp"
#include "mspm/synthetic.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace mspm;

const TriangleMesh& sphere(int level) {
    static std::map<int, TriangleMesh> cache;
    auto found = cache.find(level);
    if (found == cache.end()) {
        found = cache.emplace(level, unit_sphere(level)).first;
    }
    return found->second;
}

void bench_assemble(benchmark::State& state) {
    const TriangleMesh& mesh = sphere(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_cotan(mesh));
    }
    state.SetLabel(std::to_string(mesh.vertex_count()) + " vertices");
}
BENCHMARK(bench_assemble)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void bench_solve(benchmark::State& state) {
    const TriangleMesh& mesh = sphere(4);
    const FemMatrices fem = assemble_cotan(mesh);
    const auto k = static_cast<Eigen::Index>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_eigen(fem, k));
    }
    state.SetLabel("level-4 sphere");
}
BENCHMARK(bench_solve)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void bench_regress(benchmark::State& state) {
    const TriangleMesh& mesh = sphere(4);
    const FemMatrices fem = assemble_cotan(mesh);
    const SpectralBasis basis = solve_eigen(fem, 128);
    const ScalarField field = gaussian_noise_field(mesh, 1.0, 7);
    const KernelSpec spec = KernelSpec::heat(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(regress(field, basis, spec));
    }
    state.SetLabel(std::to_string(mesh.vertex_count()) + " vertices, 128 modes");
}
BENCHMARK(bench_regress)->Unit(benchmark::kMicrosecond);

void bench_corrected_p(benchmark::State& state) {
    const Minkowski mink{2.0, 0.0, 2.0 * 3.14159265358979};
    double z = 3.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(corrected_pvalue(z, mink, 19.0, 1.0));
        z = z == 3.0 ? 4.0 : 3.0;  // defeat value caching
    }
}
BENCHMARK(bench_corrected_p);

} // namespace

BENCHMARK_MAIN();
