#include <benchmark/benchmark.h>

#include <cstddef>
#include <cstdint>
#include <numbers>

#include "qsl/bounds.hpp"
#include "qsl/evolution.hpp"
#include "qsl/linalg.hpp"
#include "qsl/rng.hpp"
#include "qsl/scenarios.hpp"
#include "qsl/subspace.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

qsl::ComplexMatrix seeded_gue(std::size_t dim) {
    qsl::Rng rng(0xB000ULL + dim);
    return qsl::sample_hamiltonian(dim, qsl::EnsembleKind::gue, rng);
}

qsl::OrthogonalProjector seeded_projector(std::size_t dim, std::size_t rank) {
    qsl::Rng rng(0xB100ULL + 31 * dim + rank);
    return qsl::OrthogonalProjector::from_basis(qsl::sample_subspace(dim, rank, rng));
}

void bm_hermitian_eigen(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const qsl::ComplexMatrix m = seeded_gue(dim);
    for (auto _ : state) {
        auto ed = qsl::hermitian_eigen(m);
        benchmark::DoNotOptimize(ed.eigenvalues.data());
    }
}
BENCHMARK(bm_hermitian_eigen)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Unit(
    benchmark::kMicrosecond);

void bm_propagator_step(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const qsl::HermitianOperator h(seeded_gue(dim));
    const qsl::ProjectionPath path(h, seeded_projector(dim, dim / 4));
    double t = 0.1;
    for (auto _ : state) {
        t += 1e-3;  // vary the time so no call can be folded away
        double probe = path.at(t).matrix()(0, 0).real();
        benchmark::DoNotOptimize(probe);
    }
}
BENCHMARK(bm_propagator_step)->Arg(8)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void bm_angle_trace(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const qsl::HermitianOperator h(seeded_gue(dim));
    const auto p = seeded_projector(dim, dim / 4);
    std::size_t samples = 0;
    for (auto _ : state) {
        const auto trace = qsl::angle_trace(h, p, 2.0, 1e-2);
        samples = trace.times.size();
        benchmark::DoNotOptimize(trace.angles.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(samples) * state.iterations());
}
BENCHMARK(bm_angle_trace)->Arg(8)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void bm_dispersion(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const auto rank = static_cast<std::size_t>(state.range(1));
    const qsl::HermitianOperator h(seeded_gue(dim));
    const auto p = seeded_projector(dim, rank);
    for (auto _ : state) {
        const auto result = qsl::subspace_dispersion(h, p);
        benchmark::DoNotOptimize(result.value);
    }
}
BENCHMARK(bm_dispersion)
    ->Args({4, 2})
    ->Args({8, 2})
    ->Args({8, 4})
    ->Args({16, 4})
    ->Args({16, 8})
    ->Unit(benchmark::kMillisecond);

void bm_first_crossing_two_level(benchmark::State& state) {
    const auto scenario = qsl::two_level(0.0, 1.0);
    const qsl::HermitianOperator h = scenario.hamiltonian();
    const auto p = scenario.initial_projector();
    for (auto _ : state) {
        const auto hit = qsl::first_crossing_time(h, p, kPi / 4, 10.0);
        benchmark::DoNotOptimize(hit.value);
    }
}
BENCHMARK(bm_first_crossing_two_level)->Unit(benchmark::kMillisecond);

void bm_first_crossing_dense(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const qsl::HermitianOperator h(seeded_gue(dim));
    const auto p = seeded_projector(dim, dim / 2);
    for (auto _ : state) {
        const auto hit = qsl::first_crossing_time(h, p, kPi / 6, 40.0);
        benchmark::DoNotOptimize(hit.value);
    }
}
BENCHMARK(bm_first_crossing_dense)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void bm_bound_report(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const qsl::HermitianOperator h(seeded_gue(dim));
    const auto p = seeded_projector(dim, dim > 2 ? 3 : 1);
    for (auto _ : state) {
        const auto rep = qsl::bound_report(h, p, kPi / 4, 40.0);
        benchmark::DoNotOptimize(rep.measured.value);
    }
}
BENCHMARK(bm_bound_report)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
