#include <benchmark/benchmark.h>

#include <random>

#include "torus/calculus.hpp"
#include "torus/evolve.hpp"
#include "torus/fso.hpp"

using namespace torus;

namespace {

GridFunction random_gridfn(unsigned seed, const FrequencyBox& box, int N) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<cplx> coeffs(box.size());
    for (auto& c : coeffs) c = cplx(d(rng), d(rng));
    return GridFunction::from_coefficients(box, N, std::move(coeffs));
}

SymbolTable bracket_wave_symbol(const FrequencyBox& box, int N) {
    return SymbolTable::from_rule(box, N, {1, 1, 0},
                                  [](const std::vector<double>& x, const LatticePoint& xi) {
                                      return (2.0 + std::cos(x[0])) * xi.bracket();
                                  });
}

}  // namespace

static void BM_transform_roundtrip(benchmark::State& state) {
    int K = int(state.range(0));
    FrequencyBox box(1, K);
    int N = box.default_grid();
    auto u = random_gridfn(1, box, N);
    for (auto _ : state) {
        auto v = inverse_ft(toroidal_ft(u), box, N);
        benchmark::DoNotOptimize(v.samples().data());
    }
}
BENCHMARK(BM_transform_roundtrip)->Arg(16)->Arg(32)->Arg(64);

static void BM_apply_pdo(benchmark::State& state) {
    int K = int(state.range(0));
    FrequencyBox box(1, K);
    int N = box.default_grid();
    auto a = bracket_wave_symbol(box, N);
    auto u = random_gridfn(2, box, N);
    for (auto _ : state) {
        auto v = apply_pdo(a, u);
        benchmark::DoNotOptimize(v.coefficients().data());
    }
}
BENCHMARK(BM_apply_pdo)->Arg(16)->Arg(32)->Arg(64);

static void BM_compose_symbols(benchmark::State& state) {
    int K = int(state.range(0));
    FrequencyBox box(1, K, 4);
    int N = FrequencyBox(1, K).default_grid();
    auto a = bracket_wave_symbol(box, N);
    auto b = bracket_wave_symbol(box, N);
    for (auto _ : state) {
        auto c = compose_symbols(a, b, 3);
        benchmark::DoNotOptimize(c.values().data());
    }
}
BENCHMARK(BM_compose_symbols)->Arg(32)->Arg(64);

static void BM_extract_symbol(benchmark::State& state) {
    int K = int(state.range(0));
    FrequencyBox work(1, K + 4, 0);
    FrequencyBox target(1, K, 0);
    int N = FrequencyBox(1, K + 4).default_grid();
    auto a = bracket_wave_symbol(FrequencyBox(1, K + 4, 0), N);
    auto A = pdo_operator(a);
    for (auto _ : state) {
        auto s = extract_symbol(A, target, N);
        benchmark::DoNotOptimize(s.values().data());
    }
}
BENCHMARK(BM_extract_symbol)->Arg(16)->Arg(32);

static void BM_operator_norm(benchmark::State& state) {
    int K = int(state.range(0));
    FrequencyBox box(1, K);
    int N = box.default_grid();
    auto a = SymbolTable::from_rule(box, N, {0, 1, 0},
                                    [](const std::vector<double>& x, const LatticePoint& xi) {
                                        return std::polar(1.0, x[0]) / xi.bracket();
                                    });
    auto A = pdo_operator(a);
    for (auto _ : state) benchmark::DoNotOptimize(operator_norm(A));
}
BENCHMARK(BM_operator_norm)->Arg(8)->Arg(16);

static void BM_reference_evolution(benchmark::State& state) {
    int K = int(state.range(0));
    FrequencyBox box(1, K);
    int N = box.default_grid();
    auto f = random_gridfn(3, box, N);
    LatticeFunction a1(1, 4 * K, [](const LatticePoint& xi) {
        return cplx(double(xi[0]));
    });
    auto a0 = SymbolTable::from_rule(box, N, {0, 1, 0},
                                     [](const std::vector<double>& x, const LatticePoint&) {
                                         return 0.1 * std::polar(1.0, x[0]);
                                     });
    CauchyProblem P(a1, a0, f, {0.0, 0.5});
    for (auto _ : state) {
        auto sol = solve_reference(P, 1e-7);
        benchmark::DoNotOptimize(sol.states.back().coefficients().data());
    }
}
BENCHMARK(BM_reference_evolution)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
