#include <benchmark/benchmark.h>

#include "heavenly/jet.hpp"
#include "heavenly/rng.hpp"

using namespace heavenly;

namespace {

Jet random_jet(int num_vars, int order, std::uint64_t seed) {
    const CounterRng rng{seed};
    Jet j = Jet::zero(num_vars, order);
    for (int r = 0; r < j.layout().size(); ++r)
        j.coeff_by_rank(r) = Complex{rng.uniform(2 * r), rng.uniform(2 * r + 1)};
    return j;
}

void BM_JetMul(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Jet a = random_jet(n, 4, 1);
    const Jet b = random_jet(n, 4, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(a * b);
    }
}

void BM_JetExp(benchmark::State& state) {
    const Jet a = random_jet(5, 4, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exp(a));
    }
}

void BM_JetReciprocal(benchmark::State& state) {
    Jet a = random_jet(5, 4, 4);
    a += Complex{3.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(reciprocal(a));
    }
}

void BM_SubstituteVar(benchmark::State& state) {
    const Jet f = random_jet(5, 4, 5);
    Jet s = random_jet(5, 4, 6);
    s.coeff_by_rank(0) = 0.25;
    for (auto _ : state) {
        benchmark::DoNotOptimize(substitute_var(f, 4, Complex{0.25}, s));
    }
}

} // namespace

BENCHMARK(BM_JetMul)->Arg(2)->Arg(4)->Arg(5)->Arg(6);
BENCHMARK(BM_JetExp);
BENCHMARK(BM_JetReciprocal);
BENCHMARK(BM_SubstituteVar);
