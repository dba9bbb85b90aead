#include <benchmark/benchmark.h>

#include "heavenly/geometry.hpp"
#include "heavenly/residuals.hpp"

using namespace heavenly;

namespace {

const SpectralSolution kCubic = cubic_family(1.0, 0.5, 1.0 / 3, -0.75, 0.25, -2.0 / 3);
const SpectralSolution kExp = exp_family(1.0, 0.5, 1.0 / 3, -0.25, 0.25, -2.0 / 3);
const Complex kP{0.3, -0.2}, kZ{0.5, 0.1};
const double kRho = 0.7;

void BM_LinearResiduals(benchmark::State& state) {
    for (auto _ : state) {
        const PointJets pj = PointJets::real_slice(kP, kZ, kRho, 2);
        benchmark::DoNotOptimize(linear_system_residuals(eval_w(kCubic, pj)));
    }
}

void BM_CubicVJet(benchmark::State& state) {
    const int order = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cubic_v_jet(kCubic, kP, kZ, kRho, Branch::plus, order));
    }
}

void BM_ExpVJet(benchmark::State& state) {
    const Complex p{0.2, 0.1}, z{0.15, -0.1};
    if (!exp_v_jet(kExp, p, z, 0.4, Branch::plus, 2).valid())
        state.SkipWithError("branch invalid at the benchmark point");
    for (auto _ : state) {
        benchmark::DoNotOptimize(exp_v_jet(kExp, p, z, 0.4, Branch::plus, 4));
    }
}

void BM_MetricAndCurvature(benchmark::State& state) {
    const VJet vj = cubic_v_jet(kCubic, kP, kZ, kRho, Branch::plus, 4);
    for (auto _ : state) {
        const MetricJets mj = transformed_metric_jets(vj.v, kP, kZ, kRho);
        benchmark::DoNotOptimize(curvature(mj));
    }
}

void BM_ImplicitLegendre(benchmark::State& state) {
    const WField field = make_w_field(kCubic);
    const CubicV cv = cubic_v(kCubic, kP, kZ, kRho, Branch::plus);
    for (auto _ : state) {
        benchmark::DoNotOptimize(implicit_legendre(field, kP, kZ, kRho, cv.r, 4));
    }
}

void BM_Invert2d(benchmark::State& state) {
    const VJetField field = make_v_field(kCubic, Branch::plus);
    const VJet vj = field(kP, kZ, kRho, 2);
    const Complex z1 = -vj.v.partial({1, 0, 0, 0, 0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(invert_legendre_2d(field, z1, kZ, kRho, kP));
    }
}

} // namespace

BENCHMARK(BM_LinearResiduals);
BENCHMARK(BM_CubicVJet)->Arg(2)->Arg(4);
BENCHMARK(BM_ExpVJet);
BENCHMARK(BM_MetricAndCurvature);
BENCHMARK(BM_ImplicitLegendre);
BENCHMARK(BM_Invert2d);

BENCHMARK_MAIN();
