#include <benchmark/benchmark.h>

#include "adimc/market.hpp"
#include "adimc/model.hpp"
#include "adimc/quadrature.hpp"
#include "adimc/rng.hpp"
#include "adimc/runner.hpp"

namespace {

using namespace adimc;

MarketModel basket_market(std::size_t D) {
    return make_market(D, Vec(D, 50.0), Vec(D, 0.2), 0.05, D > 1 ? 0.1 : 0.0, Vec{1.0});
}

GaussianShiftModel basket_model(std::size_t D) {
    MarketModel mm = basket_market(D);
    Payoff p;
    p.weights.assign(D, 1.0 / static_cast<double>(D));
    p.strike = 45.0;
    return GaussianShiftModel([mm, p](const Vec& g) { return payoff_value(mm, p, g); },
                              DriftMatrix::identity(1, D));
}

void BM_NormalStream(benchmark::State& state) {
    NormalStream s(derive_key(1, 0));
    double acc = 0.0;
    for (auto _ : state) acc += s.next();
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_NormalStream);

void BM_BasketPayoff(benchmark::State& state) {
    const auto D = static_cast<std::size_t>(state.range(0));
    GaussianShiftModel model = basket_model(D);
    NormalStream s(derive_key(2, 0));
    Vec g(D);
    Vec theta(D, 0.1);
    double acc = 0.0;
    for (auto _ : state) {
        s.fill(g);
        acc += model.h_value(theta, g);
    }
    benchmark::DoNotOptimize(acc);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BasketPayoff)->Arg(5)->Arg(40);

void BM_CoupledStep(benchmark::State& state) {
    const auto D = static_cast<std::size_t>(state.range(0));
    GaussianShiftModel model = basket_model(D);
    NormalStream s(derive_key(3, 0));
    Vec g(D);
    Vec theta(D, 0.1);
    double acc = 0.0;
    for (auto _ : state) {
        s.fill(g);
        auto [h, u] = model.coupled_h_u2(theta, g);
        acc += h + u[0];
    }
    benchmark::DoNotOptimize(acc);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CoupledStep)->Arg(5)->Arg(40);

void BM_AdisRun(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        GaussianShiftModel model = basket_model(40);
        AlgoParams p;
        p.variant = Variant::adis_xi2;
        p.n = n;
        p.gain = GainSchedule(1.0, 1.0);
        p.compacts = CompactSchedule(1.2, 1.001);
        EstimateReport rep = run_algorithm(model, p, derive_key(4, 0));
        benchmark::DoNotOptimize(rep.estimate);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_AdisRun)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_QuadratureV(benchmark::State& state) {
    double acc = 0.0;
    for (auto _ : state)
        acc += quadrature_v([](double x) { return x > 0.0 ? x : 0.0; }, 1.0, Vec{0.0});
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_QuadratureV);

}  // namespace

BENCHMARK_MAIN();
