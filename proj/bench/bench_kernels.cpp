#include "qkr/cone.hpp"
#include "qkr/recon_g1.hpp"

#include <benchmark/benchmark.h>

using namespace qkr;

namespace {

ContextPtr context(int order) {
    return make_context({{"t", 1, AdamsRule::MonomialScaling, -1}, {"s", 1, AdamsRule::MonomialScaling, -1}}, order);
}

Series dense(const ContextPtr& ctx) {
    Series t = Series::generator(ctx, "t"), s = Series::generator(ctx, "s");
    Series x = Series(ctx, Rational(1)) + t + s;
    return power(x, ctx->order()) - Series(ctx, Rational(1));
}

void BM_mul_serial(benchmark::State& state) {
    auto ctx = context(static_cast<int>(state.range(0)));
    Series a = dense(ctx), b = a + Series::generator(ctx, "s");
    for (auto _ : state) benchmark::DoNotOptimize(mul_serial(a, b));
}

void BM_mul_parallel(benchmark::State& state) {
    auto ctx = context(static_cast<int>(state.range(0)));
    Series a = dense(ctx), b = a + Series::generator(ctx, "s");
    for (auto _ : state) benchmark::DoNotOptimize(mul_parallel(a, b));
}

Profile profile(const ContextPtr& ctx, int max_cycle) {
    Series t = Series::generator(ctx, "t"), s = Series::generator(ctx, "s");
    Profile p(max_cycle, Insertion(1));
    p.at(1)[0] = LFunction(Cyc(t)) + LFunction::l_power(1, Cyc(s)) + LFunction::l_power(-1, Cyc(t * s));
    if (max_cycle >= 2) p.at(2)[0] = LFunction(Cyc(s * s));
    return p;
}

std::shared_ptr<const BracketEngine> engine() {
    return std::make_shared<BracketEngine>(
        std::make_shared<ReducingProvider>(builtin_point_provider(), 0), 1);
}

void BM_solve_tau(benchmark::State& state) {
    auto ctx = context(static_cast<int>(state.range(0)));
    Genus0 g0(engine(), KBasis::point(), ctx);
    Profile t = profile(ctx, 2);
    for (auto _ : state) benchmark::DoNotOptimize(g0.solve_tau(t));
}

void BM_f0(benchmark::State& state) {
    auto ctx = context(static_cast<int>(state.range(0)));
    Genus0 g0(engine(), KBasis::point(), ctx);
    Profile t = profile(ctx, 2);
    for (auto _ : state) benchmark::DoNotOptimize(g0.f0(t));
}

void BM_cone_point(benchmark::State& state) {
    auto ctx = context(static_cast<int>(state.range(0)));
    Genus0 g0(engine(), KBasis::point(), ctx);
    Background tau = g0.solve_tau(profile(ctx, 2)).tau;
    for (auto _ : state) benchmark::DoNotOptimize(check_cone_point(g0, tau));
}

}  // namespace

BENCHMARK(BM_mul_serial)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK(BM_mul_parallel)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK(BM_solve_tau)->Arg(2)->Arg(3);
BENCHMARK(BM_f0)->Arg(2)->Arg(3);
BENCHMARK(BM_cone_point)->Arg(2);

BENCHMARK_MAIN();
