#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace qkr;
using namespace qkr::test;

namespace {

Genus0 point_genus0(const ContextPtr& ctx) { return Genus0(point_engine(), KBasis::point(), ctx); }

bool fixed(const Genus0& g0, const Background& tau, const Profile& t) { return is_zero(g0.t_step(tau, t) - tau); }

bool tbar_vanishes_at_one(const Background& tbar) {
    for (int r = 1; r <= tbar.max_cycle(); ++r)
        for (const auto& f : tbar[r])
            if (!value_at_one(f).is_zero()) return false;
    return true;
}

}  // namespace

TEST_CASE("zero input") {
    auto ctx = two_generators(3);
    Genus0 g0 = point_genus0(ctx);
    Profile zero(2, Insertion(1));
    Random rng(51);
    Background tau = rng.profile(ctx, 2).map([](const Insertion& f) { return value_at_one(f); });
    CHECK(is_zero(g0.t_step(tau, zero)));
    TauSolution sol = g0.solve_tau(zero);
    CHECK(is_zero(sol.tau));
    CHECK(is_zero(g0.tbar(zero, sol.tau)));
    CHECK(g0.f0(zero).value.is_zero());
}

TEST_CASE("constant input is fixed after one step") {
    auto ctx = two_generators(3);
    Genus0 g0 = point_genus0(ctx);
    Series t = Series::generator(ctx, "t"), s = Series::generator(ctx, "s");
    Profile c(2, Insertion(1));
    c.at(1)[0] = LFunction(Cyc(t + s));
    c.at(2)[0] = LFunction(Cyc(t * s));
    Random rng(52);
    Background tau = rng.profile(ctx, 2).map([](const Insertion& f) { return value_at_one(f); });
    CHECK(g0.t_step(tau, c) == c);
    TauSolution sol = g0.solve_tau(c);
    CHECK(sol.tau == c);
    CHECK(sol.iterations <= 2);
}

TEST_CASE("first iterate is t(1)") {
    auto ctx = two_generators(3);
    Genus0 g0 = point_genus0(ctx);
    Random rng(53);
    for (int i = 0; i < 5; ++i) {
        Profile t = rng.profile(ctx, 2);
        CHECK(g0.t_step(Background(2, Insertion(1)), t) == t.map([](const Insertion& f) { return value_at_one(f); }));
    }
}

TEST_CASE("fixed point iteration") {
    const int order = 3;
    auto ctx = two_generators(order);
    Genus0 g0 = point_genus0(ctx);
    Random rng(54);
    for (int i = 0; i < 6; ++i) {
        Profile t = rng.profile(ctx, 3);
        TauSolution sol = g0.solve_tau(t);
        CHECK(sol.iterations <= order + 1);
        for (std::size_t k = 1; k < sol.residual_weights.size(); ++k)
            CHECK(sol.residual_weights[k] > sol.residual_weights[k - 1]);
        CHECK(fixed(g0, sol.tau, t));
        CHECK(tbar_vanishes_at_one(g0.tbar(t, sol.tau)));
    }
}

TEST_CASE("fixed points are exactly the zeros of tbar(1)") {
    auto ctx = two_generators(3);
    Genus0 g0 = point_genus0(ctx);
    Profile t = sample_profile(ctx, 2);
    Background first = g0.t_step(Background(2, Insertion(1)), t);
    CHECK_FALSE(fixed(g0, first, t));
    CHECK_FALSE(tbar_vanishes_at_one(g0.tbar(t, first)));
    TauSolution sol = g0.solve_tau(t);
    CHECK(fixed(g0, sol.tau, t));
    CHECK(tbar_vanishes_at_one(g0.tbar(t, sol.tau)));
}

TEST_CASE("contraction") {
    const int order = 3;
    auto ctx = two_generators(order);
    Genus0 g0 = point_genus0(ctx);
    Random rng(55);
    for (int n = 1; n <= order; ++n)
        for (int i = 0; i < 3; ++i) {
            Profile t = rng.profile(ctx, 2);
            Background a = rng.profile(ctx, 2).map([](const Insertion& f) { return value_at_one(f); });
            Background b = a;
            for (int r = 1; r <= 2; ++r) b.at(r)[0] += LFunction(Cyc(rng.series(ctx, std::max(n, r))));
            CHECK(filtration_weight(g0.t_step(a, t) - g0.t_step(b, t)) >= n + 1);
        }
}

TEST_CASE("dilaton shift is fixed by S at solved points") {
    auto ctx = two_generators(3);
    Genus0 g0 = point_genus0(ctx);
    Random rng(56);
    for (int i = 0; i < 3; ++i) {
        TauSolution sol = g0.solve_tau(rng.profile(ctx, 2));
        Frame fr = g0.frame(sol.tau, 1);
        KQ x{QFunc(1) - QFunc::monomial(1) + to_q(sol.tau[1])[0]};
        CHECK(project_plus(fr.s_apply(x)) == KQ{QFunc(1) - QFunc::monomial(1)});
    }
}

TEST_CASE("reconstruction equals direct summation") {
    auto ctx = two_generators(2);
    Genus0 g0 = point_genus0(ctx);
    Random rng(57);
    for (int i = 0; i < 4; ++i) {
        Profile t = rng.profile(ctx, 2);
        CHECK(g0.f0(t).value == f0_direct(g0.engine(), t));
    }
    // Every 3-point value is 1, so F_0 = (t + s + ts)^3 / 6 up to weight 3.
    auto ctx3 = two_generators(3);
    Genus0 g3 = point_genus0(ctx3);
    Profile t = sample_profile(ctx3, 2);
    Series a = Series::generator(ctx3, "t"), b = Series::generator(ctx3, "s");
    F0Result r = g3.f0(t);
    CHECK(r.value == f0_direct(g3.engine(), t));
    CHECK(r.value == QFunc(Cyc(power(a + b, 3) * Rational(1, 6))));
}

TEST_CASE("two-cycle term") {
    auto ctx = two_generators(4);
    Genus0 g0 = point_genus0(ctx);
    Series t = Series::generator(ctx, "t"), s = Series::generator(ctx, "s");
    Profile p = sample_profile(ctx, 2);
    p.at(2)[0] = LFunction(Cyc(s * s)) + LFunction::l_power(1, Cyc(t * t));
    F0Result r = g0.f0(p);
    CHECK(r.value == f0_direct(g0.engine(), p));
    CHECK(r.unstable_correction == QFunc(Cyc((power(s, 4) + power(t, 4)) * Rational(1, 2))));
}

TEST_CASE("string and dilaton identities for brackets") {
    auto ctx = two_generators(2);
    auto eng = point_engine();
    Series t = Series::generator(ctx, "t"), s = Series::generator(ctx, "s");
    Background tau(2, Insertion(1));
    tau.at(1)[0] = LFunction(Cyc(t + s * s));
    tau.at(2)[0] = LFunction(Cyc(t * t));
    for (const auto& id : check_unstable_identities(*eng, KBasis::point(), tau, scalar(LFunction(Cyc(s + t * t))),
                                                    scalar(LFunction::l_power(1, Cyc(t))))) {
        INFO(id.name << " " << id.detail);
        CHECK(id.ok);
    }
}

TEST_CASE("two-point kernel is symmetric") {
    auto ctx = two_generators(3);
    Genus0 g0 = point_genus0(ctx);
    Frame fr = g0.frame(g0.solve_tau(sample_profile(ctx, 2)).tau, 1);
    Separable k = fr.two_point_kernel(0, 0);
    Separable swapped;
    for (const auto& [f, g] : k) swapped.emplace_back(g, f);
    CHECK(separable_equal(k, swapped));
}

TEST_CASE("missing two-cycle data") {
    auto ctx = two_generators(2);
    auto partial = std::make_shared<FunctionalProvider>();
    auto full = builtin_point_provider();
    for (const auto& k : full->keys())
        if (k.type.count(2) == 0) partial->add(k, *full->functional(k));
    Genus0 g0(std::make_shared<BracketEngine>(std::make_shared<ReducingProvider>(partial), 1), KBasis::point(), ctx);
    Profile p = sample_profile(ctx, 2);
    p.at(2)[0] = LFunction(Cyc(power(Series::generator(ctx, "s"), 2)));
    CHECK_THROWS_AS(g0.f0(p), DataIncomplete);
}

TEST_CASE("number of keys touched is bounded") {
    auto ctx = two_generators(3);
    auto rp = std::make_shared<ReducingProvider>(builtin_point_provider());
    Genus0 g0(std::make_shared<BracketEngine>(rp, 1), KBasis::point(), ctx);
    g0.f0(sample_profile(ctx, 2));
    auto keys = rp->keys_touched();
    CHECK_FALSE(keys.empty());
    CHECK(keys.size() < 64);
}
