#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace qkr;
using namespace qkr::test;

namespace {

struct Point {
    ContextPtr ctx;
    Genus0 g0;
    TauSolution sol;
};

Point solved(int order) {
    auto ctx = two_generators(order);
    Genus0 g0(point_engine(), KBasis::point(), ctx);
    Profile p = sample_profile(ctx, 2);
    p.at(2)[0] = LFunction(Cyc(power(Series::generator(ctx, "s"), 2)));
    TauSolution sol = g0.solve_tau(p);
    return {ctx, std::move(g0), std::move(sol)};
}

KQ direction(const ContextPtr& ctx, int k) {
    Series t = Series::generator(ctx, "t"), s = Series::generator(ctx, "s");
    return KQ{QFunc::monomial(k, Cyc(s + t * t))};
}

}  // namespace

TEST_CASE("J at the origin") {
    auto ctx = two_generators(2);
    Genus0 g0(point_engine(), KBasis::point(), ctx);
    Background zero(2, Insertion(1));
    JPoint j = j_eval(g0, Insertion(1), zero);
    CHECK(j.plus == KQ{QFunc(1) - QFunc::monomial(1)});
    CHECK(is_zero(j.minus));
    Series t = Series::generator(ctx, "t");
    Insertion t1 = scalar(LFunction(Cyc(t)));
    JPoint jt = j_eval(g0, t1, zero);
    CHECK(project_plus(jt.value) == KQ{QFunc(1) - QFunc::monomial(1) + QFunc(Cyc(t))});
    QFunc tail = g0.engine().bracket(0, {Slot{1, scalar(LFunction::kernel(1))}}, Background(1, t1));
    CHECK(jt.minus == KQ{tail});
}

TEST_CASE("order zero") {
    auto ctx = two_generators(0);
    Genus0 g0(point_engine(), KBasis::point(), ctx);
    Background zero(2, Insertion(1));
    Frame fr = g0.frame(zero, 1);
    for (const auto& v : tangent_basis(fr, 2)) CHECK(v.value == KQ{QFunc::monomial(v.power)});
    CHECK(j_eval(g0, Insertion(1), zero).value == KQ{QFunc(1) - QFunc::monomial(1)});
}

TEST_CASE("cone point, isotropy and round trip") {
    for (int order : {2, 3}) {
        Point p = solved(order);
        CHECK(check_cone_point(p.g0, p.sol.tau).ok);
        Frame fr = p.g0.frame(p.sol.tau, 1);
        auto family = tangent_basis(fr, 3);
        CHECK(family.size() == 7);
        CHECK(check_isotropy(fr, family).ok);
        CHECK(check_round_trip(fr, family).ok);
    }
}

TEST_CASE("ruling") {
    Point p = solved(2);
    for (int k = -2; k <= 2; ++k) {
        RulingResult r = ruling_check(p.g0, p.sol.tau, direction(p.ctx, k));
        INFO(r.detail);
        CHECK(r.ok);
    }
    RulingResult none = ruling_check(p.g0, p.sol.tau, KQ{QFunc()});
    CHECK(none.ok);
    CHECK(none.t1 == p.sol.tau[1]);
    CHECK(ruling_check(p.g0, Background(2, Insertion(1)), KQ{QFunc::monomial(1, Cyc(Series::generator(p.ctx, "t")))}).ok);
}

TEST_CASE("ruling is linear in the direction") {
    Point p = solved(2);
    JPoint base = j_eval(p.g0, p.sol.tau[1], p.sol.tau);
    KQ v = direction(p.ctx, 1), w = direction(p.ctx, -1);
    RulingResult a = ruling_check(p.g0, p.sol.tau, v);
    RulingResult b = ruling_check(p.g0, p.sol.tau, w);
    RulingResult ab = ruling_check(p.g0, p.sol.tau, v + w);
    CHECK(ab.ok);
    CHECK(ab.point - base.value == (a.point - base.value) + (b.point - base.value));
}

TEST_CASE("points off the cone are rejected") {
    Point p = solved(2);
    Frame fr = p.g0.frame(p.sol.tau, 1);
    // Without the (1 - q) factor the candidate leaves the cone.
    KQ bent = j_eval(p.g0, p.sol.tau[1], p.sol.tau).value + fr.s_inverse_apply(direction(p.ctx, -1));
    KQ plus = project_plus(bent);
    plus[0] -= QFunc(1) - QFunc::monomial(1);
    CHECK_FALSE(j_eval(p.g0, to_insertion(plus), p.sol.tau).value == bent);
}
