#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <filesystem>

using namespace qkr;
using namespace qkr::test;

namespace {

Profile mixed_profile(const ContextPtr& ctx) {
    Series t = Series::generator(ctx, "t"), s = Series::generator(ctx, "s");
    Profile p = sample_profile(ctx, 4);
    p.at(2)[0] = LFunction(Cyc(s * s)) + LFunction::l_power(1, Cyc(t * t));
    p.at(3)[0] = LFunction::l_power(2, Cyc(t * t * t));
    return p;
}

EdgeData unit_edge() {
    EdgeData e;
    for (int r : {1, 2, 3, 4, 6}) {
        e.tau_derivative[r] = Cyc(1);
        e.xbar[r] = QFunc(1) - QFunc::monomial(1);
    }
    return e;
}

}  // namespace

TEST_CASE("psi intersection numbers") {
    CHECK(psi_integral(0, {0, 0, 0}) == 1);
    CHECK(psi_integral(0, {1, 1, 0, 0, 0}) == 2);
    CHECK(psi_integral(0, {2, 0, 0, 0, 0}) == 1);
    CHECK(psi_integral(0, {1, 0, 0}) == 0);
    CHECK(psi_integral(1, {1}) == Rational(1, 24));
    CHECK(psi_integral(1, {1, 1}) == Rational(1, 24));
    CHECK(psi_integral(1, {2, 0}) == Rational(1, 24));
    CHECK(psi_integral(1, {1, 1, 1}) == Rational(1, 12));
    CHECK(psi_integral(1, {2, 1, 0}) == Rational(1, 12));
    CHECK(psi_integral(1, {3, 0, 0}) == Rational(1, 24));
    CHECK(psi_integral(1, {0}) == 0);
}

TEST_CASE("cover constants") {
    CoverConstants c = cover_constants();
    CHECK(c.squared_sum == 2);
    CHECK(c.cover_value == Rational(1, 4));
    CHECK(c.coefficient_b == Rational(1, 48));
    CHECK(c.coefficient_c == Rational(1, 6));
}

TEST_CASE("balanced shapes and dilaton factors") {
    CHECK(balanced_shape(2)->base == CycleType::parse("4_1"));
    CHECK(balanced_shape(3)->base == CycleType::parse("3_1"));
    CHECK(balanced_shape(4)->base == CycleType::parse("2_1+1_2"));
    CHECK(balanced_shape(6)->base == CycleType::parse("1_1+1_2+1_3"));
    CHECK_FALSE(balanced_shape(5));
    CHECK(balanced_shape(2)->factor(0) == 4);
    CHECK(balanced_shape(3)->factor(1) == 6);
    CHECK(balanced_shape(6)->factor(0) == 6);
    for (int l = 0; l < 4; ++l) {
        CHECK(balanced_shape(2)->factor(l) == 4 + 2 * l);
        CHECK(balanced_shape(3)->factor(l) == 3 + 3 * l);
        CHECK(balanced_shape(4)->factor(l) == 4 + 4 * l);
        CHECK(balanced_shape(6)->factor(l) == 6 + 6 * l);
    }
}

TEST_CASE("shipped balanced tables satisfy the dilaton rewrite") {
    for (int m : kBalancedOrders) {
        auto t = load_table(source_path("data/genus1/balanced_" + std::to_string(m) + ".jsonl"));
        CHECK(t.kind.theory == "balanced");
        CHECK(t.kind.order == m);
        VerifyReport r = verify_perm_dilaton(*t.provider, m);
        CHECK(r.ok());
        CHECK(r.checked > 0);
    }
    auto bad = load_table(source_path("tests/fixtures/corrupt_balanced_2.jsonl"));
    VerifyReport r = verify_perm_dilaton(*bad.provider, 2);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations.front().key.find("4_1+1_2") != std::string::npos);
}

TEST_CASE("rewrite reads the smaller row when the key is absent") {
    auto t = load_table(source_path("data/genus1/balanced_2.jsonl"));
    FunctionalProvider base;
    RawKey k{1, CycleType::parse("4_1"), {0, 0, 0, 0}};
    base.add(k, *t.provider->functional(k));
    std::vector<LFunction> slots{LFunction::kernel(1), 1, LFunction::l_power(1), 1};
    auto direct = perm_dilaton_rewrite(*t.provider, 2, 0, slots);
    auto derived = perm_dilaton_rewrite(base, 2, 0, slots);
    REQUIRE(direct);
    REQUIRE(derived);
    CHECK(direct->from_table);
    CHECK_FALSE(derived->from_table);
    CHECK(direct->value == derived->value);
    CHECK(derived->value == base.evaluate(k, slots) * Cyc(4));
    CHECK_FALSE(perm_dilaton_rewrite(base, 5, 0, slots));
}

TEST_CASE("extending a consistent table changes nothing") {
    for (int m : kBalancedOrders) {
        auto t = load_table(source_path("data/genus1/balanced_" + std::to_string(m) + ".jsonl"));
        FunctionalProvider copy = *t.provider;
        CHECK(extend_balanced(copy, m, 6 / m) == 0);
        CHECK(copy.keys().size() == t.provider->keys().size());
    }
    CHECK(extension_weight(2, 1, 1) == Rational(2));
    CHECK(extension_weight(2, 2, 2) == Rational(6));
    CHECK(extension_weight(3, 2, 0) == 1);
}

TEST_CASE("fake genus-1 series") {
    auto fake = builtin_genus1_fake(4);
    CHECK(verify_fake_string(*fake).ok());
    QFunc c0 = fake_one_point(*fake, 0);
    // 5/24 / (1 - x) + x / 24 / (1 - x)^2
    QFunc x = QFunc::monomial(1);
    QFunc expected = QFunc::pole(0, 1, Cyc(Rational(5, 24))) + x * QFunc::pole(0, 2, Cyc(Rational(1, 24)));
    CHECK(c0 == expected);
    for (int n = 1; n <= 3; ++n) CHECK(fake_one_point(*fake, n) * (QFunc(1) - x) == fake_one_point(*fake, n - 1));
    auto shipped = load_table(source_path("data/genus1/fake.jsonl"));
    CHECK(shipped.kind.theory == "fake");
    CHECK(fake_one_point(*shipped.provider, 3) == fake_one_point(*fake, 3));
}

TEST_CASE("twisted residue functional") {
    auto fake = builtin_genus1_fake(4);
    CHECK(ftw_eval(*fake, QFunc()).is_zero());
    auto ctx = two_generators(3);
    Series e = Series::generator(ctx, "t");
    Random rng(61);
    for (int i = 0; i < 10; ++i) {
        QFunc tbar;
        for (int k = -2; k <= 2; ++k) tbar += QFunc::monomial(k, Cyc(rng.series(ctx, 1)));
        CHECK(ftw_eval(*fake, tbar) == ftw_eval_complement(*fake, tbar));
    }
    // Linear term for tbar = e(1 - q): n = 0 alone survives at order 1.
    auto lin = make_context({{"e", 1, AdamsRule::MonomialScaling, -1}}, 1);
    Cyc eps(Series::generator(lin, "e"));
    QFunc tb = (QFunc(1) - QFunc::monomial(1)) * eps;
    QFunc integrand = (fake_one_point(*fake, 0) * invert_variable(tb)).shifted(-1);
    Cyc expected = residue(integrand, QPoint::zero()) + residue(integrand, QPoint::at_root(0)) +
                   residue(integrand, QPoint::infinity());
    CHECK(ftw_eval(*fake, tb) == expected);
    CHECK(residue_total(integrand).is_zero());
}

TEST_CASE("constant-bracket permutation integrand") {
    // (1/24) (1 - 1/x)^4 / x with the bracket replaced by 1.
    EdgeData e = unit_edge();
    e.tbar_22 = Cyc(0);
    QFunc f = fperm_integrand(2, QFunc(1), e);
    QFunc u = QFunc(1) - QFunc::monomial(-1);
    CHECK(f == u * u * u * u * Cyc(Rational(1, 24)));
    QFunc form = f.shifted(-1);
    Cyc zero_inf = residue(form, QPoint::zero()) + residue(form, QPoint::infinity());
    CHECK(fperm_eval(2, QFunc(1), e) == zero_inf);
    CHECK(zero_inf.is_zero());
    CHECK(residue_total(form).is_zero());
    for (int m : kBalancedOrders) {
        EdgeData z = unit_edge();
        for (auto& [r, x] : z.xbar) x = QFunc();
        CHECK(fperm_eval(m, QFunc::pole(3, 1), z).is_zero());
        QFunc bracket = QFunc::pole(kConductor / m, 1, Cyc(2)) + QFunc(Cyc(Rational(1, 7)));
        CHECK(fperm_eval(m, bracket, e) == fperm_eval_roots(m, bracket, e));
    }
}

TEST_CASE("order-4 bracket key round trips through the table format") {
    auto t = load_table(source_path("data/genus1/balanced_4.jsonl"));
    RawKey k{1, CycleType::parse("2_1+1_2"), {0, 0, 0}};
    REQUIRE(t.provider->contains(k));
    CHECK(k.type.slot_cycles() == std::vector<int>{1, 1, 2});
    auto dir = std::filesystem::temp_directory_path() / "qkr_test_g1";
    std::filesystem::create_directories(dir);
    write_table(t, (dir / "b4.jsonl").string());
    Table back = load_table((dir / "b4.jsonl").string());
    std::vector<LFunction> slots{LFunction::kernel(1), 1, 1};
    CHECK(back.provider->evaluate(k, slots) == t.provider->evaluate(k, slots));
    CHECK(back.kind == t.kind);
    std::filesystem::remove_all(dir);
}

TEST_CASE("genus-1 reconstruction") {
    auto ctx = two_generators(3);
    Genus1Point g1(point_engine(), ctx, shipped_genus1_tables());
    SUBCASE("zero input") {
        F1Result r = g1.f1(Profile(1, Insertion(1)));
        CHECK(r.value.is_zero());
        CHECK(r.potential_at_tau.is_zero());
    }
    SUBCASE("sector-one input") {
        Profile p = sample_profile(ctx, 1);
        F1Result r = g1.f1(p);
        for (const auto& id : check_edge_identity(r.edge)) CHECK(id.ok);
        CHECK(r.ftw_new == ftw_eval_complement(*shipped_genus1_tables().fake, r.tbar_new));
        CHECK(r.value == r.potential_at_tau + r.log_term + r.ftw_new - r.ftw_fake + r.fperm.at(2) + r.fperm.at(3) +
                             r.fperm.at(4) + r.fperm.at(6));
    }
    SUBCASE("mixed input") {
        Profile p = mixed_profile(ctx);
        F1Result r = g1.f1(p);
        for (const auto& id : check_edge_identity(r.edge)) CHECK(id.ok);
        auto tabs = shipped_genus1_tables();
        for (const auto& [m, v] : r.fperm)
            CHECK(fperm_eval_roots(m, balanced_bracket(tabs.balanced.at(m), m, r.solution.tau), r.edge) == v);
        CHECK(r.value.is_rational());
        CHECK(r.value.str() == "25/24*s + 73/48*s^2 + 157/72*s^3 + t - 247691/12285*t*s - 2659/1260*t*s^2 + 1/2*t^2 + 37/24*t^2*s + 38863/546*t^3");
    }
}

TEST_CASE("tbar new collapses to fake when tbar_1 vanishes") {
    auto ctx = two_generators(3);
    Genus1Point g1(point_engine(), ctx, shipped_genus1_tables());
    TauSolution sol = g1.genus0().solve_tau(sample_profile(ctx, 2));
    CHECK(g1.tbar_new(sol.tau, Insertion(1)) == g1.tbar_fake(sol.tau));
    CHECK(g1.tbar_fake(Background(2, Insertion(1))).is_zero());
    Series t = Series::generator(ctx, "t");
    Background tau(1, Insertion(1));
    tau.at(1)[0] = LFunction(Cyc(t));
    QFunc first = g1.genus0().engine().bracket(0, {Slot{1, scalar(LFunction::kernel(1))}}, tau);
    CHECK(g1.tbar_fake(tau) == QFunc(Cyc(t)) + first);
}

TEST_CASE("derivative of tau against the edge identity") {
    auto ctx = two_generators(3);
    Genus1Point g1(point_engine(), ctx, shipped_genus1_tables());
    Random rng(62);
    for (int i = 0; i < 3; ++i) {
        Profile p = rng.profile(ctx, 4);
        TauSolution sol = g1.genus0().solve_tau(widen(p, 6));
        Background tbar = g1.genus0().tbar(widen(p, 6), sol.tau);
        EdgeData e = g1.edge_data(widen(p, 6), sol.tau, tbar);
        for (int r = 1; r <= 4; ++r) {
            CHECK(e.tau_derivative.at(r) * (Cyc(1) - e.tbar_linear.at(r)) == Cyc(1));
        }
    }
}

TEST_CASE("missing balanced table") {
    auto ctx = two_generators(2);
    auto tabs = shipped_genus1_tables();
    tabs.balanced.erase(6);
    Genus1Point g1(point_engine(), ctx, tabs);
    CHECK_THROWS_AS(g1.f1(sample_profile(ctx, 1)), DataIncomplete);
}
