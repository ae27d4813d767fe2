// One PASS/FAIL line per acceptance criterion; exact checks with pinned time limits.
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

using namespace qkr;
using namespace qkr::test;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
    void require(bool cond, const std::string& what) {
        if (cond || !ok) {
            ok = ok && cond;
            return;
        }
        ok = false;
        detail = what;
    }
};

struct Criterion {
    int id;
    std::string title;
    double limit_seconds;  // 0: no limit
    std::function<Outcome()> body;
};

Background solved_background(const Genus0& g0, const Profile& t) { return g0.solve_tau(t).tau; }

Outcome structural_identities() {
    Outcome o;
    auto p = builtin_point_provider();
    auto keys = p->keys();
    for (const auto& r : {verify_string(*p, keys), verify_dilaton(*p, keys)})
        o.require(r.ok() && r.checked > 0, r.suite + (r.ok() ? ": nothing checked" : ": " + r.violations[0].key));
    auto ctx = two_generators(2);
    Series t = Series::generator(ctx, "t"), s = Series::generator(ctx, "s");
    BracketEngine eng(p, 1);
    Background tau(2, Insertion(1));
    tau.at(1)[0] = LFunction(Cyc(t + s));
    tau.at(2)[0] = LFunction(Cyc(t * t));
    auto probes = probe_insertions();
    for (const auto& b : {Background(2, Insertion(1)), tau}) {
        for (std::size_t i = 0; i + 3 < probes.size() + 3; ++i) {
            std::vector<Insertion> in;
            for (std::size_t k = 0; k < 4; ++k) in.push_back(scalar(probes[(i + k) % probes.size()] * Cyc(static_cast<int>(k) + 1)));
            auto r = verify_wdvv_symmetry(eng, KBasis::point(), b, in);
            o.require(r.ok(), "WDVV symmetry");
        }
        auto r = verify_wdvv_two_point(eng, KBasis::point(), b);
        o.require(r.ok(), "two-point WDVV");
    }
    return o;
}

Outcome dilaton_shift_fixed() {
    Outcome o;
    auto ctx = two_generators(3);
    Genus0 g0(point_engine(), KBasis::point(), ctx);
    Random rng(101);
    for (int i = 0; i < 10; ++i) {
        Background tau = solved_background(g0, rng.profile(ctx, 2));
        Frame fr = g0.frame(tau, 1);
        KQ x{QFunc(1) - QFunc::monomial(1) + to_q(tau[1])[0]};
        o.require(project_plus(fr.s_apply(x)) == KQ{QFunc(1) - QFunc::monomial(1)}, "profile " + std::to_string(i));
    }
    return o;
}

Outcome contraction() {
    Outcome o;
    const int order = 4;
    auto ctx = two_generators(order);
    Genus0 g0(point_engine(), KBasis::point(), ctx);
    Random rng(102);
    for (int n = 1; n <= order; ++n)
        for (int i = 0; i < 3; ++i) {
            Profile t = rng.profile(ctx, 2);
            Background a = rng.profile(ctx, 2).map([](const Insertion& f) { return value_at_one(f); });
            Background b = a;
            for (int r = 1; r <= 2; ++r) b.at(r)[0] += LFunction(Cyc(rng.series(ctx, std::max(n, r))));
            o.require(filtration_weight(g0.t_step(a, t) - g0.t_step(b, t)) >= n + 1, "n = " + std::to_string(n));
        }
    return o;
}

Outcome fixed_point() {
    Outcome o;
    const int order = 3;
    auto ctx = two_generators(order);
    Genus0 g0(point_engine(), KBasis::point(), ctx);
    Random rng(103);
    for (int i = 0; i < 10; ++i) {
        Profile t = rng.profile(ctx, 3);
        TauSolution sol = g0.solve_tau(t);
        o.require(sol.iterations <= order + 1, "iterations " + std::to_string(sol.iterations));
        Background tbar = g0.tbar(t, sol.tau);
        for (int r = 1; r <= tbar.max_cycle(); ++r)
            o.require(value_at_one(tbar[r][0]).is_zero(), "tbar_" + std::to_string(r) + "(1) != 0");
    }
    return o;
}

Outcome reconstruction() {
    Outcome o;
    // Every term of F_0 has weight >= 3, so N = 2 compares zeros; N = 3 and 4 compare nonzero values.
    for (int order : {2, 3, 4}) {
        auto ctx = two_generators(order);
        Genus0 g0(point_engine(), KBasis::point(), ctx);
        Random rng(104 + order);
        const std::string at = "N = " + std::to_string(order);
        for (int i = 0; i < 6; ++i) {
            Profile t = rng.profile(ctx, 1);
            o.require(g0.f0(t).value == f0_direct(g0.engine(), t), at + ", profile " + std::to_string(i));
        }
        Profile t = sample_profile(ctx, 1);
        QFunc value = g0.f0(t).value;
        o.require(value == f0_direct(g0.engine(), t), at + ", sample profile");
        o.require(order < 3 || !value.is_zero(), at + ": vanishing comparison");
    }
    return o;
}

Outcome bracket_identities() {
    Outcome o;
    auto ctx = two_generators(2);
    auto eng = point_engine();
    Random rng(105);
    for (int i = 0; i < 4; ++i) {
        Background tau = rng.profile(ctx, 2).map([](const Insertion& f) { return value_at_one(f); });
        Insertion a = scalar(LFunction(Cyc(rng.series(ctx, 0))));
        Insertion t1 = rng.profile(ctx, 1)[1];
        for (const auto& id : check_unstable_identities(*eng, KBasis::point(), tau, a, t1)) o.require(id.ok, id.name);
    }
    return o;
}

Outcome constants() {
    Outcome o;
    CoverConstants c = cover_constants();
    o.require(psi_integral(1, {1}) == Rational(1, 24), "seed");
    o.require(c.squared_sum == 2, "squared sum " + to_string(c.squared_sum));
    o.require(c.cover_value == Rational(1, 4), "cover value " + to_string(c.cover_value));
    o.require(c.coefficient_b == Rational(1, 48), "coefficient " + to_string(c.coefficient_b));
    o.require(c.coefficient_c == Rational(1, 6), "coefficient " + to_string(c.coefficient_c));
    return o;
}

Outcome edge_identity() {
    Outcome o;
    auto ctx = two_generators(3);
    Genus1Point g1(point_engine(), ctx, shipped_genus1_tables());
    Random rng(106);
    for (int i = 0; i < 4; ++i) {
        Profile t = widen(rng.profile(ctx, 4), 6);
        TauSolution sol = g1.genus0().solve_tau(t);
        EdgeData e = g1.edge_data(t, sol.tau, g1.genus0().tbar(t, sol.tau));
        for (int r = 1; r <= 4; ++r)
            o.require(e.tau_derivative.at(r) * (Cyc(1) - e.tbar_linear.at(r)) == Cyc(1), "r = " + std::to_string(r));
    }
    return o;
}

Outcome rewrite_factors() {
    Outcome o;
    for (int m : kBalancedOrders) {
        auto shape = *balanced_shape(m);
        auto table = load_table(source_path("data/genus1/balanced_" + std::to_string(m) + ".jsonl"));
        VerifyReport r = verify_perm_dilaton(*table.provider, m);
        o.require(r.ok() && r.checked > 0, "order " + std::to_string(m) + " table");
        RawKey base{1, shape.base, std::vector<int>(shape.base.cycles(), 0)};
        FunctionalProvider rebuilt;
        rebuilt.add(base, *table.provider->functional(base));
        extend_balanced(rebuilt, m, 6 / m);
        o.require(rebuilt.keys().size() > 1, "order " + std::to_string(m) + " not extended");
        for (const auto& k : rebuilt.keys()) {
            o.require(table.provider->contains(k), "shipped table lacks " + k.str());
            if (!table.provider->contains(k)) continue;
            auto probes = probe_insertions();
            std::vector<LFunction> slots(k.type.cycles(), LFunction(1));
            slots[0] = LFunction::kernel(1);
            slots.back() = probes[1];
            o.require(rebuilt.evaluate(k, slots) == table.provider->evaluate(k, slots), "rebuilt " + k.str());
        }
    }
    auto bad = load_table(source_path("tests/fixtures/corrupt_balanced_2.jsonl"));
    o.require(!verify_perm_dilaton(*bad.provider, 2).ok(), "corrupted table accepted");
    return o;
}

Outcome cone() {
    Outcome o;
    auto ctx = two_generators(2);
    Genus0 g0(point_engine(), KBasis::point(), ctx);
    Series t = Series::generator(ctx, "t"), s = Series::generator(ctx, "s");
    Background tau = solved_background(g0, sample_profile(ctx, 2));
    IdentityReport cp = check_cone_point(g0, tau);
    o.require(cp.ok, cp.detail);
    Frame fr = g0.frame(tau, 1);
    auto family = tangent_basis(fr, 3);
    IdentityReport iso = check_isotropy(fr, family);
    o.require(iso.ok, iso.detail);
    IdentityReport rt = check_round_trip(fr, family);
    o.require(rt.ok, rt.detail);
    int directions = 0;
    for (int k = -2; k <= 2; ++k)
        for (const Cyc& c : {Cyc(s), Cyc(t * t + s)}) {
            RulingResult r = ruling_check(g0, tau, KQ{QFunc::monomial(k, c)});
            o.require(r.ok, r.detail);
            ++directions;
        }
    o.require(directions >= 5, "too few directions");
    return o;
}

Outcome polarization_kernel() {
    Outcome o;
    Random rng(107);
    int cases = 0;
    for (int i = 0; i < 600; ++i, ++cases) {
        QFunc f = rng.qfunc(4, 3), g = rng.qfunc(4, 3);
        QFunc plus = project_plus(f);
        o.require(project_plus(plus) == plus, "idempotence");
        o.require(plus + project_minus(f) == f, "split");
        o.require(residue_total(f * g).is_zero(), "residue theorem");
        o.require(omega_scalar(plus, project_plus(g)).is_zero(), "Omega on K_+");
    }
    o.require(cases >= 500, "too few cases");
    return o;
}

}  // namespace

int main() {
    std::vector<Criterion> all{
        {1, "string, dilaton and WDVV identities on the built-in provider", 30, structural_identities},
        {2, "[S(1 - q + tau_1)]_+ = 1 - q at solved points, N = 3", 60, dilaton_shift_fixed},
        {3, "contraction of the tau map, n <= 4", 60, contraction},
        {4, "fixed point in <= N + 1 steps with tbar(1) = 0, N = 3", 0, fixed_point},
        {5, "reconstructed F_0 equals direct summation, N = 2 (and 3, 4)", 120, reconstruction},
        {6, "unstable-term and string/dilaton bracket identities, N = 2", 0, bracket_identities},
        {7, "genus-1 cover constants 2, 1/4, 1/48, 1/6", 0, constants},
        {8, "1/(1 - tbar_{r,1}) = d tau_r / d t_{r,0}, r <= 4, N = 3", 0, edge_identity},
        {9, "balanced dilaton factors verified and used to extend tables", 0, rewrite_factors},
        {10, "cone point, isotropy and ruling round trip, N = 2", 120, cone},
        {11, "polarization and residue kernel, 600 random cases", 30, polarization_kernel},
    };
    int failed = 0;
    for (const auto& c : all) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = c.limit_seconds == 0 || secs < c.limit_seconds;
        bool pass = o.ok && in_time;
        failed += !pass;
        char timing[64];
        if (c.limit_seconds > 0) std::snprintf(timing, sizeof timing, "%.2fs < %.0fs", secs, c.limit_seconds);
        else std::snprintf(timing, sizeof timing, "%.2fs", secs);
        std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << " [" << timing << "] " << c.title;
        if (!o.ok) std::cout << " -- " << o.detail;
        if (!in_time) std::cout << " -- time limit exceeded";
        std::cout << "\n";
    }
    return failed == 0 ? 0 : 1;
}
