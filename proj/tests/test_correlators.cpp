#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

using namespace qkr;
using namespace qkr::test;

namespace {

RawKey point_key(const std::string& type) {
    CycleType t = CycleType::parse(type);
    return RawKey{0, t, std::vector<int>(t.cycles(), 0)};
}

Rational binom(int n, int k) {
    Rational r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// Euler characteristic of the line bundle sum d_i psi_i by Riemann-Roch: a point, P^1, and the
// degree-5 del Pezzo surface with psi_i^2 = 1, psi_i psi_j = 2, psi_i . (-K) = 3.
Rational euler_characteristic(const std::vector<int>& d) {
    long total = 0, squares = 0, cross = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        total += d[i];
        squares += d[i] * d[i];
        for (std::size_t j = i + 1; j < d.size(); ++j) cross += d[i] * d[j];
    }
    switch (d.size()) {
        case 3: return 1;
        case 4: return 1 + total;
        case 5: return 1 + (squares + 4 * cross + 3 * total) / 2;
    }
    throw std::logic_error("unsupported point count");
}

void power_tuples(int n, int budget, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == n) {
        out.push_back(cur);
        return;
    }
    for (int d = 0; d <= budget; ++d) {
        cur.push_back(d);
        power_tuples(n, budget - d, cur, out);
        cur.pop_back();
    }
}

}  // namespace

TEST_CASE("cycle types and keys") {
    CycleType t = CycleType::parse("2_1+1_2");
    CHECK(t.points() == 4);
    CHECK(t.cycles() == 3);
    CHECK(t.slot_cycles() == std::vector<int>{1, 1, 2});
    CHECK(t.str() == "2_1+1_2");
    CHECK(CycleType::parse("0").empty());
    std::vector<int> order;
    RawKey k{0, CycleType::parse("3_1"), {1, 0, 2}};
    CHECK(k.canonical(&order).basis == std::vector<int>{0, 1, 2});
    CHECK(is_stable(0, 3));
    CHECK_FALSE(is_stable(0, 2));
    CHECK(is_stable(1, 1));
}

TEST_CASE("genus-0 values match Riemann-Roch on the moduli space") {
    auto p = builtin_point_provider();
    for (int n = 3; n <= 5; ++n) {
        std::vector<std::vector<int>> tuples;
        std::vector<int> cur;
        power_tuples(n, 3, cur, tuples);
        for (const auto& d : tuples) {
            std::vector<LFunction> slots;
            int total = 0;
            for (int k : d) {
                slots.push_back(LFunction::l_power(k));
                total += k;
            }
            CHECK(p->evaluate(point_key(std::to_string(n) + "_1"), slots) == QFunc(euler_characteristic(d)));
            if (std::count(d.begin(), d.end(), 0) >= n - 1) CHECK(euler_characteristic(d) == binom(n - 3 + total, n - 3));
        }
    }
}

TEST_CASE("dilaton examples") {
    auto p = builtin_point_provider();
    LFunction dil = LFunction::l_power(1) - LFunction(1);
    CHECK(p->evaluate(point_key("4_1"), {dil, 1, 1, 1}) == QFunc(1));
    ReducingProvider reducing(p);
    for (const auto& f : probe_insertions())
        CHECK(reducing.evaluate(point_key("3_1+1_2"), {dil, f, 1, f}).is_zero());
}

TEST_CASE("string, dilaton and WDVV suites on the built-in provider") {
    auto p = builtin_point_provider();
    auto keys = p->keys();
    auto s = verify_string(*p, keys);
    auto d = verify_dilaton(*p, keys);
    CHECK(s.ok());
    CHECK(d.ok());
    CHECK(s.checked > 0);
    CHECK(d.checked > 0);
    auto ctx = two_generators(2);
    Series t = Series::generator(ctx, "t"), u = Series::generator(ctx, "s");
    BracketEngine eng(p, 1);
    Background zero(2, Insertion(1));
    Background tau(2, Insertion(1));
    tau.at(1)[0] = LFunction(Cyc(t + u));
    tau.at(2)[0] = LFunction(Cyc(t * t));
    std::vector<Insertion> inputs{scalar(1), scalar(LFunction::l_power(1, Cyc(2))), scalar(LFunction(Cyc(u))),
                                  scalar(LFunction::l_power(-1) + LFunction(Cyc(t)))};
    for (const auto& b : {zero, tau}) {
        CHECK(verify_wdvv_symmetry(eng, KBasis::point(), b, inputs).ok());
        CHECK(verify_wdvv_two_point(eng, KBasis::point(), b).ok());
    }
}

TEST_CASE("corrupted table is caught") {
    auto p = builtin_point_provider();
    auto bad = std::make_shared<FunctionalProvider>(*p);
    RawKey k4 = point_key("4_1");
    Functional f = *p->functional(k4);
    f[0].weight = f[0].weight + Cyc(1);
    bad->add(k4, f);
    CHECK_FALSE(verify_string(*bad, bad->keys()).ok());
    CHECK_FALSE(verify_dilaton(*bad, bad->keys()).ok());
    auto ctx = two_generators(2);
    Background tau(1, Insertion(1));
    tau.at(1)[0] = LFunction(Cyc(Series::generator(ctx, "t"))) + LFunction::l_power(1, Cyc(Series::generator(ctx, "s")));
    BracketEngine eng(bad, 1);
    CHECK_FALSE(verify_wdvv_two_point(eng, KBasis::point(), tau).ok());
}

TEST_CASE("double bracket at zero background is the raw correlator") {
    auto p = builtin_point_provider();
    BracketEngine eng(p, 1);
    Background zero(2, Insertion(1));
    std::vector<LFunction> f{LFunction::l_power(2), LFunction::l_power(-1, Cyc(3)), LFunction::kernel(1)};
    std::vector<Slot> slots;
    for (const auto& x : f) slots.push_back(Slot{1, scalar(x)});
    CHECK(eng.bracket(0, slots, zero) == p->evaluate(point_key("3_1"), f));
    CHECK(eng.bracket(0, {slots[0], slots[1]}, zero).is_zero());
    std::vector<Slot> swapped{slots[2], slots[0], slots[1]};
    CHECK(eng.bracket(0, swapped, zero) == eng.bracket(0, slots, zero));
}

TEST_CASE("background insertions carry factorial weights") {
    auto ctx = two_generators(3);
    Series t = Series::generator(ctx, "t");
    auto p = builtin_point_provider();
    BracketEngine eng(p, 1);
    Background tau(1, Insertion(1));
    tau.at(1)[0] = LFunction(Cyc(t));
    // <<1, 1>> = sum_k t^(k+1) / (k+1)! ... with <1^n>_{0,n} = 1, truncated at order 3.
    QFunc v = eng.bracket(0, {Slot{1, scalar(1)}, Slot{1, scalar(1)}}, tau);
    CHECK(v == QFunc(Cyc(t + Rational(1, 2) * power(t, 2) + Rational(1, 6) * power(t, 3))));
}

TEST_CASE("reducing provider extends the domain by string and dilaton") {
    auto base = builtin_point_provider();
    ReducingProvider rp(base);
    LFunction dil = LFunction::l_power(1) - LFunction(1);
    // <L^2, 1, 1, 1, 1, 1>_{0,6} = binom(3 + 2, 3)
    CHECK(rp.evaluate(point_key("6_1"), {LFunction::l_power(2), 1, 1, 1, 1, 1}) == QFunc(10));
    CHECK(rp.evaluate(point_key("6_1"), {dil, 1, 1, 1, 1, 1}) == QFunc(3));
    CHECK(rp.reductions() > 0);
    CHECK_FALSE(rp.keys_touched().empty());
    CHECK(rp.evaluate(point_key("6_1"), {1, 1, 1, 1, 1, 1}) == rp.evaluate(point_key("6_1"), {1, 1, 1, 1, 1, 1}));
}

TEST_CASE("missing keys raise data-incomplete") {
    FunctionalProvider empty;
    CHECK_THROWS_AS(empty.evaluate(point_key("3_1"), {1, 1, 1}), DataIncomplete);
    CHECK(empty.evaluate(point_key("2_1"), {1, 1}).is_zero());
}

TEST_CASE("table files round trip and normalization") {
    auto dir = std::filesystem::temp_directory_path() / "qkr_test_tables";
    std::filesystem::create_directories(dir);
    auto p = builtin_point_provider();
    Table t{Normalization::Raw, TableKind{}, std::make_shared<FunctionalProvider>(*p)};
    write_table(t, (dir / "point.jsonl").string());
    Table back = load_table((dir / "point.jsonl").string());
    CHECK(back.provider->keys().size() == p->keys().size());
    for (const auto& k : p->keys())
        for (const auto& f : probe_insertions()) {
            std::vector<LFunction> slots(k.type.cycles(), LFunction(1));
            slots[0] = f;
            CHECK(back.provider->evaluate(k, slots) == p->evaluate(k, slots));
        }
    {
        std::ofstream out(dir / "scaled.jsonl");
        out << R"({"normalization": "unnormalized"})" << "\n";
        out << R"({"g": 0, "cycle_type": {"1": 1, "2": 1}, "terms": [{"weight": "6", "probes": [[0, 0], [0, 0]]}]})" << "\n";
        out << R"({"g": 0, "cycle_type": {"3": 1}, "degree": {"Q": 1}, "terms": [{"weight": "1", "probes": [[0, 0]]}]})" << "\n";
    }
    auto ctx = make_context({{"Q", 1, AdamsRule::MonomialScaling, -1}}, 2);
    Table scaled = load_table((dir / "scaled.jsonl").string(), ctx);
    CHECK(scaled.provider->evaluate(point_key("1_1+1_2"), {1, 1}) == QFunc(3));
    CHECK(scaled.provider->evaluate(point_key("1_3"), {1}) == QFunc(Cyc(Series::generator(ctx, "Q")) * Cyc(Rational(1, 3))));
    CHECK_THROWS_AS(load_table((dir / "scaled.jsonl").string()), ContextError);
    {
        std::ofstream out(dir / "broken.jsonl");
        out << R"({"g": 0})" << "\n";
    }
    CHECK_THROWS_AS(load_table((dir / "broken.jsonl").string()), FormatError);
    std::filesystem::remove_all(dir);
}
