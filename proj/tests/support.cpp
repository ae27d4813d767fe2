#include "support.hpp"

#include <cmath>
#include <numbers>

namespace qkr::test {

ContextPtr two_generators(int order) {
    return make_context({{"t", 1, AdamsRule::MonomialScaling, -1}, {"s", 1, AdamsRule::MonomialScaling, -1}}, order);
}

std::shared_ptr<const BracketEngine> point_engine() {
    return std::make_shared<BracketEngine>(std::make_shared<ReducingProvider>(builtin_point_provider()), 1);
}

std::string source_path(const std::string& relative) { return std::string(QKR_SOURCE_DIR) + "/" + relative; }

Genus1Tables shipped_genus1_tables() {
    Genus1Tables tabs;
    tabs.potential = builtin_genus1_potential();
    tabs.fake = load_table(source_path("data/genus1/fake.jsonl")).provider;
    for (int m : kBalancedOrders)
        tabs.balanced[m] = load_table(source_path("data/genus1/balanced_" + std::to_string(m) + ".jsonl")).provider;
    return tabs;
}

Insertion scalar(const LFunction& f) { return Insertion{f}; }

Profile sample_profile(const ContextPtr& ctx, int max_cycle) {
    Series t = Series::generator(ctx, "t");
    Series s = Series::generator(ctx, "s");
    Profile p(max_cycle, Insertion(1));
    p.at(1)[0] = LFunction(Cyc(t)) + LFunction::l_power(1, Cyc(s)) + LFunction::l_power(-1, Cyc(t * s));
    return p;
}

int Random::integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

Rational Random::rational(int span) {
    Rational r(integer(-span, span));
    r /= integer(1, span);
    return r;
}

Series Random::series(const ContextPtr& ctx, int min_weight, int terms) {
    Series out(ctx, 0);
    const int gens = static_cast<int>(ctx->size());
    if (gens == 0 || min_weight > ctx->order()) return out;
    for (int i = 0; i < terms; ++i) {
        Monomial m{};
        int w = integer(min_weight, ctx->order());
        for (int k = 0; k < w; ++k) ++m[integer(0, gens - 1)];
        out += Series::monomial(ctx, m, rational());
    }
    return out;
}

Cyc Random::root_combination() {
    Cyc out;
    for (int i = 0; i < kCycDegree; ++i) out += Cyc::root(i) * Cyc(rational(3));
    return out;
}

QFunc Random::laurent(int degree) {
    QFunc out;
    for (int k = -degree; k <= degree; ++k)
        if (integer(0, 2) > 0) out += QFunc::monomial(k, Cyc(rational()));
    return out;
}

QFunc Random::qfunc(int degree, int pole_order, bool with_roots) {
    QFunc out = laurent(degree);
    if (!with_roots) return out;
    for (int root : {0, 6})
        for (int s = 1; s <= pole_order; ++s)
            if (integer(0, 2) > 0) out += QFunc::pole(root, s, Cyc(rational()));
    return out;
}

Profile Random::profile(const ContextPtr& ctx, int max_cycle) {
    Profile p(max_cycle, Insertion(1));
    for (int r = 1; r <= max_cycle; ++r)
        for (int k = -1; k <= 2; ++k)
            if (integer(0, 1)) p.at(r)[0] += LFunction::l_power(k, Cyc(series(ctx, r, 2)));
    return p;
}

std::complex<double> to_complex(const Cyc& c) {
    std::complex<double> out = 0;
    const auto zeta = std::polar(1.0, 2 * std::numbers::pi / kConductor);
    for (int i = 0; i < static_cast<int>(c.components().size()); ++i)
        out += c.components()[i].constant_term().get_d() * std::pow(zeta, i);
    return out;
}

std::complex<double> evaluate(const QFunc& f, std::complex<double> q) {
    std::complex<double> out = 0;
    for (const auto& [k, c] : f.poly()) out += to_complex(c) * std::pow(q, k);
    for (const auto& [e, v] : f.poles()) {
        std::complex<double> w = to_complex(Cyc::root(e));
        for (std::size_t s = 0; s < v.size(); ++s) out += to_complex(v[s]) / std::pow(1.0 - q / w, double(s + 1));
    }
    return out;
}

}  // namespace qkr::test
