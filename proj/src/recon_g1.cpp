#include "qkr/recon_g1.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace qkr {

namespace {

Rational factorial(int n) {
    Rational out = 1;
    for (int i = 2; i <= n; ++i) out *= i;
    return out;
}

Rational binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

Rational psi_genus1(std::vector<int> k) {
    const int n = static_cast<int>(k.size());
    if (n == 0) return 0;
    if (std::accumulate(k.begin(), k.end(), 0) != n) return 0;
    if (n == 1) return Rational(1, 24);
    auto zero = std::find(k.begin(), k.end(), 0);
    if (zero != k.end()) {
        k.erase(zero);
        Rational out = 0;
        for (std::size_t j = 0; j < k.size(); ++j) {
            if (k[j] == 0) continue;
            auto lowered = k;
            --lowered[j];
            out += psi_genus1(lowered);
        }
        return out;
    }
    auto one = std::find(k.begin(), k.end(), 1);
    if (one != k.end()) {
        k.erase(one);
        return Rational(n - 1) * psi_genus1(k);
    }
    return 0;
}

}  // namespace

Rational psi_integral(int genus, const std::vector<int>& powers) {
    if (std::any_of(powers.begin(), powers.end(), [](int k) { return k < 0; })) return 0;
    const int n = static_cast<int>(powers.size());
    const int total = std::accumulate(powers.begin(), powers.end(), 0);
    if (genus == 0) {
        if (n < 3 || total != n - 3) return 0;
        Rational out = factorial(n - 3);
        for (int k : powers) out /= factorial(k);
        return out;
    }
    if (genus == 1) return psi_genus1(powers);
    throw std::invalid_argument("psi integrals are implemented for genus 0 and 1");
}

CoverConstants cover_constants() {
    CoverConstants c;
    c.squared_sum = 12 * (psi_integral(1, {2, 0}) + 2 * psi_integral(1, {1, 1}) + psi_integral(1, {0, 2}));
    c.cover_value = 6 * psi_integral(1, {1});
    c.coefficient_b = 1 / (factorial(4) * 2);
    c.coefficient_c = Rational(4) / factorial(4);
    return c;
}

int BalancedShape::factor(int extra_cycles) const {
    switch (order) {
        case 2: return 4 + 2 * extra_cycles;
        case 3: return 3 + 3 * extra_cycles;
        case 4: return 4 + 4 * extra_cycles;
        case 6: return 6 + 6 * extra_cycles;
        default: throw std::invalid_argument("no balanced shape of order " + std::to_string(order));
    }
}

std::optional<BalancedShape> balanced_shape(int order) {
    switch (order) {
        case 2: return BalancedShape{2, CycleType(std::map<int, int>{{1, 4}})};
        case 3: return BalancedShape{3, CycleType(std::map<int, int>{{1, 3}})};
        case 4: return BalancedShape{4, CycleType(std::map<int, int>{{1, 2}, {2, 1}})};
        case 6: return BalancedShape{6, CycleType(std::map<int, int>{{1, 1}, {2, 1}, {3, 1}})};
        default: return std::nullopt;
    }
}

namespace {

RawKey balanced_key(const BalancedShape& s, int extra_cycles) {
    CycleType type = extra_cycles > 0 ? s.base.plus(s.order, extra_cycles) : s.base;
    return RawKey{1, type, std::vector<int>(type.cycles(), 0)};
}

// Number of extra M-cycles when `key` is base + l_M, else -1.
int extra_cycles_of(const BalancedShape& s, const RawKey& key) {
    if (key.genus != 1) return -1;
    if (std::any_of(key.basis.begin(), key.basis.end(), [](int b) { return b != 0; })) return -1;
    int l = key.type.count(s.order) - s.base.count(s.order);
    if (l < 0) return -1;
    return key.type == (l > 0 ? s.base.plus(s.order, l) : s.base) ? l : -1;
}

LFunction dilaton_input() { return LFunction::l_power(1) - LFunction(1); }

}  // namespace

std::optional<RewriteResult> perm_dilaton_rewrite(const CorrelatorProvider& table, int order, int extra_cycles,
                                                  const std::vector<LFunction>& slots) {
    auto shape = balanced_shape(order);
    if (!shape || extra_cycles < 0) return std::nullopt;
    RawKey lower = balanced_key(*shape, extra_cycles);
    if (slots.size() != lower.basis.size()) return std::nullopt;
    RawKey upper = balanced_key(*shape, extra_cycles + 1);
    auto full = slots;
    full.push_back(dilaton_input());
    if (table.functional(upper)) return RewriteResult{table.evaluate(upper, full), true};
    return RewriteResult{table.evaluate(lower, slots) * Cyc(shape->factor(extra_cycles)), false};
}

VerifyReport verify_perm_dilaton(const FunctionalProvider& table, int order, std::size_t max_tuples) {
    VerifyReport rep;
    rep.suite = "balanced-dilaton-" + std::to_string(order);
    auto shape = balanced_shape(order);
    if (!shape) return rep;
    auto probes = probe_insertions();
    for (const auto& key : table.keys()) {
        int l = extra_cycles_of(*shape, key);
        if (l < 1) {
            ++rep.skipped;
            continue;
        }
        RawKey lower = balanced_key(*shape, l - 1);
        if (!table.contains(lower)) {
            ++rep.skipped;
            continue;
        }
        const std::size_t n = lower.basis.size();
        std::size_t total = 1;
        for (std::size_t i = 0; i < n && total < max_tuples; ++i) total *= probes.size();
        total = std::min(total, max_tuples);
        for (std::size_t code = 0; code < total; ++code) {
            std::vector<LFunction> slots;
            std::size_t c = code;
            for (std::size_t i = 0; i < n; ++i, c /= probes.size()) slots.push_back(probes[c % probes.size()]);
            auto full = slots;
            full.push_back(dilaton_input());
            QFunc lhs = table.evaluate(key, full);
            QFunc rhs = table.evaluate(lower, slots) * Cyc(shape->factor(l - 1));
            ++rep.checked;
            if (!(lhs == rhs)) {
                std::string args;
                for (const auto& f : slots) args += (args.empty() ? "" : ", ") + f.str();
                rep.violations.push_back({key.str(), "slots (" + args + ", L - 1): " + lhs.str() + " vs " + rhs.str()});
                break;
            }
        }
    }
    return rep;
}

Rational extension_weight(int order, int extra_cycles, int derivatives) {
    auto shape = balanced_shape(order);
    if (!shape) throw std::invalid_argument("no balanced shape of order " + std::to_string(order));
    Rational w = 1;
    for (int i = extra_cycles - derivatives; i < extra_cycles; ++i) w *= Rational(shape->factor(i)) / order;
    return w;
}

int extend_balanced(FunctionalProvider& table, int order, int max_extra_cycles) {
    auto shape = balanced_shape(order);
    if (!shape) return 0;
    auto base = table.functional(balanced_key(*shape, 0));
    if (!base) return 0;
    int added = 0;
    for (int l = 1; l <= max_extra_cycles; ++l) {
        RawKey key = balanced_key(*shape, l);
        if (table.contains(key)) continue;
        Functional f;
        for (unsigned subset = 0; subset < (1u << l); ++subset) {
            int k = std::popcount(subset);
            Cyc w(extension_weight(order, l, k));
            for (const auto& term : *base) {
                ProbeTerm t = term;
                t.weight = term.weight * w;
                for (int j = 0; j < l; ++j) t.probes.emplace_back(0, (subset >> j) & 1u ? 1 : 0);
                f.push_back(std::move(t));
            }
        }
        table.add(key, std::move(f));
        ++added;
    }
    return added;
}

namespace {

// Genus-1 keys with constant inputs: the supertrace of the symmetry on H*(M_{1,n}; O) = C is 1.
class ConstantGenus1 : public CorrelatorProvider {
public:
    QFunc evaluate(const RawKey& key, const std::vector<LFunction>& slots) const override {
        if (!is_stable(key.genus, key.type.points())) return QFunc();
        auto f = functional(key);
        if (!f) throw DataIncomplete(key);
        return apply_functional(*f, key.type, slots);
    }
    std::optional<Functional> functional(const RawKey& key) const override {
        if (key.genus != 1 || key.type.points() < 1) return std::nullopt;
        if (std::any_of(key.basis.begin(), key.basis.end(), [](int b) { return b != 0; })) return std::nullopt;
        return Functional{ProbeTerm{Cyc(1), std::vector<std::pair<int, int>>(key.basis.size(), {0, 0})}};
    }
    std::string name() const override { return "genus-1 constant inputs"; }
};

}  // namespace

std::shared_ptr<const CorrelatorProvider> builtin_genus1_potential() { return std::make_shared<ConstantGenus1>(); }

std::shared_ptr<const FunctionalProvider> builtin_genus1_fake(int max_points) {
    auto p = std::make_shared<FunctionalProvider>("fake genus-1");
    for (int points = 1; points <= max_points; ++points) {
        const int n = points - 1;
        Functional f;
        for (int j = 0; j <= n + 1; ++j) {
            Rational w = Rational(5, 24) * binomial(n, j) + Rational(1, 24) * binomial(n, j - 1);
            if (w == 0) continue;
            std::vector<std::pair<int, int>> probes(points, {0, 0});
            probes[0] = {0, j};
            f.push_back(ProbeTerm{Cyc(w), probes});
        }
        p->add(RawKey{1, CycleType(std::map<int, int>{{1, points}}), std::vector<int>(points, 0)}, std::move(f));
    }
    return p;
}

VerifyReport verify_fake_string(const FunctionalProvider& fake) {
    VerifyReport rep;
    rep.suite = "fake string";
    auto key = [](int points) {
        return RawKey{1, CycleType(std::map<int, int>{{1, points}}), std::vector<int>(points, 0)};
    };
    for (const auto& k : fake.keys()) {
        const int points = k.type.points();
        if (k.genus != 1 || k.type.count(1) != points || points < 2 || !fake.contains(key(points - 1))) {
            ++rep.skipped;
            continue;
        }
        for (const auto& f : probe_insertions()) {
            std::vector<LFunction> lhs(points, LFunction(1));
            std::vector<LFunction> rhs(points - 1, LFunction(1));
            lhs[0] = f;
            rhs[0] = f + divided_difference(f);
            QFunc a = fake.evaluate(k, lhs);
            QFunc b = fake.evaluate(key(points - 1), rhs);
            ++rep.checked;
            if (a == b) continue;
            rep.violations.push_back({k.str(), "input " + f.str() + ": " + a.str() + " != " + b.str()});
            break;
        }
    }
    return rep;
}

QFunc fake_one_point(const CorrelatorProvider& fake, int n) {
    std::vector<LFunction> slots(n + 1, LFunction(1));
    slots[0] = LFunction::kernel(1);
    QFunc out = fake.evaluate(RawKey{1, CycleType(std::map<int, int>{{1, n + 1}}), std::vector<int>(n + 1, 0)}, slots);
    for (const auto& [e, v] : out.poles())
        if (e != 0) throw FormatError("fake genus-1 series has a pole away from x = 1: " + out.str());
    return out;
}

namespace {

QFunc ftw_integrand(const CorrelatorProvider& fake, const QFunc& tbar) {
    QFunc inverted = invert_variable(tbar);
    QFunc out;
    QFunc p = inverted;
    for (int n = 0; n <= 3; ++n) {
        out += fake_one_point(fake, n) * p * Cyc(1 / factorial(n + 1));
        p = p * inverted;
    }
    return out.shifted(-1);
}

}  // namespace

Cyc ftw_eval(const CorrelatorProvider& fake, const QFunc& tbar) {
    QFunc f = ftw_integrand(fake, tbar);
    return residue(f, QPoint::zero()) + residue(f, QPoint::at_root(0)) + residue(f, QPoint::infinity());
}

Cyc ftw_eval_complement(const CorrelatorProvider& fake, const QFunc& tbar) {
    QFunc f = ftw_integrand(fake, tbar);
    Cyc out;
    for (const auto& [e, v] : f.poles())
        if (e != 0) out -= residue(f, QPoint::at_root(e));
    return out;
}

QFunc balanced_bracket(const std::shared_ptr<const CorrelatorProvider>& table, int order, const Background& tau) {
    auto shape = balanced_shape(order);
    if (!shape) throw std::invalid_argument("no balanced shape of order " + std::to_string(order));
    BracketEngine engine(table, 1);
    std::vector<Slot> slots;
    bool first = true;
    for (int r : shape->base.slot_cycles()) {
        slots.push_back(Slot{r, {first ? LFunction::kernel(1) : LFunction(1)}});
        first = false;
    }
    return engine.bracket(1, slots, tau);
}

namespace {

// xbar_r(x^{-k})
QFunc xbar_at(const EdgeData& edge, int r, int k) {
    auto it = edge.xbar.find(r);
    QFunc x = it != edge.xbar.end() ? it->second : QFunc(1) - QFunc::monomial(1);
    return invert_variable(substitute_power(x, k));
}

const Cyc& derivative_of(const EdgeData& edge, int order) {
    auto it = edge.tau_derivative.find(order);
    if (it == edge.tau_derivative.end()) throw std::invalid_argument("missing tau derivative for order " + std::to_string(order));
    return it->second;
}

}  // namespace

QFunc fperm_integrand(int order, const QFunc& bracket, const EdgeData& edge) {
    const Cyc& d = derivative_of(edge, order);
    switch (order) {
        case 2: {
            QFunc edge_factor = QFunc(1) + (QFunc::monomial(-1, Cyc(-1)) + QFunc(-1)) * (d * edge.tbar_22);
            return bracket * power(xbar_at(edge, 1, 1), 4) * edge_factor * (d * d * Cyc(Rational(1, 24)));
        }
        case 3: return bracket * power(xbar_at(edge, 1, 1), 3) * (d * Cyc(Rational(1, 6)));
        case 4:
            return bracket * power(xbar_at(edge, 1, 1), 2) * xbar_at(edge, 2, 2) * (d * Cyc(Rational(1, 4)));
        case 6:
            return bracket * xbar_at(edge, 1, 1) * xbar_at(edge, 2, 2) * xbar_at(edge, 3, 3) * (d * Cyc(Rational(1, 6)));
        default: throw std::invalid_argument("no balanced contribution of order " + std::to_string(order));
    }
}

Cyc fperm_eval(int order, const QFunc& bracket, const EdgeData& edge) {
    return omega_scalar(fperm_integrand(order, bracket, edge), QFunc(1));
}

Cyc fperm_eval_roots(int order, const QFunc& bracket, const EdgeData& edge) {
    QFunc f = fperm_integrand(order, bracket, edge).shifted(-1);
    Cyc out;
    for (const auto& [e, v] : f.poles()) out -= residue(f, QPoint::at_root(e));
    return out;
}

Profile widen(const Profile& t, int max_cycle) {
    if (t.max_cycle() >= max_cycle) return t;
    int rank = static_cast<int>(t.zero().size());
    Profile out = zero_background(max_cycle, rank);
    for (int r = 1; r <= t.max_cycle(); ++r) out.at(r) = t[r];
    return out;
}

Genus1Point::Genus1Point(std::shared_ptr<const BracketEngine> genus0, ContextPtr ctx, Genus1Tables tables)
    : ctx_(ctx), g0_(std::move(genus0), KBasis::point(), ctx), tables_(std::move(tables)) {
    if (!tables_.potential) throw std::invalid_argument("genus-1 reconstruction needs the constant-input table");
    if (!tables_.fake) throw std::invalid_argument("genus-1 reconstruction needs the fake table");
}

Cyc Genus1Point::tau_derivative(const Profile& t, int r) const {
    Nilpotent nil(ctx_);
    Genus0 shifted(std::shared_ptr<const BracketEngine>(&g0_.engine(), [](const BracketEngine*) {}), g0_.basis(),
                   nil.extended);
    Profile moved = nil.embed(r_shift(r, widen(t, r)));
    moved.at(1)[g0_.basis().unit] += LFunction(Cyc(nil.eps));
    TauSolution sol = shifted.solve_tau(moved);
    return nil.first_order(value_at_one(sol.tau[1][g0_.basis().unit]).constant_value());
}

EdgeData Genus1Point::edge_data(const Profile& t, const Background& tau, const Background& tbar) const {
    (void)tau;
    EdgeData edge;
    const int unit = g0_.basis().unit;
    for (int r : {1, 2, 3, 4, 6}) {
        edge.tau_derivative[r] = tau_derivative(t, r);
        QFunc x = to_q(tbar[r])[unit];
        edge.tbar_linear[r] = expand_at_one(x, 2)[1];
        if (r == 2) edge.tbar_22 = expand_at_one(x, 3)[2];
        edge.xbar[r] = QFunc(1) - QFunc::monomial(1) + x;
    }
    return edge;
}

QFunc Genus1Point::tbar_fake(const Background& tau) const {
    const KBasis& b = g0_.basis();
    return value_at_one(tau[1][b.unit]) +
           g0_.engine().bracket(0, {Slot{1, b.unit_insertion(LFunction::kernel(1))}}, tau);
}

QFunc Genus1Point::tbar_new(const Background& tau, const Insertion& tbar1) const {
    const KBasis& b = g0_.basis();
    QFunc out = to_q(tbar1)[b.unit] + tbar_fake(tau);
    out += g0_.engine().bracket(0, {Slot{1, b.unit_insertion(LFunction::kernel(1))}, Slot{1, tbar1}}, tau);
    return out;
}

F1Result Genus1Point::f1(const Profile& input) const {
    F1Result res;
    Profile t = widen(input, 6);
    res.solution = g0_.solve_tau(t);
    const Background& tau = res.solution.tau;
    res.tbar = g0_.tbar(t, tau);
    res.edge = edge_data(t, tau, res.tbar);

    BracketEngine g1(tables_.potential, 1);
    QFunc at_tau = g1.potential(1, tau);
    if (!at_tau.is_constant() && !at_tau.is_zero()) throw std::logic_error("genus-1 potential depends on q");
    res.potential_at_tau = at_tau.is_zero() ? Cyc() : at_tau.constant_value();

    Series d1 = res.edge.tau_derivative.at(1).rational_part();
    res.log_term = Cyc(log_unit(d1) * Rational(1, 24));

    res.tbar_fake = tbar_fake(tau);
    res.tbar_new = tbar_new(tau, res.tbar[1]);
    res.ftw_new = ftw_eval(*tables_.fake, res.tbar_new);
    res.ftw_fake = ftw_eval(*tables_.fake, res.tbar_fake);

    res.value = res.potential_at_tau + res.log_term + res.ftw_new - res.ftw_fake;
    for (int m : kBalancedOrders) {
        auto it = tables_.balanced.find(m);
        if (it == tables_.balanced.end() || !it->second) {
            const CycleType base = balanced_shape(m)->base;
            throw DataIncomplete(RawKey{1, base, std::vector<int>(base.cycles(), 0)});
        }
        res.fperm[m] = fperm_eval(m, balanced_bracket(it->second, m, tau), res.edge);
        res.value += res.fperm[m];
    }
    return res;
}

std::vector<IdentityReport> check_edge_identity(const EdgeData& edge) {
    std::vector<IdentityReport> out;
    for (const auto& [r, d] : edge.tau_derivative) {
        IdentityReport rep;
        rep.name = "1/(1 - tbar_" + std::to_string(r) + ",1) = d tau_" + std::to_string(r) + "/d t_" +
                   std::to_string(r) + ",0";
        Cyc lhs = d * (Cyc(1) - edge.tbar_linear.at(r));
        rep.ok = lhs == Cyc(1);
        if (!rep.ok) rep.detail = "derivative " + d.str() + ", tbar slope " + edge.tbar_linear.at(r).str();
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace qkr
