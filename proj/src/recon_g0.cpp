#include "qkr/recon_g0.hpp"

#include <algorithm>
#include <sstream>

namespace qkr {

KQ to_q(const Insertion& f) {
    KQ out;
    out.reserve(f.size());
    for (const auto& c : f) {
        if (!c.is_polynomial()) throw std::invalid_argument("profile entries must be Laurent polynomials");
        out.push_back(c.poly());
    }
    return out;
}

Insertion to_insertion(const KQ& f) {
    Insertion out;
    out.reserve(f.size());
    for (const auto& c : f) {
        if (!c.is_laurent()) throw std::invalid_argument("not a Laurent polynomial: " + c.str());
        out.push_back(LFunction::polynomial(c));
    }
    return out;
}

Insertion value_at_one(const Insertion& f) {
    Insertion out;
    out.reserve(f.size());
    for (const auto& c : f) out.push_back(LFunction::polynomial(value_at_one(c)));
    return out;
}

int filtration_weight(const Insertion& f) {
    int w = kInfiniteWeight;
    for (const auto& c : f) w = std::min(w, c.weight());
    return w;
}

int filtration_weight(const Background& f) {
    int w = kInfiniteWeight;
    for (int r = 1; r <= f.max_cycle(); ++r) w = std::min(w, filtration_weight(f[r]));
    return w;
}

namespace {

template <class Op>
Background combine(const Background& a, const Background& b, Op op) {
    int rank = static_cast<int>(std::max(a.zero().size(), b.zero().size()));
    Background out = zero_background(std::max(a.max_cycle(), b.max_cycle()), rank);
    for (int r = 1; r <= out.max_cycle(); ++r) {
        Insertion v(rank);
        for (int g = 0; g < rank; ++g) {
            LFunction x = g < static_cast<int>(a[r].size()) ? a[r][g] : LFunction();
            LFunction y = g < static_cast<int>(b[r].size()) ? b[r][g] : LFunction();
            v[g] = op(x, y);
        }
        out.at(r) = std::move(v);
    }
    return out;
}

bool is_zero(const Insertion& f) {
    return std::all_of(f.begin(), f.end(), [](const LFunction& c) { return c.is_zero(); });
}

}  // namespace

Background operator-(const Background& a, const Background& b) {
    return combine(a, b, [](const LFunction& x, const LFunction& y) { return x - y; });
}

Background operator+(const Background& a, const Background& b) {
    return combine(a, b, [](const LFunction& x, const LFunction& y) { return x + y; });
}

bool is_zero(const Background& f) {
    for (int r = 1; r <= f.max_cycle(); ++r)
        if (!is_zero(f[r])) return false;
    return true;
}

Insertion adams_coefficients(int r, const Insertion& f) {
    Insertion out;
    out.reserve(f.size());
    for (const auto& c : f) {
        if (!c.is_polynomial()) throw std::invalid_argument("Adams on coefficients needs a Laurent polynomial");
        out.push_back(LFunction::polynomial(adams_coefficients(r, c.poly())));
    }
    return out;
}

bool sector_weights_ok(const Profile& t) {
    for (int r = 1; r <= t.max_cycle(); ++r)
        if (filtration_weight(t[r]) < r) return false;
    return true;
}

Genus0::Genus0(std::shared_ptr<const BracketEngine> engine, KBasis basis, ContextPtr ctx)
    : engine_(std::move(engine)), basis_(std::move(basis)), ctx_(std::move(ctx)) {
    basis_.validate();
    if (engine_->rank() != basis_.rank) throw std::invalid_argument("engine rank differs from basis rank");
}

Frame Genus0::frame(const Background& tau, int r) const {
    return Frame(*engine_, basis_, r_shift(r, tau), ctx_);
}

Background Genus0::t_step(const Background& tau, const Profile& t) const {
    Background out = zero_background(t.max_cycle(), basis_.rank);
    for (int r = 1; r <= t.max_cycle(); ++r) {
        const Insertion& tr = t[r];
        if (is_zero(tr)) continue;
        Insertion next = value_at_one(tr);
        Insertion ldt(basis_.rank);
        bool moving = false;
        for (int g = 0; g < basis_.rank; ++g) {
            ldt[g] = divided_difference(tr[g]).shifted(1);
            moving = moving || !ldt[g].is_zero();
        }
        if (moving) {
            Frame fr = frame(tau, r);
            const Matrix& ginv = fr.metric_inverse();
            for (int a = 0; a < basis_.rank; ++a) {
                QFunc v = fr.two_point(ldt, a);
                if (v.is_zero()) continue;
                if (!v.is_constant()) throw std::logic_error("t-step bracket depends on q: " + v.str());
                Cyc c = v.constant_value();
                for (int b = 0; b < basis_.rank; ++b)
                    if (!ginv[a][b].is_zero()) next[b] += LFunction(c * ginv[a][b]);
            }
        }
        out.at(r) = std::move(next);
    }
    return out;
}

TauSolution Genus0::solve_tau(const Profile& t) const {
    int nilpotent = 0;
    for (const auto& g : ctx_->generators())
        if (g.weight == 0) ++nilpotent;
    const int cap = ctx_->order() + 1 + nilpotent;
    TauSolution sol;
    sol.tau = zero_background(t.max_cycle(), basis_.rank);
    for (int n = 0; n < cap; ++n) {
        Background next = t_step(sol.tau, t);
        Background residual = next - sol.tau;
        ++sol.iterations;
        int w = filtration_weight(residual);
        if (!sol.residual_weights.empty() && w != kInfiniteWeight && w <= sol.residual_weights.back()) {
            std::ostringstream msg;
            msg << "fixed-point map failed to contract at iteration " << sol.iterations << ": residual weight " << w
                << " after " << sol.residual_weights.back();
            throw ContractionError(msg.str());
        }
        sol.residual_weights.push_back(w);
        if (w == kInfiniteWeight) return sol;
        sol.tau = std::move(next);
    }
    std::ostringstream msg;
    msg << "fixed-point map did not converge within " << cap << " iterations";
    throw ContractionError(msg.str());
}

Background Genus0::tbar(const Profile& t, const Background& tau) const {
    Background out = zero_background(t.max_cycle(), basis_.rank);
    for (int r = 1; r <= t.max_cycle(); ++r) {
        KQ x = to_q(t[r]);
        x[basis_.unit] += QFunc(1) - QFunc::monomial(1);
        KQ shifted = project_plus(frame(tau, r).s_apply(x));
        shifted[basis_.unit] -= QFunc(1) - QFunc::monomial(1);
        out.at(r) = to_insertion(shifted);
    }
    return out;
}

KQ Genus0::cycle_one_point_series(const Background& tau, int r) const {
    KQ out(basis_.rank);
    for (int g = 0; g < basis_.rank; ++g)
        out[g] = engine_->bracket(0, {Slot{r, basis_insertion(basis_.rank, g, LFunction::kernel(1))}}, tau);
    return out;
}

namespace {

QFunc read_cycle(const KQ& series, int r, const Insertion& f) {
    QFunc out;
    Insertion twisted = adams_coefficients(r, f);
    for (std::size_t g = 0; g < twisted.size(); ++g)
        if (!twisted[g].is_zero()) out += read_one_point(series[g], twisted[g]);
    return out;
}

}  // namespace

QFunc unstable_cycle_two(const BracketEngine& engine, const KBasis& basis, const Insertion& a) {
    Background none = zero_background(2, basis.rank);
    Insertion dilaton = basis.unit_insertion(LFunction::l_power(1) - LFunction(1));
    return engine.bracket(0, {Slot{1, dilaton}, Slot{2, a}}, none) * Cyc(Rational(-1, 4));
}

F0Result Genus0::f0(const Profile& t) const {
    F0Result res;
    res.solution = solve_tau(t);
    const Background& tau = res.solution.tau;
    res.tbar = tbar(t, tau);

    if (!is_zero(t[2]) || !is_zero(tau[2])) {
        KQ series = cycle_one_point_series(tau, 2);
        Insertion diff = t[2];
        for (int g = 0; g < basis_.rank; ++g) diff[g] -= tau[2][g];
        res.sector_two_literal = read_cycle(series, 2, t[2]);
        res.sector_two_term = read_cycle(series, 2, diff);
        res.unstable_correction = unstable_cycle_two(*engine_, basis_, value_at_one(tau[2]));
    }

    Insertion x1 = t[1];
    x1[basis_.unit] += LFunction(1) - LFunction::l_power(1);
    Frame fr = frame(tau, 1);
    res.quadratic_term = fr.two_point(x1, x1) * Cyc(Rational(1, 2));
    res.value = res.quadratic_term + res.sector_two_term * Cyc(Rational(1, 2)) - res.unstable_correction;
    return res;
}

QFunc f0_direct(const BracketEngine& engine, const Profile& t) { return engine.potential(0, t); }

namespace {

IdentityReport compare(std::string name, const QFunc& lhs, const QFunc& rhs) {
    IdentityReport rep;
    rep.name = std::move(name);
    rep.ok = lhs == rhs;
    if (!rep.ok) rep.detail = "lhs " + lhs.str() + " rhs " + rhs.str();
    return rep;
}

}  // namespace

std::vector<IdentityReport> check_unstable_identities(const BracketEngine& engine, const KBasis& basis,
                                                      const Background& tau, const Insertion& a,
                                                      const Insertion& t1) {
    const int n = basis.rank;
    Insertion one = basis.unit_insertion();
    Insertion lm1 = basis.unit_insertion(LFunction::l_power(1) - LFunction(1));
    const Insertion& tau1 = tau[1];
    Matrix g = basis.pairing_matrix();

    auto b1 = [&](const Insertion& x) { return engine.bracket(0, {Slot{1, x}}, tau); };
    auto b2 = [&](const Insertion& x, const Insertion& y) { return engine.bracket(0, {Slot{1, x}, Slot{1, y}}, tau); };
    auto pair = [&](const Insertion& x, const Insertion& y) {
        QFunc out;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!g[i][j].is_zero()) out += value_at_one(x[i]) * value_at_one(y[j]) * g[i][j];
        return out;
    };

    std::vector<IdentityReport> out;
    out.push_back(compare("string: <<1, A>> = (A, tau_1) + <<A>>", b2(one, a), pair(a, tau1) + b1(a)));
    out.push_back(compare("dilaton: <<L - 1, A>> = -<<A>> + <<A, tau_1>>", b2(lm1, a), -b1(a) + b2(a, tau1)));
    QFunc f00 = engine.potential(0, tau) + unstable_cycle_two(engine, basis, value_at_one(tau[2]));
    out.push_back(compare("dilaton: <<L - 1>> = -2<< >> + <<tau_1>>", b1(lm1), f00 * Cyc(-2) + b1(tau1)));

    Insertion x1 = t1;
    for (int i = 0; i < n; ++i) x1[i] += tau1[i];
    x1[basis.unit] += LFunction(1) - LFunction::l_power(1);
    QFunc lhs = f00 + b1(t1) + b2(t1, t1) * Cyc(Rational(1, 2));
    out.push_back(compare("unstable terms: << >> + <<t_1>> + <<t_1, t_1>>/2 = <<x_1, x_1>>/2", lhs,
                          b2(x1, x1) * Cyc(Rational(1, 2))));
    return out;
}

}  // namespace qkr
