#include "qkr/cone.hpp"

namespace qkr {

namespace {

KQ dilaton_shift(const KBasis& basis) {
    KQ out(basis.rank);
    out[basis.unit] = QFunc(1) - QFunc::monomial(1);
    return out;
}

// First coordinate and coefficient where a and b differ.
std::string first_difference(const KQ& a, const KQ& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        QFunc d = a[i] - b[i];
        if (d.is_zero()) continue;
        return "coordinate " + std::to_string(i) + ": difference " + d.str();
    }
    return {};
}

}  // namespace

JPoint j_eval(const Genus0& g0, const Insertion& t1, const Background& params) {
    const KBasis& basis = g0.basis();
    const int n = basis.rank;
    Background bg = params;
    bg.at(1) = t1;
    Matrix ginv = basis.inverse_pairing();
    JPoint p;
    p.plus = dilaton_shift(basis) + to_q(t1);
    p.minus.assign(n, QFunc());
    for (int a = 0; a < n; ++a) {
        QFunc v = g0.engine().bracket(0, {Slot{1, basis_insertion(n, a, LFunction::kernel(1))}}, bg);
        if (v.is_zero()) continue;
        for (int b = 0; b < n; ++b)
            if (!ginv[a][b].is_zero()) p.minus[b] += v * ginv[a][b];
    }
    p.value = p.plus + p.minus;
    return p;
}

IdentityReport check_cone_point(const Genus0& g0, const Background& tau) {
    IdentityReport rep;
    rep.name = "[S J(tau_1)]_+ = 1 - q";
    Frame frame = g0.frame(tau, 1);
    KQ lhs = project_plus(frame.s_apply(j_eval(g0, tau[1], tau).value));
    KQ rhs = dilaton_shift(g0.basis());
    rep.detail = first_difference(lhs, rhs);
    rep.ok = rep.detail.empty();
    return rep;
}

std::vector<TangentVector> tangent_basis(const Frame& frame, int window) {
    const int n = frame.basis().rank;
    std::vector<TangentVector> out;
    for (int a = 0; a < n; ++a)
        for (int k = -window; k <= window; ++k) {
            KQ e(n);
            e[a] = QFunc::monomial(k);
            out.push_back({a, k, frame.s_inverse_apply(e)});
        }
    return out;
}

IdentityReport check_isotropy(const Frame& frame, const std::vector<TangentVector>& family) {
    IdentityReport rep;
    rep.name = "Omega vanishes on the tangent family";
    for (std::size_t i = 0; i < family.size() && rep.ok; ++i)
        for (std::size_t j = i; j < family.size(); ++j) {
            Cyc w = frame.omega(family[i].value, family[j].value);
            if (w.is_zero()) continue;
            rep.ok = false;
            rep.detail = "pair (phi_" + std::to_string(family[i].alpha) + " q^" + std::to_string(family[i].power) +
                         ", phi_" + std::to_string(family[j].alpha) + " q^" + std::to_string(family[j].power) +
                         "): " + w.str();
            break;
        }
    return rep;
}

IdentityReport check_round_trip(const Frame& frame, const std::vector<TangentVector>& family) {
    IdentityReport rep;
    rep.name = "[S S^-1 e]_+ = e";
    const int n = frame.basis().rank;
    for (const auto& v : family) {
        KQ e(n);
        e[v.alpha] = QFunc::monomial(v.power);
        std::string diff = first_difference(project_plus(frame.s_apply(v.value)), e);
        if (diff.empty()) continue;
        rep.ok = false;
        rep.detail = "phi_" + std::to_string(v.alpha) + " q^" + std::to_string(v.power) + ": " + diff;
        break;
    }
    return rep;
}

RulingResult ruling_check(const Genus0& g0, const Background& tau, const KQ& v) {
    RulingResult res;
    Frame frame = g0.frame(tau, 1);
    KQ shifted = frame.s_inverse_apply(v);
    for (auto& c : shifted) c = c - c.shifted(1);
    res.point = j_eval(g0, tau[1], tau).value + shifted;
    KQ plus = project_plus(res.point) - dilaton_shift(g0.basis());
    res.t1 = to_insertion(plus);
    KQ again = j_eval(g0, res.t1, tau).value;
    res.detail = first_difference(again, res.point);
    res.ok = res.detail.empty();
    return res;
}

}  // namespace qkr
