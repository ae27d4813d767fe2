#pragma once

#include "qkr/cyclotomic.hpp"

#include <map>
#include <string>
#include <vector>

namespace qkr {

struct SingularityError : std::domain_error {
    using std::domain_error::domain_error;
};

// Point of the q-line where residues are taken.
struct QPoint {
    enum class Kind { Zero, Infinity, Root } kind = Kind::Zero;
    int root = 0;  // exponent of zeta_12 when kind == Root

    static QPoint zero() { return {Kind::Zero, 0}; }
    static QPoint infinity() { return {Kind::Infinity, 0}; }
    static QPoint at_root(int e) { return {Kind::Root, normalize_root(e)}; }
};

// Rational function of q with poles in {0, infinity, roots of unity}, in partial-fraction form:
// a Laurent polynomial plus principal parts sum_s c_s (1 - q/zeta)^(-s).
class QFunc {
public:
    using Poly = std::map<int, Cyc>;
    using Poles = std::map<int, std::vector<Cyc>>;  // root exponent -> c_1, c_2, ...

    QFunc() = default;
    QFunc(const Cyc& c);  // NOLINT(google-explicit-constructor)
    QFunc(const Series& c) : QFunc(Cyc(c)) {}  // NOLINT(google-explicit-constructor)
    QFunc(const Rational& c) : QFunc(Cyc(c)) {}  // NOLINT(google-explicit-constructor)
    QFunc(int c) : QFunc(Cyc(c)) {}  // NOLINT(google-explicit-constructor)

    static QFunc monomial(int exponent, const Cyc& c = Cyc(1));
    static QFunc pole(int root, int order, const Cyc& c = Cyc(1));
    static QFunc laurent(const Poly& terms);

    const Poly& poly() const { return poly_; }
    const Poles& poles() const { return poles_; }

    bool is_zero() const { return poly_.empty() && poles_.empty(); }
    bool is_laurent() const { return poles_.empty(); }
    bool is_constant() const;
    Cyc constant_value() const;  // requires is_constant()
    bool has_pole_at(int root) const;
    int pole_order(int root) const;
    int min_degree() const;  // lowest q-power of the polynomial part (0 if none)
    int max_degree() const;
    int weight() const;
    QFunc truncated(int max_weight) const;
    QFunc embedded(const ContextPtr& ctx) const;

    QFunc operator-() const;
    QFunc& operator+=(const QFunc& o);
    QFunc& operator-=(const QFunc& o);
    QFunc& operator*=(const Cyc& c);
    friend QFunc operator+(QFunc a, const QFunc& b) { return a += b; }
    friend QFunc operator-(QFunc a, const QFunc& b) { return a -= b; }
    friend QFunc operator*(const QFunc& a, const QFunc& b);
    friend QFunc operator*(QFunc a, const Cyc& c) { return a *= c; }
    friend QFunc operator*(const Cyc& c, QFunc a) { return a *= c; }
    friend bool operator==(const QFunc& a, const QFunc& b);

    QFunc shifted(int k) const;  // q^k f(q)

    std::string str() const;

private:
    void clean();
    Poly poly_;
    Poles poles_;
};

QFunc project_plus(const QFunc& f);
QFunc project_minus(const QFunc& f);

// Residue of f(q) dq.
Cyc residue(const QFunc& f, const QPoint& p);
// Sum of residues of f(q) dq over every pole, including 0 and infinity.
Cyc residue_total(const QFunc& f);

// Coefficients of the Laurent expansion at 0, degrees min_degree()..max_deg.
std::map<int, Cyc> expand_at_zero(const QFunc& f, int max_deg);
// Coefficients of the expansion at infinity, degrees max..min_deg.
std::map<int, Cyc> expand_at_infinity(const QFunc& f, int min_deg);
// Taylor coefficients at zeta_12^root: f = sum_k c_k (q - zeta)^k.
std::vector<Cyc> taylor_at(const QFunc& f, int root, int order);
std::vector<Cyc> expand_at_one(const QFunc& f, int order);
Cyc evaluate_at_root(const QFunc& f, int root);

QFunc invert_variable(const QFunc& f);  // f(1/q)
QFunc substitute_power(const QFunc& f, int r);  // f(q^r), r >= 1
QFunc adams(int k, const QFunc& f);  // Adams on coefficients and q -> q^k
QFunc power(const QFunc& f, int e);
// (f(q) - f(1)) / (q - 1) for f regular at 1.
QFunc divided_difference(const QFunc& f);

// (Res_0 + Res_inf) f(q) g(1/q) dq/q, scalar coefficients multiplied.
Cyc omega_scalar(const QFunc& f, const QFunc& g);

// Applies fn to every coefficient of the partial-fraction form.
template <class F>
QFunc map_coefficients(const QFunc& f, F&& fn) {
    QFunc out;
    for (const auto& [k, c] : f.poly()) out += QFunc::monomial(k, fn(c));
    for (const auto& [e, v] : f.poles())
        for (std::size_t s = 0; s < v.size(); ++s) out += QFunc::pole(e, static_cast<int>(s) + 1, fn(v[s]));
    return out;
}

}  // namespace qkr
