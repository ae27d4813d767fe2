#pragma once

#include "qkr/series.hpp"

#include <array>
#include <string>
#include <vector>

namespace qkr {

// Coefficients live in Lambda tensor Q(zeta_12): every root-of-unity order that arises
// (1, 2, 3, 4, 6, 12) divides the conductor.
inline constexpr int kConductor = 12;
inline constexpr int kCycDegree = 4;  // phi(12); minimal polynomial x^4 - x^2 + 1

// Exponent e of zeta_12^e, normalized to [0, 12).
int normalize_root(int e);
// (order m, power j) with zeta_12^e = exp(2 pi i j / m).
std::pair<int, int> root_label(int e);
int root_from_label(int m, int j);

class Cyc {
public:
    Cyc() : comps_(1) {}
    Cyc(const Series& s) : comps_{s} {}  // NOLINT(google-explicit-constructor)
    Cyc(const Rational& r) : comps_{Series(r)} {}  // NOLINT(google-explicit-constructor)
    Cyc(long r) : Cyc(Rational(r)) {}  // NOLINT(google-explicit-constructor)
    Cyc(int r) : Cyc(Rational(r)) {}  // NOLINT(google-explicit-constructor)

    static Cyc root(int e);  // zeta_12^e
    static Cyc from_components(std::vector<Series> comps);

    const std::vector<Series>& components() const { return comps_; }
    Series component(int i) const;
    bool is_zero() const;
    bool is_rational() const;
    // The Lambda-valued value; throws if an irrational component survives.
    Series rational_part() const;
    bool is_scalar() const;  // all components constant
    int weight() const;
    Cyc truncated(int max_weight) const;
    Cyc embedded(const ContextPtr& ctx) const;

    Cyc operator-() const;
    Cyc& operator+=(const Cyc& o);
    Cyc& operator-=(const Cyc& o);
    friend Cyc operator+(Cyc a, const Cyc& b) { return a += b; }
    friend Cyc operator-(Cyc a, const Cyc& b) { return a -= b; }
    friend Cyc operator*(const Cyc& a, const Cyc& b);
    friend bool operator==(const Cyc& a, const Cyc& b);

    std::string str() const;

private:
    void normalize();
    std::vector<Series> comps_;  // size 1 (rational) or kCycDegree
};

// Field-level operations on scalar elements.
Cyc inverse(const Cyc& a);  // a must have a unit constant part
Cyc conjugate(const Cyc& a);  // zeta -> zeta^-1
Cyc galois(const Cyc& a, int k);  // zeta -> zeta^k, gcd(k, 12) = 1
Rational norm(const Cyc& a);  // scalar a only
Cyc adams(int k, const Cyc& a);  // Adams on Lambda, zeta -> zeta^k
Cyc power(const Cyc& a, int e);

// Applies fn to every Lambda component.
template <class F>
Cyc map_components(const Cyc& a, F&& fn) {
    std::vector<Series> comps;
    comps.reserve(a.components().size());
    for (const auto& s : a.components()) comps.push_back(fn(s));
    return Cyc::from_components(std::move(comps));
}

}  // namespace qkr
