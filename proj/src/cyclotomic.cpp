#include "qkr/cyclotomic.hpp"

#include <numeric>
#include <sstream>

namespace qkr {

namespace {

using Vec = std::array<Rational, kCycDegree>;

const std::array<Vec, kConductor>& root_table() {
    static const auto table = [] {
        std::array<Vec, kConductor> t{};
        for (auto& v : t) v.fill(0);
        t[0][0] = 1;
        t[1][1] = 1;
        t[2][2] = 1;
        t[3][3] = 1;
        t[4][0] = -1;
        t[4][2] = 1;
        t[5][1] = -1;
        t[5][3] = 1;
        for (int e = 6; e < kConductor; ++e)
            for (int i = 0; i < kCycDegree; ++i) t[e][i] = -t[e - 6][i];
        return t;
    }();
    return table;
}

// Solve M x = b over the rationals (M invertible, small).
std::vector<Rational> solve(std::vector<std::vector<Rational>> m, std::vector<Rational> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) throw std::domain_error("singular cyclotomic element");
        std::swap(m[p], m[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) continue;
            Rational f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t c = 0; c < n; ++c) b[c] /= m[c][c];
    return b;
}

Cyc scalar_inverse(const Cyc& a) {
    // Columns of the multiplication matrix are a * zeta^j.
    std::vector<std::vector<Rational>> m(kCycDegree, std::vector<Rational>(kCycDegree, 0));
    for (int j = 0; j < kCycDegree; ++j) {
        Cyc col = a * Cyc::root(j);
        for (int i = 0; i < kCycDegree; ++i) m[i][j] = col.component(i).constant_term();
    }
    std::vector<Rational> rhs(kCycDegree, 0);
    rhs[0] = 1;
    auto x = solve(m, rhs);
    std::vector<Series> comps;
    for (auto& r : x) comps.emplace_back(r);
    return Cyc::from_components(std::move(comps));
}

Cyc constant_part(const Cyc& a) {
    std::vector<Series> comps;
    for (const auto& c : a.components()) comps.emplace_back(c.constant_term());
    return Cyc::from_components(std::move(comps));
}

}  // namespace

int normalize_root(int e) { return ((e % kConductor) + kConductor) % kConductor; }

std::pair<int, int> root_label(int e) {
    e = normalize_root(e);
    int g = std::gcd(e, kConductor);
    if (e == 0) return {1, 0};
    return {kConductor / g, e / g};
}

int root_from_label(int m, int j) {
    if (m <= 0 || kConductor % m != 0)
        throw std::invalid_argument("root order " + std::to_string(m) + " does not divide conductor");
    return normalize_root(j * (kConductor / m));
}

Cyc Cyc::root(int e) {
    const auto& v = root_table()[normalize_root(e)];
    std::vector<Series> comps(v.begin(), v.end());
    return from_components(std::move(comps));
}

Cyc Cyc::from_components(std::vector<Series> comps) {
    Cyc c;
    if (comps.empty()) comps.resize(1);
    if (comps.size() != 1 && comps.size() != kCycDegree)
        throw std::invalid_argument("cyclotomic element has wrong component count");
    c.comps_ = std::move(comps);
    c.normalize();
    return c;
}

Series Cyc::component(int i) const {
    if (i < static_cast<int>(comps_.size())) return comps_[i];
    return Series(comps_[0].context(), 0);
}

bool Cyc::is_zero() const {
    for (const auto& c : comps_)
        if (!c.is_zero()) return false;
    return true;
}

bool Cyc::is_rational() const { return comps_.size() == 1; }

Series Cyc::rational_part() const {
    if (!is_rational()) throw std::domain_error("value is not rational: " + str());
    return comps_[0];
}

bool Cyc::is_scalar() const {
    for (const auto& c : comps_)
        if (!c.is_constant()) return false;
    return true;
}

int Cyc::weight() const {
    int w = kInfiniteWeight;
    for (const auto& c : comps_) w = std::min(w, c.weight());
    return w;
}

Cyc Cyc::truncated(int max_weight) const {
    std::vector<Series> comps;
    for (const auto& c : comps_) comps.push_back(c.truncated(max_weight));
    return from_components(std::move(comps));
}

Cyc Cyc::embedded(const ContextPtr& ctx) const {
    std::vector<Series> comps;
    for (const auto& c : comps_) comps.push_back(c.embedded(ctx));
    return from_components(std::move(comps));
}

void Cyc::normalize() {
    if (comps_.size() == 1) return;
    for (int i = 1; i < kCycDegree; ++i)
        if (!comps_[i].is_zero()) return;
    comps_.resize(1);
}

Cyc Cyc::operator-() const {
    Cyc c = *this;
    for (auto& s : c.comps_) s = -s;
    return c;
}

Cyc& Cyc::operator+=(const Cyc& o) {
    if (o.comps_.size() > comps_.size()) {
        ContextPtr ctx = comps_[0].context();
        comps_.resize(o.comps_.size(), Series(ctx, 0));
    }
    for (std::size_t i = 0; i < o.comps_.size(); ++i) comps_[i] += o.comps_[i];
    normalize();
    return *this;
}

Cyc& Cyc::operator-=(const Cyc& o) { return *this += -o; }

Cyc operator*(const Cyc& a, const Cyc& b) {
    if (a.is_rational() && b.is_rational()) return Cyc(a.comps_[0] * b.comps_[0]);
    std::vector<Series> acc(2 * kCycDegree - 1);
    for (std::size_t i = 0; i < a.comps_.size(); ++i) {
        if (a.comps_[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.comps_.size(); ++j) {
            if (b.comps_[j].is_zero()) continue;
            acc[i + j] += a.comps_[i] * b.comps_[j];
        }
    }
    for (int d = 2 * kCycDegree - 2; d >= kCycDegree; --d) {
        if (acc[d].is_zero()) continue;
        acc[d - 2] += acc[d];
        acc[d - 4] -= acc[d];
    }
    acc.resize(kCycDegree);
    return Cyc::from_components(std::move(acc));
}

bool operator==(const Cyc& a, const Cyc& b) { return (a - b).is_zero(); }

std::string Cyc::str() const {
    if (is_rational()) return comps_[0].str();
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < kCycDegree; ++i) {
        if (comps_[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << comps_[i].str() << ")";
        if (i > 0) os << "*z12" << (i > 1 ? "^" + std::to_string(i) : "");
    }
    return first ? "0" : os.str();
}

Cyc inverse(const Cyc& a) {
    Cyc a0 = constant_part(a);
    if (a0.is_zero()) throw std::domain_error("cyclotomic element is not a unit");
    Cyc inv0 = scalar_inverse(a0);
    if (a.is_scalar()) return inv0;
    Cyc u = (a - a0) * inv0;
    Cyc result(1), term(1);
    for (int k = 1;; ++k) {
        term = -(term * u);
        if (term.is_zero()) break;
        result += term;
        if (k > 4096) throw std::logic_error("geometric series did not terminate");
    }
    return result * inv0;
}

Cyc galois(const Cyc& a, int k) {
    if (std::gcd(k, kConductor) != 1) throw std::invalid_argument("not a Galois exponent");
    Cyc out(0);
    for (int j = 0; j < static_cast<int>(a.components().size()); ++j)
        out += Cyc(a.components()[j]) * Cyc::root(j * k);
    return out;
}

Cyc conjugate(const Cyc& a) { return galois(a, kConductor - 1); }

Rational norm(const Cyc& a) {
    Cyc p(1);
    for (int k : {1, 5, 7, 11}) p = p * galois(a, k);
    if (!p.is_rational() || !p.is_scalar()) throw std::domain_error("norm of non-scalar element");
    return p.rational_part().constant_term();
}

Cyc adams(int k, const Cyc& a) {
    Cyc out(0);
    for (int j = 0; j < static_cast<int>(a.components().size()); ++j)
        out += Cyc(adams(k, a.components()[j])) * Cyc::root(j * k);
    return out;
}

Cyc power(const Cyc& a, int e) {
    if (e < 0) return power(inverse(a), -e);
    Cyc r(1);
    for (int i = 0; i < e; ++i) r = r * a;
    return r;
}

}  // namespace qkr
