#include "qkr/insertion.hpp"

#include <map>
#include <sstream>
#include <tuple>

namespace qkr {

namespace {

Rational binom(int n, int k) {
    Rational r = 1;
    for (int i = 0; i < k; ++i) r = r * Rational(n - i) / Rational(i + 1);
    return r;
}

bool scalar_qfunc(const QFunc& f) {
    for (const auto& [k, c] : f.poly())
        if (!c.is_scalar()) return false;
    for (const auto& [e, v] : f.poles())
        for (const auto& c : v)
            if (!c.is_scalar()) return false;
    return true;
}

}  // namespace

Cyc adams_coefficients(int r, const Cyc& c) {
    if (r == 1 || c.is_scalar()) return c;
    std::vector<Series> comps;
    for (const auto& s : c.components()) comps.push_back(adams(r, s));
    return Cyc::from_components(std::move(comps));
}

QFunc adams_coefficients(int r, const QFunc& f) {
    if (r == 1) return f;
    QFunc out;
    for (const auto& [k, c] : f.poly()) out += QFunc::monomial(k, adams_coefficients(r, c));
    for (const auto& [e, v] : f.poles())
        for (std::size_t s = 0; s < v.size(); ++s)
            if (!v[s].is_zero()) out += QFunc::pole(e, int(s) + 1, adams_coefficients(r, v[s]));
    return out;
}

namespace {

// Adams on a Laurent polynomial in L: coefficients and L -> L^r.
QFunc adams_in_l(int r, const QFunc& f) {
    QFunc out;
    for (const auto& [k, c] : f.poly()) out += QFunc::monomial(k * r, adams_coefficients(r, c));
    if (!f.is_laurent()) throw std::logic_error("numerator in L must be a Laurent polynomial");
    return out;
}

// (1 - zeta^a q^p)^(-s) as a function of q.
QFunc inverse_factor(int a, int p, int s) {
    if (p == 0) {
        Cyc base = Cyc(1) - Cyc::root(a);
        if (base.is_zero()) throw SingularityError("kernel denominator vanishes identically");
        return QFunc(power(inverse(base), s));
    }
    QFunc w = QFunc::pole(-a, s);
    if (p > 0) return substitute_power(w, p);
    return invert_variable(substitute_power(w, -p));
}

// [h^k] 1/(1 - q^p (zeta^e + h)^m) with unit coefficient.
const QFunc& kernel_moment(int p, int m, int e, int k) {
    thread_local std::map<std::tuple<int, int, int, int>, QFunc> cache;
    e = normalize_root(e);
    auto key = std::make_tuple(p, m, e, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    // (zeta + h)^m = zeta^m (1 + P(h)), P(h) = sum_{j>=1} C(m, j) zeta^-j h^j.
    std::vector<Cyc> pcoef(k + 1, Cyc(0));
    for (int j = 1; j <= k; ++j) pcoef[j] = Cyc(binom(m, j)) * Cyc::root(-e * j);
    std::vector<Cyc> pn(k + 1, Cyc(0));  // P^n truncated at h^k
    pn[0] = Cyc(1);
    QFunc out;
    int a = normalize_root(e * m);
    for (int n = 0; n <= k; ++n) {
        if (!pn[k].is_zero()) {
            // c^n / (1 - c)^(n+1) with c = zeta^a q^p
            QFunc term = inverse_factor(a, p, n + 1).shifted(p * n) * (Cyc::root(a * n) * pn[k]);
            out += term;
        }
        std::vector<Cyc> next(k + 1, Cyc(0));
        for (int i = 0; i <= k; ++i) {
            if (pn[i].is_zero()) continue;
            for (int j = 1; i + j <= k; ++j) next[i + j] += pn[i] * pcoef[j];
        }
        pn = std::move(next);
    }
    return cache.emplace(key, std::move(out)).first->second;
}

QFunc kernel_term_moment(const Kernel& ker, int e, int k) {
    auto num = taylor_at(ker.numerator, e, k);
    QFunc acc;
    if (ker.l_power == 0 && ker.q_power == 0) {
        acc = QFunc(num[k]);
    } else {
        for (int j = 0; j <= k; ++j)
            if (!num[j].is_zero()) acc += kernel_moment(ker.q_power, ker.l_power, e, k - j) * num[j];
    }
    return ker.coefficient * acc;
}

// q^p / (1 - q^p)
QFunc geometric_ratio(int p) {
    if (p == 0) throw SingularityError("kernel is singular at L = 1");
    if (p > 0) return substitute_power(QFunc::pole(0, 1), p).shifted(p);
    return invert_variable(substitute_power(QFunc::pole(0, 1), -p).shifted(-p));
}

bool plain(const Kernel& k) { return k.l_power == 0 && k.q_power == 0; }

}  // namespace

LFunction LFunction::polynomial(const QFunc& laurent_in_l) {
    if (!laurent_in_l.is_laurent()) throw std::invalid_argument("expected a Laurent polynomial in L");
    LFunction f;
    f.poly_ = laurent_in_l;
    return f;
}

LFunction LFunction::l_power(int k, const Cyc& c) { return polynomial(QFunc::monomial(k, c)); }

LFunction LFunction::kernel(int p, int m, const QFunc& coefficient) {
    LFunction f;
    if (m == 0) throw std::invalid_argument("kernel needs a nonzero power of L");
    f.add_kernel(Kernel{coefficient, p, m, QFunc(1)});
    return f;
}

bool LFunction::is_scalar() const {
    if (!scalar_qfunc(poly_)) return false;
    for (const auto& k : kernels_)
        if (!scalar_qfunc(k.coefficient) || !scalar_qfunc(k.numerator)) return false;
    return true;
}

bool LFunction::is_affine() const {
    if (!kernels_.empty() || !poly_.is_laurent()) return false;
    for (const auto& [k, c] : poly_.poly())
        if (k != 0 && k != 1) return false;
    return true;
}

int LFunction::weight() const {
    int w = poly_.weight();
    for (const auto& k : kernels_) {
        int a = k.coefficient.weight(), b = k.numerator.weight();
        if (a == kInfiniteWeight || b == kInfiniteWeight) continue;
        w = std::min(w, a + b);
    }
    return w;
}

LFunction LFunction::operator-() const {
    LFunction f = *this;
    f.poly_ = -f.poly_;
    for (auto& k : f.kernels_) k.coefficient = -k.coefficient;
    return f;
}

LFunction& LFunction::add_kernel(Kernel k) {
    if (k.coefficient.is_zero() || k.numerator.is_zero()) return *this;
    if (plain(k) && k.coefficient.is_constant()) {
        poly_ += k.numerator * k.coefficient.constant_value();
        return *this;
    }
    for (auto it = kernels_.begin(); it != kernels_.end(); ++it) {
        if (it->q_power == k.q_power && it->l_power == k.l_power && it->numerator == k.numerator) {
            it->coefficient += k.coefficient;
            if (it->coefficient.is_zero()) kernels_.erase(it);
            return *this;
        }
    }
    kernels_.push_back(std::move(k));
    return *this;
}

LFunction& LFunction::operator+=(const LFunction& o) {
    poly_ += o.poly_;
    for (const auto& k : o.kernels_) add_kernel(k);
    return *this;
}

LFunction& LFunction::operator*=(const Cyc& c) {
    poly_ *= c;
    for (auto& k : kernels_) k.coefficient *= c;
    std::erase_if(kernels_, [](const Kernel& k) { return k.coefficient.is_zero(); });
    return *this;
}

LFunction LFunction::scaled(const QFunc& c) const {
    if (c.is_constant()) return *this * c.constant_value();
    LFunction out;
    out.add_kernel(Kernel{c, 0, 0, poly_});
    for (auto k : kernels_) {
        k.coefficient = k.coefficient * c;
        out.add_kernel(std::move(k));
    }
    return out;
}

LFunction LFunction::shifted(int k) const {
    LFunction f = *this;
    f.poly_ = f.poly_.shifted(k);
    for (auto& ker : f.kernels_) ker.numerator = ker.numerator.shifted(k);
    return f;
}

LFunction LFunction::embedded(const ContextPtr& ctx) const {
    LFunction f = *this;
    f.poly_ = f.poly_.embedded(ctx);
    for (auto& k : f.kernels_) {
        k.coefficient = k.coefficient.embedded(ctx);
        k.numerator = k.numerator.embedded(ctx);
    }
    return f;
}

LFunction LFunction::truncated(int max_weight) const {
    LFunction f;
    f.poly_ = poly_.truncated(max_weight);
    for (auto k : kernels_) {
        k.coefficient = k.coefficient.truncated(max_weight);
        f.add_kernel(std::move(k));
    }
    return f;
}

std::string LFunction::str() const {
    std::ostringstream os;
    os << "{" << poly_.str() << "}";
    for (const auto& k : kernels_)
        os << "[" << k.coefficient.str() << "|" << k.q_power << "|" << k.l_power << "|"
           << k.numerator.str() << "]";
    return os.str();
}

QFunc moment(const LFunction& f, int root, int k) {
    QFunc out;
    if (!f.poly().is_zero()) {
        auto t = taylor_at(f.poly(), root, k);
        out = QFunc(t[k]);
    }
    for (const auto& ker : f.kernels()) out += kernel_term_moment(ker, root, k);
    return out;
}

QFunc value_at_one(const LFunction& f) { return moment(f, 0, 0); }

LFunction divided_difference(const LFunction& f) {
    LFunction out = LFunction::polynomial(divided_difference(f.poly()));
    for (const auto& k : f.kernels()) {
        // D(N/(1 - cL^m)) = DN/(1 - cL^m) + N(1) c/(1 - c) D(L^m)/(1 - cL^m)
        Kernel a = k;
        a.numerator = divided_difference(k.numerator);
        out.add_kernel(std::move(a));
        if (plain(k)) continue;
        Cyc n1 = evaluate_at_root(k.numerator, 0);
        if (n1.is_zero()) continue;
        Kernel b = k;
        b.coefficient = k.coefficient * geometric_ratio(k.q_power);
        b.numerator = divided_difference(QFunc::monomial(k.l_power, n1));
        out.add_kernel(std::move(b));
    }
    return out;
}

LFunction adams(int r, const LFunction& f) {
    if (r == 1) return f;
    LFunction out = LFunction::polynomial(adams_in_l(r, f.poly()));
    for (const auto& k : f.kernels()) {
        Kernel a = k;
        a.coefficient = adams_coefficients(r, k.coefficient);
        a.numerator = adams_in_l(r, k.numerator);
        if (!plain(k)) a.l_power = k.l_power * r;
        out.add_kernel(std::move(a));
    }
    return out;
}

std::vector<ScalarPiece> scalar_pieces(const LFunction& f) {
    std::vector<ScalarPiece> out;
    for (const auto& [a, c] : f.poly().poly()) out.push_back({QFunc(c), LFunction::l_power(a)});
    for (const auto& k : f.kernels()) {
        for (const auto& [j, c] : k.numerator.poly()) {
            LFunction piece = plain(k) ? LFunction::l_power(j) : LFunction::kernel(k.q_power, k.l_power).shifted(j);
            out.push_back({k.coefficient * c, std::move(piece)});
        }
    }
    return out;
}

Insertion basis_insertion(int rank, int index, const LFunction& f) {
    if (index < 0 || index >= rank) throw std::out_of_range("basis index out of range");
    Insertion ins(rank);
    ins[index] = f;
    return ins;
}

}  // namespace qkr
