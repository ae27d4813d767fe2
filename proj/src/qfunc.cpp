#include "qkr/qfunc.hpp"

#include <sstream>
#include <tuple>

namespace qkr {

namespace {

Rational binom(long n, int k) {
    if (k < 0) return 0;
    Rational r = 1;
    for (int i = 0; i < k; ++i) r = r * Rational(n - i) / Rational(i + 1);
    return r;
}

bool add_into(Cyc& slot, const Cyc& v) {
    slot += v;
    return slot.is_zero();
}

// (1 - q/zeta^e)^(-s)
QFunc unit_pole(int e, int s) { return QFunc::pole(e, s); }

const Cyc& inv_one_minus_root(int d) {
    thread_local std::map<int, Cyc> cache;
    d = normalize_root(d);
    auto it = cache.find(d);
    if (it != cache.end()) return it->second;
    if (d == 0) throw std::logic_error("1 - 1 is not invertible");
    return cache.emplace(d, inverse(Cyc(1) - Cyc::root(d))).first->second;
}

// q^a (1 - q/zeta^e)^(-s) with unit coefficient.
const QFunc& monomial_times_pole(int a, int e, int s) {
    thread_local std::map<std::tuple<int, int, int>, QFunc> cache;
    auto key = std::make_tuple(a, e, s);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    QFunc out;
    if (s == 0) {
        out = QFunc::monomial(a);
    } else if (a == 0) {
        out = unit_pole(e, s);
    } else if (a > 0) {
        // q = zeta (1 - u), u = 1 - q/zeta.
        Cyc za = Cyc::root(e * a);
        for (int j = 0; j <= a; ++j) {
            Cyc c = za * Cyc(binom(a, j) * (j % 2 ? -1 : 1));
            if (j < s) {
                out += QFunc::pole(e, s - j, c);
            } else {
                int p = j - s;  // u^p expanded in q
                for (int i = 0; i <= p; ++i)
                    out += QFunc::monomial(i, c * Cyc(binom(p, i) * (i % 2 ? -1 : 1)) *
                                                  Cyc::root(-e * i));
            }
        }
    } else {
        // 1/(q^b u^s) = 1/(q^b u^(s-1)) + zeta^-1 / (q^(b-1) u^s), since u + q/zeta = 1.
        int b = -a;
        out = monomial_times_pole(-b, e, s - 1);
        out += monomial_times_pole(-(b - 1), e, s) * Cyc::root(-e);
    }
    return cache.emplace(key, std::move(out)).first->second;
}

// (1 - q/zeta^e1)^(-s1) (1 - q/zeta^e2)^(-s2) with unit coefficient.
const QFunc& pole_times_pole(int e1, int s1, int e2, int s2) {
    thread_local std::map<std::tuple<int, int, int, int>, QFunc> cache;
    auto key = std::make_tuple(e1, s1, e2, s2);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    QFunc out;
    if (s1 == 0) {
        out = unit_pole(e2, s2);
    } else if (s2 == 0) {
        out = unit_pole(e1, s1);
    } else if (e1 == e2) {
        out = unit_pole(e1, s1 + s2);
    } else {
        // u2 = (1 - rho) + rho u1 with rho = zeta1/zeta2, so 1 = (u2 - rho u1)/(1 - rho).
        Cyc rho = Cyc::root(e1 - e2);
        const Cyc& inv = inv_one_minus_root(e1 - e2);
        out = pole_times_pole(e1, s1, e2, s2 - 1) * inv;
        out -= pole_times_pole(e1, s1 - 1, e2, s2) * (rho * inv);
    }
    return cache.emplace(key, std::move(out)).first->second;
}

}  // namespace

QFunc::QFunc(const Cyc& c) {
    if (!c.is_zero()) poly_.emplace(0, c);
}

QFunc QFunc::monomial(int exponent, const Cyc& c) {
    QFunc f;
    if (!c.is_zero()) f.poly_.emplace(exponent, c);
    return f;
}

QFunc QFunc::pole(int root, int order, const Cyc& c) {
    if (order < 1) throw std::invalid_argument("pole order must be positive");
    QFunc f;
    if (c.is_zero()) return f;
    auto& v = f.poles_[normalize_root(root)];
    v.assign(order, Cyc(0));
    v[order - 1] = c;
    return f;
}

QFunc QFunc::laurent(const Poly& terms) {
    QFunc f;
    f.poly_ = terms;
    f.clean();
    return f;
}

bool QFunc::is_constant() const {
    return poles_.empty() && (poly_.empty() || (poly_.size() == 1 && poly_.begin()->first == 0));
}

Cyc QFunc::constant_value() const {
    if (!is_constant()) throw std::domain_error("q-function is not constant: " + str());
    return poly_.empty() ? Cyc(0) : poly_.begin()->second;
}

bool QFunc::has_pole_at(int root) const { return poles_.count(normalize_root(root)) > 0; }

int QFunc::pole_order(int root) const {
    auto it = poles_.find(normalize_root(root));
    return it == poles_.end() ? 0 : static_cast<int>(it->second.size());
}

int QFunc::min_degree() const { return poly_.empty() ? 0 : poly_.begin()->first; }
int QFunc::max_degree() const { return poly_.empty() ? 0 : poly_.rbegin()->first; }

int QFunc::weight() const {
    int w = kInfiniteWeight;
    for (const auto& [k, c] : poly_) w = std::min(w, c.weight());
    for (const auto& [e, v] : poles_)
        for (const auto& c : v) w = std::min(w, c.weight());
    return w;
}

QFunc QFunc::truncated(int max_weight) const {
    QFunc f;
    for (const auto& [k, c] : poly_) f.poly_[k] = c.truncated(max_weight);
    for (const auto& [e, v] : poles_) {
        auto& out = f.poles_[e];
        for (const auto& c : v) out.push_back(c.truncated(max_weight));
    }
    f.clean();
    return f;
}

QFunc QFunc::embedded(const ContextPtr& ctx) const {
    QFunc f;
    for (const auto& [k, c] : poly_) f.poly_[k] = c.embedded(ctx);
    for (const auto& [e, v] : poles_) {
        auto& out = f.poles_[e];
        for (const auto& c : v) out.push_back(c.embedded(ctx));
    }
    f.clean();
    return f;
}

void QFunc::clean() {
    std::erase_if(poly_, [](const auto& kv) { return kv.second.is_zero(); });
    for (auto it = poles_.begin(); it != poles_.end();) {
        auto& v = it->second;
        while (!v.empty() && v.back().is_zero()) v.pop_back();
        if (v.empty())
            it = poles_.erase(it);
        else
            ++it;
    }
}

QFunc QFunc::operator-() const {
    QFunc f = *this;
    for (auto& [k, c] : f.poly_) c = -c;
    for (auto& [e, v] : f.poles_)
        for (auto& c : v) c = -c;
    return f;
}

QFunc& QFunc::operator+=(const QFunc& o) {
    for (const auto& [k, c] : o.poly_) {
        auto [it, fresh] = poly_.try_emplace(k, c);
        if (!fresh && add_into(it->second, c)) poly_.erase(it);
    }
    for (const auto& [e, v] : o.poles_) {
        auto& mine = poles_[e];
        if (mine.size() < v.size()) mine.resize(v.size(), Cyc(0));
        for (std::size_t s = 0; s < v.size(); ++s) mine[s] += v[s];
    }
    clean();
    return *this;
}

QFunc& QFunc::operator-=(const QFunc& o) { return *this += -o; }

QFunc& QFunc::operator*=(const Cyc& c) {
    if (c.is_zero()) {
        poly_.clear();
        poles_.clear();
        return *this;
    }
    for (auto& [k, v] : poly_) v = v * c;
    for (auto& [e, v] : poles_)
        for (auto& x : v) x = x * c;
    clean();
    return *this;
}

QFunc operator*(const QFunc& a, const QFunc& b) {
    if (a.is_zero() || b.is_zero()) return QFunc();
    if (a.is_constant()) return b * a.constant_value();
    if (b.is_constant()) return a * b.constant_value();
    QFunc out;
    for (const auto& [i, ca] : a.poly_)
        for (const auto& [j, cb] : b.poly_) out += QFunc::monomial(i + j, ca * cb);
    auto cross = [&out](const QFunc::Poly& poly, const QFunc::Poles& poles) {
        for (const auto& [k, c] : poly)
            for (const auto& [e, v] : poles)
                for (std::size_t s = 0; s < v.size(); ++s) {
                    if (v[s].is_zero()) continue;
                    out += monomial_times_pole(k, e, int(s) + 1) * (c * v[s]);
                }
    };
    cross(a.poly_, b.poles_);
    cross(b.poly_, a.poles_);
    for (const auto& [e1, v1] : a.poles_)
        for (std::size_t s1 = 0; s1 < v1.size(); ++s1) {
            if (v1[s1].is_zero()) continue;
            for (const auto& [e2, v2] : b.poles_)
                for (std::size_t s2 = 0; s2 < v2.size(); ++s2) {
                    if (v2[s2].is_zero()) continue;
                    out += pole_times_pole(e1, int(s1) + 1, e2, int(s2) + 1) * (v1[s1] * v2[s2]);
                }
        }
    return out;
}

bool operator==(const QFunc& a, const QFunc& b) { return (a - b).is_zero(); }

QFunc QFunc::shifted(int k) const {
    QFunc out;
    for (const auto& [i, c] : poly_) out.poly_[i + k] = c;
    for (const auto& [e, v] : poles_)
        for (std::size_t s = 0; s < v.size(); ++s)
            if (!v[s].is_zero()) out += monomial_times_pole(k, e, int(s) + 1) * v[s];
    return out;
}

std::string QFunc::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    auto sep = [&] {
        if (!first) os << " + ";
        first = false;
    };
    for (const auto& [k, c] : poly_) {
        sep();
        os << "(" << c.str() << ")";
        if (k != 0) os << "*q^" << k;
    }
    for (const auto& [e, v] : poles_) {
        auto [m, j] = root_label(e);
        for (std::size_t s = 0; s < v.size(); ++s) {
            if (v[s].is_zero()) continue;
            sep();
            os << "(" << v[s].str() << ")/(1-q/w[" << m << "," << j << "])";
            if (s > 0) os << "^" << s + 1;
        }
    }
    return os.str();
}

QFunc project_plus(const QFunc& f) { return QFunc::laurent(f.poly()); }

QFunc project_minus(const QFunc& f) { return f - project_plus(f); }

std::map<int, Cyc> expand_at_zero(const QFunc& f, int max_deg) {
    std::map<int, Cyc> out;
    for (const auto& [k, c] : f.poly())
        if (k <= max_deg) out[k] += c;
    for (const auto& [e, v] : f.poles())
        for (std::size_t si = 0; si < v.size(); ++si) {
            int s = int(si) + 1;
            for (int n = 0; n <= max_deg; ++n)
                out[n] += v[si] * Cyc(binom(n + s - 1, s - 1)) * Cyc::root(-e * n);
        }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

std::map<int, Cyc> expand_at_infinity(const QFunc& f, int min_deg) {
    std::map<int, Cyc> out;
    for (const auto& [k, c] : f.poly())
        if (k >= min_deg) out[k] += c;
    for (const auto& [e, v] : f.poles())
        for (std::size_t si = 0; si < v.size(); ++si) {
            int s = int(si) + 1;
            // (1 - q/zeta)^-s = (-zeta)^s sum_n C(n+s-1, s-1) zeta^n q^-(n+s)
            Cyc lead = Cyc::root(e * s) * Cyc(s % 2 ? -1 : 1);
            for (int n = 0; -(n + s) >= min_deg; ++n)
                out[-(n + s)] += v[si] * lead * Cyc(binom(n + s - 1, s - 1)) * Cyc::root(e * n);
        }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

Cyc residue(const QFunc& f, const QPoint& p) {
    switch (p.kind) {
        case QPoint::Kind::Zero: {
            auto it = f.poly().find(-1);
            return it == f.poly().end() ? Cyc(0) : it->second;
        }
        case QPoint::Kind::Infinity: {
            auto ex = expand_at_infinity(f, -1);
            auto it = ex.find(-1);
            return it == ex.end() ? Cyc(0) : -it->second;
        }
        case QPoint::Kind::Root: {
            auto it = f.poles().find(p.root);
            if (it == f.poles().end()) return Cyc(0);
            return -(Cyc::root(p.root) * it->second[0]);
        }
    }
    return Cyc(0);
}

Cyc residue_total(const QFunc& f) {
    Cyc total = residue(f, QPoint::zero()) + residue(f, QPoint::infinity());
    for (const auto& [e, v] : f.poles()) total += residue(f, QPoint::at_root(e));
    return total;
}

std::vector<Cyc> taylor_at(const QFunc& f, int root, int order) {
    root = normalize_root(root);
    if (f.has_pole_at(root)) {
        auto [m, j] = root_label(root);
        throw SingularityError("pole at q = w[" + std::to_string(m) + "," + std::to_string(j) + "]");
    }
    std::vector<Cyc> out(order + 1, Cyc(0));
    for (const auto& [a, c] : f.poly())
        for (int k = 0; k <= order; ++k) {
            Rational b = binom(a, k);
            if (b != 0) out[k] += c * Cyc(b) * Cyc::root(root * (a - k));
        }
    for (const auto& [e, v] : f.poles()) {
        // q = zeta + h: (1 - q/zeta')^-s = c^-s (1 - h/(c zeta'))^-s, c = 1 - zeta/zeta'.
        const Cyc& cinv = inv_one_minus_root(root - e);
        Cyc step = cinv * Cyc::root(-e);
        for (std::size_t si = 0; si < v.size(); ++si) {
            int s = int(si) + 1;
            Cyc base = power(cinv, s);
            Cyc hp(1);
            for (int k = 0; k <= order; ++k) {
                out[k] += v[si] * base * hp * Cyc(binom(k + s - 1, s - 1));
                hp = hp * step;
            }
        }
    }
    return out;
}

std::vector<Cyc> expand_at_one(const QFunc& f, int order) { return taylor_at(f, 0, order); }

Cyc evaluate_at_root(const QFunc& f, int root) { return taylor_at(f, root, 0)[0]; }

QFunc invert_variable(const QFunc& f) {
    QFunc out;
    for (const auto& [k, c] : f.poly()) out += QFunc::monomial(-k, c);
    for (const auto& [e, v] : f.poles())
        for (std::size_t si = 0; si < v.size(); ++si) {
            if (v[si].is_zero()) continue;
            int s = int(si) + 1;
            // (1 - 1/(q zeta))^-s = (-zeta)^s q^s (1 - q zeta)^-s
            Cyc c = v[si] * Cyc::root(e * s) * Cyc(s % 2 ? -1 : 1);
            out += monomial_times_pole(s, -e, s) * c;
        }
    return out;
}

QFunc substitute_power(const QFunc& f, int r) {
    if (r < 1) throw std::invalid_argument("substitution power must be positive");
    if (r == 1) return f;
    QFunc out;
    for (const auto& [k, c] : f.poly()) out += QFunc::monomial(k * r, c);
    for (const auto& [e, v] : f.poles()) {
        std::vector<int> roots;
        for (int x = 0; x < kConductor; ++x)
            if (normalize_root(x * r) == e) roots.push_back(x);
        if (static_cast<int>(roots.size()) != r)
            throw SingularityError("q^" + std::to_string(r) + " substitution leaves the conductor");
        QFunc simple(1);
        for (int x : roots) simple = simple * QFunc::pole(x, 1);
        QFunc acc(1);
        for (std::size_t si = 0; si < v.size(); ++si) {
            acc = acc * simple;
            if (!v[si].is_zero()) out += acc * v[si];
        }
    }
    return out;
}

QFunc adams(int k, const QFunc& f) {
    if (k == 1) return f;
    QFunc relabeled;
    for (const auto& [i, c] : f.poly()) relabeled += QFunc::monomial(i, adams(k, c));
    for (const auto& [e, v] : f.poles())
        for (std::size_t si = 0; si < v.size(); ++si)
            if (!v[si].is_zero())
                relabeled += QFunc::pole(e * k, int(si) + 1, adams(k, v[si]));
    // Poles relabeled to zeta^k first, so the substitution below lands on zeta.
    QFunc out;
    for (const auto& [i, c] : relabeled.poly()) out += QFunc::monomial(i * k, c);
    for (const auto& [e, v] : relabeled.poles()) {
        QFunc tmp;
        for (std::size_t si = 0; si < v.size(); ++si)
            if (!v[si].is_zero()) tmp += QFunc::pole(e, int(si) + 1, v[si]);
        out += substitute_power(tmp, k);
    }
    return out;
}

QFunc power(const QFunc& f, int e) {
    if (e < 0) throw std::invalid_argument("negative power of q-function");
    QFunc r(1);
    for (int i = 0; i < e; ++i) r = r * f;
    return r;
}

QFunc divided_difference(const QFunc& f) {
    Cyc at_one = evaluate_at_root(f, 0);
    QFunc g = (f - QFunc(at_one)) * QFunc::pole(0, 1, Cyc(-1));
    // The pole at 1 is removable; drop the cancelled principal part.
    if (g.has_pole_at(0)) {
        QFunc h;
        for (const auto& [k, c] : g.poly()) h += QFunc::monomial(k, c);
        for (const auto& [e, v] : g.poles()) {
            if (e == 0) {
                for (const auto& c : v)
                    if (!c.is_zero()) throw std::logic_error("divided difference left a pole at 1");
                continue;
            }
            for (std::size_t s = 0; s < v.size(); ++s)
                if (!v[s].is_zero()) h += QFunc::pole(e, int(s) + 1, v[s]);
        }
        return h;
    }
    return g;
}

Cyc omega_scalar(const QFunc& f, const QFunc& g) {
    QFunc F = (f * invert_variable(g)).shifted(-1);
    return residue(F, QPoint::zero()) + residue(F, QPoint::infinity());
}

}  // namespace qkr
