#include "qkr/kframe.hpp"

#include <sstream>
#include <stdexcept>

namespace qkr {

Matrix identity_matrix(int n) {
    Matrix m(n, std::vector<Cyc>(n, Cyc(0)));
    for (int i = 0; i < n; ++i) m[i][i] = Cyc(1);
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Matrix out(n, std::vector<Cyc>(m, Cyc(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
        }
    return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] += b[i][j];
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] -= b[i][j];
    return out;
}

bool is_zero(const Matrix& a) {
    for (const auto& row : a)
        for (const auto& x : row)
            if (!x.is_zero()) return false;
    return true;
}

Matrix inverse_near(const Matrix& c_plus_g, const Matrix& g_inverse) {
    // (g + c)^-1 = sum_k (-g^-1 c)^k g^-1
    int n = static_cast<int>(c_plus_g.size());
    Matrix step = identity_matrix(n) - g_inverse * c_plus_g;  // -g^-1 c
    Matrix term = g_inverse;
    Matrix total = g_inverse;
    for (int k = 0; k < 4096; ++k) {
        term = step * term;
        if (is_zero(term)) return total;
        total = total + term;
    }
    throw std::domain_error("metric correction is not nilpotent at this truncation");
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    QMatrix out(n, std::vector<QFunc>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
        }
    return out;
}

QMatrix adams_entries(int k, const QMatrix& m) {
    QMatrix out = m;
    for (auto& row : out)
        for (auto& x : row) x = adams(k, x);
    return out;
}

KQ operator+(const KQ& a, const KQ& b) {
    KQ out = a;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
    return out;
}

KQ operator-(const KQ& a, const KQ& b) {
    KQ out = a;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
    return out;
}

KQ project_plus(const KQ& f) {
    KQ out;
    for (const auto& x : f) out.push_back(project_plus(x));
    return out;
}

KQ project_minus(const KQ& f) {
    KQ out;
    for (const auto& x : f) out.push_back(project_minus(x));
    return out;
}

bool is_zero(const KQ& f) {
    for (const auto& x : f)
        if (!x.is_zero()) return false;
    return true;
}

std::string str(const KQ& f) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? ", " : "") << f[i].str();
    os << "]";
    return os.str();
}

KBasis KBasis::point() { return KBasis{}; }

void KBasis::validate() const {
    if (rank < 1) throw std::invalid_argument("basis rank must be positive");
    if (static_cast<int>(pairing.size()) != rank) throw std::invalid_argument("pairing matrix has the wrong size");
    for (int i = 0; i < rank; ++i) {
        if (static_cast<int>(pairing[i].size()) != rank) throw std::invalid_argument("pairing matrix must be square");
        for (int j = 0; j < rank; ++j)
            if (pairing[i][j] != pairing[j][i]) throw std::invalid_argument("pairing matrix must be symmetric");
    }
    if (unit < 0 || unit >= rank) throw std::invalid_argument("unit index out of range");
    for (const auto& [k, m] : adams) {
        if (k < 1 || static_cast<int>(m.size()) != rank) throw std::invalid_argument("bad Adams matrix");
        if (k == 1)
            for (int i = 0; i < rank; ++i)
                for (int j = 0; j < rank; ++j)
                    if (m[i][j] != (i == j ? 1 : 0)) throw std::invalid_argument("Adams matrix for k = 1 must be the identity");
    }
    inverse_pairing();
}

Matrix KBasis::pairing_matrix() const {
    Matrix m(rank, std::vector<Cyc>(rank, Cyc(0)));
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) m[i][j] = Cyc(pairing[i][j]);
    return m;
}

Matrix KBasis::inverse_pairing() const {
    // Gauss-Jordan over the rationals.
    std::vector<std::vector<Rational>> a = pairing;
    std::vector<std::vector<Rational>> inv(rank, std::vector<Rational>(rank, Rational(0)));
    for (int i = 0; i < rank; ++i) inv[i][i] = 1;
    for (int c = 0; c < rank; ++c) {
        int p = c;
        while (p < rank && a[p][c] == 0) ++p;
        if (p == rank) throw std::invalid_argument("pairing matrix is singular");
        std::swap(a[c], a[p]);
        std::swap(inv[c], inv[p]);
        Rational d = a[c][c];
        for (int j = 0; j < rank; ++j) {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for (int r = 0; r < rank; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Rational f = a[r][c];
            for (int j = 0; j < rank; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    Matrix m(rank, std::vector<Cyc>(rank, Cyc(0)));
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) m[i][j] = Cyc(inv[i][j]);
    return m;
}

Insertion KBasis::dual(int alpha, const LFunction& f) const {
    Matrix gi = inverse_pairing();
    Insertion out(rank);
    for (int b = 0; b < rank; ++b)
        if (!gi[alpha][b].is_zero()) out[b] = f * gi[alpha][b];
    return out;
}

Insertion KBasis::unit_insertion(const LFunction& f) const { return basis_insertion(rank, unit, f); }

Nilpotent::Nilpotent(const ContextPtr& ctx) : base(ctx) {
    if (!ctx) throw std::invalid_argument("derivatives need a ring context");
    std::string name = "_d" + std::to_string(ctx->size());
    extended = ctx->extended({GeneratorSpec{name, 0, AdamsRule::Fixed, 1}});
    index = extended->index_of(name);
    eps = Series::generator(extended, name);
}

Cyc Nilpotent::first_order(const Cyc& c) const {
    return map_components(c, [&](const Series& s) {
        if (!s.context()) return Series();
        return coefficient_of(s, index, 1).embedded(base);
    });
}

QFunc Nilpotent::first_order(const QFunc& f) const {
    return map_coefficients(f, [&](const Cyc& c) { return first_order(c); });
}

Insertion Nilpotent::embed(const Insertion& f) const {
    Insertion out;
    for (const auto& x : f) out.push_back(x.embedded(extended));
    return out;
}

Background Nilpotent::embed(const Background& b) const {
    return b.map([&](const Insertion& f) { return embed(f); });
}

namespace {

QFunc at_power(const QFunc& f, int p) {
    if (p > 0) return substitute_power(f, p);
    if (p < 0) return invert_variable(substitute_power(f, -p));
    throw std::invalid_argument("kernel needs a nonzero power of q");
}

Cyc monomial_value(const QFunc& generating, int j) { return omega_scalar(generating, QFunc::monomial(j)); }

}  // namespace

QFunc read_one_point(const QFunc& generating, const LFunction& f) {
    QFunc out;
    for (const auto& [j, c] : f.poly().poly()) out += QFunc(monomial_value(generating, j) * c);
    for (const auto& k : f.kernels()) {
        if (k.q_power == 0 && k.l_power == 0) {
            QFunc inner;
            for (const auto& [j, c] : k.numerator.poly()) inner += QFunc(monomial_value(generating, j) * c);
            out += k.coefficient * inner;
            continue;
        }
        if (k.l_power != 1) throw std::invalid_argument("one-point reading supports kernels linear in L only");
        int p = k.q_power;
        QFunc shifted_gen = at_power(generating, p);
        QFunc inner;
        for (const auto& [j, c] : k.numerator.poly()) {
            QFunc piece;
            if (j >= 0) {
                // y^-j (J(y) - sum_{i<j} y^i <<L^i>>)
                piece = shifted_gen;
                for (int i = 0; i < j; ++i) piece -= QFunc::monomial(p * i, monomial_value(generating, i));
                piece = piece.shifted(-p * j);
            } else {
                // L^j + ... + y^(-j-1) L^-1 + y^-j / (1 - yL)
                for (int i = 0; i < -j; ++i) piece += QFunc::monomial(p * i, monomial_value(generating, j + i));
                piece += shifted_gen.shifted(-p * j);
            }
            inner += piece * c;
        }
        out += k.coefficient * inner;
    }
    return out;
}

Frame::Frame(const BracketEngine& engine, const KBasis& basis, const Background& tau, const ContextPtr& ctx)
    : basis_(basis), tau_(tau) {
    const int n = basis_.rank;
    Nilpotent d(ctx);
    Background lifted = d.embed(tau_);
    j_.assign(n, QFunc());
    dj_.assign(n, KQ(n));
    for (int gamma = 0; gamma < n; ++gamma) {
        std::vector<Slot> slots{{1, basis_insertion(n, gamma, LFunction::kernel(1)), 0}};
        j_[gamma] = engine.bracket(0, slots, tau_);
    }
    for (int alpha = 0; alpha < n; ++alpha) {
        Background moved = lifted;
        moved.at(1)[alpha] += LFunction(Cyc(d.eps));
        for (int gamma = 0; gamma < n; ++gamma) {
            std::vector<Slot> slots{{1, basis_insertion(n, gamma, LFunction::kernel(1)), 0}};
            dj_[alpha][gamma] = d.first_order(engine.bracket(0, slots, moved));
        }
    }
    Matrix g = basis_.pairing_matrix();
    metric_ = g;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            QFunc v = read_one_point(dj_[b][a], LFunction(1));
            metric_[a][b] += v.constant_value();
        }
    metric_inverse_ = inverse_near(metric_, basis_.inverse_pairing());
    // S(q) phi_gamma = sum ((phi_gamma, phi_a) + <<phi_gamma / (1 - L/q), phi_a>>) G^{a b} phi_b
    QMatrix left(n, std::vector<QFunc>(n));
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a) left[c][a] = QFunc(g[c][a]) + invert_variable(dj_[a][c]);
    QMatrix ginv_q(n, std::vector<QFunc>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) ginv_q[a][b] = QFunc(metric_inverse_[a][b]);
    s_ = left * ginv_q;
    // S^-1 phi_gamma = phi_gamma + sum <<phi_gamma, phi_a / (1 - qL)>> g^{a b} phi_b
    Matrix gi = basis_.inverse_pairing();
    s_inverse_.assign(n, std::vector<QFunc>(n));
    for (int c = 0; c < n; ++c)
        for (int b = 0; b < n; ++b) {
            QFunc v = c == b ? QFunc(1) : QFunc();
            for (int a = 0; a < n; ++a) v += dj_[c][a] * gi[a][b];
            s_inverse_[c][b] = v;
        }
}

QFunc Frame::one_point(const Insertion& a) const {
    QFunc out;
    for (int g = 0; g < basis_.rank; ++g)
        if (!a[g].is_zero()) out += read_one_point(j_[g], a[g]);
    return out;
}

QFunc Frame::two_point(const Insertion& a, int alpha) const {
    QFunc out;
    for (int g = 0; g < basis_.rank; ++g)
        if (!a[g].is_zero()) out += read_one_point(dj_[alpha][g], a[g]);
    return out;
}

Separable Frame::two_point_kernel(int gamma, int delta) const {
    const int n = basis_.rank;
    Matrix g = basis_.pairing_matrix();
    Separable out;
    if (!g[gamma][delta].is_zero()) out.emplace_back(QFunc(-g[gamma][delta]), QFunc(1));
    for (int a = 0; a < n; ++a) {
        QFunc left = QFunc(g[gamma][a]) + dj_[a][gamma];
        for (int b = 0; b < n; ++b) {
            if (metric_inverse_[a][b].is_zero()) continue;
            QFunc right = QFunc(g[b][delta]) + dj_[b][delta];
            out.emplace_back(left * metric_inverse_[a][b], right);
        }
    }
    return out;
}

namespace {

// Omega_y(h(y) / (1 - xy), y^b) as a Laurent polynomial in x.
QFunc extract_against_kernel(const QFunc& h, int b) {
    QFunc out;
    for (const auto& [d, c] : expand_at_zero(h, b))
        if (!c.is_zero()) out += QFunc::monomial(b - d, c);
    for (const auto& [d, c] : expand_at_infinity(h, b + 1))
        if (d > b && !c.is_zero()) out += QFunc::monomial(b - d, c);
    return out;
}

}  // namespace

QFunc Frame::two_point(const Insertion& a, const Insertion& b) const {
    const int n = basis_.rank;
    QFunc out;
    for (int delta = 0; delta < n; ++delta) {
        const LFunction& bd = b[delta];
        if (bd.is_zero()) continue;
        if (!bd.is_polynomial()) throw std::invalid_argument("second slot must be a Laurent polynomial in L");
        for (int gamma = 0; gamma < n; ++gamma) {
            if (a[gamma].is_zero()) continue;
            Separable w = two_point_kernel(gamma, delta);
            for (const auto& [e, c] : bd.poly().poly()) {
                QFunc generating;
                for (const auto& [f, h] : w) generating += f * extract_against_kernel(h, e);
                out += read_one_point(generating, a[gamma]) * c;
            }
        }
    }
    return out;
}

KQ apply(const QMatrix& rows, const KQ& f) {
    std::size_t n = rows.size();
    KQ out(rows.empty() ? 0 : rows[0].size());
    for (std::size_t c = 0; c < n; ++c) {
        if (f[c].is_zero()) continue;
        for (std::size_t b = 0; b < out.size(); ++b) out[b] += f[c] * rows[c][b];
    }
    return out;
}

KQ Frame::s_apply(const KQ& f) const { return apply(s_, f); }
KQ Frame::s_inverse_apply(const KQ& f) const { return apply(s_inverse_, f); }

Cyc omega_with(const Matrix& pairing, const KQ& f, const KQ& g) {
    Cyc out(0);
    for (std::size_t a = 0; a < f.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b)
            if (!pairing[a][b].is_zero() && !f[a].is_zero() && !g[b].is_zero())
                out += pairing[a][b] * omega_scalar(f[a], g[b]);
    return out;
}

Cyc Frame::omega(const KQ& f, const KQ& g) const { return omega_with(basis_.pairing_matrix(), f, g); }
Cyc Frame::omega_bar(const KQ& f, const KQ& g) const { return omega_with(metric_, f, g); }

Matrix metric_direct(const BracketEngine& engine, const KBasis& basis, const Background& tau) {
    const int n = basis.rank;
    Matrix m = basis.pairing_matrix();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::vector<Slot> slots{{1, basis_insertion(n, a), 0}, {1, basis_insertion(n, b), 0}};
            m[a][b] += engine.bracket(0, slots, tau).constant_value();
        }
    return m;
}

QMatrix s_matrix_direct(const BracketEngine& engine, const KBasis& basis, const Background& tau) {
    const int n = basis.rank;
    Matrix g = basis.pairing_matrix();
    Matrix ginv = inverse_near(metric_direct(engine, basis, tau), basis.inverse_pairing());
    QMatrix left(n, std::vector<QFunc>(n)), right(n, std::vector<QFunc>(n));
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a) {
            std::vector<Slot> slots{{1, basis_insertion(n, c, LFunction::kernel(-1)), 0}, {1, basis_insertion(n, a), 0}};
            left[c][a] = QFunc(g[c][a]) + engine.bracket(0, slots, tau);
            right[c][a] = QFunc(ginv[c][a]);
        }
    return left * right;
}

QMatrix s_inverse_direct(const BracketEngine& engine, const KBasis& basis, const Background& tau) {
    const int n = basis.rank;
    Matrix gi = basis.inverse_pairing();
    QMatrix out(n, std::vector<QFunc>(n));
    for (int c = 0; c < n; ++c)
        for (int b = 0; b < n; ++b) {
            QFunc v = c == b ? QFunc(1) : QFunc();
            for (int a = 0; a < n; ++a) {
                if (gi[a][b].is_zero()) continue;
                std::vector<Slot> slots{{1, basis_insertion(n, c), 0}, {1, basis_insertion(n, a, LFunction::kernel(1)), 0}};
                v += engine.bracket(0, slots, tau) * gi[a][b];
            }
            out[c][b] = v;
        }
    return out;
}

}  // namespace qkr
