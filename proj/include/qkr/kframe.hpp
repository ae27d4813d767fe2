#pragma once

#include "qkr/bracket.hpp"

#include <functional>
#include <map>
#include <vector>

namespace qkr {

using Matrix = std::vector<std::vector<Cyc>>;
using QMatrix = std::vector<std::vector<QFunc>>;
using KVec = std::vector<Cyc>;   // coordinates in the basis phi_alpha
using KQ = std::vector<QFunc>;   // K-valued function of q

Matrix identity_matrix(int n);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
bool is_zero(const Matrix& a);
// Inverse of g + c for invertible rational g (given by its inverse) and c in the maximal ideal.
Matrix inverse_near(const Matrix& c_plus_g, const Matrix& g_inverse);

QMatrix operator*(const QMatrix& a, const QMatrix& b);
// k-th Adams image of every entry, q -> q^k included.
QMatrix adams_entries(int k, const QMatrix& m);

KQ operator+(const KQ& a, const KQ& b);
KQ operator-(const KQ& a, const KQ& b);
KQ project_plus(const KQ& f);
KQ project_minus(const KQ& f);
bool is_zero(const KQ& f);
std::string str(const KQ& f);

// Basis phi_alpha of K^0(X): pairing matrix chi(phi_a phi_b), unit index, Adams matrices.
struct KBasis {
    int rank = 1;
    std::vector<std::vector<Rational>> pairing{{Rational(1)}};
    int unit = 0;
    std::map<int, std::vector<std::vector<Rational>>> adams;

    static KBasis point();
    void validate() const;
    Matrix pairing_matrix() const;
    Matrix inverse_pairing() const;
    // phi^alpha = sum_beta g^{alpha beta} phi_beta
    Insertion dual(int alpha, const LFunction& f = LFunction(1)) const;
    Insertion unit_insertion(const LFunction& f = LFunction(1)) const;
};

// Ring extended by a weight-0 generator eps with eps^2 = 0 and trivial Adams action.
struct Nilpotent {
    ContextPtr base;
    ContextPtr extended;
    int index;
    Series eps;

    explicit Nilpotent(const ContextPtr& ctx);
    // Coefficient of eps^1, mapped back to the base ring.
    Cyc first_order(const Cyc& c) const;
    QFunc first_order(const QFunc& f) const;
    Background embed(const Background& b) const;
    Insertion embed(const Insertion& f) const;
};

// <<L^j / (1 - q^p L)>> read off J(y) = <<1/(1 - yL)>> and its Omega-extraction of <<L^i>>.
QFunc read_one_point(const QFunc& generating, const LFunction& f);

// Genus-0 data at a fixed tau: the 1-point series j_gamma(q) = <<phi_gamma / (1 - qL)>>_{0,1_1}
// and its derivatives along tau_1, from which brackets, the metric and S are rebuilt.
class Frame {
public:
    Frame(const BracketEngine& engine, const KBasis& basis, const Background& tau, const ContextPtr& ctx);

    const KBasis& basis() const { return basis_; }
    const Background& tau() const { return tau_; }
    const KQ& one_point_series() const { return j_; }
    // derivative(alpha)[gamma] = <<phi_gamma / (1 - qL), phi_alpha>>_{0,2_1}
    const KQ& derivative(int alpha) const { return dj_.at(alpha); }

    QFunc one_point(const Insertion& a) const;  // <<a>>_{0,1_1}
    QFunc two_point(const Insertion& a, int alpha) const;  // <<a, phi_alpha>>_{0,2_1}
    // <<a, b>>_{0,2_1} with b a Laurent polynomial in L, through the two-point WDVV formula.
    QFunc two_point(const Insertion& a, const Insertion& b) const;
    // <<phi_gamma / (1 - xL), phi_delta / (1 - yL)>> as (1/(1 - xy)) sum_i f_i(x) h_i(y).
    Separable two_point_kernel(int gamma, int delta) const;

    const Matrix& metric() const { return metric_; }
    const Matrix& metric_inverse() const { return metric_inverse_; }
    // Row gamma of S(q): S(q) phi_gamma = sum_beta s[gamma][beta] phi_beta.
    const QMatrix& s_matrix() const { return s_; }
    const QMatrix& s_inverse_matrix() const { return s_inverse_; }
    KQ s_apply(const KQ& f) const;
    KQ s_inverse_apply(const KQ& f) const;

    Cyc omega(const KQ& f, const KQ& g) const;
    Cyc omega_bar(const KQ& f, const KQ& g) const;

private:
    KBasis basis_;
    Background tau_;
    KQ j_;
    std::vector<KQ> dj_;
    Matrix metric_;
    Matrix metric_inverse_;
    QMatrix s_;
    QMatrix s_inverse_;
};

// The same objects summed directly from correlators, for cross-checks.
Matrix metric_direct(const BracketEngine& engine, const KBasis& basis, const Background& tau);
QMatrix s_matrix_direct(const BracketEngine& engine, const KBasis& basis, const Background& tau);
QMatrix s_inverse_direct(const BracketEngine& engine, const KBasis& basis, const Background& tau);

KQ apply(const QMatrix& rows, const KQ& f);
Cyc omega_with(const Matrix& pairing, const KQ& f, const KQ& g);

}  // namespace qkr
