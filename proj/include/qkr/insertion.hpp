#pragma once

#include "qkr/qfunc.hpp"

#include <string>
#include <vector>

namespace qkr {

// coefficient(q) * numerator(L) / (1 - q^q_power L^l_power); q is a scalar parameter.
struct Kernel {
    QFunc coefficient = QFunc(1);
    int q_power = 1;
    int l_power = 1;
    QFunc numerator = QFunc(1);  // Laurent polynomial in L
};

// Function of the cotangent line L inserted at one marked point: a Laurent polynomial in L
// plus kernels. Values are read through Taylor moments at roots of unity.
class LFunction {
public:
    LFunction() = default;
    LFunction(const Cyc& c) : poly_(c) {}  // NOLINT(google-explicit-constructor)
    LFunction(const Series& c) : poly_(c) {}  // NOLINT(google-explicit-constructor)
    LFunction(int c) : poly_(c) {}  // NOLINT(google-explicit-constructor)

    static LFunction polynomial(const QFunc& laurent_in_l);
    static LFunction l_power(int k, const Cyc& c = Cyc(1));  // c L^k
    // coefficient(q) / (1 - q^p L^m)
    static LFunction kernel(int p, int m = 1, const QFunc& coefficient = QFunc(1));

    // Adds k, merging with a kernel of the same shape.
    LFunction& add_kernel(Kernel k);

    const QFunc& poly() const { return poly_; }
    const std::vector<Kernel>& kernels() const { return kernels_; }
    bool is_zero() const { return poly_.is_zero() && kernels_.empty(); }
    bool is_polynomial() const { return kernels_.empty(); }
    bool is_constant() const { return kernels_.empty() && poly_.is_constant(); }
    // No Lambda-dependence in any coefficient.
    bool is_scalar() const;
    // True for a + b L with no kernels.
    bool is_affine() const;
    int weight() const;

    LFunction operator-() const;
    LFunction& operator+=(const LFunction& o);
    LFunction& operator-=(const LFunction& o) { return *this += -o; }
    LFunction& operator*=(const Cyc& c);
    friend LFunction operator+(LFunction a, const LFunction& b) { return a += b; }
    friend LFunction operator-(LFunction a, const LFunction& b) { return a -= b; }
    friend LFunction operator*(LFunction a, const Cyc& c) { return a *= c; }
    friend LFunction operator*(const Cyc& c, LFunction a) { return a *= c; }
    friend bool operator==(const LFunction& a, const LFunction& b) { return (a - b).is_zero(); }
    // Multiplies every coefficient by a function of q.
    LFunction scaled(const QFunc& c) const;
    LFunction shifted(int k) const;  // L^k f(L)
    LFunction embedded(const ContextPtr& ctx) const;
    LFunction truncated(int max_weight) const;

    std::string str() const;

private:
    QFunc poly_;
    std::vector<Kernel> kernels_;
};

// [h^k] f(zeta^root + h), as a function of q.
QFunc moment(const LFunction& f, int root, int k);
// f(1)
QFunc value_at_one(const LFunction& f);
// (f(L) - f(1)) / (L - 1)
LFunction divided_difference(const LFunction& f);
// Adams operation on the Lambda coefficients and L -> L^r; q is left alone.
LFunction adams(int r, const LFunction& f);

// Adams on the Lambda part of each coefficient; roots of unity and q stay fixed.
Cyc adams_coefficients(int r, const Cyc& c);
QFunc adams_coefficients(int r, const QFunc& f);

// f = sum coefficient_i(q) * piece_i(L) with every piece scalar (L^a or L^a kernels).
struct ScalarPiece {
    QFunc coefficient;
    LFunction piece;
};
std::vector<ScalarPiece> scalar_pieces(const LFunction& f);

// Basis-indexed insertion: sum_alpha f_alpha(L) phi_alpha.
using Insertion = std::vector<LFunction>;

Insertion basis_insertion(int rank, int index, const LFunction& f = LFunction(1));

}  // namespace qkr
