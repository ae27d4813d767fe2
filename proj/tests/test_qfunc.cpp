#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <numbers>

using namespace qkr;
using namespace qkr::test;

namespace {

bool near(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) < 1e-7 * (1 + std::abs(b)); }

// (1 / 2 pi i) of the integral of f(q) dq over |q| = radius, by the trapezoid rule.
std::complex<double> contour(const QFunc& f, double radius) {
    const int n = 512;
    std::complex<double> sum = 0;
    for (int k = 0; k < n; ++k) {
        auto q = std::polar(radius, 2 * std::numbers::pi * k / n);
        sum += evaluate(f, q) * q;
    }
    return sum / double(n);
}

// Binomial coefficient binom(n, k) for any integer n.
Rational binom(int n, int k) {
    Rational r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

const std::vector<std::complex<double>> kSamples{{0.3, 0.7}, {-1.7, 0.2}, {2.1, -1.3}, {0.1, -0.45}};

}  // namespace

TEST_CASE("partial-fraction arithmetic matches pointwise evaluation") {
    Random rng(31);
    for (int i = 0; i < 100; ++i) {
        QFunc f = rng.qfunc(), g = rng.qfunc();
        for (auto q : kSamples) {
            CHECK(near(evaluate(f * g, q), evaluate(f, q) * evaluate(g, q)));
            CHECK(near(evaluate(f - g, q), evaluate(f, q) - evaluate(g, q)));
            CHECK(near(evaluate(invert_variable(f), q), evaluate(f, 1.0 / q)));
            CHECK(near(evaluate(substitute_power(f, 2), q), evaluate(f, q * q)));
        }
    }
}

TEST_CASE("residues agree with contour integrals") {
    Random rng(32);
    for (int i = 0; i < 60; ++i) {
        QFunc f = rng.qfunc();
        CHECK(near(to_complex(residue(f, QPoint::zero())), contour(f, 0.5)));
        CHECK(near(-to_complex(residue(f, QPoint::infinity())), contour(f, 2.0)));
        CHECK(near(to_complex(residue(f, QPoint::zero()) + residue(f, QPoint::at_root(0)) +
                              residue(f, QPoint::at_root(6))),
                   contour(f, 2.0)));
    }
}

TEST_CASE("global residue theorem") {
    Random rng(33);
    for (int i = 0; i < 200; ++i) CHECK(residue_total(rng.qfunc(4, 3)).is_zero());
}

TEST_CASE("polarization") {
    Random rng(34);
    for (int i = 0; i < 200; ++i) {
        QFunc f = rng.qfunc();
        CHECK(project_plus(project_plus(f)) == project_plus(f));
        CHECK(project_minus(project_minus(f)) == project_minus(f));
        CHECK(project_plus(f) + project_minus(f) == f);
        CHECK(project_plus(project_minus(f)).is_zero());
    }
}

TEST_CASE("Omega is antisymmetric and vanishes on each polarization half") {
    Random rng(35);
    for (int i = 0; i < 100; ++i) {
        QFunc a = rng.laurent(), b = rng.laurent();
        CHECK(omega_scalar(a, b).is_zero());
        QFunc f = rng.qfunc(), g = rng.qfunc();
        CHECK(omega_scalar(project_minus(f), project_minus(g)).is_zero());
        CHECK(omega_scalar(f, g) == -omega_scalar(g, f));
    }
    // Omega(q^-1, 1 / (1 - q)) pairs K_+ with K_-.
    CHECK(omega_scalar(QFunc::monomial(-1), QFunc::pole(0, 1)) == Cyc(-1));
}

TEST_CASE("Taylor expansion at q = 1 matches the binomial series") {
    for (int n = -4; n <= 4; ++n) {
        auto c = expand_at_one(QFunc::monomial(n), 5);
        for (int k = 0; k <= 5; ++k) CHECK(c[k] == Cyc(binom(n, k)));
    }
    CHECK(taylor_at(QFunc::monomial(2), 6, 2)[1] == Cyc(-2));
    CHECK(evaluate_at_root(QFunc::monomial(1), 3) == Cyc::root(3));
}

TEST_CASE("divided difference") {
    Random rng(36);
    for (int i = 0; i < 50; ++i) {
        QFunc f = rng.laurent();
        QFunc d = divided_difference(f);
        CHECK(d * (QFunc::monomial(1) - QFunc(1)) == f - QFunc(evaluate_at_root(f, 0)));
    }
    CHECK_THROWS(divided_difference(QFunc::pole(0, 1)));
}

TEST_CASE("pole at a root outside the conductor") {
    CHECK_THROWS_AS(substitute_power(QFunc::pole(1, 1), 5), SingularityError);
    CHECK(residue(QFunc::pole(0, 1), QPoint::at_root(0)) == Cyc(-1));
}
