#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace qkr;
using namespace qkr::test;

namespace {

bool near(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) < 1e-9 * (1 + std::abs(b)); }

}  // namespace

TEST_CASE("roots of unity") {
    CHECK(power(Cyc::root(1), 12) == Cyc(1));
    CHECK(Cyc::root(4) == Cyc::root(2) - Cyc(1));
    CHECK(Cyc::root(6) == Cyc(-1));
    CHECK(Cyc::root(3) * Cyc::root(3) == Cyc(-1));
    for (int e = 0; e < kConductor; ++e) {
        auto [m, j] = root_label(e);
        CHECK(root_from_label(m, j) == e);
    }
    CHECK(normalize_root(-1) == 11);
}

TEST_CASE("field arithmetic matches the complex embedding") {
    Random rng(21);
    for (int i = 0; i < 200; ++i) {
        Cyc a = rng.root_combination(), b = rng.root_combination();
        CHECK(near(to_complex(a * b), to_complex(a) * to_complex(b)));
        CHECK(near(to_complex(a + b), to_complex(a) + to_complex(b)));
        CHECK(near(to_complex(conjugate(a)), std::conj(to_complex(a))));
        if (a.is_zero()) continue;
        CHECK(a * inverse(a) == Cyc(1));
        CHECK(norm(a) == (a * galois(a, 5) * galois(a, 7) * galois(a, 11)).rational_part().constant_term());
    }
}

TEST_CASE("coefficients in Lambda") {
    auto ctx = two_generators(3);
    Series t = Series::generator(ctx, "t");
    Cyc a = Cyc(t) * Cyc::root(1) + Cyc(1);
    CHECK(a.weight() == 0);
    CHECK((a - Cyc(1)).weight() == 1);
    CHECK(a * inverse(a) == Cyc(1));
    CHECK(adams(5, Cyc::root(1)) == Cyc::root(5));
    CHECK(adams(2, Cyc(t)) == Cyc(power(t, 2)));
    CHECK_THROWS(Cyc::root(1).rational_part());
}
