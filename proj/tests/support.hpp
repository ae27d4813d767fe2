#pragma once

#include "qkr/cone.hpp"
#include "qkr/io.hpp"
#include "qkr/recon_g1.hpp"

#include <complex>
#include <random>
#include <string>

namespace qkr::test {

// Generators t and s of weight 1 with Adams scaling.
ContextPtr two_generators(int order);
std::shared_ptr<const BracketEngine> point_engine();
std::string source_path(const std::string& relative);
Genus1Tables shipped_genus1_tables();

Insertion scalar(const LFunction& f);
// t + sL + ts/L in sector 1.
Profile sample_profile(const ContextPtr& ctx, int max_cycle);

class Random {
public:
    explicit Random(unsigned seed) : gen_(seed) {}
    int integer(int lo, int hi);
    Rational rational(int span = 5);
    // Random element with every monomial of weight >= min_weight and at most `terms` terms.
    Series series(const ContextPtr& ctx, int min_weight, int terms = 3);
    Cyc root_combination();  // rational combination of 1, z, z^2, z^3
    // Laurent part in q^[-d, d] and principal parts at q = 1 and q = -1.
    QFunc qfunc(int degree = 3, int pole_order = 2, bool with_roots = true);
    QFunc laurent(int degree = 3);
    Profile profile(const ContextPtr& ctx, int max_cycle);

private:
    std::mt19937 gen_;
};

std::complex<double> to_complex(const Cyc& c);  // scalar rational coefficients only
std::complex<double> evaluate(const QFunc& f, std::complex<double> q);

}  // namespace qkr::test
