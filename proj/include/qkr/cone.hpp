#pragma once

#include "qkr/recon_g0.hpp"

#include <string>
#include <vector>

namespace qkr {

// J(t_1) = 1 - q + t_1 + sum_alpha phi^alpha <<phi_alpha / (1 - qL)>>_{0,1_1}, summed with t_1 at the
// extra 1-cycles and the parameters at longer cycles.
struct JPoint {
    KQ value;
    KQ plus;   // [J]_+ = 1 - q + t_1
    KQ minus;  // correlator part
};
JPoint j_eval(const Genus0& g0, const Insertion& t1, const Background& params);

// [S_tau J(tau_1)]_+ = 1 - q, with parameters tau_2, tau_3, ...
IdentityReport check_cone_point(const Genus0& g0, const Background& tau);

struct TangentVector {
    int alpha;
    int power;
    KQ value;  // S^{-1}(phi_alpha q^power)
};
// S^{-1}(phi_alpha q^k) for k in [-window, window].
std::vector<TangentVector> tangent_basis(const Frame& frame, int window);
// Omega vanishes on every pair of tangent vectors.
IdentityReport check_isotropy(const Frame& frame, const std::vector<TangentVector>& family);
// [S S^{-1}(phi_alpha q^k)]_+ = phi_alpha q^k.
IdentityReport check_round_trip(const Frame& frame, const std::vector<TangentVector>& family);

struct RulingResult {
    bool ok = true;
    std::string detail;  // first differing coefficient on failure
    KQ point;            // p = J(tau_1) + (1 - q) S^{-1} v
    Insertion t1;        // [p]_+ - (1 - q)
};
// Checks J([p]_+ - (1 - q)) = p. Coefficients of v must lie in the maximal ideal.
RulingResult ruling_check(const Genus0& g0, const Background& tau, const KQ& v);

}  // namespace qkr
