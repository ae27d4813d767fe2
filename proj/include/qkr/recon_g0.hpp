#pragma once

#include "qkr/kframe.hpp"

#include <memory>
#include <string>
#include <vector>

namespace qkr {

// Input profile t = (t_1, t_2, ...): each sector a K-valued Laurent polynomial, written in L.
using Profile = Background;

struct ContractionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

KQ to_q(const Insertion& f);          // L -> q
Insertion to_insertion(const KQ& f);  // q -> L, Laurent polynomials only
Insertion value_at_one(const Insertion& f);
int filtration_weight(const Insertion& f);
int filtration_weight(const Background& f);
Background operator-(const Background& a, const Background& b);
Background operator+(const Background& a, const Background& b);
bool is_zero(const Background& f);
Insertion adams_coefficients(int r, const Insertion& f);
// Every coordinate of t_r has filtration weight at least r.
bool sector_weights_ok(const Profile& t);

struct TauSolution {
    Background tau;
    int iterations = 0;                  // applications of the map
    std::vector<int> residual_weights;   // weight of T(tau^(n)) - tau^(n)
};

// value = quadratic_term + sector_two_term / 2 - unstable_correction
struct F0Result {
    QFunc value;
    QFunc quadratic_term;       // <<x_1, x_1>>_{0,2_1} / 2 with x_1 = t_1 + 1 - L
    QFunc sector_two_term;      // <<t_2 - tau_2>>_{0,1_2} read from the 2-cycle one-point series
    QFunc sector_two_literal;   // <<t_2>>_{0,1_2}
    QFunc unstable_correction;  // unstable_cycle_two(tau_2)
    TauSolution solution;
    Background tbar;
};

// Genus-0 reconstruction from one-point series.
class Genus0 {
public:
    Genus0(std::shared_ptr<const BracketEngine> engine, KBasis basis, ContextPtr ctx);

    const BracketEngine& engine() const { return *engine_; }
    const KBasis& basis() const { return basis_; }
    const ContextPtr& context() const { return ctx_; }

    // Frame of sector r: the one-point data at R_r(tau).
    Frame frame(const Background& tau, int r) const;

    // tau'_r = t_r(1) + sum <<L Dt_r(L), phi_a>> G_r^{ab} phi_b at R_r(tau).
    Background t_step(const Background& tau, const Profile& t) const;
    // Iterates from zero until the map fixes tau; the number of steps is capped by the order.
    TauSolution solve_tau(const Profile& t) const;
    // tbar_r = [S_r(t_r + 1 - q)]_+ - (1 - q)
    Background tbar(const Profile& t, const Background& tau) const;

    // <<a>>_{0,1_r} series for the r-cycle: j_gamma(q) = <<phi_gamma / (1 - qL)>>_{0,1_r}.
    KQ cycle_one_point_series(const Background& tau, int r) const;
    F0Result f0(const Profile& t) const;

private:
    std::shared_ptr<const BracketEngine> engine_;
    KBasis basis_;
    ContextPtr ctx_;
};

// Degree-0 value of the unstable 2-cycle correlator <a>_{0,1_2} fixed by the dilaton equation
// on the stable key 1_1+1_2: <L - 1, a>_{0,1_1+1_2} = -2 <a>_{0,1_2}.
QFunc unstable_cycle_two(const BracketEngine& engine, const KBasis& basis, const Insertion& a);

// Generating function summed straight from correlators.
QFunc f0_direct(const BracketEngine& engine, const Profile& t);

// Genus-0 bracket identities obtained from the string and dilaton equations; `a` constant in L.
struct IdentityReport {
    std::string name;
    bool ok = true;
    std::string detail;
};
std::vector<IdentityReport> check_unstable_identities(const BracketEngine& engine, const KBasis& basis,
                                                      const Background& tau, const Insertion& a,
                                                      const Insertion& t1);

}  // namespace qkr
