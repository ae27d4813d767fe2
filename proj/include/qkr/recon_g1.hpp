#pragma once

#include "qkr/recon_g0.hpp"
#include "qkr/verify.hpp"

#include <array>
#include <map>
#include <memory>
#include <optional>

namespace qkr {

// Intersection numbers of psi classes in genus 0 and 1.
// Genus 0: (n-3)! / prod k_i!. Genus 1: string and dilaton recursion from <tau_1>_1 = 1/24.
Rational psi_integral(int genus, const std::vector<int>& powers);

// Constants of the order-2 contribution with one pair of second-order inputs.
struct CoverConstants {
    Rational squared_sum;    // 12 * int_{M_{1,2}} (psi_1 + psi_2)^2
    Rational cover_value;    // 6 * int_{M_{1,1}} psi_1
    Rational coefficient_b;  // 1 / (4! 2^1)
    Rational coefficient_c;  // 4 / 4!
};
CoverConstants cover_constants();

// Balanced genus-1 curves with a symmetry of order M: the fixed cycle type and the dilaton factor
// for adding one more M-cycle to l existing ones.
struct BalancedShape {
    int order;
    CycleType base;
    int factor(int extra_cycles) const;
};
std::optional<BalancedShape> balanced_shape(int order);
inline constexpr std::array<int, 4> kBalancedOrders{2, 3, 4, 6};

// <<f_1, ..., f_n, L - 1>> on base + (l + 1)_M: read from the table when it stores that key,
// otherwise factor(l) times the row without the last slot.
struct RewriteResult {
    QFunc value;
    bool from_table = false;
};
std::optional<RewriteResult> perm_dilaton_rewrite(const CorrelatorProvider& table, int order, int extra_cycles,
                                                  const std::vector<LFunction>& slots);
// Checks every stored (l + 1)-row against its l-row on probe insertions at the other slots.
VerifyReport verify_perm_dilaton(const FunctionalProvider& table, int order, std::size_t max_tuples = 64);
// Weight of the terms of the l-row that read k of the extra M-cycle slots through (Psi^M f)'(1),
// the others through f(1): prod_{i=l-k}^{l-1} factor(i) / M. This is the symmetric solution of the
// dilaton rule for all inputs; the k = 0 term repeats the base row.
Rational extension_weight(int order, int extra_cycles, int derivatives);
// Adds the rows base + l_M for l = 1..max built from the base row. Returns the number added.
int extend_balanced(FunctionalProvider& table, int order, int max_extra_cycles);

// Genus-1 data for the point target.
struct Genus1Tables {
    std::shared_ptr<const CorrelatorProvider> potential;  // genus-1 correlators with constant inputs
    std::shared_ptr<const CorrelatorProvider> fake;       // fake genus-1 correlators <f, 1, ..., 1>_{1,n+1}
    std::map<int, std::shared_ptr<const CorrelatorProvider>> balanced;  // by symmetry order
};

// Genus-1 correlators of any cycle type with constant inputs: all equal to 1.
std::shared_ptr<const CorrelatorProvider> builtin_genus1_potential();
// Fake genus-1 correlators from <g>_{1,1} = 5/24 g(1) + 1/24 g'(1) and the string equation.
std::shared_ptr<const FunctionalProvider> builtin_genus1_fake(int max_points);

// <f, 1, ..., 1>_{1,n+2} = <f + Df, 1, ..., 1>_{1,n+1} on every stored pair of rows.
VerifyReport verify_fake_string(const FunctionalProvider& fake);

// <1/(1 - xL), 1, ..., 1>_{1,n+1} as a function of x.
QFunc fake_one_point(const CorrelatorProvider& fake, int n);
// (Res_0 + Res_1 + Res_inf) sum_{n<=3} <1/(1 - xL), 1, ..., 1>_{1,n+1} tbar(1/x)^{n+1} / (n+1)! dx/x
Cyc ftw_eval(const CorrelatorProvider& fake, const QFunc& tbar);
// The same value as minus the residues at the remaining poles.
Cyc ftw_eval_complement(const CorrelatorProvider& fake, const QFunc& tbar);

struct EdgeData {
    std::map<int, Cyc> tau_derivative;  // d tau_M / d t_{M,0}
    std::map<int, Cyc> tbar_linear;     // tbar_{M,1}
    Cyc tbar_22;                        // tbar_{2,2}
    std::map<int, QFunc> xbar;          // 1 - q + tbar_r
};

// <<1/(1 - x Lbar), 1, ...>> on the balanced shape of order M at tau.
QFunc balanced_bracket(const std::shared_ptr<const CorrelatorProvider>& table, int order, const Background& tau);
// F^perm_{1,M}(x), before taking residues.
QFunc fperm_integrand(int order, const QFunc& bracket, const EdgeData& edge);
// Res_0 + Res_inf of F^perm_{1,M}(x) dx/x.
Cyc fperm_eval(int order, const QFunc& bracket, const EdgeData& edge);
// The same value as minus the residues at roots of unity.
Cyc fperm_eval_roots(int order, const QFunc& bracket, const EdgeData& edge);

struct F1Result {
    Cyc value;
    Cyc potential_at_tau;  // F_1(tau)
    Cyc log_term;          // log(d tau_1 / d t_{1,0}) / 24
    Cyc ftw_new;
    Cyc ftw_fake;
    std::map<int, Cyc> fperm;
    QFunc tbar_fake;
    QFunc tbar_new;
    EdgeData edge;
    TauSolution solution;
    Background tbar;
};

class Genus1Point {
public:
    Genus1Point(std::shared_ptr<const BracketEngine> genus0, ContextPtr ctx, Genus1Tables tables);

    const Genus0& genus0() const { return g0_; }
    // d tau_r / d t_{r,0}: t_r shifted by a nilpotent constant and the fixed point of the sectors
    // r, 2r, ... solved again.
    Cyc tau_derivative(const Profile& t, int r) const;
    EdgeData edge_data(const Profile& t, const Background& tau, const Background& tbar) const;
    // tbar^fake(q) = tau_1 + <<1/(1 - qL)>>_{0,1_1}
    QFunc tbar_fake(const Background& tau) const;
    // tbar^new(q) = tbar_1(q) + <<1/(1 - qL), tbar_1(L)>>_{0,2_1} + tbar^fake(q)
    QFunc tbar_new(const Background& tau, const Insertion& tbar1) const;
    F1Result f1(const Profile& t) const;

private:
    ContextPtr ctx_;
    Genus0 g0_;
    Genus1Tables tables_;
};

// d tau_r / d t_{r,0} * (1 - tbar_{r,1}) = 1 for every sector in `edge`.
std::vector<IdentityReport> check_edge_identity(const EdgeData& edge);

// Widens a profile to the sectors the genus-1 formula reads (r = 1..6).
Profile widen(const Profile& t, int max_cycle);

}  // namespace qkr
