#pragma once

#include "qkr/kframe.hpp"

#include <string>
#include <vector>

namespace qkr {

struct Violation {
    std::string key;
    std::string detail;
};

struct VerifyReport {
    std::string suite;
    std::size_t checked = 0;
    std::size_t skipped = 0;
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Insertions tried at the free slots: 1, L, L^-1, 2L^2 - L.
std::vector<LFunction> probe_insertions();

struct SampleOptions {
    int unit = 0;                      // basis index of the unit
    std::size_t per_key = 48;          // insertion tuples tried per key
    unsigned seed = 20240611;
};

// <1, f...>_{0,1_1+l} = <f...>_{0,l} + sum over 1-cycle slots j of <..., Df_j, ...>_{0,l}
VerifyReport verify_string(const CorrelatorProvider& provider, const std::vector<RawKey>& keys,
                           const SampleOptions& options = {});
// <L - 1, f...>_{0,1_1+l} = (l_1 - 2) <f...>_{0,l}
VerifyReport verify_dilaton(const CorrelatorProvider& provider, const std::vector<RawKey>& keys,
                            const SampleOptions& options = {});

// sum <<A1, A2, phi_m>> G^{mn} <<phi_n, A3, A4>> unchanged under every pairing of the four inputs.
VerifyReport verify_wdvv_symmetry(const BracketEngine& engine, const KBasis& basis, const Background& tau,
                                  const std::vector<Insertion>& inputs);
// (1 - xy) <<phi_g/(1 - xL), phi_d/(1 - yL)>> = -(phi_g, phi_d) + sum A_a(x) G^{ab} B_b(y), with A and B
// summed directly from two-point brackets. Checked for every pair of basis vectors.
VerifyReport verify_wdvv_two_point(const BracketEngine& engine, const KBasis& basis, const Background& tau);
// Same identity for the kernel rebuilt by a Frame from one-point data.
VerifyReport verify_frame_two_point(const BracketEngine& engine, const Frame& frame);

// Two separable sums sum_i f_i(x) g_i(y), compared exactly through the partial-fraction basis in x.
bool separable_equal(const Separable& a, const Separable& b, std::string* detail = nullptr);
// (1 - xy) * s
Separable times_one_minus_xy(const Separable& s);

}  // namespace qkr
