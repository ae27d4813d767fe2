#pragma once

#include "qkr/provider.hpp"
#include "qkr/sector.hpp"

#include <atomic>
#include <memory>
#include <utility>
#include <vector>

namespace qkr {

// Explicit input at an r-cycle of marked points. `variable` selects x (0) or y (1) in
// two-variable evaluations and is ignored otherwise.
struct Slot {
    int cycle = 1;
    Insertion value;
    int variable = 0;
};

// tau (or t) placed at every extra marked point, one insertion per cycle length.
using Background = SectorFamily<Insertion>;

Background zero_background(int max_cycle, int rank);

// sum_i f_i(x) g_i(y)
using Separable = std::vector<std::pair<QFunc, QFunc>>;

class BracketEngine {
public:
    BracketEngine(std::shared_ptr<const CorrelatorProvider> provider, int rank);

    // Double bracket of the explicit slots with background insertions, summed over their number
    // with weight 1/lbar! and the prod r^(l_r) prefactor over explicit cycles.
    QFunc bracket(int genus, const std::vector<Slot>& slots, const Background& background) const;
    // Same sum with no prefactor and no explicit slots: the generating function F_g(t).
    QFunc potential(int genus, const Background& t) const;
    // Two-variable version read from stored functionals: slot pieces in x and in y are kept apart.
    Separable bracket_separable(int genus, const std::vector<Slot>& slots, const Background& background) const;

    const CorrelatorProvider& provider() const { return *provider_; }
    std::shared_ptr<const CorrelatorProvider> provider_ptr() const { return provider_; }
    int rank() const { return rank_; }
    std::size_t evaluations() const { return evaluations_.load(); }

private:
    struct Leaf;
    std::vector<Leaf> leaves(const std::vector<Slot>& slots, const Background& background) const;

    std::shared_ptr<const CorrelatorProvider> provider_;
    int rank_;
    mutable std::atomic<std::size_t> evaluations_{0};
};

}  // namespace qkr
