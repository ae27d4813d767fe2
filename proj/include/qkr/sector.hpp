#pragma once

#include <stdexcept>
#include <vector>

namespace qkr {

// Tuple indexed by cycle length r = 1..R; sectors beyond R read as `zero`.
template <class T>
class SectorFamily {
public:
    SectorFamily() = default;
    SectorFamily(int max_cycle, T zero) : zero_(std::move(zero)), entries_(max_cycle, zero_) {
        if (max_cycle < 1) throw std::invalid_argument("max cycle must be positive");
    }

    int max_cycle() const { return static_cast<int>(entries_.size()); }
    const T& zero() const { return zero_; }

    const T& operator[](int r) const {
        if (r < 1) throw std::out_of_range("sector index must be positive");
        return r <= max_cycle() ? entries_[r - 1] : zero_;
    }
    T& at(int r) {
        if (r < 1 || r > max_cycle()) throw std::out_of_range("sector index out of range");
        return entries_[r - 1];
    }

    template <class F>
    auto map(F&& f) const {
        using U = decltype(f(zero_));
        SectorFamily<U> out(max_cycle(), f(zero_));
        for (int r = 1; r <= max_cycle(); ++r) out.at(r) = f(entries_[r - 1]);
        return out;
    }

    friend bool operator==(const SectorFamily& a, const SectorFamily& b) {
        return a.entries_ == b.entries_;
    }

private:
    T zero_{};
    std::vector<T> entries_;
};

// (R_r f)_k = f_{kr}.
template <class T>
SectorFamily<T> r_shift(int r, const SectorFamily<T>& f) {
    if (r < 1) throw std::invalid_argument("shift must be positive");
    SectorFamily<T> out(f.max_cycle(), f.zero());
    for (int k = 1; k <= f.max_cycle(); ++k) out.at(k) = f[k * r];
    return out;
}

}  // namespace qkr
