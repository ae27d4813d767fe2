#include "qkr/verify.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <random>
#include <tuple>

namespace qkr {

std::vector<LFunction> probe_insertions() {
    return {LFunction(1), LFunction::l_power(1), LFunction::l_power(-1),
            LFunction::l_power(2, Cyc(2)) - LFunction::l_power(1)};
}

namespace {

struct Reduction {
    RawKey rest;
    std::vector<int> order;  // slots of the full key: special slot first
};

// Moves a 1-cycle unit slot to the front; empty when the key has none.
std::optional<Reduction> split_unit(const RawKey& key, int unit) {
    auto cycles = key.type.slot_cycles();
    int pick = -1;
    for (std::size_t i = 0; i < cycles.size(); ++i)
        if (cycles[i] == 1 && key.basis[i] == unit) {
            pick = static_cast<int>(i);
            break;
        }
    if (pick < 0) return std::nullopt;
    Reduction r;
    r.rest = RawKey{key.genus, key.type.plus(1, -1), {}};
    r.order.push_back(pick);
    for (std::size_t i = 0; i < cycles.size(); ++i)
        if (static_cast<int>(i) != pick) {
            r.order.push_back(static_cast<int>(i));
            r.rest.basis.push_back(key.basis[i]);
        }
    return r;
}

std::vector<std::vector<LFunction>> sample_tuples(std::size_t slots, const SampleOptions& options,
                                                  const std::string& salt) {
    auto probes = probe_insertions();
    std::size_t total = 1;
    for (std::size_t i = 0; i < slots && total <= options.per_key; ++i) total *= probes.size();
    std::vector<std::vector<LFunction>> out;
    if (total <= options.per_key) {
        for (std::size_t code = 0; code < total; ++code) {
            std::vector<LFunction> t;
            std::size_t c = code;
            for (std::size_t i = 0; i < slots; ++i, c /= probes.size()) t.push_back(probes[c % probes.size()]);
            out.push_back(std::move(t));
        }
        return out;
    }
    std::vector<unsigned> material(salt.begin(), salt.end());
    material.push_back(options.seed);
    std::seed_seq seq(material.begin(), material.end());
    std::mt19937 rng(seq);
    std::uniform_int_distribution<std::size_t> pick(0, probes.size() - 1);
    for (std::size_t k = 0; k < options.per_key; ++k) {
        std::vector<LFunction> t;
        for (std::size_t i = 0; i < slots; ++i) t.push_back(probes[pick(rng)]);
        out.push_back(std::move(t));
    }
    return out;
}

// Slots of the full key in its own order, given the special insertion and the rest.
std::vector<LFunction> assemble(const Reduction& r, const LFunction& special, const std::vector<LFunction>& rest) {
    std::vector<LFunction> full(r.order.size());
    full[r.order[0]] = special;
    for (std::size_t i = 1; i < r.order.size(); ++i) full[r.order[i]] = rest[i - 1];
    return full;
}

std::string describe(const std::vector<LFunction>& slots) {
    std::string s = "(";
    for (std::size_t i = 0; i < slots.size(); ++i) s += (i ? ", " : "") + slots[i].str();
    return s + ")";
}

template <class Rhs>
VerifyReport verify_reduction(const std::string& suite, const CorrelatorProvider& provider,
                              const std::vector<RawKey>& keys, const SampleOptions& options,
                              const LFunction& special, Rhs&& rhs) {
    VerifyReport rep;
    rep.suite = suite;
    for (const auto& key : keys) {
        auto r = split_unit(key, options.unit);
        if (key.genus != 0 || !r || !is_stable(0, r->rest.type.points())) {
            ++rep.skipped;
            continue;
        }
        for (const auto& rest_slots : sample_tuples(r->rest.basis.size(), options, suite + key.str())) {
            auto full = assemble(*r, special, rest_slots);
            try {
                QFunc lhs = provider.evaluate(key, full);
                QFunc right = rhs(r->rest, rest_slots);
                ++rep.checked;
                if (!(lhs == right))
                    rep.violations.push_back({key.str(), "slots " + describe(full) + ": " + lhs.str() + " vs " + right.str()});
            } catch (const DataIncomplete& e) {
                rep.violations.push_back({key.str(), e.what()});
                break;
            }
        }
    }
    return rep;
}

}  // namespace

VerifyReport verify_string(const CorrelatorProvider& provider, const std::vector<RawKey>& keys,
                           const SampleOptions& options) {
    return verify_reduction("string", provider, keys, options, LFunction(1),
                            [&](const RawKey& rest, const std::vector<LFunction>& slots) {
                                QFunc out = provider.evaluate(rest, slots);
                                auto cycles = rest.type.slot_cycles();
                                for (std::size_t j = 0; j < slots.size(); ++j) {
                                    if (cycles[j] != 1) continue;
                                    LFunction d = divided_difference(slots[j]);
                                    if (d.is_zero()) continue;
                                    auto shifted = slots;
                                    shifted[j] = d;
                                    out += provider.evaluate(rest, shifted);
                                }
                                return out;
                            });
}

VerifyReport verify_dilaton(const CorrelatorProvider& provider, const std::vector<RawKey>& keys,
                            const SampleOptions& options) {
    return verify_reduction("dilaton", provider, keys, options, LFunction::l_power(1) - LFunction(1),
                            [&](const RawKey& rest, const std::vector<LFunction>& slots) {
                                return provider.evaluate(rest, slots) * Cyc(rest.type.count(1) - 2);
                            });
}

VerifyReport verify_wdvv_symmetry(const BracketEngine& engine, const KBasis& basis, const Background& tau,
                                  const std::vector<Insertion>& inputs) {
    if (inputs.size() != 4) throw std::invalid_argument("WDVV symmetry needs four inputs");
    VerifyReport rep;
    rep.suite = "wdvv-symmetry";
    const int n = basis.rank;
    Matrix ginv = inverse_near(metric_direct(engine, basis, tau), basis.inverse_pairing());
    std::map<std::pair<int, int>, std::vector<QFunc>> three;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            std::vector<QFunc> v(n);
            for (int m = 0; m < n; ++m)
                v[m] = engine.bracket(0, {Slot{1, inputs[i]}, Slot{1, inputs[j]}, Slot{1, basis_insertion(n, m)}}, tau);
            three[{i, j}] = std::move(v);
        }
    std::array<int, 4> p{0, 1, 2, 3};
    QFunc reference;
    bool first = true;
    do {
        QFunc s;
        const auto& left = three[{p[0], p[1]}];
        const auto& right = three[{p[2], p[3]}];
        for (int m = 0; m < n; ++m)
            for (int k = 0; k < n; ++k)
                if (!ginv[m][k].is_zero()) s += left[m] * right[k] * ginv[m][k];
        ++rep.checked;
        if (first) {
            reference = s;
            first = false;
        } else if (!(s == reference)) {
            rep.violations.push_back({"permutation " + std::to_string(p[0]) + std::to_string(p[1]) +
                                          std::to_string(p[2]) + std::to_string(p[3]),
                                      s.str() + " vs " + reference.str()});
        }
    } while (std::next_permutation(p.begin(), p.end()));
    return rep;
}

namespace {

using BasisKey = std::tuple<int, int, int>;  // (0, degree, 0) monomial or (1, root, order) pole

std::map<BasisKey, QFunc> collect(const Separable& s, const Cyc& sign, std::map<BasisKey, QFunc> acc = {}) {
    for (const auto& [f, g] : s) {
        for (const auto& [k, c] : f.poly()) acc[{0, k, 0}] += g * (c * sign);
        for (const auto& [e, v] : f.poles())
            for (std::size_t o = 0; o < v.size(); ++o) acc[{1, e, static_cast<int>(o) + 1}] += g * (v[o] * sign);
    }
    return acc;
}

}  // namespace

bool separable_equal(const Separable& a, const Separable& b, std::string* detail) {
    auto diff = collect(b, Cyc(-1), collect(a, Cyc(1)));
    for (const auto& [k, g] : diff) {
        if (g.is_zero()) continue;
        if (detail) {
            auto [kind, i, o] = k;
            *detail = (kind == 0 ? "x^" + std::to_string(i) : "pole at zeta^" + std::to_string(i) + " order " + std::to_string(o)) +
                      ": y-part differs by " + g.str();
        }
        return false;
    }
    return true;
}

Separable times_one_minus_xy(const Separable& s) {
    Separable out = s;
    for (const auto& [f, g] : s) out.emplace_back(-f.shifted(1), g.shifted(1));
    return out;
}

namespace {

Separable kernel_two_point(const BracketEngine& engine, int rank, int gamma, int delta, const Background& tau) {
    return engine.bracket_separable(0,
                                    {Slot{1, basis_insertion(rank, gamma, LFunction::kernel(1)), 0},
                                     Slot{1, basis_insertion(rank, delta, LFunction::kernel(1)), 1}},
                                    tau);
}

}  // namespace

VerifyReport verify_wdvv_two_point(const BracketEngine& engine, const KBasis& basis, const Background& tau) {
    VerifyReport rep;
    rep.suite = "wdvv-two-point";
    const int n = basis.rank;
    Matrix g = basis.pairing_matrix();
    Matrix ginv = inverse_near(metric_direct(engine, basis, tau), basis.inverse_pairing());
    // h[a][c] = (phi_c, phi_a) + <<phi_c/(1 - qL), phi_a>>
    std::vector<std::vector<QFunc>> h(n, std::vector<QFunc>(n));
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
            h[a][c] = QFunc(g[c][a]) + engine.bracket(0, {Slot{1, basis_insertion(n, c, LFunction::kernel(1))},
                                                          Slot{1, basis_insertion(n, a)}},
                                                      tau);
    for (int gamma = 0; gamma < n; ++gamma)
        for (int delta = 0; delta < n; ++delta) {
            Separable lhs = times_one_minus_xy(kernel_two_point(engine, n, gamma, delta, tau));
            Separable rhs;
            if (!g[gamma][delta].is_zero()) rhs.emplace_back(QFunc(-g[gamma][delta]), QFunc(1));
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    if (!ginv[a][b].is_zero()) rhs.emplace_back(h[a][gamma] * ginv[a][b], h[b][delta]);
            std::string detail;
            ++rep.checked;
            if (!separable_equal(lhs, rhs, &detail))
                rep.violations.push_back({"pair " + std::to_string(gamma) + "," + std::to_string(delta), detail});
        }
    return rep;
}

VerifyReport verify_frame_two_point(const BracketEngine& engine, const Frame& frame) {
    VerifyReport rep;
    rep.suite = "frame-two-point";
    const int n = frame.basis().rank;
    for (int gamma = 0; gamma < n; ++gamma)
        for (int delta = 0; delta < n; ++delta) {
            Separable lhs = times_one_minus_xy(kernel_two_point(engine, n, gamma, delta, frame.tau()));
            std::string detail;
            ++rep.checked;
            if (!separable_equal(lhs, frame.two_point_kernel(gamma, delta), &detail))
                rep.violations.push_back({"pair " + std::to_string(gamma) + "," + std::to_string(delta), detail});
        }
    return rep;
}

}  // namespace qkr
