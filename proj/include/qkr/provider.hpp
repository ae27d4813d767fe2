#pragma once

#include "qkr/insertion.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qkr {

// Number of cycles of each length in a permutation of the marked points.
class CycleType {
public:
    CycleType() = default;
    explicit CycleType(std::map<int, int> counts);

    // "2_1+1_2": two 1-cycles and one 2-cycle. "0" is the empty type.
    static CycleType parse(const std::string& text);
    std::string str() const;

    int count(int r) const;
    int points() const;  // sum r * count(r)
    int cycles() const;
    const std::map<int, int>& counts() const { return counts_; }
    // Cycle length of every slot: 1-cycles first, then increasing length.
    std::vector<int> slot_cycles() const;
    CycleType plus(int r, int k = 1) const;
    bool empty() const { return counts_.empty(); }

    friend bool operator==(const CycleType& a, const CycleType& b) { return a.counts_ == b.counts_; }
    friend bool operator<(const CycleType& a, const CycleType& b) { return a.counts_ < b.counts_; }

private:
    std::map<int, int> counts_;
};

// Raw correlator key: genus, cycle type and the basis index inserted at every slot.
struct RawKey {
    int genus = 0;
    CycleType type;
    std::vector<int> basis;

    std::string str() const;
    // Sorts basis indices within each cycle class; `order` receives the slot permutation.
    RawKey canonical(std::vector<int>* order = nullptr) const;
    friend bool operator<(const RawKey& a, const RawKey& b) { return a.str() < b.str(); }
};

struct DataIncomplete : std::runtime_error {
    explicit DataIncomplete(const RawKey& k)
        : std::runtime_error("missing correlator data for " + k.str()), key(k) {}
    RawKey key;
};

// Value = weight * prod_i [h^k_i] (Psi^r_i f_i)(zeta^e_i + h).
struct ProbeTerm {
    Cyc weight;
    std::vector<std::pair<int, int>> probes;  // (root exponent, Taylor order) per slot
};

using Functional = std::vector<ProbeTerm>;

bool is_stable(int genus, int points);

class CorrelatorProvider {
public:
    virtual ~CorrelatorProvider() = default;
    // Raw correlator <f_1, ..., f_n>_{g, type}, summed over Novikov degrees. Slots are
    // ordered as CycleType::slot_cycles(); an r-cycle slot receives its input before Adams.
    virtual QFunc evaluate(const RawKey& key, const std::vector<LFunction>& slots) const = 0;
    // The linear functional behind a key, when the provider stores one.
    virtual std::optional<Functional> functional(const RawKey& /*key*/) const { return std::nullopt; }
    virtual std::string name() const = 0;
};

QFunc apply_functional(const Functional& f, const CycleType& type, const std::vector<LFunction>& slots);

// Keys stored as probe-term functionals. Unstable keys read as zero.
class FunctionalProvider : public CorrelatorProvider {
public:
    FunctionalProvider() = default;
    explicit FunctionalProvider(std::string name) : name_(std::move(name)) {}

    void add(const RawKey& key, Functional f);
    bool contains(const RawKey& key) const;
    std::vector<RawKey> keys() const;

    QFunc evaluate(const RawKey& key, const std::vector<LFunction>& slots) const override;
    std::optional<Functional> functional(const RawKey& key) const override;
    std::string name() const override { return name_; }

private:
    std::string name_ = "functional";
    std::map<std::string, std::pair<RawKey, Functional>> table_;
};

// Genus-0 point-target correlators: all keys with n <= 5 and cycle types up to n = 4.
std::shared_ptr<const FunctionalProvider> builtin_point_provider();

enum class Normalization { Raw, Unnormalized };

// Which invariants a table holds: ordinary correlators, fake (cohomological Riemann-Roch)
// correlators, or genus-1 brackets over balanced curves with a symmetry of order `order`.
struct TableKind {
    std::string theory = "actual";  // actual | fake | balanced
    int order = 1;
    friend bool operator==(const TableKind&, const TableKind&) = default;
};

struct Table {
    Normalization normalization = Normalization::Raw;
    TableKind kind;
    std::shared_ptr<FunctionalProvider> provider;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reads a JSONL table: a header {"normalization": ..., "theory": ..., "order": ...} followed by
// one record per key and degree. Novikov degrees need `ctx` to hold the named generators.
Table load_table(const std::string& path, const ContextPtr& ctx = nullptr);
// Writes the table in the same format with raw normalization.
void write_table(const Table& table, const std::string& path);

// Tries each provider in order; a key is answered by the first one that stores it.
class CompositeProvider : public CorrelatorProvider {
public:
    explicit CompositeProvider(std::vector<std::shared_ptr<const CorrelatorProvider>> layers);
    QFunc evaluate(const RawKey& key, const std::vector<LFunction>& slots) const override;
    std::optional<Functional> functional(const RawKey& key) const override;
    std::string name() const override;

private:
    std::vector<std::shared_ptr<const CorrelatorProvider>> layers_;
};

// Answers genus-0 keys outside the base domain by the string and dilaton equations, removing an
// affine 1-cycle slot that carries the unit. Results on scalar slots are memoized.
class ReducingProvider : public CorrelatorProvider {
public:
    ReducingProvider(std::shared_ptr<const CorrelatorProvider> base, int unit_index = 0);
    QFunc evaluate(const RawKey& key, const std::vector<LFunction>& slots) const override;
    std::optional<Functional> functional(const RawKey& key) const override { return base_->functional(key); }
    std::string name() const override { return "reducing(" + base_->name() + ")"; }

    std::set<std::string> keys_touched() const;
    std::size_t reductions() const;

private:
    QFunc reduce(const RawKey& key, const std::vector<LFunction>& slots) const;

    std::shared_ptr<const CorrelatorProvider> base_;
    int unit_;
    mutable std::mutex mutex_;
    mutable std::map<std::string, QFunc> memo_;
    mutable std::set<std::string> touched_;
    mutable std::size_t reductions_ = 0;
};

}  // namespace qkr
