#include "qkr/provider.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace qkr {

CycleType::CycleType(std::map<int, int> counts) {
    for (const auto& [r, k] : counts) {
        if (r < 1 || k < 0) throw std::invalid_argument("invalid cycle type entry");
        if (k > 0) counts_[r] = k;
    }
}

CycleType CycleType::parse(const std::string& text) {
    std::map<int, int> counts;
    if (text.empty() || text == "0") return CycleType();
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, '+')) {
        auto u = part.find('_');
        if (u == std::string::npos) throw std::invalid_argument("cycle type term needs k_r: " + part);
        int k = std::stoi(part.substr(0, u));
        int r = std::stoi(part.substr(u + 1));
        if (r < 1 || k < 0) throw std::invalid_argument("invalid cycle type term: " + part);
        counts[r] += k;
    }
    return CycleType(std::move(counts));
}

std::string CycleType::str() const {
    if (counts_.empty()) return "0";
    std::string out;
    for (const auto& [r, k] : counts_) {
        if (!out.empty()) out += "+";
        out += std::to_string(k) + "_" + std::to_string(r);
    }
    return out;
}

int CycleType::count(int r) const {
    auto it = counts_.find(r);
    return it == counts_.end() ? 0 : it->second;
}

int CycleType::points() const {
    int n = 0;
    for (const auto& [r, k] : counts_) n += r * k;
    return n;
}

int CycleType::cycles() const {
    int n = 0;
    for (const auto& [r, k] : counts_) n += k;
    return n;
}

std::vector<int> CycleType::slot_cycles() const {
    std::vector<int> out;
    for (const auto& [r, k] : counts_) out.insert(out.end(), k, r);
    return out;
}

CycleType CycleType::plus(int r, int k) const {
    auto c = counts_;
    c[r] += k;
    return CycleType(std::move(c));
}

std::string RawKey::str() const {
    std::string out = "g" + std::to_string(genus) + ":" + type.str() + ":[";
    for (std::size_t i = 0; i < basis.size(); ++i) out += (i ? "," : "") + std::to_string(basis[i]);
    return out + "]";
}

RawKey RawKey::canonical(std::vector<int>* order) const {
    auto cycles = type.slot_cycles();
    if (cycles.size() != basis.size()) throw std::invalid_argument("key " + str() + " has the wrong slot count");
    std::vector<int> perm(basis.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
        if (cycles[a] != cycles[b]) return cycles[a] < cycles[b];
        return basis[a] < basis[b];
    });
    RawKey out{genus, type, {}};
    for (int i : perm) out.basis.push_back(basis[i]);
    if (order) *order = perm;
    return out;
}

bool is_stable(int genus, int points) { return 2 * genus + points >= 3; }

QFunc apply_functional(const Functional& f, const CycleType& type, const std::vector<LFunction>& slots) {
    auto cycles = type.slot_cycles();
    std::vector<LFunction> images;
    images.reserve(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) images.push_back(adams(cycles[i], slots[i]));
    QFunc total;
    for (const auto& term : f) {
        if (term.probes.size() != slots.size()) throw FormatError("probe count does not match the slot count");
        QFunc v(term.weight);
        for (std::size_t i = 0; i < slots.size() && !v.is_zero(); ++i)
            v = v * moment(images[i], term.probes[i].first, term.probes[i].second);
        total += v;
    }
    return total;
}

void FunctionalProvider::add(const RawKey& key, Functional f) {
    std::vector<int> order;
    RawKey c = key.canonical(&order);
    for (auto& term : f) {
        if (term.probes.size() != key.basis.size()) throw FormatError("probe count mismatch in " + key.str());
        std::vector<std::pair<int, int>> p;
        for (int i : order) p.push_back(term.probes[i]);
        term.probes = std::move(p);
    }
    auto& slot = table_[c.str()];
    slot.first = c;
    slot.second.insert(slot.second.end(), f.begin(), f.end());
}

bool FunctionalProvider::contains(const RawKey& key) const { return table_.count(key.canonical().str()) > 0; }

std::vector<RawKey> FunctionalProvider::keys() const {
    std::vector<RawKey> out;
    for (const auto& [s, v] : table_) out.push_back(v.first);
    return out;
}

QFunc FunctionalProvider::evaluate(const RawKey& key, const std::vector<LFunction>& slots) const {
    if (slots.size() != key.basis.size()) throw std::invalid_argument("slot count does not match " + key.str());
    std::vector<int> order;
    RawKey c = key.canonical(&order);
    auto it = table_.find(c.str());
    if (it == table_.end()) {
        if (!is_stable(key.genus, key.type.points())) return QFunc();
        throw DataIncomplete(c);
    }
    std::vector<LFunction> sorted;
    for (int i : order) sorted.push_back(slots[i]);
    return apply_functional(it->second.second, c.type, sorted);
}

std::optional<Functional> FunctionalProvider::functional(const RawKey& key) const {
    std::vector<int> order;
    RawKey c = key.canonical(&order);
    auto it = table_.find(c.str());
    if (it == table_.end()) return std::nullopt;
    // Report probes in the caller's slot order.
    Functional f = it->second.second;
    for (auto& term : f) {
        std::vector<std::pair<int, int>> p(term.probes.size());
        for (std::size_t i = 0; i < order.size(); ++i) p[order[i]] = term.probes[i];
        term.probes = std::move(p);
    }
    return f;
}

namespace {

using nlohmann::json;

Cyc parse_weight(const json& w) {
    if (w.is_string()) return Cyc(parse_rational(w.get<std::string>()));
    if (w.is_number_integer()) return Cyc(Rational(w.get<long>()));
    if (w.is_array() && static_cast<int>(w.size()) == kCycDegree) {
        std::vector<Series> comps;
        for (const auto& x : w) comps.emplace_back(parse_weight(x).rational_part());
        return Cyc::from_components(std::move(comps));
    }
    throw FormatError("weight must be a rational string or a list of " + std::to_string(kCycDegree) + " rationals");
}

json weight_json(const Cyc& c) {
    if (!c.is_scalar()) throw FormatError("table weights must be scalars");
    if (c.is_rational()) return to_string(c.rational_part().constant_term());
    json arr = json::array();
    for (int i = 0; i < kCycDegree; ++i) arr.push_back(to_string(c.component(i).constant_term()));
    return arr;
}

}  // namespace

Table load_table(const std::string& path, const ContextPtr& ctx) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open table " + path);
    Table table;
    table.provider = std::make_shared<FunctionalProvider>(path);
    std::string line;
    int lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw FormatError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (!header) {
            if (!rec.contains("normalization")) throw FormatError(path + ": first record must be the header");
            auto norm = rec.at("normalization").get<std::string>();
            if (norm == "raw") table.normalization = Normalization::Raw;
            else if (norm == "unnormalized") table.normalization = Normalization::Unnormalized;
            else throw FormatError(path + ": unknown normalization " + norm);
            table.kind.theory = rec.value("theory", std::string("actual"));
            table.kind.order = rec.value("order", 1);
            if (table.kind.theory != "actual" && table.kind.theory != "fake" && table.kind.theory != "balanced")
                throw FormatError(path + ": unknown theory " + table.kind.theory);
            header = true;
            continue;
        }
        try {
            RawKey key;
            key.genus = rec.at("g").get<int>();
            std::map<int, int> counts;
            for (const auto& [r, k] : rec.at("cycle_type").items()) counts[std::stoi(r)] = k.get<int>();
            key.type = CycleType(counts);
            key.basis = rec.value("basis", std::vector<int>(key.type.cycles(), 0));
            Cyc degree_factor(1);
            if (rec.contains("degree")) {
                for (const auto& [name, d] : rec.at("degree").items()) {
                    int e = d.get<int>();
                    if (e == 0) continue;
                    if (!ctx || ctx->index_of(name) < 0)
                        throw ContextError("table degree uses generator " + name + " missing from the ring context");
                    degree_factor = degree_factor * Cyc(power(Series::generator(ctx, name), e));
                }
            }
            Rational norm = 1;
            if (table.normalization == Normalization::Unnormalized)
                for (const auto& [r, k] : key.type.counts())
                    for (int i = 0; i < k; ++i) norm /= r;
            Functional f;
            for (const auto& t : rec.at("terms")) {
                ProbeTerm term;
                term.weight = parse_weight(t.at("weight")) * degree_factor * Cyc(norm);
                for (const auto& p : t.at("probes")) term.probes.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
                f.push_back(std::move(term));
            }
            table.provider->add(key, std::move(f));
        } catch (const json::exception& e) {
            throw FormatError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!header) throw FormatError(path + ": empty table");
    return table;
}

void write_table(const Table& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    json head = {{"normalization", "raw"}, {"theory", table.kind.theory}, {"order", table.kind.order}};
    out << head.dump() << "\n";
    for (const auto& key : table.provider->keys()) {
        json rec;
        rec["g"] = key.genus;
        json ct = json::object();
        for (const auto& [r, k] : key.type.counts()) ct[std::to_string(r)] = k;
        rec["cycle_type"] = ct;
        rec["basis"] = key.basis;
        json terms = json::array();
        const Functional f = *table.provider->functional(key);
        for (const auto& t : f) {
            json probes = json::array();
            for (const auto& [e, k] : t.probes) probes.push_back({e, k});
            terms.push_back({{"weight", weight_json(t.weight)}, {"probes", probes}});
        }
        rec["terms"] = terms;
        out << rec.dump() << "\n";
    }
}

CompositeProvider::CompositeProvider(std::vector<std::shared_ptr<const CorrelatorProvider>> layers)
    : layers_(std::move(layers)) {
    if (layers_.empty()) throw std::invalid_argument("composite provider needs a layer");
}

QFunc CompositeProvider::evaluate(const RawKey& key, const std::vector<LFunction>& slots) const {
    for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
        try {
            return layers_[i]->evaluate(key, slots);
        } catch (const DataIncomplete&) {
        }
    }
    return layers_.back()->evaluate(key, slots);
}

std::optional<Functional> CompositeProvider::functional(const RawKey& key) const {
    for (const auto& l : layers_)
        if (auto f = l->functional(key)) return f;
    return std::nullopt;
}

std::string CompositeProvider::name() const {
    std::string out = "composite(";
    for (std::size_t i = 0; i < layers_.size(); ++i) out += (i ? " > " : "") + layers_[i]->name();
    return out + ")";
}

ReducingProvider::ReducingProvider(std::shared_ptr<const CorrelatorProvider> base, int unit_index)
    : base_(std::move(base)), unit_(unit_index) {}

QFunc ReducingProvider::evaluate(const RawKey& key, const std::vector<LFunction>& slots) const {
    bool memo = std::all_of(slots.begin(), slots.end(), [](const LFunction& f) { return f.is_scalar(); });
    std::string id;
    if (memo) {
        id = key.str();
        for (const auto& s : slots) id += "|" + s.str();
        std::lock_guard lock(mutex_);
        touched_.insert(key.canonical().str());
        auto it = memo_.find(id);
        if (it != memo_.end()) return it->second;
    }
    QFunc v;
    try {
        v = base_->evaluate(key, slots);
    } catch (const DataIncomplete&) {
        v = reduce(key, slots);
    }
    if (memo) {
        std::lock_guard lock(mutex_);
        memo_.emplace(id, v);
    }
    return v;
}

QFunc ReducingProvider::reduce(const RawKey& key, const std::vector<LFunction>& slots) const {
    int n = key.type.points();
    auto cycles = key.type.slot_cycles();
    int pick = -1;
    for (std::size_t i = 0; i < slots.size(); ++i)
        if (cycles[i] == 1 && key.basis[i] == unit_ && slots[i].is_affine()) {
            pick = int(i);
            break;
        }
    if (key.genus != 0 || pick < 0 || n - 1 < 3) throw DataIncomplete(key.canonical());
    {
        std::lock_guard lock(mutex_);
        ++reductions_;
    }
    // f = f(1) + b (L - 1)
    const LFunction& f = slots[pick];
    Cyc b = f.poly().poly().count(1) ? f.poly().poly().at(1) : Cyc(0);
    Cyc f1 = evaluate_at_root(f.poly(), 0);
    RawKey rest{0, key.type.plus(1, -1), {}};
    std::vector<LFunction> rest_slots;
    for (std::size_t i = 0; i < slots.size(); ++i)
        if (int(i) != pick) {
            rest.basis.push_back(key.basis[i]);
            rest_slots.push_back(slots[i]);
        }
    QFunc base_value = evaluate(rest, rest_slots);
    QFunc out;
    if (!f1.is_zero()) {
        QFunc s = base_value;
        auto rest_cycles = rest.type.slot_cycles();
        for (std::size_t j = 0; j < rest_slots.size(); ++j) {
            if (rest_cycles[j] != 1) continue;
            LFunction d = divided_difference(rest_slots[j]);
            if (d.is_zero()) continue;
            auto shifted = rest_slots;
            shifted[j] = d;
            s += evaluate(rest, shifted);
        }
        out += s * f1;
    }
    if (!b.is_zero()) out += base_value * (b * Cyc(rest.type.count(1) - 2));
    return out;
}

std::set<std::string> ReducingProvider::keys_touched() const {
    std::lock_guard lock(mutex_);
    return touched_;
}

std::size_t ReducingProvider::reductions() const {
    std::lock_guard lock(mutex_);
    return reductions_;
}

}  // namespace qkr
