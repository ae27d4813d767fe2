// Writes synthetic genus-1 tables for the point target: balanced-curve rows for M = 2, 3, 4, 6 and
// the fake genus-1 table, and a copy of the order-2 table with one corrupted row.
#include "qkr/recon_g1.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace qkr;

namespace {

// Root of unity seen by the cotangent line at a fixed point of a symmetry of order M.
int fixed_point_root(int order) { return kConductor / order; }

// Base row: (c_0, c_1, c_2) on the Taylor moments of the first slot at the fixed-point root and its
// conjugate; c_2 is solved so that the contribution vanishes at t = 0.
Functional base_row(int order) {
    auto shape = *balanced_shape(order);
    const int slots = shape.base.cycles();
    std::vector<int> roots{fixed_point_root(order)};
    if (normalize_root(-roots[0]) != roots[0]) roots.push_back(normalize_root(-roots[0]));
    std::vector<Cyc> weights{Cyc(Rational(1) / (order + 1)), Cyc(Rational(order) / 7), Cyc()};
    auto terms = [&](int k, const Cyc& w) {
        Functional f;
        for (int root : roots) {
            std::vector<std::pair<int, int>> probes(slots, {0, 0});
            probes[0] = {root, k};
            f.push_back(ProbeTerm{w, probes});
        }
        return f;
    };
    EdgeData origin;
    for (int r : {1, 2, 3, 4, 6}) origin.tau_derivative[r] = Cyc(1);
    std::vector<LFunction> args(slots, LFunction(1));
    args[0] = LFunction::kernel(1);
    auto value = [&](int k) {
        QFunc b = apply_functional(terms(k, Cyc(1)), shape.base, args);
        return fperm_eval(order, b, origin);
    };
    Cyc rest = weights[0] * value(0) + weights[1] * value(1);
    weights[2] = -(rest * inverse(value(2)));
    Functional f;
    for (int k = 0; k < 3; ++k)
        for (auto& t : terms(k, weights[k])) f.push_back(std::move(t));
    return f;
}

// Multisets of cycle lengths other than M with total length at most `budget`.
void extras(int order, int budget, int min_len, std::map<int, int>& cur, std::vector<std::map<int, int>>& out) {
    out.push_back(cur);
    for (int r : {1, 2, 3, 4, 6}) {
        if (r < min_len || r == order || r > budget) continue;
        ++cur[r];
        extras(order, budget - r, r, cur, out);
        if (--cur[r] == 0) cur.erase(r);
    }
}

// Row base + extra + l_M: the l-row of extend_balanced with value probes at the extra slots.
Functional full_row(const BalancedShape& shape, const FunctionalProvider& rows, const std::map<int, int>& extra, int l,
                    CycleType* type) {
    CycleType t = l > 0 ? shape.base.plus(shape.order, l) : shape.base;
    for (const auto& [r, k] : extra) t = t.plus(r, k);
    *type = t;
    CycleType core = l > 0 ? shape.base.plus(shape.order, l) : shape.base;
    Functional f = *rows.functional(RawKey{1, core, std::vector<int>(core.cycles(), 0)});
    auto core_cycles = core.slot_cycles();
    auto cycles = t.slot_cycles();
    Functional out;
    for (const auto& term : f) {
        ProbeTerm placed{term.weight, {}};
        std::size_t next = 0;
        std::map<int, int> used;
        for (int r : cycles) {
            if (used[r] < core.count(r)) {
                while (core_cycles[next] != r) ++next;
                placed.probes.push_back(term.probes[next++]);
            } else {
                placed.probes.emplace_back(0, 0);
            }
            ++used[r];
        }
        out.push_back(std::move(placed));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Writes synthetic genus-1 tables"};
    std::string dir = "data/genus1";
    std::string corrupt = "tests/fixtures/corrupt_balanced_2.jsonl";
    int budget = 6;
    app.add_option("--out", dir, "output directory");
    app.add_option("--corrupt-out", corrupt, "path of the corrupted order-2 table");
    app.add_option("--budget", budget, "largest total length of extra cycles");
    CLI11_PARSE(app, argc, argv);
    std::filesystem::create_directories(dir);

    for (int m : kBalancedOrders) {
        auto shape = *balanced_shape(m);
        FunctionalProvider rows;
        rows.add(RawKey{1, shape.base, std::vector<int>(shape.base.cycles(), 0)}, base_row(m));
        extend_balanced(rows, m, budget / m);
        Table table{Normalization::Raw, TableKind{"balanced", m}, std::make_shared<FunctionalProvider>()};
        std::vector<std::map<int, int>> all;
        std::map<int, int> cur;
        extras(m, budget, 1, cur, all);
        for (const auto& e : all) {
            int used = 0;
            for (const auto& [r, k] : e) used += r * k;
            for (int l = 0; l * m + used <= budget; ++l) {
                CycleType type;
                Functional f = full_row(shape, rows, e, l, &type);
                table.provider->add(RawKey{1, type, std::vector<int>(type.cycles(), 0)}, std::move(f));
            }
        }
        std::string path = dir + "/balanced_" + std::to_string(m) + ".jsonl";
        write_table(table, path);
        std::cout << path << ": " << table.provider->keys().size() << " rows\n";

        if (m == 2) {
            Table bad = table;
            bad.provider = std::make_shared<FunctionalProvider>();
            for (const auto& key : table.provider->keys()) {
                Functional f = *table.provider->functional(key);
                if (key.type == shape.base.plus(2, 1)) f.back().weight = f.back().weight * Cyc(2);
                bad.provider->add(key, std::move(f));
            }
            std::filesystem::create_directories(std::filesystem::path(corrupt).parent_path());
            write_table(bad, corrupt);
        }
    }

    auto fake = builtin_genus1_fake(4);
    Table fake_table{Normalization::Raw, TableKind{"fake", 1}, std::make_shared<FunctionalProvider>(*fake)};
    write_table(fake_table, dir + "/fake.jsonl");
    std::cout << dir << "/fake.jsonl: " << fake->keys().size() << " rows\n";
}
