// Batch front-end: loads a config, gates tables through the verifiers, runs one task and writes a
// JSON report. Exit codes: 0 success, 2 missing data, 3 failed check, 4 bad configuration.
#include "qkr/cone.hpp"
#include "qkr/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace qkr;

#ifndef QKR_VERSION
#define QKR_VERSION "0.0.0"
#endif

namespace {

enum Exit { kOk = 0, kInternal = 1, kMissing = 2, kFailed = 3, kConfig = 4 };

struct GateEntry {
    std::string table;
    VerifyReport report;
    bool has_verifier = true;
};

struct Setup {
    ContextPtr ctx;
    KBasis basis;
    std::vector<std::shared_ptr<const CorrelatorProvider>> layers;
    std::shared_ptr<ReducingProvider> provider;
    std::shared_ptr<const BracketEngine> engine;
    std::vector<GateEntry> gate;
    std::vector<RawKey> file_keys;
    Genus1Tables genus1;
};

std::vector<RawKey> genus0_keys(const FunctionalProvider& p) {
    std::vector<RawKey> out;
    for (const auto& k : p.keys())
        if (k.genus == 0) out.push_back(k);
    return out;
}

Setup prepare(const RunConfig& cfg) {
    Setup s;
    s.ctx = load_context(cfg.context_path, cfg.order);
    s.basis = load_basis(cfg.basis_path);
    std::vector<std::shared_ptr<const FunctionalProvider>> files;
    for (auto& [name, table] : load_table_dir(cfg.tables, s.ctx)) {
        if (table.kind.theory != "actual") throw ConfigError(name + ": genus-0 tables must hold actual correlators");
        auto keys = genus0_keys(*table.provider);
        s.file_keys.insert(s.file_keys.end(), keys.begin(), keys.end());
        s.layers.push_back(table.provider);
        files.push_back(table.provider);
        s.gate.push_back({name, {}, true});
    }
    if (cfg.builtin) s.layers.push_back(builtin_point_provider());
    if (s.layers.empty()) s.layers.push_back(std::make_shared<FunctionalProvider>("empty"));
    auto composite = std::make_shared<CompositeProvider>(s.layers);
    for (std::size_t i = 0; i < files.size(); ++i) {
        GateEntry& g = s.gate[i];
        auto keys = genus0_keys(*files[i]);
        SampleOptions opt;
        opt.unit = s.basis.unit;
        VerifyReport str = verify_string(*composite, keys, opt);
        VerifyReport dil = verify_dilaton(*composite, keys, opt);
        g.report.suite = "string+dilaton";
        g.report.checked = str.checked + dil.checked;
        g.report.skipped = str.skipped + dil.skipped;
        g.report.violations = str.violations;
        g.report.violations.insert(g.report.violations.end(), dil.violations.begin(), dil.violations.end());
    }
    s.provider = std::make_shared<ReducingProvider>(composite, s.basis.unit);
    s.engine = std::make_shared<BracketEngine>(s.provider, s.basis.rank);

    s.genus1.potential = builtin_genus1_potential();
    std::shared_ptr<const CorrelatorProvider> potential_file;
    for (auto& [name, table] : load_table_dir(cfg.genus1_tables, s.ctx)) {
        GateEntry g{name, {}, true};
        if (table.kind.theory == "fake") {
            g.report = verify_fake_string(*table.provider);
            s.genus1.fake = table.provider;
        } else if (table.kind.theory == "balanced") {
            if (!balanced_shape(table.kind.order)) throw ConfigError(name + ": no balanced shape of order " + std::to_string(table.kind.order));
            g.report = verify_perm_dilaton(*table.provider, table.kind.order);
            s.genus1.balanced[table.kind.order] = table.provider;
        } else {
            g.report.suite = "none";
            g.has_verifier = false;
            potential_file = table.provider;
        }
        s.gate.push_back(std::move(g));
    }
    if (potential_file) s.genus1.potential = std::make_shared<CompositeProvider>(
        std::vector<std::shared_ptr<const CorrelatorProvider>>{potential_file, s.genus1.potential});
    if (!s.genus1.fake && cfg.builtin) s.genus1.fake = builtin_genus1_fake(4);
    return s;
}

Json gate_json(const Setup& s, bool force, bool* passed) {
    Json tables = Json::array();
    *passed = true;
    for (const auto& g : s.gate) {
        Json j = report_json(g.report);
        j["table"] = g.table;
        if (!g.has_verifier) {
            j["ok"] = false;
            j["detail"] = "no verifier for this table kind";
        }
        *passed = *passed && g.report.ok() && g.has_verifier;
        tables.push_back(j);
    }
    return {{"tables", tables}, {"passed", *passed}, {"forced", force && !*passed}};
}

Json audit_json(const Setup& s) {
    auto touched = s.provider->keys_touched();
    return {{"keys_touched", touched.size()},
            {"keys", Json(std::vector<std::string>(touched.begin(), touched.end()))},
            {"reductions", s.provider->reductions()},
            {"evaluations", s.engine->evaluations()}};
}

int reconstruct_g0(const RunConfig& cfg, Setup& s, Json& result) {
    Profile t = load_profile(cfg.input, s.ctx, s.basis.rank, cfg.max_cycle);
    Genus0 g0(s.engine, s.basis, s.ctx);
    F0Result r = g0.f0(t);
    bool settled = true;
    for (int k = 1; k <= r.tbar.max_cycle(); ++k)
        for (const auto& f : r.tbar[k]) settled = settled && value_at_one(f).is_zero();
    result["tau"] = background_json(r.solution.tau);
    result["tbar"] = background_json(r.tbar);
    result["F0"] = r.value.str();
    result["terms"] = {{"quadratic", r.quadratic_term.str()},
                       {"sector_two", r.sector_two_term.str()},
                       {"unstable", r.unstable_correction.str()}};
    Json audit = audit_json(s);
    audit["iterations"] = r.solution.iterations;
    audit["residual_weights"] = r.solution.residual_weights;
    audit["tbar_vanishes_at_one"] = settled;
    result["audit"] = audit;
    return settled ? kOk : kFailed;
}

int reconstruct_g1(const RunConfig& cfg, Setup& s, Json& result) {
    if (s.basis.rank != 1) throw ConfigError("reconstruct-g1-point needs the point basis");
    if (!s.genus1.fake) throw DataIncomplete(RawKey{1, CycleType(std::map<int, int>{{1, 1}}), {0}});
    Profile t = load_profile(cfg.input, s.ctx, 1, cfg.max_cycle);
    Genus1Point g1(s.engine, s.ctx, s.genus1);
    F1Result r = g1.f1(t);
    Json fperm = Json::object();
    Json routes = Json::array();
    bool ok = true;
    for (const auto& [m, v] : r.fperm) {
        fperm[std::to_string(m)] = cyc_string(v);
        QFunc b = balanced_bracket(s.genus1.balanced.at(m), m, r.solution.tau);
        bool agree = fperm_eval_roots(m, b, r.edge) == v;
        ok = ok && agree;
        routes.push_back({{"identity", "perm " + std::to_string(m) + ": Res_{0,inf} = -Res_roots"}, {"ok", agree}});
    }
    for (const auto& [name, tb] : {std::pair{"new", r.tbar_new}, std::pair{"fake", r.tbar_fake}}) {
        bool agree = ftw_eval(*s.genus1.fake, tb) == ftw_eval_complement(*s.genus1.fake, tb);
        ok = ok && agree;
        routes.push_back({{"identity", std::string("ftw ") + name + ": residue theorem"}, {"ok", agree}});
    }
    for (const auto& id : check_edge_identity(r.edge)) {
        ok = ok && id.ok;
        routes.push_back(identity_json(id));
    }
    result["F1"] = cyc_string(r.value);
    result["terms"] = {{"F1_tau", cyc_string(r.potential_at_tau)},
                       {"log_term", cyc_string(r.log_term)},
                       {"ftw_new", cyc_string(r.ftw_new)},
                       {"ftw_fake", cyc_string(r.ftw_fake)},
                       {"fperm", fperm}};
    result["tau"] = background_json(r.solution.tau);
    Json audit = audit_json(s);
    audit["iterations"] = r.solution.iterations;
    audit["residual_weights"] = r.solution.residual_weights;
    audit["checks"] = routes;
    result["audit"] = audit;
    return ok ? kOk : kFailed;
}

std::vector<Insertion> wdvv_inputs(const Setup& s) {
    std::vector<Insertion> out;
    auto probes = probe_insertions();
    for (int i = 0; i < 4; ++i)
        out.push_back(basis_insertion(s.basis.rank, i % s.basis.rank, probes[i % probes.size()]));
    return out;
}

int verify(const RunConfig& cfg, Setup& s, Json& result) {
    Json suites = Json::array();
    bool ok = true;
    auto add = [&](const VerifyReport& r) {
        ok = ok && r.ok();
        suites.push_back(report_json(r));
    };
    std::vector<RawKey> keys = s.file_keys;
    if (cfg.builtin) {
        auto builtin = genus0_keys(*builtin_point_provider());
        keys.insert(keys.end(), builtin.begin(), builtin.end());
    }
    SampleOptions opt;
    opt.unit = s.basis.unit;
    add(verify_string(*s.provider, keys, opt));
    add(verify_dilaton(*s.provider, keys, opt));
    std::vector<Background> taus{zero_background(cfg.max_cycle, s.basis.rank)};
    if (!cfg.input.empty()) {
        Genus0 g0(s.engine, s.basis, s.ctx);
        taus.push_back(g0.solve_tau(load_profile(cfg.input, s.ctx, s.basis.rank, cfg.max_cycle)).tau);
    }
    for (const auto& tau : taus) {
        add(verify_wdvv_symmetry(*s.engine, s.basis, tau, wdvv_inputs(s)));
        add(verify_wdvv_two_point(*s.engine, s.basis, tau));
    }
    for (const auto& g : s.gate) ok = ok && g.report.ok();
    result["suites"] = suites;
    result["audit"] = audit_json(s);
    return ok ? kOk : kFailed;
}

int cone_check(const RunConfig& cfg, Setup& s, Json& result) {
    Profile t = load_profile(cfg.input, s.ctx, s.basis.rank, cfg.max_cycle);
    Genus0 g0(s.engine, s.basis, s.ctx);
    TauSolution sol = g0.solve_tau(t);
    Frame frame = g0.frame(sol.tau, 1);
    auto family = tangent_basis(frame, cfg.cone_window);
    std::vector<IdentityReport> checks{check_cone_point(g0, sol.tau), check_isotropy(frame, family),
                                       check_round_trip(frame, family)};
    const auto& gens = s.ctx->generators();
    if (cfg.cone_count > 0 && gens.empty()) throw ConfigError("ruling directions need a ring generator");
    Json ruling = Json::array();
    bool ok = true;
    const int span = 2 * cfg.cone_window + 1;
    for (int i = 0; i < cfg.cone_count; ++i) {
        int k = i % span - cfg.cone_window;
        int a = (i / span) % s.basis.rank;
        const auto& g = gens[(i / (span * s.basis.rank)) % gens.size()];
        KQ v(s.basis.rank);
        v[a] = QFunc::monomial(k, Cyc(Series::generator(s.ctx, g.name)));
        RulingResult r = ruling_check(g0, sol.tau, v);
        ok = ok && r.ok;
        Json j = {{"direction", g.name + "*q^" + std::to_string(k) + " phi_" + std::to_string(a)}, {"ok", r.ok}};
        if (!r.ok) j["counterexample"] = r.detail;
        ruling.push_back(j);
    }
    Json ids = Json::array();
    for (const auto& c : checks) {
        ok = ok && c.ok;
        ids.push_back(identity_json(c));
    }
    result["checks"] = ids;
    result["ruling"] = ruling;
    result["coverage"] = {{"window", cfg.cone_window}, {"tangent_vectors", family.size()}, {"directions", cfg.cone_count}};
    Json audit = audit_json(s);
    audit["iterations"] = sol.iterations;
    audit["residual_weights"] = sol.residual_weights;
    result["audit"] = audit;
    return ok ? kOk : kFailed;
}

int run(const RunConfig& cfg, Json& report) {
    Setup s = prepare(cfg);
    bool passed = true;
    report["gate"] = gate_json(s, cfg.force, &passed);
    if (!passed && !cfg.force && cfg.task != Task::Verify) {
        report["error"] = "tables failed verification; rerun with --force to use them";
        return kFailed;
    }
    Json result;
    int code = kOk;
    switch (cfg.task) {
        case Task::ReconstructG0: code = reconstruct_g0(cfg, s, result); break;
        case Task::ReconstructG1Point: code = reconstruct_g1(cfg, s, result); break;
        case Task::Verify: code = verify(cfg, s, result); break;
        case Task::ConeCheck: code = cone_check(cfg, s, result); break;
    }
    report["result"] = result;
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact reconstruction of quantum K-theory potentials"};
    std::string config_path;
    RunConfig over;
    std::string task;
    app.add_option("--config", config_path, "JSON run configuration");
    auto* order = app.add_option("--order", over.order, "truncation order N");
    auto* max_cycle = app.add_option("--max-cycle", over.max_cycle, "largest cycle length R");
    auto* tables = app.add_option("--tables", over.tables, "directory of genus-0 tables");
    auto* genus1 = app.add_option("--genus1-tables", over.genus1_tables, "directory of genus-1 tables");
    auto* task_opt = app.add_option("--task", task, "reconstruct-g0 | reconstruct-g1-point | verify | cone-check");
    auto* input = app.add_option("--input", over.input, "input profile");
    auto* out = app.add_option("--out", over.out, "report path");
    auto* force = app.add_flag("--force", over.force, "run on tables that fail verification");
    CLI11_PARSE(app, argc, argv);

    Json report;
    report["tool"] = "qkrecon";
    report["version"] = QKR_VERSION;
    RunConfig cfg;
    int code = kOk;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        if (order->count()) cfg.order = over.order;
        if (max_cycle->count()) cfg.max_cycle = over.max_cycle;
        if (tables->count()) cfg.tables = over.tables;
        if (genus1->count()) cfg.genus1_tables = over.genus1_tables;
        if (task_opt->count()) cfg.task = parse_task(task);
        if (input->count()) cfg.input = over.input;
        if (out->count()) cfg.out = over.out;
        if (force->count()) cfg.force = true;
        cfg.validate();
        report["config"] = cfg.to_json();
        code = run(cfg, report);
    } catch (const DataIncomplete& e) {
        report["error"] = e.what();
        report["missing_keys"] = Json::array({e.key.str()});
        code = kMissing;
    } catch (const ConfigError& e) {
        report["error"] = e.what();
        code = kConfig;
    } catch (const ContextError& e) {
        report["error"] = e.what();
        code = kConfig;
    } catch (const FormatError& e) {
        report["error"] = e.what();
        code = kConfig;
    } catch (const std::exception& e) {
        report["error"] = std::string("internal error: ") + e.what();
        code = kInternal;
    }
    report["exit_code"] = code;

    std::string text = report.dump(2) + "\n";
    if (!cfg.out.empty()) {
        std::ofstream f(cfg.out);
        if (!f) {
            std::cerr << "cannot write " << cfg.out << "\n";
            return kConfig;
        }
        f << text;
        std::cout << to_string(cfg.task) << ": exit " << code;
        if (report.contains("error")) std::cout << " (" << report["error"].get<std::string>() << ")";
        std::cout << ", report " << cfg.out << "\n";
    } else {
        std::cout << text;
    }
    return code;
}
