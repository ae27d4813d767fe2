#include "qkr/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace qkr {

namespace fs = std::filesystem;

namespace {

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string resolve(const fs::path& base, const std::string& p) {
    if (p.empty() || fs::path(p).is_absolute()) return p;
    return (base / p).lexically_normal().string();
}

Rational json_rational(const Json& v) {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw ConfigError("expected an integer or a rational string, got " + v.dump());
}

std::vector<std::vector<Rational>> json_matrix(const Json& m) {
    std::vector<std::vector<Rational>> out;
    for (const auto& row : m) {
        std::vector<Rational> r;
        for (const auto& v : row) r.push_back(json_rational(v));
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

Task parse_task(const std::string& text) {
    if (text == "reconstruct-g0") return Task::ReconstructG0;
    if (text == "reconstruct-g1-point") return Task::ReconstructG1Point;
    if (text == "verify") return Task::Verify;
    if (text == "cone-check") return Task::ConeCheck;
    throw ConfigError("unknown task " + text);
}

std::string to_string(Task task) {
    switch (task) {
        case Task::ReconstructG0: return "reconstruct-g0";
        case Task::ReconstructG1Point: return "reconstruct-g1-point";
        case Task::Verify: return "verify";
        case Task::ConeCheck: return "cone-check";
    }
    return {};
}

void RunConfig::validate() const {
    if (order < 0) throw ConfigError("order must be non-negative");
    if (max_cycle < 1) throw ConfigError("max_cycle must be at least 1");
    if (cone_window < 0 || cone_count < 0) throw ConfigError("cone sample sizes must be non-negative");
    for (const auto& p : {context_path, basis_path, tables, genus1_tables, input})
        if (!p.empty() && !fs::exists(p)) throw ConfigError("path does not exist: " + p);
    if (task == Task::ReconstructG1Point && genus1_tables.empty())
        throw ConfigError("reconstruct-g1-point needs genus1_tables");
}

Json RunConfig::to_json() const {
    Json j;
    j["task"] = to_string(task);
    j["order"] = order;
    j["max_cycle"] = max_cycle;
    j["context"] = context_path;
    j["basis"] = basis_path.empty() ? "point" : basis_path;
    j["tables"] = tables;
    j["genus1_tables"] = genus1_tables;
    j["input"] = input;
    j["builtin"] = builtin;
    j["force"] = force;
    if (task == Task::ConeCheck) j["cone"] = {{"window", cone_window}, {"count", cone_count}};
    return j;
}

RunConfig load_config(const std::string& path) {
    Json j = read_json(path);
    fs::path base = fs::path(path).parent_path();
    RunConfig c;
    try {
        c.context_path = resolve(base, j.value("context", std::string()));
        std::string basis = j.value("basis", std::string("point"));
        c.basis_path = basis == "point" ? std::string() : resolve(base, basis);
        c.order = j.value("order", c.order);
        c.max_cycle = j.value("max_cycle", c.max_cycle);
        c.tables = resolve(base, j.value("tables", std::string()));
        c.genus1_tables = resolve(base, j.value("genus1_tables", std::string()));
        if (j.contains("task")) c.task = parse_task(j.at("task").get<std::string>());
        c.input = resolve(base, j.value("input", std::string()));
        c.out = resolve(base, j.value("out", std::string()));
        c.force = j.value("force", false);
        c.builtin = j.value("builtin", true);
        if (j.contains("cone")) {
            c.cone_window = j.at("cone").value("window", c.cone_window);
            c.cone_count = j.at("cone").value("count", c.cone_count);
        }
    } catch (const Json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return c;
}

ContextPtr parse_context(const Json& j, int order) {
    std::vector<GeneratorSpec> gens;
    try {
        for (const auto& g : j.at("generators")) {
            GeneratorSpec s;
            s.name = g.at("name").get<std::string>();
            s.weight = g.value("weight", 1);
            s.rule = parse_adams_rule(g.value("adams", std::string("scaling")));
            s.max_exponent = g.value("max_exponent", -1);
            gens.push_back(std::move(s));
        }
        return make_context(std::move(gens), order);
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("ring context: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("ring context: ") + e.what());
    }
}

ContextPtr load_context(const std::string& path, int order) {
    if (path.empty()) return make_context({}, order);
    return parse_context(read_json(path), order);
}

KBasis parse_basis(const Json& j) {
    if (j.is_string() && j.get<std::string>() == "point") return KBasis::point();
    KBasis b;
    try {
        b.rank = j.at("rank").get<int>();
        b.pairing = json_matrix(j.at("pairing"));
        b.unit = j.value("unit", 0);
        if (j.contains("adams"))
            for (const auto& [k, m] : j.at("adams").items()) b.adams[std::stoi(k)] = json_matrix(m);
        b.validate();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("basis: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("basis: ") + e.what());
    }
    return b;
}

KBasis load_basis(const std::string& path) {
    if (path.empty()) return KBasis::point();
    return parse_basis(read_json(path));
}

Profile parse_profile(const Json& j, const ContextPtr& ctx, int rank, int max_cycle) {
    int width = std::max(max_cycle, j.value("max_cycle", 1));
    Profile p(width, Insertion(rank));
    try {
        for (const auto& [r, entries] : j.at("sectors").items()) {
            int sector = std::stoi(r);
            if (sector < 1 || sector > width) throw ConfigError("profile sector " + r + " outside 1.." + std::to_string(width));
            if (static_cast<int>(entries.size()) != rank)
                throw ConfigError("profile sector " + r + " needs one entry per basis vector");
            for (int a = 0; a < rank; ++a)
                for (const auto& [k, text] : entries[a].items())
                    p.at(sector)[a] += LFunction::l_power(std::stoi(k), Cyc(parse_series(ctx, text.get<std::string>())));
        }
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("profile: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("profile: ") + e.what());
    }
    if (!sector_weights_ok(p)) throw ConfigError("profile: sector r must have filtration weight at least r");
    return p;
}

Profile load_profile(const std::string& path, const ContextPtr& ctx, int rank, int max_cycle) {
    if (path.empty()) return Profile(max_cycle, Insertion(rank));
    return parse_profile(read_json(path), ctx, rank, max_cycle);
}

Json profile_json(const Profile& p) {
    Json sectors = Json::object();
    for (int r = 1; r <= p.max_cycle(); ++r) {
        Json row = Json::array();
        bool any = false;
        for (const auto& f : p[r]) {
            Json e = Json::object();
            for (const auto& [k, c] : f.poly().poly()) {
                e[std::to_string(k)] = cyc_string(c);
                any = true;
            }
            row.push_back(e);
        }
        if (any) sectors[std::to_string(r)] = row;
    }
    return {{"max_cycle", p.max_cycle()}, {"sectors", sectors}};
}

std::string cyc_string(const Cyc& c) { return c.str(); }

Json insertion_json(const Insertion& f) {
    Json out = Json::array();
    for (const auto& c : f) out.push_back(c.is_polynomial() ? c.poly().str() : c.str());
    return out;
}

Json background_json(const Background& b) {
    Json out = Json::object();
    for (int r = 1; r <= b.max_cycle(); ++r) out[std::to_string(r)] = insertion_json(b[r]);
    return out;
}

Json report_json(const VerifyReport& r) {
    Json j = {{"suite", r.suite}, {"ok", r.ok()}, {"checked", r.checked}, {"skipped", r.skipped}};
    if (!r.ok()) {
        j["violations"] = r.violations.size();
        const auto& v = r.violations.front();
        j["counterexample"] = {{"key", v.key}, {"detail", v.detail}};
    }
    return j;
}

Json identity_json(const IdentityReport& r) {
    Json j = {{"identity", r.name}, {"ok", r.ok}};
    if (!r.ok) j["counterexample"] = r.detail;
    return j;
}

std::vector<std::pair<std::string, Table>> load_table_dir(const std::string& dir, const ContextPtr& ctx) {
    std::vector<std::pair<std::string, Table>> out;
    if (dir.empty()) return out;
    if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out.emplace_back(f.filename().string(), load_table(f.string(), ctx));
    return out;
}

}  // namespace qkr
