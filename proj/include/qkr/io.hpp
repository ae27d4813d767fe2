#pragma once

#include "qkr/recon_g1.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace qkr {

using Json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Task { ReconstructG0, ReconstructG1Point, Verify, ConeCheck };

Task parse_task(const std::string& text);
std::string to_string(Task task);

struct RunConfig {
    std::string context_path;
    std::string basis_path;  // empty: point target
    int order = 2;
    int max_cycle = 2;
    std::string tables;          // directory of genus-0 tables
    std::string genus1_tables;   // directory with fake.jsonl and balanced_M.jsonl
    Task task = Task::Verify;
    std::string input;           // input profile
    std::string out;             // report path; empty: standard output only
    bool force = false;          // run on tables that fail verification
    bool builtin = true;         // answer keys missing from the tables with the built-in point tables
    int cone_window = 2;         // exponent window for tangent vectors
    int cone_count = 5;          // ruling directions

    void validate() const;
    Json to_json() const;
};

// Reads a JSON config. Relative paths resolve against the config file's directory.
RunConfig load_config(const std::string& path);

// {"generators": [{"name": "t", "weight": 1, "adams": "scaling", "max_exponent": -1}, ...]}
ContextPtr load_context(const std::string& path, int order);
ContextPtr parse_context(const Json& j, int order);
// "point" or {"rank": n, "pairing": [[...]], "unit": i, "adams": {"k": [[...]]}}
KBasis load_basis(const std::string& path);
KBasis parse_basis(const Json& j);
// {"max_cycle": R, "sectors": {"r": [{"k": "series", ...} per basis vector]}}: the coefficient of L^k.
Profile load_profile(const std::string& path, const ContextPtr& ctx, int rank, int max_cycle);
Profile parse_profile(const Json& j, const ContextPtr& ctx, int rank, int max_cycle);
Json profile_json(const Profile& p);

std::string cyc_string(const Cyc& c);
// Insertion written as functions of q, one string per basis vector.
Json insertion_json(const Insertion& f);
Json background_json(const Background& b);
Json report_json(const VerifyReport& r);
Json identity_json(const IdentityReport& r);

// Every *.jsonl file in `dir`, in name order.
std::vector<std::pair<std::string, Table>> load_table_dir(const std::string& dir, const ContextPtr& ctx);

}  // namespace qkr
