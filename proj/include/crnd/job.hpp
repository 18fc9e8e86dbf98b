#pragma once

// JSON job files and machine-readable reports.
//
// {"truncation_order": 8,
//  "source": {"type": "extrinsic", "vars": ["Z1","Z2"], "rho": ["..."], "basepoint": ["1","0"]},
//  "target": {"type": "graph", "vars": ["z"], "real_vars": ["w"], "phi": ["z*conj(z)"]},
//  "map":    {"components": ["..."], "source_basepoint": [...], "target_basepoint": [...]}}
//
// In a graph block the names in "real_vars" denote Re w inside phi; map components refer to the
// holomorphic coordinates (vars, real_vars) of the source.

#include "crnd/engine.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace crnd {

inline constexpr const char* kToolName = "crnd";
inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr int kDefaultMaxOrder = 10;

using json = nlohmann::json;

struct ManifoldBlock {
    std::string type;  // "graph" or "extrinsic"
    std::vector<std::string> vars;
    std::vector<std::string> real_vars;
    std::vector<std::string> equations;  // rho or phi
    std::vector<std::string> basepoint;
};

struct Job {
    std::string name;
    std::optional<int> truncation_order;
    ManifoldBlock source;
    ManifoldBlock target;
    std::vector<std::string> components;
    std::vector<std::string> source_basepoint;
    std::vector<std::string> target_basepoint;
};

namespace detail {

inline std::vector<std::string> string_list(const json& j, const char* key, const std::string& where, bool required)
{
    if (!j.contains(key)) {
        if (required) throw InputError(where + ": missing \"" + key + "\"");
        return {};
    }
    const json& v = j.at(key);
    if (!v.is_array()) throw InputError(where + ": \"" + key + "\" must be an array of strings");
    std::vector<std::string> out;
    for (const auto& x : v) {
        if (x.is_string()) out.push_back(x.get<std::string>());
        else if (x.is_number_integer()) out.push_back(std::to_string(x.get<long long>()));
        else throw InputError(where + ": \"" + key + "\" must contain strings");
    }
    return out;
}

inline ManifoldBlock manifold_block(const json& j, const std::string& where)
{
    if (!j.is_object()) throw InputError(where + " must be an object");
    ManifoldBlock b;
    b.type = j.value("type", std::string("extrinsic"));
    b.vars = string_list(j, "vars", where, true);
    if (b.type == "graph") {
        b.real_vars = string_list(j, "real_vars", where, true);
        b.equations = string_list(j, "phi", where, true);
        b.basepoint = string_list(j, "basepoint", where, false);
    } else if (b.type == "extrinsic") {
        b.equations = string_list(j, "rho", where, true);
        b.basepoint = string_list(j, "basepoint", where, false);
    } else {
        throw InputError(where + ": unknown type \"" + b.type + "\" (expected graph or extrinsic)");
    }
    return b;
}

inline std::vector<Scalar> parse_point(const std::vector<std::string>& text, std::size_t arity, const std::string& what)
{
    if (text.empty()) return std::vector<Scalar>(arity);
    if (text.size() != arity)
        throw InputError(what + " has " + std::to_string(text.size()) + " coordinates, expected "
                         + std::to_string(arity));
    std::vector<Scalar> p;
    for (const auto& t : text) {
        try {
            p.push_back(parse_scalar(t));
        } catch (const ParseError& e) {
            throw InputError(what + ": \"" + t + "\" is not a field element: " + e.what());
        }
    }
    return p;
}

inline std::vector<std::string> ambient_names(const ManifoldBlock& b)
{
    std::vector<std::string> all = b.vars;
    all.insert(all.end(), b.real_vars.begin(), b.real_vars.end());
    return all;
}

inline int max_degree_of(const std::vector<std::string>& exprs, const VarSpace& vars, const std::string& what)
{
    int deg = 0;
    for (const auto& t : exprs) {
        try {
            deg = std::max(deg, degree_bound(parse_expr(t, vars)));
        } catch (const ParseError& e) {
            throw InputError(what + ": \"" + t + "\": " + e.what());
        }
    }
    return deg;
}

inline const VarSpace& block_space(const ManifoldBlock& b, SpacePtr& keep)
{
    keep = b.type == "graph" ? VarSpace::graph(b.vars, b.real_vars) : VarSpace::ambient(b.vars);
    return *keep;
}

}  // namespace detail

inline Job job_from_json(const json& j)
{
    if (!j.is_object()) throw InputError("job file must contain a JSON object");
    Job job;
    job.name = j.value("name", std::string());
    if (j.contains("truncation_order")) {
        if (!j.at("truncation_order").is_number_integer() || j.at("truncation_order").get<int>() < 0)
            throw InputError("truncation_order must be a nonnegative integer");
        job.truncation_order = j.at("truncation_order").get<int>();
    }
    if (!j.contains("source")) throw InputError("job: missing \"source\"");
    if (!j.contains("target")) throw InputError("job: missing \"target\"");
    if (!j.contains("map")) throw InputError("job: missing \"map\"");
    job.source = detail::manifold_block(j.at("source"), "source");
    job.target = detail::manifold_block(j.at("target"), "target");
    const json& m = j.at("map");
    job.components = detail::string_list(m, "components", "map", true);
    job.source_basepoint = detail::string_list(m, "source_basepoint", "map", false);
    job.target_basepoint = detail::string_list(m, "target_basepoint", "map", false);
    return job;
}

inline Job load_job(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open job file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": invalid JSON: " + e.what());
    }
    return job_from_json(j);
}

inline json block_to_json(const ManifoldBlock& b)
{
    json j{{"type", b.type}, {"vars", b.vars}};
    if (b.type == "graph") {
        j["real_vars"] = b.real_vars;
        j["phi"] = b.equations;
    } else {
        j["rho"] = b.equations;
    }
    if (!b.basepoint.empty()) j["basepoint"] = b.basepoint;
    return j;
}

inline json job_to_json(const Job& job)
{
    json j;
    if (!job.name.empty()) j["name"] = job.name;
    if (job.truncation_order) j["truncation_order"] = *job.truncation_order;
    j["source"] = block_to_json(job.source);
    j["target"] = block_to_json(job.target);
    json m{{"components", job.components}};
    if (!job.source_basepoint.empty()) m["source_basepoint"] = job.source_basepoint;
    if (!job.target_basepoint.empty()) m["target_basepoint"] = job.target_basepoint;
    j["map"] = m;
    return j;
}

/// K_max from the environment (CRND_MAX_ORDER), else the built-in default.
inline int env_max_order()
{
    if (const char* v = std::getenv("CRND_MAX_ORDER")) {
        char* end = nullptr;
        const long k = std::strtol(v, &end, 10);
        if (end != v && *end == '\0' && k >= 0 && k < 200) return static_cast<int>(k);
        throw InputError("CRND_MAX_ORDER must be a nonnegative integer");
    }
    return kDefaultMaxOrder;
}

/// Flag, then job file, then environment, then the default.
inline int resolve_max_order(const Job& job, std::optional<int> flag)
{
    if (flag) return *flag;
    if (job.truncation_order) return *job.truncation_order;
    return env_max_order();
}

/// max(K_max, degree of the inputs) + 1.
inline int working_order(const Job& job, int k_max)
{
    SpacePtr s;
    int deg = 0;
    deg = std::max(deg, detail::max_degree_of(job.source.equations, detail::block_space(job.source, s), "source"));
    deg = std::max(deg, detail::max_degree_of(job.target.equations, detail::block_space(job.target, s), "target"));
    const SpacePtr src_ambient = VarSpace::ambient(detail::ambient_names(job.source));
    deg = std::max(deg, detail::max_degree_of(job.components, *src_ambient, "map"));
    return std::max(k_max, deg) + 1;
}

/// Parsed job at a working order: ready for prepare().
struct Instance {
    SourceManifold source;
    ExtrinsicManifold target;
    CRMap map;
    int max_order = 0;
    int order = 0;
};

inline Instance instantiate(const Job& job, int k_max)
{
    Instance in;
    in.max_order = k_max;
    in.order = working_order(job, k_max);
    const int k = in.order;
    auto build = [k](const ManifoldBlock& b, const std::string& what) -> SourceManifold {
        try {
            if (b.type == "graph") {
                if (!b.basepoint.empty())
                    for (const auto& x : detail::parse_point(b.basepoint, b.vars.size() + b.real_vars.size(), what))
                        if (!x.is_zero()) throw InputError(what + ": graph-form manifolds are based at 0");
                return GraphManifold::parse(b.vars, b.real_vars, b.equations, k);
            }
            ExtrinsicManifold m = ExtrinsicManifold::parse(
                b.vars, b.equations, detail::parse_point(b.basepoint, b.vars.size(), what + " base point"), k);
            m.validate();
            return m;
        } catch (const ParseError& e) {
            throw InputError(what + ": " + e.what());
        } catch (const JetError& e) {
            throw InputError(what + ": " + e.what());
        }
    };
    in.source = build(job.source, "source");
    SourceManifold t = build(job.target, "target");
    if (const auto* g = std::get_if<GraphManifold>(&t)) in.target = graph_to_extrinsic(*g);
    else in.target = std::get<ExtrinsicManifold>(t);

    const auto names = detail::ambient_names(job.source);
    const SpacePtr ambient = VarSpace::ambient(names);
    const auto src_bp_text = job.source_basepoint.empty() ? job.source.basepoint : job.source_basepoint;
    const auto tgt_bp_text = job.target_basepoint.empty() ? job.target.basepoint : job.target_basepoint;
    if (job.components.size() != in.target.N())
        throw InputError("map has " + std::to_string(job.components.size()) + " components but the target lives in C^"
                         + std::to_string(in.target.N()));
    try {
        in.map = CRMap::parse(ambient, job.components, detail::parse_point(src_bp_text, names.size(), "map source base point"),
                              detail::parse_point(tgt_bp_text, in.target.N(), "map target base point"), k);
    } catch (const ParseError& e) {
        throw InputError(std::string("map: ") + e.what());
    }
    if (in.target.basepoint != in.map.target_basepoint)
        throw InputError("map target base point differs from the target manifold's base point");
    return in;
}

inline Problem prepare(const Instance& in)
{
    return prepare(in.source, in.target, in.map);
}

/// Serializable summary of an analysis.
struct Report {
    std::string job;
    std::string verdict;  // "nondegenerate" or "degenerate_up_to"
    int k0 = -1;
    int max_order = 0;
    int working_order = 0;
    std::size_t target_dimension = 0;
    std::vector<std::size_t> dims;
    std::vector<std::size_t> examined;
    std::size_t multiindex_count = 0;
    struct WitnessEntry {
        std::vector<unsigned> alpha;
        std::size_t l = 0;  // 1-based
        std::vector<std::string> row;
        friend bool operator==(const WitnessEntry&, const WitnessEntry&) = default;
    };
    std::vector<WitnessEntry> witnesses;
    bool maps_into_target = false;
    bool tangency_ladder_ok = false;
    int tangency_depth = 0;
    double elapsed_ms = 0;

    friend bool operator==(const Report&, const Report&) = default;
};

inline Report make_report(const Analysis& a, const std::string& job, int working, double elapsed_ms)
{
    Report r;
    const auto& rep = a.report;
    r.job = job;
    r.verdict = rep.nondegenerate ? "nondegenerate" : "degenerate_up_to";
    r.k0 = rep.k0;
    r.max_order = rep.max_order;
    r.working_order = working;
    r.target_dimension = rep.ladder.width;
    const int last = rep.nondegenerate ? rep.k0 : rep.max_order;
    r.dims = rep.ladder.dims(last);
    for (int k = 0; k <= last; ++k) {
        const auto n = a.fields.size();
        r.examined.push_back(k < static_cast<int>(rep.ladder.steps.size()) ? rep.ladder.steps[static_cast<std::size_t>(k)].examined
                                                                           : multiindices(n, static_cast<unsigned>(k)).size());
    }
    r.multiindex_count = rep.multiindex_count;
    for (const auto& w : rep.ladder.witnesses(last)) {
        Report::WitnessEntry e;
        e.alpha = w.alpha;
        e.l = w.l + 1;
        for (const auto& x : w.row) e.row.push_back(x.to_string());
        r.witnesses.push_back(std::move(e));
    }
    r.maps_into_target = a.tangency.ok;
    r.tangency_ladder_ok = a.tangency_ladder.ok;
    r.tangency_depth = a.tangency_ladder.depth;
    r.elapsed_ms = elapsed_ms;
    return r;
}

inline json to_json(const Report& r)
{
    json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    if (!r.job.empty()) j["job"] = r.job;
    j["verdict"] = r.verdict;
    j["k0"] = r.k0 >= 0 ? json(r.k0) : json(nullptr);
    j["max_order"] = r.max_order;
    j["working_order"] = r.working_order;
    j["target_dimension"] = r.target_dimension;
    j["dims"] = r.dims;
    j["examined_multiindices"] = r.examined;
    j["multiindex_count"] = r.multiindex_count;
    json ws = json::array();
    for (const auto& w : r.witnesses) ws.push_back({{"alpha", w.alpha}, {"l", w.l}, {"row", w.row}});
    j["witnesses"] = ws;
    j["tangency"] = {{"maps_into_target", r.maps_into_target},
                     {"ladder_ok", r.tangency_ladder_ok},
                     {"ladder_depth", r.tangency_depth}};
    j["elapsed_ms"] = r.elapsed_ms;
    return j;
}

inline Report report_from_json(const json& j)
{
    Report r;
    r.job = j.value("job", std::string());
    r.verdict = j.at("verdict").get<std::string>();
    r.k0 = j.at("k0").is_null() ? -1 : j.at("k0").get<int>();
    r.max_order = j.at("max_order").get<int>();
    r.working_order = j.at("working_order").get<int>();
    r.target_dimension = j.at("target_dimension").get<std::size_t>();
    r.dims = j.at("dims").get<std::vector<std::size_t>>();
    r.examined = j.at("examined_multiindices").get<std::vector<std::size_t>>();
    r.multiindex_count = j.at("multiindex_count").get<std::size_t>();
    for (const auto& w : j.at("witnesses"))
        r.witnesses.push_back({w.at("alpha").get<std::vector<unsigned>>(), w.at("l").get<std::size_t>(),
                               w.at("row").get<std::vector<std::string>>()});
    const json& t = j.at("tangency");
    r.maps_into_target = t.at("maps_into_target").get<bool>();
    r.tangency_ladder_ok = t.at("ladder_ok").get<bool>();
    r.tangency_depth = t.at("ladder_depth").get<int>();
    r.elapsed_ms = j.at("elapsed_ms").get<double>();
    return r;
}

struct JobRun {
    Instance instance;
    Analysis analysis;
    Report report;
};

inline JobRun run_job(const Job& job, std::optional<int> max_order_flag = std::nullopt)
{
    const auto t0 = std::chrono::steady_clock::now();
    JobRun run;
    run.instance = instantiate(job, resolve_max_order(job, max_order_flag));
    AnalysisOptions opt;
    opt.max_order = run.instance.max_order;
    opt.tangency_depth = std::min(4, run.instance.order);
    run.analysis = analyze(prepare(run.instance), opt);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    run.report = make_report(run.analysis, job.name, run.instance.order, ms);
    return run;
}

}  // namespace crnd
