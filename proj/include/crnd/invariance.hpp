#pragma once

// Random target coordinate changes and the row-space transformation check.

#include "crnd/job.hpp"

#include <random>
#include <string>
#include <vector>

namespace crnd {

/// Linear part I + strictly upper triangular, plus quadratic terms; all coefficients in {-2..2}.
inline std::vector<Jet> random_biholomorphism(const SpacePtr& ambient, int order, std::mt19937_64& rng)
{
    const std::size_t n = ambient->size() / 2;
    auto draw = [&rng] { return static_cast<int>(rng() % 5) - 2; };
    std::vector<Jet> f;
    for (std::size_t i = 0; i < n; ++i) {
        Jet c = Jet::variable(ambient, order, i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const int a = draw();
            if (a != 0) c += Scalar(a) * Jet::variable(ambient, order, j);
        }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b) {
                const int q = draw();
                if (q != 0)
                    c += Scalar(q) * (Jet::variable(ambient, order, a) * Jet::variable(ambient, order, b));
            }
        f.push_back(std::move(c));
    }
    return f;
}

struct InvarianceTrial {
    int index = 0;
    bool holds = false;
    std::string verdict;
    std::string transformed_verdict;
    std::vector<bool> per_k;
    std::vector<std::string> transform;
    std::string diagnostic;
};

struct InvarianceRun {
    std::string job;
    std::uint64_t seed = 0;
    int trials = 0;
    int max_order = 0;
    std::vector<InvarianceTrial> results;
    double elapsed_ms = 0;

    [[nodiscard]] bool all_hold() const
    {
        for (const auto& t : results)
            if (!t.holds) return false;
        return true;
    }
};

inline InvarianceRun run_invariance(const Job& job, std::uint64_t seed, int trials,
                                    std::optional<int> max_order_flag = std::nullopt)
{
    const auto t0 = std::chrono::steady_clock::now();
    InvarianceRun out;
    out.job = job.name;
    out.seed = seed;
    out.trials = trials;
    const Instance in = instantiate(job, resolve_max_order(job, max_order_flag));
    out.max_order = in.max_order;
    AnalysisOptions opt;
    opt.max_order = in.max_order;
    opt.tangency_depth = 0;
    const Problem base = prepare(in);
    const Analysis original = analyze(base, opt);
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        InvarianceTrial trial;
        trial.index = t;
        trial.verdict = original.report.verdict();
        try {
            const std::vector<Jet> f = random_biholomorphism(base.target.ambient, in.order, rng);
            for (const auto& c : f) trial.transform.push_back(c.to_string());
            const TransformedTarget tt = transform_target(base.target, f, base.map);
            Problem p{base.source, tt.target, tt.map, base.conversion};
            const Analysis moved = analyze(std::move(p), opt);
            trial.transformed_verdict = moved.report.verdict();
            const LawCheck law = check_transformation_law(original.report.ladder, moved.report.ladder, tt.jacobian,
                                                          in.max_order);
            trial.per_k = law.per_k;
            trial.holds = law.holds && trial.verdict == trial.transformed_verdict;
            trial.diagnostic = law.diagnostic;
            if (law.holds && !trial.holds) trial.diagnostic = "verdicts differ";
        } catch (const std::exception& e) {
            trial.holds = false;
            trial.diagnostic = e.what();
        }
        out.results.push_back(std::move(trial));
    }
    out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

inline json to_json(const InvarianceRun& r)
{
    json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    if (!r.job.empty()) j["job"] = r.job;
    j["seed"] = r.seed;
    j["trials"] = r.trials;
    j["max_order"] = r.max_order;
    j["all_hold"] = r.all_hold();
    json ts = json::array();
    for (const auto& t : r.results) {
        json x{{"trial", t.index},
               {"holds", t.holds},
               {"verdict", t.verdict},
               {"transformed_verdict", t.transformed_verdict},
               {"per_k", t.per_k},
               {"transform", t.transform}};
        if (!t.diagnostic.empty()) x["diagnostic"] = t.diagnostic;
        ts.push_back(std::move(x));
    }
    j["results"] = ts;
    j["elapsed_ms"] = r.elapsed_ms;
    return j;
}

}  // namespace crnd
