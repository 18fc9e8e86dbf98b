#pragma once

// Built-in jobs with their expected verdicts.

#include "crnd/job.hpp"

#include <functional>
#include <string>
#include <vector>

namespace crnd {

struct CorpusEntry {
    std::string name;
    std::string description;
    const char* job_json;
    bool nondegenerate;
    int k0;                            // when nondegenerate
    std::vector<std::size_t> dims;     // expected dims E_0.. (empty: unchecked)
    std::vector<std::size_t> support;  // coordinates allowed to be nonzero in every generator (empty: all)
};

struct CorpusOutcome {
    std::string name;
    bool pass = false;
    std::string expected;
    std::string got;
    std::string detail;
    Report report;
};

inline const std::vector<CorpusEntry>& corpus()
{
    static const std::vector<CorpusEntry> entries = {
        {"quadric-z2",
         "H = (z^2, w) from Im w = |z|^4 into Im w = |z|^2",
         R"job({"truncation_order": 6,
             "source": {"type": "graph", "vars": ["z"], "real_vars": ["w"], "phi": ["z^2*conj(z)^2"]},
             "target": {"type": "graph", "vars": ["z"], "real_vars": ["w"], "phi": ["z*conj(z)"]},
             "map": {"components": ["z^2", "w"]}})job",
         true, 2, {1, 1, 2}, {}},
        {"quadric-codim2",
         "H = (z, w, w) from Im w = |z|^2 into Im w1 = Im w2 = |z|^2",
         R"job({"truncation_order": 6,
             "source": {"type": "graph", "vars": ["z"], "real_vars": ["w"], "phi": ["z*conj(z)"]},
             "target": {"type": "graph", "vars": ["z"], "real_vars": ["w1", "w2"],
                        "phi": ["z*conj(z)", "z*conj(z)"]},
             "map": {"components": ["z", "w", "w"]}})job",
         true, 1, {2, 3}, {}},
        {"sphere-map-1",
         "(z1, z1 z2, z2^2) from the sphere in C^2 at (1,0) into the sphere in C^3 at (1,0,0)",
         R"job({"truncation_order": 6,
             "source": {"type": "extrinsic", "vars": ["Z1", "Z2"],
                        "rho": ["Z1*conj(Z1) + Z2*conj(Z2) - 1"], "basepoint": ["1", "0"]},
             "target": {"type": "extrinsic", "vars": ["W1", "W2", "W3"],
                        "rho": ["W1*conj(W1) + W2*conj(W2) + W3*conj(W3) - 1"], "basepoint": ["1", "0", "0"]},
             "map": {"components": ["Z1", "Z1*Z2", "Z2^2"]}})job",
         true, 2, {}, {}},
        {"sphere-map-2",
         "(z1^2, sqrt(2) z1 z2, z2^2) between the same spheres",
         R"job({"truncation_order": 6,
             "source": {"type": "extrinsic", "vars": ["Z1", "Z2"],
                        "rho": ["Z1*conj(Z1) + Z2*conj(Z2) - 1"], "basepoint": ["1", "0"]},
             "target": {"type": "extrinsic", "vars": ["W1", "W2", "W3"],
                        "rho": ["W1*conj(W1) + W2*conj(W2) + W3*conj(W3) - 1"], "basepoint": ["1", "0", "0"]},
             "map": {"components": ["Z1^2", "sqrt(2)*Z1*Z2", "Z2^2"]}})job",
         true, 2, {}, {}},
        {"sphere-map-3",
         "(z1^3, sqrt(3) z1 z2, z2^3) between the same spheres",
         R"job({"truncation_order": 6,
             "source": {"type": "extrinsic", "vars": ["Z1", "Z2"],
                        "rho": ["Z1*conj(Z1) + Z2*conj(Z2) - 1"], "basepoint": ["1", "0"]},
             "target": {"type": "extrinsic", "vars": ["W1", "W2", "W3"],
                        "rho": ["W1*conj(W1) + W2*conj(W2) + W3*conj(W3) - 1"], "basepoint": ["1", "0", "0"]},
             "map": {"components": ["Z1^3", "sqrt(3)*Z1*Z2", "Z2^3"]}})job",
         true, 3, {}, {}},
        {"sphere-linear",
         "linear embedding (z, 0) of the sphere in C^3 into the sphere in C^4",
         R"job({"truncation_order": 6,
             "source": {"type": "extrinsic", "vars": ["Z1", "Z2", "Z3"],
                        "rho": ["Z1*conj(Z1) + Z2*conj(Z2) + Z3*conj(Z3) - 1"], "basepoint": ["1", "0", "0"]},
             "target": {"type": "extrinsic", "vars": ["W1", "W2", "W3", "W4"],
                        "rho": ["W1*conj(W1) + W2*conj(W2) + W3*conj(W3) + W4*conj(W4) - 1"],
                        "basepoint": ["1", "0", "0", "0"]},
             "map": {"components": ["Z1", "Z2", "Z3", "0"]}})job",
         false, -1, {1, 3, 3, 3, 3, 3, 3}, {0, 1, 2}},
        {"twisted-quadric",
         "H = (z^2, z, 0) into Im tau = |zeta1 + zeta2 - zeta2^2|^2 - |zeta2|^2",
         R"job({"truncation_order": 6,
             "source": {"type": "graph", "vars": ["z"], "real_vars": ["w"], "phi": ["z*conj(z)"]},
             "target": {"type": "extrinsic", "vars": ["zeta1", "zeta2", "tau"],
                        "rho": ["-1/2*i*(tau - conj(tau)) - (zeta1 + zeta2 - zeta2^2)*conj(zeta1 + zeta2 - zeta2^2) + zeta2*conj(zeta2)"]},
             "map": {"components": ["z^2", "z", "0"]}})job",
         false, -1, {1, 2, 2, 2, 2, 2, 2}, {0, 2}},
        {"quartic-identity",
         "identity map of Im w = |z|^4",
         R"job({"truncation_order": 6,
             "source": {"type": "graph", "vars": ["z"], "real_vars": ["w"], "phi": ["z^2*conj(z)^2"]},
             "target": {"type": "graph", "vars": ["z"], "real_vars": ["w"], "phi": ["z^2*conj(z)^2"]},
             "map": {"components": ["z", "w"]}})job",
         false, -1, {1, 1, 1, 1, 1, 1, 1}, {1}},
    };
    return entries;
}

inline Job corpus_job(const CorpusEntry& e)
{
    Job job = job_from_json(json::parse(e.job_json));
    job.name = e.name;
    return job;
}

inline std::string expected_verdict(const CorpusEntry& e, int k_max)
{
    return e.nondegenerate ? "nondegenerate(" + std::to_string(e.k0) + ")"
                           : "degenerate_up_to(" + std::to_string(k_max) + ")";
}

/// Runs one entry and compares verdict, dimensions and generator support with the expectation.
inline CorpusOutcome run_corpus_entry(const CorpusEntry& e)
{
    CorpusOutcome out;
    out.name = e.name;
    try {
        const Job job = corpus_job(e);
        const JobRun run = run_job(job);
        const auto& rep = run.analysis.report;
        out.report = run.report;
        out.expected = expected_verdict(e, rep.max_order);
        out.got = rep.verdict();
        out.pass = out.expected == out.got;
        if (out.pass && !e.dims.empty() && run.report.dims != e.dims) {
            out.pass = false;
            out.detail = "dimension ladder differs";
        }
        if (out.pass && !e.support.empty()) {
            for (const auto& row : rep.ladder.generators(rep.max_order))
                for (std::size_t c = 0; c < row.size(); ++c)
                    if (!row[c].is_zero() && std::find(e.support.begin(), e.support.end(), c) == e.support.end()) {
                        out.pass = false;
                        out.detail = "generator leaves the expected subspace in coordinate " + std::to_string(c + 1);
                    }
        }
        if (out.pass && !(run.report.maps_into_target && run.report.tangency_ladder_ok)) {
            out.pass = false;
            out.detail = run.analysis.tangency_ladder.diagnostic;
        }
    } catch (const std::exception& ex) {
        out.pass = false;
        out.got = "error";
        out.detail = ex.what();
    }
    return out;
}

}  // namespace crnd
