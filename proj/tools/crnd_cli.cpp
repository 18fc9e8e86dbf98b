// crnd: k0-nondegeneracy of polynomial CR maps.
//
//   crnd analyze <job.json> [--max-order K] [--json] [--witnesses]
//   crnd corpus [--json]
//   crnd invariance <job.json> --seed S --trials T [--json]

#include "crnd/crnd.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

namespace {

using namespace crnd;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitDegenerate = 2;

std::string row_string(const std::vector<std::string>& row)
{
    std::string s = "(";
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? ", " : "") + row[i];
    return s + ")";
}

void print_ladder(const Report& r, bool witnesses)
{
    std::cout << " k | dim E_k\n---+--------\n";
    for (std::size_t k = 0; k < r.dims.size(); ++k)
        std::cout << std::setw(2) << k << " | " << r.dims[k] << "\n";
    if (witnesses) {
        std::cout << "witnesses (alpha, l: row):\n";
        for (const auto& w : r.witnesses) {
            std::cout << "  " << multiindex_string(w.alpha) << ", " << w.l << ": " << row_string(w.row) << "\n";
        }
    }
    if (r.verdict == "nondegenerate")
        std::cout << "k0 = " << r.k0 << "  (N' = " << r.target_dimension << ", " << r.multiindex_count
                  << " multiindices with 1 <= |beta| <= k0)\n";
    else
        std::cout << "degenerate up to order " << r.max_order << "  (dim E_" << r.max_order << " = "
                  << r.dims.back() << " < N' = " << r.target_dimension << ")\n";
    std::cout << "tangency: map into target " << (r.maps_into_target ? "verified" : "FAILED") << ", ladder to |alpha| = "
              << r.tangency_depth << " " << (r.tangency_ladder_ok ? "zero" : "NONZERO") << "\n";
}

int cmd_analyze(const std::string& path, std::optional<int> max_order, bool as_json, bool witnesses)
{
    const Job job = load_job(path);
    const JobRun run = run_job(job, max_order);
    if (as_json) std::cout << to_json(run.report).dump(2) << "\n";
    else print_ladder(run.report, witnesses);
    return run.analysis.report.nondegenerate ? kExitOk : kExitDegenerate;
}

int cmd_corpus(bool as_json)
{
    json results = json::array();
    bool all = true;
    if (!as_json) std::cout << std::left << std::setw(18) << "job" << std::setw(22) << "expected" << std::setw(22) << "got"
                            << "result\n";
    for (const auto& e : corpus()) {
        const CorpusOutcome o = run_corpus_entry(e);
        all = all && o.pass;
        if (as_json) {
            json x{{"job", o.name}, {"expected", o.expected}, {"got", o.got}, {"pass", o.pass}};
            if (!o.detail.empty()) x["detail"] = o.detail;
            if (o.got != "error") x["report"] = to_json(o.report);
            results.push_back(std::move(x));
        } else {
            std::cout << std::left << std::setw(18) << o.name << std::setw(22) << o.expected << std::setw(22) << o.got
                      << (o.pass ? "PASS" : "FAIL");
            if (!o.detail.empty()) std::cout << "  " << o.detail;
            std::cout << "\n";
        }
    }
    if (as_json) std::cout << json{{"tool", kToolName}, {"version", kToolVersion}, {"all_pass", all}, {"results", results}}.dump(2) << "\n";
    return all ? kExitOk : kExitInputError;
}

int cmd_invariance(const std::string& path, std::uint64_t seed, int trials, std::optional<int> max_order, bool as_json)
{
    const Job job = load_job(path);
    const InvarianceRun run = run_invariance(job, seed, trials, max_order);
    if (as_json) {
        std::cout << to_json(run).dump(2) << "\n";
    } else {
        std::cout << "seed " << seed << ", " << trials << " trials, K_max = " << run.max_order << "\n";
        for (const auto& t : run.results) {
            std::cout << "trial " << t.index << ": " << (t.holds ? "holds" : "FAILS") << "  (" << t.verdict << " -> "
                      << t.transformed_verdict << ")";
            if (!t.diagnostic.empty()) std::cout << "  " << t.diagnostic;
            std::cout << "\n";
        }
    }
    return run.all_hold() ? kExitOk : kExitInputError;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact k0-nondegeneracy analysis of polynomial CR maps"};
    app.set_version_flag("--version", std::string(crnd::kToolVersion));
    app.require_subcommand(1);

    std::string job_path;
    std::optional<int> max_order;
    bool as_json = false;
    bool witnesses = false;
    std::uint64_t seed = 0;
    int trials = 0;

    auto* analyze = app.add_subcommand("analyze", "Compute the E_k ladder and k0 for a job file");
    analyze->add_option("job", job_path, "Job file (JSON)")->required();
    analyze->add_option("--max-order", max_order, "Largest k examined (K_max)")->check(CLI::NonNegativeNumber);
    analyze->add_flag("--json", as_json, "Machine-readable report");
    analyze->add_flag("--witnesses", witnesses, "Print the spanning multiindices");

    auto* corpus = app.add_subcommand("corpus", "Run the built-in examples against their expected verdicts");
    corpus->add_flag("--json", as_json, "Machine-readable results");

    auto* inv = app.add_subcommand("invariance", "Check the row-space law under random target coordinate changes");
    inv->add_option("job", job_path, "Job file (JSON)")->required();
    inv->add_option("--seed", seed, "PRNG seed")->required();
    inv->add_option("--trials", trials, "Number of random changes")->required()->check(CLI::NonNegativeNumber);
    inv->add_option("--max-order", max_order, "Largest k examined (K_max)")->check(CLI::NonNegativeNumber);
    inv->add_flag("--json", as_json, "Machine-readable report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    try {
        if (*analyze) return cmd_analyze(job_path, max_order, as_json, witnesses);
        if (*corpus) return cmd_corpus(as_json);
        if (*inv) return cmd_invariance(job_path, seed, trials, max_order, as_json);
    } catch (const crnd::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const crnd::ParseError& e) {
        std::cerr << "parse error " << e.what() << "\n";
        return kExitInputError;
    } catch (const crnd::JetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return kExitInputError;
}
