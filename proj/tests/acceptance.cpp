// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. Tolerances and time limits are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "andor/harness.hpp"
#include "andor/metamath/environment.hpp"
#include "andor/metamath/verifier.hpp"
#include "andor/policies.hpp"
#include "andor/synthetic.hpp"
#include "bandit_cases.hpp"

using namespace andor;

namespace {

constexpr double kFormulaTolerance = 1e-12;
constexpr double kPpTolerance = 1e-9;
constexpr std::size_t kMinFormulaCases = 20;
constexpr std::size_t kOracleTrees = 500;
constexpr std::uint64_t kOraclePasses = 20000;
constexpr std::size_t kMinimaxTrees = 200;
constexpr std::size_t kPpTrees = 100;
constexpr std::uint64_t kMetamathPasses = 2000;
constexpr unsigned kMetamathDepth = 4;
constexpr unsigned kMetamathBreadth = 16;
constexpr std::uint64_t kScalingBudgets[] = {10, 50, 250, 1250};
constexpr std::size_t kScalingTrees = 200;
constexpr double kScalingNoise = 0.3;

constexpr Algorithm kTreePolicies[] = {Algorithm::holophrasm, Algorithm::puct,      Algorithm::pp,
                                       Algorithm::pns,        Algorithm::hypertree, Algorithm::pp_puct,
                                       Algorithm::pp_modified_bandit};

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

bool report(const std::string& name, double limit_seconds, const std::function<Outcome()>& run) {
    const auto start = Clock::now();
    Outcome outcome;
    try {
        outcome = run();
    } catch (const std::exception& e) {
        outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_time = seconds < limit_seconds;
    const bool pass = outcome.pass && in_time;
    std::ostringstream line;
    line.precision(3);
    line << (pass ? "PASS " : "FAIL ") << name << ": " << outcome.detail << " [" << std::fixed << seconds
         << " s, limit " << limit_seconds << " s" << (in_time ? "" : ", TOO SLOW") << "]";
    std::cout << line.str() << std::endl;
    return pass;
}

std::shared_ptr<const synthetic::SyntheticTree> tree_for(const synthetic::SyntheticSpec& spec) {
    return std::make_shared<const synthetic::SyntheticTree>(synthetic::generate(spec));
}

/// The suite shared by the oracle and PNS criteria: depth <= 5, branching <= 3.
std::vector<synthetic::SyntheticSpec> oracle_suite() {
    auto suite = synthetic::make_suite(kOracleTrees);
    for (const auto& s : suite) {
        if (s.max_depth > 5 || s.or_branching > 3 || s.and_branching > 3 || s.oracle_noise != 0.0) {
            throw std::logic_error("suite spec outside depth 5 / branching 3 / noise 0");
        }
    }
    return suite;
}

AndNode node(double value, std::uint64_t visit, double prior) {
    AndNode n;
    n.value = value;
    n.visit = visit;
    n.prior = prior;
    return n;
}

Outcome bandit_formulas() {
    double worst = 0.0;
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& c : bandit_cases::kHolophrasm) {
        worst = std::max(worst, std::abs(holophrasm_valuation(c.father, node(c.value, c.visit, c.prior)) - c.expected));
        ++counts[0];
    }
    for (const auto& c : bandit_cases::kPuct) {
        worst = std::max(worst, std::abs(puct_valuation(c.father, node(c.value, c.visit, c.prior), c.c) - c.expected));
        ++counts[1];
    }
    for (const auto& c : bandit_cases::kModified) {
        worst = std::max(worst,
                         std::abs(modified_valuation(c.father, node(c.value, c.visit, c.prior), c.a, c.b) - c.expected));
        ++counts[2];
    }
    // degenerate identities must hold exactly
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t identity_failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const AndNode n = node(unit(rng) * 5.0, 1 + rng() % 50, unit(rng));
        const double father = static_cast<double>(1 + rng() % 10000);
        identity_failures += puct_valuation(father, n, 0.0) != n.value / static_cast<double>(n.visit);
        identity_failures += modified_valuation(father, n, 0.0, 0.0) != n.value;
    }
    const bool enough = std::min({counts[0], counts[1], counts[2]}) >= kMinFormulaCases;
    std::ostringstream d;
    d << counts[0] << "/" << counts[1] << "/" << counts[2] << " cases (holophrasm/puct/modified), max |err| "
      << worst << " (tol " << kFormulaTolerance << "), degenerate identity failures " << identity_failures;
    return {enough && worst <= kFormulaTolerance && identity_failures == 0, d.str()};
}

Outcome oracle_equivalence() {
    const auto suite = oracle_suite();
    std::map<Algorithm, std::size_t> agree;
    std::size_t provable = 0;
    for (const auto& spec : suite) {
        auto tree = tree_for(spec);
        const bool truth = synthetic::brute_force_provable(*tree);
        provable += truth ? 1 : 0;
        for (Algorithm a : kTreePolicies) {
            synthetic::SyntheticEnvironment env(tree);
            SearchConfig config;
            config.algorithm = a;
            config.max_passes = kOraclePasses;
            const SearchResult r = run_search(env, config);
            const bool match = r.status == (truth ? SearchStatus::proved : SearchStatus::disproved);
            const bool sound_proof = !r.proof || synthetic::check_proof(*tree, *r.proof);
            agree[a] += (match && sound_proof) ? 1 : 0;
        }
    }
    bool all = true;
    std::ostringstream d;
    d << suite.size() << " trees (" << provable << " provable);";
    for (Algorithm a : kTreePolicies) {
        d << ' ' << to_string(a) << ' ' << agree[a] << '/' << suite.size();
        all = all && agree[a] == suite.size();
    }
    return {all, d.str()};
}

Outcome minimax_exhaustive() {
    const auto suite = synthetic::make_suite(kMinimaxTrees, 2);
    std::size_t agree = 0;
    for (const auto& spec : suite) {
        auto tree = tree_for(spec);
        synthetic::SyntheticEnvironment env(tree);
        SearchConfig config;
        config.algorithm = Algorithm::minimax;
        config.minimax_depth = spec.max_depth;
        config.minimax_breadth = spec.or_branching;
        const SearchResult r = run_search(env, config);
        agree += (r.status == SearchStatus::proved) == synthetic::brute_force_provable(*tree) ? 1 : 0;
    }
    std::ostringstream d;
    d << agree << '/' << suite.size() << " verdicts equal the oracle (depth = tree depth, breadth = branching)";
    return {agree == suite.size(), d.str()};
}

Outcome pp_exactness() {
    const auto suite = synthetic::make_suite(kPpTrees, 3);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (const auto& spec : suite) {
        auto tree = tree_for(spec);
        std::vector<double> leaves(tree->or_nodes.size(), 0.0);
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            leaves[i] = tree->or_nodes[i].leaf_proven ? 1.0 : unit(rng);
        }
        synthetic::SyntheticEnvironment env(tree, leaves);
        SearchConfig config;
        config.algorithm = Algorithm::pp;
        config.dead_marking = false;
        Searcher searcher(env, config);
        if (!expand_exhaustively(searcher.root(), searcher.context(), 10'000'000)) {
            return {false, "node cap hit during exhaustive expansion"};
        }
        searcher.refresh_values();
        worst = std::max(worst, std::abs(searcher.root().value - synthetic::brute_force_pp_value(*tree, leaves)));
    }
    std::ostringstream d;
    d << suite.size() << " trees, max |root value - exact| " << worst << " (tol " << kPpTolerance << ")";
    return {worst <= kPpTolerance, d.str()};
}

Outcome pns_correctness() {
    const auto suite = oracle_suite();
    std::size_t agree = 0;
    for (const auto& spec : suite) {
        auto tree = tree_for(spec);
        const bool truth = synthetic::brute_force_provable(*tree);
        synthetic::SyntheticEnvironment env(tree);
        SearchConfig config;
        config.algorithm = Algorithm::pns;
        config.max_passes = kOraclePasses;
        Searcher searcher(env, config);
        searcher.run();
        const bool ok = (searcher.root().pn == 0) == truth && (searcher.root().dpn == 0) == !truth;
        agree += ok ? 1 : 0;
    }
    std::ostringstream d;
    d << agree << '/' << suite.size() << " roots with pn = 0 iff provable and dpn = 0 iff disprovable";
    return {agree == suite.size(), d.str()};
}

Outcome metamath_end_to_end(const std::string& db_path) {
    const auto db = std::make_shared<const metamath::MmDatabase>(metamath::parse_file(db_path));
    std::size_t theorems = 0;
    std::size_t minimax_proved = 0;
    std::size_t pp_proved = 0;
    std::size_t mb_proved = 0;
    std::size_t proofs = 0;
    std::size_t accepted = 0;
    std::vector<std::string> misses;

    auto attempt = [&](const std::string& label, SearchConfig config) {
        metamath::MetamathEnvironment env(db, label);
        const SearchResult r = run_search(env, config);
        if (!r.proof) {
            return false;
        }
        ++proofs;
        const auto verdict = metamath::verify_proof(*db, label, env.extract_proof(*r.proof));
        accepted += verdict.accepted() ? 1 : 0;
        if (!verdict) {
            misses.push_back(label + " (" + std::string(to_string(config.algorithm)) + " proof rejected)");
        }
        return verdict.accepted();
    };

    for (const auto& a : db->assertions()) {
        if (a.axiom || !db->is_logical(a)) {
            continue;
        }
        ++theorems;
        SearchConfig minimax;
        minimax.algorithm = Algorithm::minimax;
        minimax.minimax_depth = kMetamathDepth;
        minimax.minimax_breadth = kMetamathBreadth;
        if (!attempt(a.label, minimax)) {
            continue;
        }
        ++minimax_proved;
        for (Algorithm policy : {Algorithm::pp, Algorithm::pp_modified_bandit}) {
            SearchConfig config;
            config.algorithm = policy;
            config.max_passes = kMetamathPasses;
            if (attempt(a.label, config)) {
                ++(policy == Algorithm::pp ? pp_proved : mb_proved);
            } else {
                misses.push_back(a.label + " (" + std::string(to_string(policy)) + ")");
            }
        }
    }
    std::ostringstream d;
    d << theorems << " theorems, minimax proves " << minimax_proved << "; pp " << pp_proved << '/' << minimax_proved
      << ", pp-mb " << mb_proved << '/' << minimax_proved << "; verifier accepts " << accepted << '/' << proofs;
    for (const auto& m : misses) {
        d << "; missed " << m;
    }
    const bool pass = minimax_proved > 0 && pp_proved == minimax_proved && mb_proved == minimax_proved &&
                      accepted == proofs;
    return {pass, d.str()};
}

std::vector<harness::BenchRow> scaling_rows(std::size_t jobs) {
    const auto problems = harness::synthetic_problems(synthetic::make_suite(kScalingTrees, 4, kScalingNoise));
    std::vector<SearchConfig> configs;
    for (Algorithm a : kAllAlgorithms) {
        for (std::uint64_t n : kScalingBudgets) {
            SearchConfig c;
            c.algorithm = a;
            c.max_passes = n;
            configs.push_back(c);
        }
    }
    return harness::sweep(problems, configs, jobs);
}

std::size_t worker_count() {
    return std::max(1u, std::thread::hardware_concurrency());
}

Outcome scaling_curve() {
    const auto rows = scaling_rows(worker_count());
    std::ostringstream csv;
    harness::write_summary_csv(csv, rows);

    // read the counts back from the CSV itself
    std::map<std::string, std::vector<std::pair<std::uint64_t, std::size_t>>> curves;
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) {
            cells.push_back(cell);
        }
        curves[cells.at(0)].emplace_back(std::stoull(cells.at(1)), std::stoull(cells.at(3)));
    }
    bool monotone = true;
    std::ostringstream d;
    d << kScalingTrees << " trees (noise " << kScalingNoise << "), proved at budgets 10/50/250/1250:";
    for (Algorithm a : kAllAlgorithms) {
        auto curve = curves[std::string(to_string(a))];
        std::sort(curve.begin(), curve.end());
        d << ' ' << to_string(a) << ' ';
        for (std::size_t i = 0; i < curve.size(); ++i) {
            d << (i ? "/" : "") << curve[i].second;
            if (i > 0 && curve[i].second < curve[i - 1].second) {
                monotone = false;
            }
        }
        monotone = monotone && curve.size() == std::size(kScalingBudgets);
    }
    return {monotone, d.str()};
}

std::string proved_column(const std::vector<harness::BenchRow>& rows) {
    std::string out;
    for (const auto& r : rows) {
        out += r.proved ? "true\n" : "false\n";
    }
    return out;
}

Outcome determinism(const std::string& db_path) {
    auto db = std::make_shared<const metamath::MmDatabase>(metamath::parse_file(db_path));
    auto run = [&](std::size_t jobs) {
        std::vector<SearchConfig> configs;
        for (Algorithm a : kAllAlgorithms) {
            for (std::uint64_t n : {25, 400}) {
                SearchConfig c;
                c.algorithm = a;
                c.max_passes = n;
                c.seed = 7;
                configs.push_back(c);
            }
        }
        auto problems = harness::synthetic_problems(synthetic::make_suite(60, 5, 0.5));
        auto mm = harness::metamath_problems(db, {});
        problems.insert(problems.end(), mm.begin(), mm.end());
        return harness::sweep(problems, configs, jobs);
    };
    const auto first = run(worker_count());
    const auto second = run(worker_count());
    const auto serial = run(1);
    const std::string a = proved_column(first);
    const bool same = a == proved_column(second) && a == proved_column(serial);
    std::ostringstream d;
    d << first.size() << " rows, three reruns (parallel, parallel, serial) "
      << (same ? "byte-identical" : "DIFFER") << " in the proved column";
    return {same, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string db_path = argc > 1 ? argv[1] : std::string(ANDOR_SOURCE_DIR) + "/data/toy.mm";
    bool ok = true;
    ok &= report("bandit-formulas", 1, bandit_formulas);
    ok &= report("oracle-equivalence", 300, oracle_equivalence);
    ok &= report("minimax-exhaustive", 60, minimax_exhaustive);
    ok &= report("pp-exactness", 60, pp_exactness);
    ok &= report("pns-correctness", 120, pns_correctness);
    ok &= report("metamath-end-to-end", 120, [&] { return metamath_end_to_end(db_path); });
    ok &= report("scaling-curve", 180, scaling_curve);
    ok &= report("determinism", 600, [&] { return determinism(db_path); });
    return ok ? 0 : 1;
}
