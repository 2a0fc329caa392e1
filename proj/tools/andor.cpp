// Command-line front end: prove, bench, gen, verify.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "andor/harness.hpp"
#include "andor/metamath/environment.hpp"
#include "andor/metamath/verifier.hpp"
#include "andor/policies.hpp"
#include "andor/synthetic.hpp"

namespace {

using namespace andor;

constexpr int kNotProved = 1;
constexpr int kFailure = 2;

struct SearchFlags {
    std::vector<std::string> algorithms{"pp"};
    std::uint64_t passes = 1000;
    std::string time_limit;
    std::size_t beam = 10;
    double c = 0.2;
    double a = 0.8;
    double b = 0.5;
    unsigned breadth = 5;
    unsigned depth = 2;
    std::uint64_t seed = 0;
    bool no_dead_marking = false;
    bool pns_inverted_selection = false;
    bool allow_cycles = false;

    void attach(CLI::App& app, bool many_algorithms) {
        if (many_algorithms) {
            app.add_option("--algo", algorithms, "Search algorithms (repeat or comma-separate)")
                ->delimiter(',');
        } else {
            app.add_option("--algo", algorithms.front(), "Search algorithm");
        }
        app.add_option("--passes", passes, "Maximum number of passes")->check(CLI::PositiveNumber);
        app.add_option("--time-limit", time_limit, "Wall-clock limit, e.g. 60s, 500ms, 2m");
        app.add_option("--beam", beam, "Candidates requested per goal")->check(CLI::PositiveNumber);
        app.add_option("--c", c, "PUCT exploration constant");
        app.add_option("--a", a, "Modified bandit prior weight");
        app.add_option("--b", b, "Modified bandit exploration weight");
        app.add_option("--breadth", breadth, "Minimax breadth")->check(CLI::PositiveNumber);
        app.add_option("--depth", depth, "Minimax depth");
        app.add_option("--seed", seed, "Seed");
        app.add_flag("--no-dead-marking", no_dead_marking, "Never mark childless goals as dead");
        app.add_flag("--pns-inverted-selection", pns_inverted_selection,
                     "PNS descends OR by lowest dpn and AND by lowest pn");
        app.add_flag("--allow-cycles", allow_cycles, "Keep applications that repeat an ancestor goal");
    }

    SearchConfig config(std::string_view algorithm) const {
        SearchConfig cfg;
        const auto parsed = parse_algorithm(algorithm);
        if (!parsed) {
            throw std::invalid_argument("unknown algorithm '" + std::string(algorithm) + "'");
        }
        cfg.algorithm = *parsed;
        cfg.max_passes = passes;
        if (!time_limit.empty()) {
            cfg.time_limit = harness::parse_duration(time_limit);
        }
        cfg.beam = beam;
        cfg.c_puct = c;
        cfg.a = a;
        cfg.b = b;
        cfg.minimax_breadth = breadth;
        cfg.minimax_depth = depth;
        cfg.seed = seed;
        cfg.dead_marking = !no_dead_marking;
        cfg.pns_inverted_selection = pns_inverted_selection;
        cfg.reject_cycles = !allow_cycles;
        cfg.validate();
        return cfg;
    }
};

struct MetamathFlags {
    std::string db;
    double payout = metamath::MetamathOptions{}.baseline_payout;
    bool length_heuristic = false;
    std::size_t max_goal = 0;

    void attach(CLI::App& app, bool required) {
        auto* opt = app.add_option("--db", db, "Metamath database (.mm)");
        if (required) {
            opt->required();
        }
        app.add_option("--payout", payout, "Constant goal payout in [0,1]")->check(CLI::Range(0.0, 1.0));
        app.add_flag("--length-heuristic", length_heuristic, "Scale the payout down with goal length");
        app.add_option("--max-goal-symbols", max_goal, "Drop candidates with longer subgoals (0 = automatic)");
    }

    metamath::MetamathOptions options() const {
        metamath::MetamathOptions o;
        o.baseline_payout = payout;
        o.length_heuristic = length_heuristic;
        o.max_goal_symbols = max_goal;
        return o;
    }
};

std::shared_ptr<const metamath::MmDatabase> load_database(const std::string& path) {
    spdlog::debug("parsing {}", path);
    return std::make_shared<const metamath::MmDatabase>(metamath::parse_file(path));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("andor");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("ANDOR_PROVER_LOG")) {
        spdlog::set_level(spdlog::level::from_str(level));
    }
}

int run_prove(const SearchFlags& search, const MetamathFlags& mm, const std::string& theorem, std::string out) {
    const auto db = load_database(mm.db);
    const SearchConfig cfg = search.config(search.algorithms.front());
    metamath::MetamathEnvironment env(db, theorem, mm.options());
    Searcher searcher(env, cfg);
    const SearchResult result = searcher.run();
    const double ms = std::chrono::duration<double, std::milli>(result.wall_time).count();
    std::cout << theorem << ": " << to_string(result.status) << " with " << to_string(cfg.algorithm)
              << " after " << result.passes_used << " passes, " << result.nodes_created << " nodes, " << ms
              << " ms\n";
    if (!result.proof) {
        return kNotProved;
    }
    const auto proof = env.extract_proof(*result.proof);
    const auto verdict = metamath::verify_proof(*db, theorem, proof);
    if (!verdict) {
        std::cerr << "error: emitted proof rejected: " << to_string(verdict.reason) << ": " << verdict.detail
                  << '\n';
        return kFailure;
    }
    const std::string text = metamath::format_proof(proof);
    if (out.empty()) {
        out = theorem + ".proof";
    }
    std::ofstream file(out);
    if (!file || !(file << text)) {
        throw std::runtime_error("cannot write '" + out + "'");
    }
    std::cout << text << "Accept (" << proof.size() << " labels) -> " << out << '\n';
    return 0;
}

int run_verify(const MetamathFlags& mm, const std::string& theorem, const std::string& proof_path) {
    const auto db = load_database(mm.db);
    if (theorem.empty()) {
        int failures = 0;
        for (const auto& [label, verdict] : metamath::verify_database(*db)) {
            if (!verdict) {
                ++failures;
                std::cout << label << ": Reject (" << to_string(verdict.reason) << ": " << verdict.detail << ")\n";
            }
        }
        std::cout << (failures == 0 ? "Accept" : "Reject") << ": " << failures << " failing proofs\n";
        return failures == 0 ? 0 : kNotProved;
    }
    if (proof_path.empty()) {
        throw std::invalid_argument("--theorem needs --proof");
    }
    const auto proof = metamath::parse_proof_text(read_file(proof_path));
    const auto verdict = metamath::verify_proof(*db, theorem, proof);
    if (verdict) {
        std::cout << "Accept\n";
        return 0;
    }
    std::cout << "Reject (" << to_string(verdict.reason) << ": " << verdict.detail << ")\n";
    return kNotProved;
}

struct BenchFlags {
    std::vector<std::string> theorems;
    std::string suite;
    std::size_t synthetic = 0;
    double noise = 0.0;
    std::vector<std::string> budgets;
    std::size_t jobs = 1;
    std::string out = "bench";
};

int run_bench(const SearchFlags& search, const MetamathFlags& mm, const BenchFlags& bench) {
    std::vector<harness::BenchProblem> problems;
    const int sources = (mm.db.empty() ? 0 : 1) + (bench.suite.empty() ? 0 : 1) + (bench.synthetic > 0 ? 1 : 0);
    if (sources != 1) {
        throw std::invalid_argument("choose exactly one of --db, --suite, --synthetic");
    }
    if (!mm.db.empty()) {
        problems = harness::metamath_problems(load_database(mm.db), bench.theorems, mm.options());
    } else {
        std::vector<synthetic::SyntheticSpec> specs;
        if (!bench.suite.empty()) {
            std::ifstream in(bench.suite);
            if (!in) {
                throw std::runtime_error("cannot open '" + bench.suite + "'");
            }
            specs = synthetic::read_suite(in);
        } else {
            specs = synthetic::make_suite(bench.synthetic, search.seed, bench.noise);
        }
        problems = harness::synthetic_problems(specs);
    }

    std::vector<SearchConfig> configs;
    for (const std::string& algorithm : search.algorithms) {
        if (bench.budgets.empty()) {
            configs.push_back(search.config(algorithm));
            continue;
        }
        for (const std::string& budget : bench.budgets) {
            SearchConfig cfg = search.config(algorithm);
            std::tie(cfg.max_passes, cfg.time_limit) = harness::parse_budget(budget);
            configs.push_back(cfg);
        }
    }
    spdlog::info("{} problems x {} configs on {} threads", problems.size(), configs.size(), bench.jobs);
    const auto rows = harness::sweep(problems, configs, bench.jobs);

    std::ofstream jsonl(bench.out + ".jsonl");
    std::ofstream csv(bench.out + ".csv");
    if (!jsonl || !csv) {
        throw std::runtime_error("cannot write results with prefix '" + bench.out + "'");
    }
    harness::write_jsonl(jsonl, rows);
    harness::write_summary_csv(csv, rows);
    harness::write_summary_csv(std::cout, rows);
    std::size_t errors = 0;
    for (const auto& row : rows) {
        if (row.error) {
            ++errors;
            std::cerr << "error: " << row.theorem << " " << row.algorithm << ": " << *row.error << '\n';
        }
    }
    return errors == 0 ? 0 : kFailure;
}

int run_gen(std::size_t count, std::uint64_t seed, double noise, const std::string& out) {
    const auto specs = synthetic::make_suite(count, seed, noise);
    if (out.empty() || out == "-") {
        synthetic::write_suite(std::cout, specs);
        return 0;
    }
    std::ofstream file(out);
    if (!file) {
        throw std::runtime_error("cannot write '" + out + "'");
    }
    synthetic::write_suite(file, specs);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();
    CLI::App app{"AND/OR proof search over Metamath databases and synthetic trees"};
    app.require_subcommand(1);

    SearchFlags prove_search;
    MetamathFlags prove_mm;
    std::string prove_theorem;
    std::string prove_out;
    auto* prove = app.add_subcommand("prove", "Search for a proof of one theorem");
    prove_search.attach(*prove, false);
    prove_mm.attach(*prove, true);
    prove->add_option("--theorem", prove_theorem, "Theorem label")->required();
    prove->add_option("--out", prove_out, "Proof file (default THEOREM.proof)");

    SearchFlags bench_search;
    MetamathFlags bench_mm;
    BenchFlags bench_flags;
    auto* bench = app.add_subcommand("bench", "Sweep algorithms and budgets over a problem set");
    bench_search.attach(*bench, true);
    bench_mm.attach(*bench, false);
    bench->add_option("--theorem", bench_flags.theorems, "Theorem labels (default: every $p)")->delimiter(',');
    bench->add_option("--suite", bench_flags.suite, "Synthetic suite file written by gen");
    bench->add_option("--synthetic", bench_flags.synthetic, "Generate this many synthetic problems");
    bench->add_option("--noise", bench_flags.noise, "Oracle noise for --synthetic")->check(CLI::Range(0.0, 1.0));
    bench->add_option("--budget", bench_flags.budgets, "PASSES[:DURATION] cells, e.g. 1000:60s")->delimiter(',');
    bench->add_option("--jobs", bench_flags.jobs, "Parallel jobs")->check(CLI::PositiveNumber);
    bench->add_option("--out", bench_flags.out, "Output prefix for .jsonl and .csv");

    std::size_t gen_count = 100;
    std::uint64_t gen_seed = 0;
    double gen_noise = 0.0;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "Write a synthetic suite, one spec per line");
    gen->add_option("--count", gen_count, "Number of specs");
    gen->add_option("--seed", gen_seed, "Base seed");
    gen->add_option("--noise", gen_noise, "Oracle noise")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--out", gen_out, "Output file (default stdout)");

    MetamathFlags verify_mm;
    std::string verify_theorem;
    std::string verify_proof_path;
    auto* verify = app.add_subcommand("verify", "Check a proof file, or every proof in a database");
    verify_mm.attach(*verify, true);
    verify->add_option("--theorem", verify_theorem, "Theorem label");
    verify->add_option("--proof", verify_proof_path, "Proof file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kFailure;
    }

    try {
        if (*prove) {
            return run_prove(prove_search, prove_mm, prove_theorem, prove_out);
        }
        if (*bench) {
            return run_bench(bench_search, bench_mm, bench_flags);
        }
        if (*gen) {
            return run_gen(gen_count, gen_seed, gen_noise, gen_out);
        }
        if (*verify) {
            return run_verify(verify_mm, verify_theorem, verify_proof_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
