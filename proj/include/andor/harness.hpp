#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "andor/metamath/database.hpp"
#include "andor/metamath/environment.hpp"
#include "andor/policies.hpp"
#include "andor/synthetic.hpp"

namespace andor::harness {

/// One (problem, configuration) run. `proved` is only set after the proof
/// has been checked.
struct BenchRow {
    std::string theorem;
    std::string algorithm;
    std::uint64_t max_passes = 0;
    std::optional<std::int64_t> time_limit_ms;
    bool proved = false;
    std::string status;
    std::uint64_t passes_used = 0;
    double wall_ms = 0.0;
    std::uint64_t nodes_created = 0;
    std::optional<std::size_t> proof_length;
    /// Set when the job threw or produced a proof that failed checking.
    std::optional<std::string> error;
};

/// Result of running one configuration on one problem.
struct Attempt {
    SearchResult result;
    /// Proof size in checker units (labels for Metamath, steps for synthetic).
    std::optional<std::size_t> proof_length;
    bool verified = false;
    std::string detail;
};

/// A named problem that knows how to search and check itself. Runs must not
/// share mutable state so that they can execute concurrently.
struct BenchProblem {
    std::string id;
    std::function<Attempt(const SearchConfig&)> run;
};

std::vector<BenchProblem> synthetic_problems(std::span<const synthetic::SyntheticSpec> specs);

/// One problem per label; all `$p` statements when `labels` is empty.
std::vector<BenchProblem> metamath_problems(std::shared_ptr<const metamath::MmDatabase> db,
                                            std::span<const std::string> labels,
                                            metamath::MetamathOptions options = {});

/// Runs every (problem, config) pair, problem-major, on `parallelism`
/// threads. Row order and content other than timings do not depend on
/// `parallelism`. A throwing job becomes a row with `error` set.
std::vector<BenchRow> sweep(std::span<const BenchProblem> problems, std::span<const SearchConfig> configs,
                            std::size_t parallelism);

BenchRow make_row(const std::string& problem, const SearchConfig& config, const Attempt& attempt);

std::string to_json_line(const BenchRow& row);
BenchRow row_from_json_line(std::string_view line);
void write_jsonl(std::ostream& out, std::span<const BenchRow> rows);

/// Proof counts per (algorithm, max_passes, time_limit) cell, cells in order
/// of first appearance. Header: algorithm,max_passes,time_limit_ms,proved,total.
void write_summary_csv(std::ostream& out, std::span<const BenchRow> rows);

/// "500ms", "60s", "2m", "1h"; a bare number means seconds.
std::chrono::milliseconds parse_duration(std::string_view text);

/// "PASSES" or "PASSES:DURATION", e.g. "1000:60s".
std::pair<std::uint64_t, std::optional<std::chrono::milliseconds>> parse_budget(std::string_view text);

}  // namespace andor::harness
