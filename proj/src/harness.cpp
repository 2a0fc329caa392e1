#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "andor/harness.hpp"
#include "andor/metamath/verifier.hpp"

namespace andor::harness {

using nlohmann::json;

std::vector<BenchProblem> synthetic_problems(std::span<const synthetic::SyntheticSpec> specs) {
    std::vector<BenchProblem> problems;
    problems.reserve(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        auto tree = std::make_shared<const synthetic::SyntheticTree>(synthetic::generate(specs[i]));
        problems.push_back({"synthetic-" + std::to_string(i), [tree](const SearchConfig& config) {
                                synthetic::SyntheticEnvironment env(tree);
                                Attempt attempt{run_search(env, config), std::nullopt, false, {}};
                                if (attempt.result.proof) {
                                    attempt.verified = synthetic::check_proof(*tree, *attempt.result.proof);
                                    attempt.proof_length = proof_size(*attempt.result.proof);
                                    if (!attempt.verified) {
                                        attempt.detail = "proof does not close in the generated tree";
                                    }
                                }
                                return attempt;
                            }});
    }
    return problems;
}

std::vector<BenchProblem> metamath_problems(std::shared_ptr<const metamath::MmDatabase> db,
                                            std::span<const std::string> labels,
                                            metamath::MetamathOptions options) {
    std::vector<std::string> chosen(labels.begin(), labels.end());
    if (chosen.empty()) {
        for (const auto& a : db->assertions()) {
            if (!a.axiom) {
                chosen.push_back(a.label);
            }
        }
    }
    std::vector<BenchProblem> problems;
    for (const std::string& label : chosen) {
        const metamath::Assertion* a = db->find_assertion(label);
        if (a == nullptr || !db->is_logical(*a)) {
            throw std::invalid_argument("no logical assertion labelled '" + label + "'");
        }
        problems.push_back({label, [db, label, options](const SearchConfig& config) {
                                metamath::MetamathEnvironment env(db, label, options);
                                Attempt attempt{run_search(env, config), std::nullopt, false, {}};
                                if (attempt.result.proof) {
                                    const auto proof = env.extract_proof(*attempt.result.proof);
                                    const auto verdict = metamath::verify_proof(*db, label, proof);
                                    attempt.proof_length = proof.size();
                                    attempt.verified = verdict.accepted();
                                    if (!verdict) {
                                        attempt.detail = std::string(to_string(verdict.reason)) + ": " + verdict.detail;
                                    }
                                }
                                return attempt;
                            }});
    }
    return problems;
}

BenchRow make_row(const std::string& problem, const SearchConfig& config, const Attempt& attempt) {
    BenchRow row;
    row.theorem = problem;
    row.algorithm = std::string(to_string(config.algorithm));
    row.max_passes = config.max_passes;
    if (config.time_limit) {
        row.time_limit_ms = config.time_limit->count();
    }
    const SearchResult& r = attempt.result;
    row.status = std::string(to_string(r.status));
    row.passes_used = r.passes_used;
    row.wall_ms = std::chrono::duration<double, std::milli>(r.wall_time).count();
    row.nodes_created = r.nodes_created;
    if (r.status == SearchStatus::proved) {
        row.proved = attempt.verified;
        row.proof_length = attempt.proof_length;
        if (!attempt.verified) {
            row.error = "proof rejected: " + attempt.detail;
        }
    }
    return row;
}

std::vector<BenchRow> sweep(std::span<const BenchProblem> problems, std::span<const SearchConfig> configs,
                            std::size_t parallelism) {
    if (parallelism == 0) {
        throw std::invalid_argument("parallelism must be at least 1");
    }
    for (const SearchConfig& c : configs) {
        c.validate();
    }
    const std::size_t jobs = problems.size() * configs.size();
    std::vector<BenchRow> rows(jobs);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t job = next++; job < jobs; job = next++) {
            const BenchProblem& problem = problems[job / configs.size()];
            const SearchConfig& config = configs[job % configs.size()];
            try {
                rows[job] = make_row(problem.id, config, problem.run(config));
            } catch (const std::exception& e) {
                BenchRow row;
                row.theorem = problem.id;
                row.algorithm = std::string(to_string(config.algorithm));
                row.max_passes = config.max_passes;
                if (config.time_limit) {
                    row.time_limit_ms = config.time_limit->count();
                }
                row.status = "error";
                row.error = e.what();
                rows[job] = std::move(row);
            }
            spdlog::debug("{} {} passes={} -> {}", problem.id, to_string(config.algorithm), config.max_passes,
                          rows[job].status);
        }
    };

    const std::size_t threads = std::min(parallelism, std::max<std::size_t>(jobs, 1));
    if (threads <= 1) {
        worker();
        return rows;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    pool.clear();
    return rows;
}

std::string to_json_line(const BenchRow& row) {
    json j;
    j["theorem"] = row.theorem;
    j["algorithm"] = row.algorithm;
    j["max_passes"] = row.max_passes;
    j["time_limit_ms"] = row.time_limit_ms ? json(*row.time_limit_ms) : json(nullptr);
    j["proved"] = row.proved;
    j["status"] = row.status;
    j["passes_used"] = row.passes_used;
    j["wall_ms"] = std::round(row.wall_ms * 1000.0) / 1000.0;
    j["nodes_created"] = row.nodes_created;
    j["proof_length"] = row.proof_length ? json(*row.proof_length) : json(nullptr);
    if (row.error) {
        j["error"] = *row.error;
    }
    return j.dump();
}

BenchRow row_from_json_line(std::string_view line) {
    const json j = json::parse(line);
    BenchRow row;
    row.theorem = j.at("theorem").get<std::string>();
    row.algorithm = j.at("algorithm").get<std::string>();
    row.max_passes = j.at("max_passes").get<std::uint64_t>();
    if (!j.at("time_limit_ms").is_null()) {
        row.time_limit_ms = j.at("time_limit_ms").get<std::int64_t>();
    }
    row.proved = j.at("proved").get<bool>();
    row.status = j.at("status").get<std::string>();
    row.passes_used = j.at("passes_used").get<std::uint64_t>();
    row.wall_ms = j.at("wall_ms").get<double>();
    row.nodes_created = j.at("nodes_created").get<std::uint64_t>();
    if (!j.at("proof_length").is_null()) {
        row.proof_length = j.at("proof_length").get<std::size_t>();
    }
    if (j.contains("error")) {
        row.error = j.at("error").get<std::string>();
    }
    return row;
}

void write_jsonl(std::ostream& out, std::span<const BenchRow> rows) {
    for (const BenchRow& row : rows) {
        out << to_json_line(row) << '\n';
    }
}

void write_summary_csv(std::ostream& out, std::span<const BenchRow> rows) {
    using Cell = std::tuple<std::string, std::uint64_t, std::optional<std::int64_t>>;
    std::vector<Cell> order;
    std::map<Cell, std::pair<std::size_t, std::size_t>> counts;
    for (const BenchRow& row : rows) {
        Cell cell{row.algorithm, row.max_passes, row.time_limit_ms};
        auto [it, inserted] = counts.emplace(cell, std::make_pair(0, 0));
        if (inserted) {
            order.push_back(cell);
        }
        it->second.first += row.proved ? 1 : 0;
        it->second.second += 1;
    }
    out << "algorithm,max_passes,time_limit_ms,proved,total\n";
    for (const Cell& cell : order) {
        const auto& [algorithm, passes, limit] = cell;
        const auto& [proved, total] = counts.at(cell);
        out << algorithm << ',' << passes << ',' << (limit ? std::to_string(*limit) : std::string()) << ','
            << proved << ',' << total << '\n';
    }
}

std::chrono::milliseconds parse_duration(std::string_view text) {
    std::size_t digits = 0;
    while (digits < text.size() && (std::isdigit(static_cast<unsigned char>(text[digits])) || text[digits] == '.')) {
        ++digits;
    }
    double amount = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + digits, amount);
    if (digits == 0 || ec != std::errc() || ptr != text.data() + digits || amount < 0.0) {
        throw std::invalid_argument("bad duration '" + std::string(text) + "'");
    }
    const std::string_view unit = text.substr(digits);
    double scale = 0.0;
    if (unit.empty() || unit == "s") {
        scale = 1000.0;
    } else if (unit == "ms") {
        scale = 1.0;
    } else if (unit == "m" || unit == "min") {
        scale = 60'000.0;
    } else if (unit == "h") {
        scale = 3'600'000.0;
    } else {
        throw std::invalid_argument("bad duration unit in '" + std::string(text) + "'");
    }
    return std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(amount * scale)));
}

std::pair<std::uint64_t, std::optional<std::chrono::milliseconds>> parse_budget(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view passes = text.substr(0, colon);
    std::uint64_t n = 0;
    const auto [ptr, ec] = std::from_chars(passes.data(), passes.data() + passes.size(), n);
    if (passes.empty() || ec != std::errc() || ptr != passes.data() + passes.size() || n == 0) {
        throw std::invalid_argument("bad budget '" + std::string(text) + "'");
    }
    if (colon == std::string_view::npos) {
        return {n, std::nullopt};
    }
    return {n, parse_duration(text.substr(colon + 1))};
}

}  // namespace andor::harness
