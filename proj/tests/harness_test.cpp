#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "andor/harness.hpp"
#include "support.hpp"

using namespace andor;
using namespace andor::harness;
using namespace std::chrono_literals;

namespace {

std::vector<SearchConfig> grid(std::initializer_list<Algorithm> algorithms, std::initializer_list<std::uint64_t> passes) {
    std::vector<SearchConfig> out;
    for (Algorithm a : algorithms) {
        for (std::uint64_t n : passes) {
            SearchConfig c;
            c.algorithm = a;
            c.max_passes = n;
            out.push_back(c);
        }
    }
    return out;
}

std::string proved_column(const std::vector<BenchRow>& rows) {
    std::string out;
    for (const BenchRow& r : rows) {
        out += r.theorem + ',' + r.algorithm + ',' + std::to_string(r.max_passes) + ',' + (r.proved ? "1" : "0") +
               ',' + r.status + ',' + std::to_string(r.passes_used) + ',' + std::to_string(r.nodes_created) + '\n';
    }
    return out;
}

}  // namespace

TEST_CASE("sweep is independent of parallelism") {
    const auto specs = synthetic::make_suite(30, 2, 0.4);
    const auto problems = synthetic_problems(specs);
    const auto configs = grid({Algorithm::holophrasm, Algorithm::pp, Algorithm::pns}, {20, 200});
    const auto serial = sweep(problems, configs, 1);
    const auto parallel = sweep(problems, configs, 8);
    CHECK(serial.size() == 180);
    CHECK(proved_column(serial) == proved_column(parallel));
}

TEST_CASE("sweep cardinality and order") {
    const auto problems = synthetic_problems(synthetic::make_suite(10));
    const auto configs = grid({Algorithm::puct, Algorithm::pp_modified_bandit}, {10, 100});
    const auto rows = sweep(problems, configs, 4);
    REQUIRE(rows.size() == 40);
    CHECK(rows[0].theorem == "synthetic-0");
    CHECK(rows[3].theorem == "synthetic-0");
    CHECK(rows[4].theorem == "synthetic-1");
    CHECK(rows[1].max_passes == 100);
    CHECK(rows[2].algorithm == "pp-mb");

    CHECK(sweep({}, configs, 4).empty());
    CHECK_THROWS_AS(sweep(problems, configs, 0), std::invalid_argument);
}

TEST_CASE("failing jobs become error rows") {
    std::vector<BenchProblem> problems{{"boom", [](const SearchConfig&) -> Attempt {
                                            throw std::runtime_error("exploded");
                                        }}};
    const auto rows = sweep(problems, grid({Algorithm::pp}, {5}), 2);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].status == "error");
    CHECK_FALSE(rows[0].proved);
    CHECK(rows[0].error == "exploded");
}

TEST_CASE("a proof that fails checking is not counted") {
    Attempt attempt;
    attempt.result.status = SearchStatus::proved;
    attempt.verified = false;
    attempt.detail = "hypothesis mismatch";
    const BenchRow row = make_row("x", SearchConfig{}, attempt);
    CHECK_FALSE(row.proved);
    CHECK(row.status == "proved");
    REQUIRE(row.error.has_value());
    CHECK(row.error->find("proof rejected") != std::string::npos);

    attempt.verified = true;
    attempt.proof_length = 7;
    const BenchRow ok = make_row("x", SearchConfig{}, attempt);
    CHECK(ok.proved);
    CHECK(ok.proof_length == 7u);
}

TEST_CASE("metamath problems check their proofs") {
    const std::vector<std::string> labels{"a1i", "syl", "con4d"};
    const auto problems = metamath_problems(testing_support::toy_database(), labels);
    SearchConfig config;
    config.algorithm = Algorithm::pp;
    config.max_passes = 2000;
    const auto rows = sweep(problems, std::vector{config}, 3);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].proved);
    CHECK(rows[1].proved);
    for (const BenchRow& r : rows) {
        CHECK_FALSE(r.error.has_value());
        CHECK(r.proved == r.proof_length.has_value());
    }
    CHECK(metamath_problems(testing_support::toy_database(), {}).size() == 20);
    CHECK_THROWS_AS(metamath_problems(testing_support::toy_database(), std::vector<std::string>{"wi"}),
                    std::invalid_argument);
}

TEST_CASE("JSON lines round-trip") {
    BenchRow row;
    row.theorem = "syl";
    row.algorithm = "pp";
    row.max_passes = 1000;
    row.time_limit_ms = 60000;
    row.proved = true;
    row.status = "proved";
    row.passes_used = 52;
    row.wall_ms = 3.125;
    row.nodes_created = 66;
    row.proof_length = 13;
    const BenchRow back = row_from_json_line(to_json_line(row));
    CHECK(back.theorem == row.theorem);
    CHECK(back.algorithm == row.algorithm);
    CHECK(back.max_passes == row.max_passes);
    CHECK(back.time_limit_ms == row.time_limit_ms);
    CHECK(back.proved == row.proved);
    CHECK(back.status == row.status);
    CHECK(back.passes_used == row.passes_used);
    CHECK(back.wall_ms == row.wall_ms);
    CHECK(back.nodes_created == row.nodes_created);
    CHECK(back.proof_length == row.proof_length);
    CHECK_FALSE(back.error.has_value());

    BenchRow bare;
    bare.status = "error";
    bare.error = "bad \"quote\"\n";
    const BenchRow b = row_from_json_line(to_json_line(bare));
    CHECK_FALSE(b.time_limit_ms.has_value());
    CHECK_FALSE(b.proof_length.has_value());
    CHECK(b.error == bare.error);

    std::ostringstream out;
    write_jsonl(out, std::vector{row, bare});
    const std::string text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("CSV summary counts per budget cell") {
    auto row = [](std::string algo, std::uint64_t passes, std::optional<std::int64_t> limit, bool proved) {
        BenchRow r;
        r.algorithm = std::move(algo);
        r.max_passes = passes;
        r.time_limit_ms = limit;
        r.proved = proved;
        return r;
    };
    const std::vector<BenchRow> rows{row("pp", 10, std::nullopt, true),  row("pp", 100, std::nullopt, true),
                                     row("pp", 10, std::nullopt, false), row("pp", 100, std::nullopt, true),
                                     row("puct", 1000, 60000, false)};
    std::ostringstream out;
    write_summary_csv(out, rows);
    CHECK(out.str() ==
          "algorithm,max_passes,time_limit_ms,proved,total\n"
          "pp,10,,1,2\n"
          "pp,100,,2,2\n"
          "puct,1000,60000,0,1\n");
}

TEST_CASE("durations and budgets") {
    CHECK(parse_duration("500ms") == 500ms);
    CHECK(parse_duration("60s") == 60s);
    CHECK(parse_duration("60") == 60s);
    CHECK(parse_duration("1.5s") == 1500ms);
    CHECK(parse_duration("2m") == 120s);
    CHECK(parse_duration("2min") == 120s);
    CHECK(parse_duration("1h") == 3600s);
    CHECK_THROWS_AS(parse_duration("fast"), std::invalid_argument);
    CHECK_THROWS_AS(parse_duration("5d"), std::invalid_argument);
    CHECK_THROWS_AS(parse_duration(""), std::invalid_argument);

    CHECK(parse_budget("1000:60s") == std::pair<std::uint64_t, std::optional<std::chrono::milliseconds>>{1000, 60s});
    CHECK(parse_budget("250").first == 250);
    CHECK_FALSE(parse_budget("250").second.has_value());
    CHECK_THROWS_AS(parse_budget("0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_budget("x:1s"), std::invalid_argument);
}
