#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "andor/environment.hpp"
#include "andor/proof_tree.hpp"

namespace andor {

enum class Algorithm {
    holophrasm,
    minimax,
    puct,
    pp,
    pns,
    hypertree,
    pp_puct,
    pp_modified_bandit,
};

inline constexpr std::array<Algorithm, 8> kAllAlgorithms = {
    Algorithm::holophrasm, Algorithm::minimax,   Algorithm::puct,    Algorithm::pp,
    Algorithm::pns,        Algorithm::hypertree, Algorithm::pp_puct, Algorithm::pp_modified_bandit,
};

std::string_view to_string(Algorithm algorithm);

/// Accepts the CLI names ("pp-puct", "pp-mb", ...) and a few aliases.
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct SearchConfig {
    Algorithm algorithm = Algorithm::holophrasm;
    std::uint64_t max_passes = 1000;
    /// Wall-clock budget checked between passes. Unlimited when empty.
    std::optional<std::chrono::milliseconds> time_limit;
    std::size_t beam = 10;
    double c_puct = 0.2;
    double a = 0.8;
    double b = 0.5;
    unsigned minimax_depth = 2;
    unsigned minimax_breadth = 5;
    bool pns_inverted_selection = false;
    /// Disabling this keeps childless OR nodes open forever.
    bool dead_marking = true;
    /// Skip applications whose subgoals repeat a goal on the path to the root.
    bool reject_cycles = true;
    unsigned hypertree_depth_cap = 512;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument on out-of-range settings.
    void validate() const;
};

enum class SearchStatus { proved, disproved, budget_exhausted };

std::string_view to_string(SearchStatus status);

struct SearchResult {
    SearchStatus status = SearchStatus::budget_exhausted;
    std::uint64_t passes_used = 0;
    std::chrono::nanoseconds wall_time{0};
    std::optional<ProofNode> proof;
    std::uint64_t nodes_created = 0;
};

// Bandit formulas. `child.value`, `child.visit` and `child.prior` are read as
// stored; the active policy decides what value means.

/// value/(visit+1) + 0.5*prior/(1+visit) + sqrt(log(father_visit)/(1+visit)).
double holophrasm_valuation(double father_visit, const AndNode& child);

/// value/visit + C*prior/(1+visit)*sqrt(father_visit).
double puct_valuation(double father_visit, const AndNode& child, double c);

/// value + a*prior*sqrt(father_visit)/visit + b*sqrt(log(father_visit)/visit).
double modified_valuation(double father_visit, const AndNode& child, double a, double b);

// Product propagation. Throws std::domain_error on values outside [0,1].
double pp_combine_and(std::span<const double> child_values);
double pp_combine_or(std::span<const double> child_values, double leaf_value);

/// PP value of an OR node from its current children (payout when childless).
double pp_value(const OrNode& node);
/// Product of the children's stored values (1 when proven or hypothesis-free).
double pp_value(const AndNode& node);

// Proof number search.
using PnsPair = std::pair<ProofNumber, ProofNumber>;

PnsPair pns_init(NodeStatus status);
PnsPair pns_combine_or(std::span<const PnsPair> children);
PnsPair pns_combine_and(std::span<const PnsPair> children);
PnsPair pns_update(const OrNode& node);
PnsPair pns_update(const AndNode& node);

/// Index of the child to descend into. Inverted mode: OR -> lowest dpn,
/// AND -> lowest pn. Classical mode: OR -> lowest pn, AND -> lowest dpn.
/// Only open children are eligible; ties go to the lowest index.
std::optional<std::size_t> pns_select(const OrNode& node, bool inverted_selection);
std::optional<std::size_t> pns_select(const AndNode& node, bool inverted_selection);

/// Descent rule of the configured policy at an OR node (which AND child).
std::optional<std::size_t> select_and_child(const OrNode& node, const SearchConfig& config);
/// Descent rule of the configured policy at an AND node (which OR child).
std::optional<std::size_t> select_or_child(const AndNode& node, const SearchConfig& config);

/// Full-width, depth-limited minimax that grows a real proof tree under
/// `node`. OR levels take the top `breadth` candidates, AND levels descend
/// with depth - 1. The node ends proven only through a closed subtree.
double minimax_search(OrNode& node, unsigned depth, unsigned breadth, ExpansionContext& ctx);

/// Owns one search tree and runs passes of the configured policy over it.
class Searcher {
public:
    Searcher(ProofEnvironment& env, SearchConfig config);

    OrNode& root() { return *root_; }
    const OrNode& root() const { return *root_; }
    const SearchConfig& config() const { return config_; }
    ExpansionContext& context() { return ctx_; }

    bool finished() const;
    std::uint64_t passes() const { return passes_; }

    /// One descent/expansion/backup from the root.
    void run_pass();

    /// Passes until the root is closed or a budget runs out.
    SearchResult run();

    /// Recomputes the policy's values bottom-up over the whole tree.
    void refresh_values();

private:
    enum class Stats { holophrasm, per_pass };

    void visit_or(OrNode& node);
    AndFate visit_and(AndNode& node);
    void hyper_or(OrNode& node, unsigned depth);
    AndFate hyper_and(AndNode& node, unsigned depth);

    void on_created(AndNode& node);
    void finish_or(OrNode& node);
    AndFate finish_and(AndNode& node);
    void refresh_or(OrNode& node);

    ProofEnvironment& env_;
    SearchConfig config_;
    ExpansionContext ctx_;
    Stats stats_;
    std::unique_ptr<OrNode> root_;
    std::uint64_t passes_ = 0;
};

SearchResult run_search(ProofEnvironment& env, const SearchConfig& config);

}  // namespace andor
