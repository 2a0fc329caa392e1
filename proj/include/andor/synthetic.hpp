#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "andor/environment.hpp"
#include "andor/proof_tree.hpp"

namespace andor::synthetic {

/// Parameters of a random AND/OR tree. Serialized as a single line of
/// whitespace-separated key=value pairs.
struct SyntheticSpec {
    std::uint64_t seed = 0;
    unsigned max_depth = 3;
    unsigned or_branching = 2;
    unsigned and_branching = 2;
    double leaf_proven_prob = 0.5;
    double oracle_noise = 0.0;
    /// Extra prior weight for provable AND children. 0 keeps priors uniform.
    double prior_quality = 0.0;

    void validate() const;
    bool operator==(const SyntheticSpec&) const = default;
};

std::string to_text(const SyntheticSpec& spec);
/// Throws std::invalid_argument on unknown keys or malformed values.
SyntheticSpec parse_spec(std::string_view line);
/// One spec per non-empty line; lines starting with '#' are comments.
std::vector<SyntheticSpec> read_suite(std::istream& in);
void write_suite(std::ostream& out, std::span<const SyntheticSpec> specs);

/// The mixed suite used by the benchmarks: depth 1..5, branching 1..3,
/// leaf probabilities spread so that roughly half the trees are provable.
SyntheticSpec suite_spec(std::uint64_t index, std::uint64_t base_seed = 0, double noise = 0.0);
std::vector<SyntheticSpec> make_suite(std::size_t count, std::uint64_t base_seed = 0, double noise = 0.0);

/// Immutable generated tree. OR node 0 is the root.
struct SyntheticTree {
    struct Or {
        unsigned depth = 0;
        std::vector<std::uint32_t> ands;
        bool leaf_proven = false;
    };
    struct And {
        std::uint32_t parent = 0;
        std::vector<std::uint32_t> ors;
    };

    SyntheticSpec spec;
    std::vector<Or> or_nodes;
    std::vector<And> and_nodes;

    bool is_leaf(std::uint32_t or_id) const { return or_nodes[or_id].ands.empty(); }
};

SyntheticTree generate(const SyntheticSpec& spec);

/// Exact provability of every OR node, by exhaustive recursion.
std::vector<bool> brute_force_provability(const SyntheticTree& tree);
bool brute_force_provable(const SyntheticTree& tree);

/// Exact product-propagation value of the root. `leaf_values` is indexed by
/// OR node id; only leaf entries are read.
double brute_force_pp_value(const SyntheticTree& tree, std::span<const double> leaf_values);

/// True when `proof` is a closed proof of its goal in `tree`: every step is an
/// AND child of its goal, premises match that child's OR children in order,
/// and every leaf is a proven leaf.
bool check_proof(const SyntheticTree& tree, const ProofNode& proof);

/// Truth (0 or 1) perturbed by up to `noise`, clamped to [0,1]. The
/// perturbation is a pure function of (seed, node).
double noisy_evaluate(bool provable, std::uint32_t node, double noise, std::uint64_t seed);

/// Environment over a generated tree. Goal ids are OR node ids and candidate
/// assertion ids are AND node ids.
class SyntheticEnvironment final : public ProofEnvironment {
public:
    explicit SyntheticEnvironment(std::shared_ptr<const SyntheticTree> tree,
                                  std::optional<std::vector<double>> leaf_values = std::nullopt);

    GoalId root_goal() const override { return 0; }
    double evaluate(GoalId goal) override;
    std::vector<Candidate> candidates(GoalId goal, std::size_t beam) override;
    std::optional<std::vector<GoalId>> apply(GoalId goal, const Candidate& candidate) override;
    bool trivially_proven(GoalId goal) const override;

    const SyntheticTree& tree() const { return *tree_; }
    bool provable(GoalId goal) const { return provable_[goal]; }

private:
    std::shared_ptr<const SyntheticTree> tree_;
    std::vector<bool> provable_;
    std::optional<std::vector<double>> leaf_values_;
};

}  // namespace andor::synthetic
