#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <vector>

#include "andor/environment.hpp"

namespace andor {

enum class NodeStatus : std::uint8_t { open, proven, dead };

const char* to_string(NodeStatus status);

/// Proof/disproof numbers. The maximum value stands for infinity.
using ProofNumber = std::uint64_t;
inline constexpr ProofNumber kInfiniteProofNumber = std::numeric_limits<ProofNumber>::max();

ProofNumber saturating_add(ProofNumber lhs, ProofNumber rhs);

/// Max-priority queue of candidates. Equal priorities pop in insertion order.
/// Filled at most once.
class CandidateHeap {
public:
    void fill(std::vector<Candidate> candidates);
    Candidate pop();

    bool filled() const { return filled_; }
    bool empty() const { return queue_.empty(); }
    std::size_t size() const { return queue_.size(); }

private:
    struct Entry {
        Candidate candidate;
        std::size_t rank;
    };
    struct Lower {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.candidate.priority != b.candidate.priority) {
                return a.candidate.priority < b.candidate.priority;
            }
            return a.rank > b.rank;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, Lower> queue_;
    bool filled_ = false;
};

struct AndNode;

/// A proof obligation. Children are alternative ways of discharging it.
struct OrNode {
    explicit OrNode(GoalId g) : goal(g) {}

    GoalId goal;
    std::uint64_t id = 0;
    double value = 0.0;
    std::uint64_t visit = 0;
    std::uint64_t childless_visit = 0;
    double network_payout = 0.0;
    CandidateHeap heap;
    std::vector<std::unique_ptr<AndNode>> children;
    NodeStatus status = NodeStatus::open;
    /// Closed directly by the environment (one of the theorem's hypotheses).
    bool hypothesis = false;
    ProofNumber pn = 1;
    ProofNumber dpn = 1;
    AndNode* parent = nullptr;
};

/// One proposition applied under a substitution. Children are its
/// instantiated hypotheses, all of which must be proven.
struct AndNode {
    Candidate candidate;
    std::uint64_t id = 0;
    double prior = 0.0;
    double value = 0.0;
    std::uint64_t visit = 1;
    std::vector<std::unique_ptr<OrNode>> children;
    NodeStatus status = NodeStatus::open;
    ProofNumber pn = 1;
    ProofNumber dpn = 1;
    OrNode* parent = nullptr;
};

/// Moves a status forward. Proven and dead are absorbing; asking to leave
/// them is a logic error and is ignored in release builds.
void promote(NodeStatus& status, NodeStatus to);

/// State shared by every node creation in one tree.
struct ExpansionContext {
    ProofEnvironment& env;
    std::size_t beam = 10;
    std::uint64_t nodes_created = 0;
    /// Treat applications whose subgoals repeat the goal of the expanded node
    /// or of one of its ancestors like invalid ones. Equal GoalIds are taken
    /// to denote the same goal.
    bool reject_cycles = true;
};

/// Creation visit of an OR node: oracle payout, hypothesis check, visit = 1.
void initialize_or(OrNode& node, ExpansionContext& ctx);

std::unique_ptr<OrNode> make_root(ExpansionContext& ctx);

/// Holophrasm progressive widening: visit/6 + 0.01 > |children| + childless_visit.
bool widening_allows(const OrNode& node);

enum class ExpandOutcome { added, failed, not_attempted };

struct ExpandResult {
    ExpandOutcome outcome = ExpandOutcome::not_attempted;
    AndNode* added = nullptr;
};

/// Pops the best candidate and materializes it, ignoring the widening rule.
/// Invalid candidates (and an empty heap) count as a childless visit.
ExpandResult expand_one(OrNode& node, ExpansionContext& ctx);

/// Fills the heap on first use, then expands if the widening rule allows it.
ExpandResult try_expand_or(OrNode& node, ExpansionContext& ctx);

/// visit = sum(child.visit) + childless_visit + 1; value = payout + sum(child.value).
/// No-op without children.
void update_value_or(OrNode& node);

/// Copies value and visit from the child with the lowest value/visit ratio.
/// No-op without children.
void update_value_and(AndNode& node);

void update_proven(OrNode& node, bool dead_marking = true);

enum class AndFate { kept, cut };

/// Recomputes an AND node's status. If any child is dead the node is cut from
/// its parent and destroyed; the caller must not touch it after `cut`.
AndFate update_proven(AndNode& node);

/// Removes `child` (and its subtree) from `parent`. Parent statistics are left
/// as they are until the next update.
void cut_and_node(OrNode& parent, const AndNode& child);

/// A closed proof: a goal discharged either by the environment (no step) or by
/// one assertion application whose premises are all closed.
struct ProofNode {
    GoalId goal = 0;
    std::optional<Candidate> step;
    std::vector<ProofNode> premises;
};

/// Follows the first proven AND child at each proven OR node.
std::optional<ProofNode> extract_proven_subtree(const OrNode& root);

std::size_t proof_size(const ProofNode& proof);

/// Expands every reachable OR node until all heaps are exhausted or
/// `max_nodes` nodes exist. Statuses are refreshed bottom-up without dead
/// marking. Returns false if the node cap was hit.
bool expand_exhaustively(OrNode& root, ExpansionContext& ctx, std::uint64_t max_nodes);

}  // namespace andor
