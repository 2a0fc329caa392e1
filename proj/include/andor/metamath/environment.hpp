#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "andor/environment.hpp"
#include "andor/metamath/database.hpp"
#include "andor/metamath/matcher.hpp"
#include "andor/proof_tree.hpp"

namespace andor::metamath {

struct MetamathOptions {
    /// Segmentations kept per assertion.
    std::size_t match_cap = 64;
    /// Completions of unbound variables kept per segmentation.
    std::size_t completion_cap = 64;
    /// Constant payout of every goal.
    double baseline_payout = 0.05;
    /// Scale the payout down with goal length (single-symbol goals keep the
    /// baseline).
    bool length_heuristic = false;
    /// Candidates producing a subgoal longer than this are dropped. Zero
    /// means 2L + 8 for L the longest of the theorem's statement and
    /// hypotheses.
    std::size_t max_goal_symbols = 0;
};

/// Backward proving of one theorem from the assertions stated before it.
/// Goals are interned expressions; candidates for a goal are enumerated once
/// and cached, so the environment is deterministic.
class MetamathEnvironment final : public ProofEnvironment {
public:
    MetamathEnvironment(std::shared_ptr<const MmDatabase> db, std::string_view theorem,
                        MetamathOptions options = {});

    GoalId root_goal() const override { return root_; }
    double evaluate(GoalId goal) override;
    std::vector<Candidate> candidates(GoalId goal, std::size_t beam) override;
    std::optional<std::vector<GoalId>> apply(GoalId goal, const Candidate& candidate) override;
    bool trivially_proven(GoalId goal) const override;

    GoalId intern_goal(const Expression& expression);
    const Expression& goal_expression(GoalId goal) const { return goals_.at(goal); }
    std::size_t goal_count() const { return goals_.size(); }

    const Substitution& substitution(SubstitutionId id) const { return substitutions_.at(id).second; }
    /// Registers an explicit (assertion, substitution) pair, e.g. for tests.
    Candidate make_candidate(AssertionId assertion, Substitution substitution, double priority = 1.0);

    const MmDatabase& database() const { return *db_; }
    const Assertion& theorem() const { return *theorem_; }
    /// Indices of logical assertions stated before the theorem.
    const std::vector<AssertionId>& usable_assertions() const { return usable_; }
    SyntaxParser& syntax() { return syntax_; }

    /// Type-correct subexpressions (parse-tree subterms) of the goal and the
    /// theorem's hypotheses, shortest first, then by first appearance.
    std::vector<std::vector<SymbolId>> completion_pool(GoalId goal, SymbolId typecode);

    /// RPN label sequence for a proven subtree.
    std::vector<std::string> extract_proof(const ProofNode& proof);

private:
    std::vector<Candidate> enumerate(GoalId goal);
    std::vector<GoalId> instantiate(const Assertion& assertion, const Substitution& substitution);
    bool disjoint_ok(const Assertion& assertion, const Substitution& substitution) const;
    void emit(const ProofNode& node, std::vector<std::string>& out);

    std::shared_ptr<const MmDatabase> db_;
    const Assertion* theorem_;
    MetamathOptions options_;
    std::size_t goal_limit_ = 0;
    SyntaxParser syntax_;
    std::vector<AssertionId> usable_;
    std::vector<SymbolId> syntax_typecodes_;
    /// Theorem hypotheses a goal may close on: label -> expression.
    std::vector<std::pair<std::string, Expression>> available_;

    std::vector<Expression> goals_;
    std::map<Expression, GoalId> goal_ids_;
    std::vector<std::pair<AssertionId, Substitution>> substitutions_;
    std::map<GoalId, std::vector<Candidate>> cache_;
    GoalId root_ = 0;
};

/// Proof of a proven root; throws std::logic_error otherwise.
std::vector<std::string> extract_proof(const OrNode& root, MetamathEnvironment& env);

}  // namespace andor::metamath
