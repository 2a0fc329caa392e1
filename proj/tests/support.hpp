#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "andor/environment.hpp"
#include "andor/metamath/database.hpp"
#include "andor/proof_tree.hpp"

namespace testing_support {

/// Hand-written environment. Candidate `assertion` is the index of the option
/// under its goal; `subgoals == nullopt` marks an invalid option.
class ScriptedEnvironment final : public andor::ProofEnvironment {
public:
    struct Option {
        std::optional<std::vector<andor::GoalId>> subgoals;
        double priority = 1.0;
    };

    andor::GoalId root = 0;
    std::map<andor::GoalId, std::vector<Option>> options;
    std::set<andor::GoalId> hypotheses;
    std::map<andor::GoalId, double> payouts;
    double default_payout = 0.5;
    int candidate_calls = 0;

    andor::GoalId root_goal() const override { return root; }

    double evaluate(andor::GoalId goal) override {
        auto it = payouts.find(goal);
        return it == payouts.end() ? default_payout : it->second;
    }

    std::vector<andor::Candidate> candidates(andor::GoalId goal, std::size_t beam) override {
        ++candidate_calls;
        std::vector<andor::Candidate> out;
        auto it = options.find(goal);
        if (it == options.end()) {
            return out;
        }
        for (std::size_t i = 0; i < it->second.size() && out.size() < beam; ++i) {
            out.push_back({static_cast<andor::AssertionId>(i), 0, it->second[i].priority});
        }
        return out;
    }

    std::optional<std::vector<andor::GoalId>> apply(andor::GoalId goal, const andor::Candidate& c) override {
        return options.at(goal).at(c.assertion).subgoals;
    }

    bool trivially_proven(andor::GoalId goal) const override { return hypotheses.contains(goal); }
};

/// Calls `f` on every OR node reachable from `root`, parents first.
inline void for_each_or(const andor::OrNode& root, const std::function<void(const andor::OrNode&)>& f) {
    f(root);
    for (const auto& app : root.children) {
        for (const auto& hyp : app->children) {
            for_each_or(*hyp, f);
        }
    }
}

inline void for_each_and(const andor::OrNode& root, const std::function<void(const andor::AndNode&)>& f) {
    for_each_or(root, [&](const andor::OrNode& node) {
        for (const auto& app : node.children) {
            f(*app);
        }
    });
}

/// Status of every live node keyed by node id.
inline std::map<std::uint64_t, andor::NodeStatus> status_snapshot(const andor::OrNode& root) {
    std::map<std::uint64_t, andor::NodeStatus> out;
    for_each_or(root, [&](const andor::OrNode& n) { out[n.id] = n.status; });
    for_each_and(root, [&](const andor::AndNode& n) { out[n.id] = n.status; });
    return out;
}

inline std::filesystem::path data_path(const char* name) {
    return std::filesystem::path(ANDOR_SOURCE_DIR) / "data" / name;
}

inline std::shared_ptr<const andor::metamath::MmDatabase> toy_database() {
    static const auto db =
        std::make_shared<const andor::metamath::MmDatabase>(andor::metamath::parse_file(data_path("toy.mm")));
    return db;
}

inline bool same_proof(const andor::ProofNode& a, const andor::ProofNode& b) {
    if (a.goal != b.goal || a.step.has_value() != b.step.has_value() || a.premises.size() != b.premises.size()) {
        return false;
    }
    if (a.step && (a.step->assertion != b.step->assertion || a.step->substitution != b.step->substitution)) {
        return false;
    }
    for (std::size_t i = 0; i < a.premises.size(); ++i) {
        if (!same_proof(a.premises[i], b.premises[i])) {
            return false;
        }
    }
    return true;
}

}  // namespace testing_support
