#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace andor {

/// Opaque goal handle. Its meaning belongs to the environment that issued it.
using GoalId = std::uint32_t;
using AssertionId = std::uint32_t;
using SubstitutionId = std::uint32_t;

/// A ranked, not-yet-materialized proposition application for some goal.
struct Candidate {
    AssertionId assertion = 0;
    SubstitutionId substitution = 0;
    double priority = 0.0;
};

/// The oracle boundary a search runs against.
///
/// Implementations stand in for the value network (evaluate), the
/// policy/generative networks (candidates), substitution (apply) and the
/// "initial hypothesis" check (trivially_proven). All methods must be
/// deterministic for a fixed construction seed.
class ProofEnvironment {
public:
    virtual ~ProofEnvironment() = default;

    virtual GoalId root_goal() const = 0;

    /// Estimated probability in [0,1] that the goal is provable.
    virtual double evaluate(GoalId goal) = 0;

    /// At most `beam` candidates, priorities non-increasing and summing to <= 1.
    virtual std::vector<Candidate> candidates(GoalId goal, std::size_t beam) = 0;

    /// Subgoals produced by applying the candidate, or nullopt when the
    /// candidate turns out to be invalid.
    virtual std::optional<std::vector<GoalId>> apply(GoalId goal, const Candidate& candidate) = 0;

    virtual bool trivially_proven(GoalId goal) const = 0;
};

/// Scales non-negative scores to a probability vector. All-zero input maps
/// to the uniform distribution. Throws std::invalid_argument on empty or
/// negative input.
std::vector<double> normalize_priors(std::span<const double> scores);

}  // namespace andor
