#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>
#include <stdexcept>

#include "andor/metamath/environment.hpp"

namespace andor::metamath {

namespace {

const Assertion& require_theorem(const MmDatabase& db, std::string_view label) {
    const Assertion* a = db.find_assertion(label);
    if (a == nullptr) {
        throw std::invalid_argument("unknown theorem '" + std::string(label) + "'");
    }
    if (!db.is_logical(*a)) {
        throw std::invalid_argument("'" + std::string(label) + "' is a syntax assertion");
    }
    return *a;
}

std::vector<std::uint32_t> floating_in_scope(const MmDatabase& db, const Assertion& a) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t h : a.scope_hypotheses) {
        if (db.hypotheses()[h].floating) {
            out.push_back(h);
        }
    }
    return out;
}

}  // namespace

MetamathEnvironment::MetamathEnvironment(std::shared_ptr<const MmDatabase> db, std::string_view theorem,
                                         MetamathOptions options)
    : db_(std::move(db)),
      theorem_(&require_theorem(*db_, theorem)),
      options_(options),
      syntax_(*db_, floating_in_scope(*db_, *theorem_), theorem_->statement) {
    const auto& assertions = db_->assertions();
    for (AssertionId i = 0; i < assertions.size(); ++i) {
        if (assertions[i].statement < theorem_->statement && db_->is_logical(assertions[i])) {
            usable_.push_back(i);
        }
    }
    // The frame: essential hypotheses first, then the mandatory floating ones.
    for (bool floating : {false, true}) {
        for (std::uint32_t h : theorem_->hypotheses) {
            const Hypothesis& hyp = db_->hypotheses()[h];
            if (hyp.floating == floating) {
                available_.emplace_back(hyp.label, hyp.expression);
            }
        }
    }
    for (SymbolId c : db_->constants()) {
        if (db_->is_syntax_typecode(c)) {
            syntax_typecodes_.push_back(c);
        }
    }
    if (!(options_.baseline_payout >= 0.0 && options_.baseline_payout <= 1.0)) {
        throw std::invalid_argument("baseline payout must lie in [0,1]");
    }
    goal_limit_ = options_.max_goal_symbols;
    if (goal_limit_ == 0) {
        goal_limit_ = theorem_->conclusion.size();
        for (const auto& [label, e] : available_) {
            goal_limit_ = std::max(goal_limit_, e.size());
        }
        goal_limit_ = 2 * goal_limit_ + 8;
    }
    root_ = intern_goal(theorem_->conclusion);
}

GoalId MetamathEnvironment::intern_goal(const Expression& expression) {
    auto [it, inserted] = goal_ids_.emplace(expression, static_cast<GoalId>(goals_.size()));
    if (inserted) {
        goals_.push_back(expression);
    }
    return it->second;
}

double MetamathEnvironment::evaluate(GoalId goal) {
    if (!options_.length_heuristic) {
        return options_.baseline_payout;
    }
    const auto body = static_cast<double>(goal_expression(goal).size() - 1);
    return options_.baseline_payout / (1.0 + 0.1 * std::max(0.0, body - 1.0));
}

bool MetamathEnvironment::trivially_proven(GoalId goal) const {
    const Expression& e = goal_expression(goal);
    return std::any_of(available_.begin(), available_.end(),
                       [&](const auto& h) { return h.second == e; });
}

Candidate MetamathEnvironment::make_candidate(AssertionId assertion, Substitution substitution,
                                              double priority) {
    substitutions_.emplace_back(assertion, std::move(substitution));
    return Candidate{assertion, static_cast<SubstitutionId>(substitutions_.size() - 1), priority};
}

std::vector<std::vector<SymbolId>> MetamathEnvironment::completion_pool(GoalId goal, SymbolId typecode) {
    std::vector<std::span<const SymbolId>> bodies;
    const Expression& g = goal_expression(goal);
    bodies.emplace_back(g.data() + 1, g.size() - 1);
    for (const auto& [label, e] : available_) {
        bodies.emplace_back(e.data() + 1, e.size() - 1);
    }
    // (length, body, offset) orders by size, then by first appearance.
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> found;
    for (std::size_t b = 0; b < bodies.size(); ++b) {
        for (SymbolId type : syntax_typecodes_) {
            auto terms = syntax_.subterms(type, bodies[b]);
            if (terms.empty()) {
                continue;
            }
            for (const auto& t : terms) {
                if (t.typecode == typecode) {
                    found.emplace_back(t.length, b, t.offset);
                }
            }
            break;
        }
    }
    std::sort(found.begin(), found.end());
    std::vector<std::vector<SymbolId>> pool;
    std::set<std::vector<SymbolId>> seen;
    for (const auto& [length, b, offset] : found) {
        auto piece = bodies[b].subspan(offset, length);
        std::vector<SymbolId> v(piece.begin(), piece.end());
        if (seen.insert(v).second) {
            pool.push_back(std::move(v));
        }
    }
    return pool;
}

std::vector<Candidate> MetamathEnvironment::enumerate(GoalId goal) {
    const Expression goal_expr = goal_expression(goal);
    std::map<SymbolId, std::vector<std::vector<SymbolId>>> pools;
    std::vector<Candidate> found;
    std::vector<double> scores;

    for (AssertionId index : usable_) {
        const Assertion& a = db_->assertions()[index];
        const auto types = variable_types(*db_, a);
        std::size_t essential = 0;
        std::vector<SymbolId> mandatory_vars;
        for (std::uint32_t h : a.hypotheses) {
            const Hypothesis& hyp = db_->hypotheses()[h];
            if (hyp.floating) {
                mandatory_vars.push_back(hyp.variable());
            } else {
                ++essential;
            }
        }
        for (Substitution& partial : unify_conclusion(*db_, a, goal_expr, syntax_, options_.match_cap)) {
            std::vector<SymbolId> unbound;
            for (SymbolId v : mandatory_vars) {
                if (!partial.contains(v)) {
                    unbound.push_back(v);
                }
            }
            std::vector<const std::vector<std::vector<SymbolId>>*> choices;
            bool empty_pool = false;
            for (SymbolId v : unbound) {
                const SymbolId type = types.at(v);
                auto it = pools.find(type);
                if (it == pools.end()) {
                    it = pools.emplace(type, completion_pool(goal, type)).first;
                }
                empty_pool = empty_pool || it->second.empty();
                choices.push_back(&it->second);
            }
            if (empty_pool) {
                continue;
            }
            // Odometer over the pools; the last unbound variable varies fastest.
            std::vector<std::size_t> digit(unbound.size(), 0);
            for (std::size_t made = 0; made < options_.completion_cap; ++made) {
                Substitution full = partial;
                for (std::size_t k = 0; k < unbound.size(); ++k) {
                    full.emplace(unbound[k], (*choices[k])[digit[k]]);
                }
                bool keep = true;
                for (std::uint32_t h : a.hypotheses) {
                    const Hypothesis& hyp = db_->hypotheses()[h];
                    if (hyp.floating) {
                        continue;
                    }
                    const auto subgoal = substitute(hyp.expression, full);
                    if (subgoal == goal_expr || subgoal.size() > goal_limit_) {
                        keep = false;
                        break;
                    }
                }
                if (keep) {
                    std::size_t tokens = 0;
                    for (const auto& [var, image] : full) {
                        tokens += image.size();
                    }
                    scores.push_back(1.0 / (1.0 + static_cast<double>(essential + tokens)));
                    found.push_back(make_candidate(index, std::move(full)));
                }
                std::size_t k = unbound.size();
                while (k > 0 && ++digit[k - 1] == choices[k - 1]->size()) {
                    digit[k - 1] = 0;
                    --k;
                }
                if (k == 0) {
                    break;
                }
            }
        }
    }
    if (found.empty()) {
        return found;
    }
    const auto priors = normalize_priors(scores);
    for (std::size_t i = 0; i < found.size(); ++i) {
        found[i].priority = priors[i];
    }
    std::stable_sort(found.begin(), found.end(),
                     [](const Candidate& x, const Candidate& y) { return x.priority > y.priority; });
    return found;
}

std::vector<Candidate> MetamathEnvironment::candidates(GoalId goal, std::size_t beam) {
    if (beam == 0) {
        throw std::invalid_argument("beam must be at least 1");
    }
    auto it = cache_.find(goal);
    if (it == cache_.end()) {
        it = cache_.emplace(goal, enumerate(goal)).first;
    }
    const auto& all = it->second;
    return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(std::min(beam, all.size()))};
}

bool MetamathEnvironment::disjoint_ok(const Assertion& assertion, const Substitution& substitution) const {
    auto variables_of = [&](SymbolId v) {
        std::set<SymbolId> vars;
        auto it = substitution.find(v);
        if (it == substitution.end()) {
            vars.insert(v);
            return vars;
        }
        for (SymbolId s : it->second) {
            if (db_->is_variable(s)) {
                vars.insert(s);
            }
        }
        return vars;
    };
    for (const auto& [x, y] : assertion.disjoint) {
        for (SymbolId u : variables_of(x)) {
            for (SymbolId w : variables_of(y)) {
                if (u == w || !theorem_->scope_disjoint.contains(make_disjoint_pair(u, w))) {
                    return false;
                }
            }
        }
    }
    return true;
}

std::vector<GoalId> MetamathEnvironment::instantiate(const Assertion& assertion,
                                                    const Substitution& substitution) {
    std::vector<GoalId> subgoals;
    for (std::uint32_t h : assertion.hypotheses) {
        const Hypothesis& hyp = db_->hypotheses()[h];
        if (!hyp.floating) {
            subgoals.push_back(intern_goal(substitute(hyp.expression, substitution)));
        }
    }
    return subgoals;
}

std::optional<std::vector<GoalId>> MetamathEnvironment::apply(GoalId goal, const Candidate& candidate) {
    if (candidate.substitution >= substitutions_.size() ||
        substitutions_[candidate.substitution].first != candidate.assertion ||
        candidate.assertion >= db_->assertions().size()) {
        return std::nullopt;
    }
    const Assertion& a = db_->assertions()[candidate.assertion];
    const Substitution& sub = substitutions_[candidate.substitution].second;
    for (std::uint32_t h : a.hypotheses) {
        const Hypothesis& hyp = db_->hypotheses()[h];
        if (hyp.floating) {
            auto it = sub.find(hyp.variable());
            if (it == sub.end() || !syntax_.accepts(hyp.expression[0], it->second)) {
                return std::nullopt;
            }
        }
    }
    if (substitute(a.conclusion, sub) != goal_expression(goal) || !disjoint_ok(a, sub)) {
        return std::nullopt;
    }
    return instantiate(a, sub);
}

void MetamathEnvironment::emit(const ProofNode& node, std::vector<std::string>& out) {
    if (!node.step) {
        const Expression& e = goal_expression(node.goal);
        for (const auto& [label, expression] : available_) {
            if (expression == e) {
                out.push_back(label);
                return;
            }
        }
        throw std::logic_error("leaf goal is not a hypothesis: " + db_->to_string(e));
    }
    const Assertion& a = db_->assertions().at(node.step->assertion);
    const Substitution& sub = substitution(node.step->substitution);
    std::size_t premise = 0;
    for (std::uint32_t h : a.hypotheses) {
        const Hypothesis& hyp = db_->hypotheses()[h];
        if (hyp.floating) {
            auto syntax_proof = syntax_.proof(hyp.expression[0], sub.at(hyp.variable()));
            if (!syntax_proof) {
                throw std::logic_error("no syntax proof for " + db_->to_string(sub.at(hyp.variable())));
            }
            out.insert(out.end(), syntax_proof->begin(), syntax_proof->end());
        } else {
            if (premise >= node.premises.size()) {
                throw std::logic_error("proof step for " + a.label + " is missing premises");
            }
            emit(node.premises[premise++], out);
        }
    }
    out.push_back(a.label);
}

std::vector<std::string> MetamathEnvironment::extract_proof(const ProofNode& proof) {
    std::vector<std::string> out;
    emit(proof, out);
    return out;
}

std::vector<std::string> extract_proof(const OrNode& root, MetamathEnvironment& env) {
    if (root.status != NodeStatus::proven) {
        throw std::logic_error("cannot extract a proof from an unproven root");
    }
    return env.extract_proof(*extract_proven_subtree(root));
}

}  // namespace andor::metamath
