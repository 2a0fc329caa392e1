#include "andor/proof_tree.hpp"

#include <algorithm>
#include <cassert>
#include <exception>

namespace andor {

const char* to_string(NodeStatus status) {
    switch (status) {
        case NodeStatus::open: return "open";
        case NodeStatus::proven: return "proven";
        case NodeStatus::dead: return "dead";
    }
    return "?";
}

ProofNumber saturating_add(ProofNumber lhs, ProofNumber rhs) {
    if (lhs > kInfiniteProofNumber - rhs) {
        return kInfiniteProofNumber;
    }
    return lhs + rhs;
}

void CandidateHeap::fill(std::vector<Candidate> candidates) {
    assert(!filled_);
    filled_ = true;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        queue_.push(Entry{candidates[i], i});
    }
}

Candidate CandidateHeap::pop() {
    assert(!queue_.empty());
    Candidate top = queue_.top().candidate;
    queue_.pop();
    return top;
}

void promote(NodeStatus& status, NodeStatus to) {
    if (status == to) {
        return;
    }
    assert(status == NodeStatus::open && "proven/dead are absorbing");
    if (status == NodeStatus::open) {
        status = to;
    }
}

void initialize_or(OrNode& node, ExpansionContext& ctx) {
    node.id = ++ctx.nodes_created;
    node.network_payout = std::clamp(ctx.env.evaluate(node.goal), 0.0, 1.0);
    node.value = node.network_payout;
    node.visit = 1;
    if (ctx.env.trivially_proven(node.goal)) {
        node.hypothesis = true;
        promote(node.status, NodeStatus::proven);
        node.pn = 0;
        node.dpn = kInfiniteProofNumber;
    }
}

std::unique_ptr<OrNode> make_root(ExpansionContext& ctx) {
    auto root = std::make_unique<OrNode>(ctx.env.root_goal());
    initialize_or(*root, ctx);
    return root;
}

bool widening_allows(const OrNode& node) {
    const double budget = static_cast<double>(node.visit) / 6.0 + 0.01;
    return budget > static_cast<double>(node.children.size() + node.childless_visit);
}

namespace {

bool repeats_ancestor(const OrNode& node, const std::vector<GoalId>& subgoals) {
    for (const OrNode* up = &node; up != nullptr; up = up->parent ? up->parent->parent : nullptr) {
        if (std::find(subgoals.begin(), subgoals.end(), up->goal) != subgoals.end()) {
            return true;
        }
    }
    return false;
}

}  // namespace

ExpandResult expand_one(OrNode& node, ExpansionContext& ctx) {
    if (!node.heap.filled()) {
        node.heap.fill(ctx.env.candidates(node.goal, ctx.beam));
    }
    if (node.heap.empty()) {
        ++node.childless_visit;
        return {ExpandOutcome::failed, nullptr};
    }
    const Candidate candidate = node.heap.pop();

    std::optional<std::vector<GoalId>> subgoals;
    try {
        subgoals = ctx.env.apply(node.goal, candidate);
    } catch (const std::exception&) {
        subgoals.reset();
    }
    if (!subgoals || (ctx.reject_cycles && repeats_ancestor(node, *subgoals))) {
        ++node.childless_visit;
        return {ExpandOutcome::failed, nullptr};
    }

    auto child = std::make_unique<AndNode>();
    child->candidate = candidate;
    child->id = ++ctx.nodes_created;
    child->prior = candidate.priority;
    child->parent = &node;
    child->children.reserve(subgoals->size());
    bool all_proven = true;
    for (GoalId goal : *subgoals) {
        auto hyp = std::make_unique<OrNode>(goal);
        hyp->parent = child.get();
        initialize_or(*hyp, ctx);
        all_proven = all_proven && hyp->status == NodeStatus::proven;
        child->children.push_back(std::move(hyp));
    }
    update_value_and(*child);
    if (all_proven) {
        promote(child->status, NodeStatus::proven);
        child->pn = 0;
        child->dpn = kInfiniteProofNumber;
    }
    node.children.push_back(std::move(child));
    return {ExpandOutcome::added, node.children.back().get()};
}

ExpandResult try_expand_or(OrNode& node, ExpansionContext& ctx) {
    if (!node.heap.filled()) {
        node.heap.fill(ctx.env.candidates(node.goal, ctx.beam));
    }
    if (!widening_allows(node)) {
        return {ExpandOutcome::not_attempted, nullptr};
    }
    return expand_one(node, ctx);
}

void update_value_or(OrNode& node) {
    if (node.children.empty()) {
        return;
    }
    std::uint64_t visits = node.childless_visit + 1;
    double value = node.network_payout;
    for (const auto& child : node.children) {
        visits += child->visit;
        value += child->value;
    }
    node.visit = visits;
    node.value = value;
}

void update_value_and(AndNode& node) {
    if (node.children.empty()) {
        return;
    }
    const OrNode* bad = nullptr;
    double bad_ratio = 0.0;
    for (const auto& child : node.children) {
        assert(child->visit > 0 && "OR children are visited on creation");
        const double ratio = child->value / static_cast<double>(child->visit);
        if (bad == nullptr || ratio < bad_ratio) {
            bad = child.get();
            bad_ratio = ratio;
        }
    }
    node.visit = bad->visit;
    node.value = bad->value;
}

void update_proven(OrNode& node, bool dead_marking) {
    if (node.status != NodeStatus::open) {
        return;
    }
    if (dead_marking && node.children.empty() && node.visit > 1 && node.heap.filled() &&
        node.heap.empty()) {
        promote(node.status, NodeStatus::dead);
        return;
    }
    for (const auto& child : node.children) {
        if (child->status == NodeStatus::proven) {
            promote(node.status, NodeStatus::proven);
            return;
        }
    }
}

AndFate update_proven(AndNode& node) {
    bool all_proven = true;
    bool any_dead = false;
    for (const auto& child : node.children) {
        all_proven = all_proven && child->status == NodeStatus::proven;
        any_dead = any_dead || child->status == NodeStatus::dead;
    }
    if (any_dead) {
        assert(node.parent != nullptr);
        promote(node.status, NodeStatus::dead);
        if (node.parent != nullptr) {
            cut_and_node(*node.parent, node);
        }
        return AndFate::cut;
    }
    if (all_proven) {
        promote(node.status, NodeStatus::proven);
    }
    return AndFate::kept;
}

void cut_and_node(OrNode& parent, const AndNode& child) {
    auto it = std::find_if(parent.children.begin(), parent.children.end(),
                           [&](const auto& c) { return c.get() == &child; });
    assert(it != parent.children.end() && "cut_and_node: not a child of this parent");
    if (it != parent.children.end()) {
        parent.children.erase(it);
    }
}

namespace {

std::optional<ProofNode> extract_or(const OrNode& node) {
    if (node.status != NodeStatus::proven) {
        return std::nullopt;
    }
    ProofNode out;
    out.goal = node.goal;
    if (node.hypothesis) {
        return out;
    }
    for (const auto& child : node.children) {
        if (child->status != NodeStatus::proven) {
            continue;
        }
        out.step = child->candidate;
        out.premises.reserve(child->children.size());
        for (const auto& hyp : child->children) {
            auto premise = extract_or(*hyp);
            if (!premise) {
                return std::nullopt;
            }
            out.premises.push_back(std::move(*premise));
        }
        return out;
    }
    return std::nullopt;
}

void refresh_statuses(OrNode& node) {
    for (auto& child : node.children) {
        for (auto& hyp : child->children) {
            refresh_statuses(*hyp);
        }
        update_proven(*child);
    }
    update_proven(node, false);
}

}  // namespace

std::optional<ProofNode> extract_proven_subtree(const OrNode& root) {
    return extract_or(root);
}

std::size_t proof_size(const ProofNode& proof) {
    std::size_t n = proof.step ? 1 : 0;
    for (const auto& p : proof.premises) {
        n += proof_size(p);
    }
    return n;
}

bool expand_exhaustively(OrNode& root, ExpansionContext& ctx, std::uint64_t max_nodes) {
    std::vector<OrNode*> pending{&root};
    bool complete = true;
    while (!pending.empty()) {
        OrNode* node = pending.back();
        pending.pop_back();
        if (node->hypothesis) {
            continue;
        }
        while (!(node->heap.filled() && node->heap.empty())) {
            if (ctx.nodes_created >= max_nodes) {
                complete = false;
                break;
            }
            expand_one(*node, ctx);
        }
        for (auto& child : node->children) {
            for (auto& hyp : child->children) {
                pending.push_back(hyp.get());
            }
        }
    }
    refresh_statuses(root);
    return complete;
}

}  // namespace andor
