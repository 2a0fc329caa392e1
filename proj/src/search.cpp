#include <algorithm>
#include <cassert>
#include <chrono>
#include <tuple>

#include "andor/policies.hpp"

namespace andor {

namespace {

bool is_holophrasm_family(Algorithm a) {
    return a == Algorithm::holophrasm || a == Algorithm::puct;
}

bool is_pp_family(Algorithm a) {
    return a == Algorithm::pp || a == Algorithm::pp_puct ||
           a == Algorithm::pp_modified_bandit || a == Algorithm::hypertree;
}

}  // namespace

Searcher::Searcher(ProofEnvironment& env, SearchConfig config)
    : env_(env),
      config_(config),
      ctx_{env, config.beam, 0, config.reject_cycles},
      stats_(is_holophrasm_family(config.algorithm) ? Stats::holophrasm : Stats::per_pass) {
    config_.validate();
    root_ = make_root(ctx_);
    if (is_pp_family(config_.algorithm)) {
        root_->value = pp_value(*root_);
    }
}

bool Searcher::finished() const {
    return root_->status != NodeStatus::open;
}

void Searcher::run_pass() {
    if (finished()) {
        return;
    }
    switch (config_.algorithm) {
        case Algorithm::minimax:
            minimax_search(*root_, config_.minimax_depth, config_.minimax_breadth, ctx_);
            break;
        case Algorithm::hypertree:
            hyper_or(*root_, 0);
            break;
        default:
            visit_or(*root_);
            break;
    }
    ++passes_;
}

SearchResult Searcher::run() {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    const std::uint64_t pass_limit = config_.algorithm == Algorithm::minimax ? 1 : config_.max_passes;
    while (!finished() && passes_ < pass_limit) {
        if (config_.time_limit && Clock::now() - start >= *config_.time_limit) {
            break;
        }
        run_pass();
    }

    SearchResult result;
    result.passes_used = passes_;
    result.nodes_created = ctx_.nodes_created;
    switch (root_->status) {
        case NodeStatus::proven:
            result.status = SearchStatus::proved;
            result.proof = extract_proven_subtree(*root_);
            break;
        case NodeStatus::dead:
            result.status = SearchStatus::disproved;
            break;
        case NodeStatus::open:
            result.status = SearchStatus::budget_exhausted;
            break;
    }
    result.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
    return result;
}

void Searcher::visit_or(OrNode& node) {
    const ExpandResult expansion = try_expand_or(node, ctx_);
    if (expansion.outcome == ExpandOutcome::added) {
        on_created(*expansion.added);
    } else if (expansion.outcome == ExpandOutcome::not_attempted) {
        if (auto index = select_and_child(node, config_)) {
            visit_and(*node.children[*index]);
        }
    }
    finish_or(node);
}

AndFate Searcher::visit_and(AndNode& node) {
    if (auto index = select_or_child(node, config_)) {
        visit_or(*node.children[*index]);
    }
    return finish_and(node);
}

void Searcher::hyper_or(OrNode& node, unsigned depth) {
    const ExpandResult expansion = try_expand_or(node, ctx_);
    if (expansion.outcome == ExpandOutcome::added) {
        on_created(*expansion.added);
    } else if (expansion.outcome == ExpandOutcome::not_attempted &&
               depth < config_.hypertree_depth_cap) {
        if (auto index = select_and_child(node, config_)) {
            hyper_and(*node.children[*index], depth + 1);
        }
    }
    finish_or(node);
}

AndFate Searcher::hyper_and(AndNode& node, unsigned depth) {
    for (auto& child : node.children) {
        if (child->status != NodeStatus::open) {
            continue;
        }
        hyper_or(*child, depth);
        if (child->status == NodeStatus::dead) {
            break;
        }
    }
    return finish_and(node);
}

void Searcher::on_created(AndNode& node) {
    if (is_pp_family(config_.algorithm)) {
        for (auto& child : node.children) {
            child->value = pp_value(*child);
        }
        node.value = pp_value(node);
    } else if (config_.algorithm == Algorithm::pns) {
        std::tie(node.pn, node.dpn) = pns_update(node);
    }
}

void Searcher::finish_or(OrNode& node) {
    update_proven(node, config_.dead_marking);
    if (stats_ == Stats::holophrasm && !node.children.empty()) {
        update_value_or(node);
    } else {
        ++node.visit;
    }
    if (is_pp_family(config_.algorithm)) {
        node.value = pp_value(node);
    } else if (config_.algorithm == Algorithm::pns) {
        std::tie(node.pn, node.dpn) = pns_update(node);
    }
}

AndFate Searcher::finish_and(AndNode& node) {
    if (update_proven(node) == AndFate::cut) {
        return AndFate::cut;
    }
    if (stats_ == Stats::holophrasm) {
        update_value_and(node);
    } else {
        ++node.visit;
    }
    if (is_pp_family(config_.algorithm)) {
        node.value = pp_value(node);
    } else if (config_.algorithm == Algorithm::pns) {
        std::tie(node.pn, node.dpn) = pns_update(node);
    }
    return AndFate::kept;
}

void Searcher::refresh_values() {
    refresh_or(*root_);
}

void Searcher::refresh_or(OrNode& node) {
    for (auto& child : node.children) {
        for (auto& hyp : child->children) {
            refresh_or(*hyp);
        }
        if (is_pp_family(config_.algorithm)) {
            child->value = pp_value(*child);
        } else if (config_.algorithm == Algorithm::pns) {
            std::tie(child->pn, child->dpn) = pns_update(*child);
        } else if (stats_ == Stats::holophrasm) {
            update_value_and(*child);
        }
    }
    if (is_pp_family(config_.algorithm)) {
        node.value = pp_value(node);
    } else if (config_.algorithm == Algorithm::pns) {
        std::tie(node.pn, node.dpn) = pns_update(node);
    } else if (stats_ == Stats::holophrasm) {
        update_value_or(node);
    }
}

double minimax_search(OrNode& node, unsigned depth, unsigned breadth, ExpansionContext& ctx) {
    if (node.status == NodeStatus::proven) {
        node.value = 1.0;
        return 1.0;
    }
    if (depth == 0) {
        node.value = node.network_payout;
        return node.value;
    }
    if (!node.heap.filled()) {
        node.heap.fill(ctx.env.candidates(node.goal, breadth));
    }
    double best = 0.0;
    while (!node.heap.empty()) {
        const ExpandResult expansion = expand_one(node, ctx);
        if (expansion.outcome != ExpandOutcome::added) {
            continue;
        }
        AndNode& app = *expansion.added;
        double worst = 1.0;
        for (auto& hyp : app.children) {
            const double v = minimax_search(*hyp, depth - 1, breadth, ctx);
            worst = std::min(worst, v);
            // min is already 0 and this premise cannot close: nothing below changes the result
            if (v == 0.0 && hyp->status != NodeStatus::proven) {
                break;
            }
        }
        app.value = worst;
        update_proven(app);
        best = std::max(best, worst);
        if (app.status == NodeStatus::proven) {
            break;
        }
    }
    update_proven(node, false);
    node.value = best;
    return best;
}

SearchResult run_search(ProofEnvironment& env, const SearchConfig& config) {
    Searcher searcher(env, config);
    return searcher.run();
}

}  // namespace andor
