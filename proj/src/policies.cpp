#include "andor/policies.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace andor {

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::holophrasm: return "holophrasm";
        case Algorithm::minimax: return "minimax";
        case Algorithm::puct: return "puct";
        case Algorithm::pp: return "pp";
        case Algorithm::pns: return "pns";
        case Algorithm::hypertree: return "hypertree";
        case Algorithm::pp_puct: return "pp-puct";
        case Algorithm::pp_modified_bandit: return "pp-mb";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    std::string key;
    for (char ch : name) {
        key.push_back(ch == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    for (Algorithm a : kAllAlgorithms) {
        if (key == to_string(a)) {
            return a;
        }
    }
    if (key == "hts" || key == "htps") return Algorithm::hypertree;
    if (key == "pp-modifiedbandit" || key == "pp-modified-bandit") return Algorithm::pp_modified_bandit;
    return std::nullopt;
}

std::string_view to_string(SearchStatus status) {
    switch (status) {
        case SearchStatus::proved: return "proved";
        case SearchStatus::disproved: return "disproved";
        case SearchStatus::budget_exhausted: return "budget_exhausted";
    }
    return "?";
}

void SearchConfig::validate() const {
    if (max_passes < 1) throw std::invalid_argument("max_passes must be >= 1");
    if (beam < 1) throw std::invalid_argument("beam must be >= 1");
    if (!std::isfinite(c_puct) || c_puct < 0.0) throw std::invalid_argument("C must be finite and >= 0");
    if (!std::isfinite(a) || a < 0.0) throw std::invalid_argument("a must be finite and >= 0");
    if (!std::isfinite(b) || b < 0.0) throw std::invalid_argument("b must be finite and >= 0");
    if (time_limit && time_limit->count() < 0) throw std::invalid_argument("time limit must be >= 0");
    if (algorithm == Algorithm::minimax && minimax_breadth < 1) {
        throw std::invalid_argument("minimax breadth must be >= 1");
    }
}

double holophrasm_valuation(double father_visit, const AndNode& child) {
    assert(father_visit >= 1.0);
    const double visit = static_cast<double>(child.visit);
    return child.value / (visit + 1.0) + 0.5 * child.prior / (1.0 + visit) +
           std::sqrt(std::log(father_visit) / (1.0 + visit));
}

double puct_valuation(double father_visit, const AndNode& child, double c) {
    assert(child.visit >= 1);
    const double visit = static_cast<double>(child.visit);
    return child.value / visit +
           c * child.prior / (1.0 + visit) * std::sqrt(father_visit);
}

double modified_valuation(double father_visit, const AndNode& child, double a, double b) {
    assert(child.visit >= 1 && father_visit >= 1.0);
    const double visit = static_cast<double>(child.visit);
    return child.value + a * child.prior * std::sqrt(father_visit) / visit +
           b * std::sqrt(std::log(father_visit) / visit);
}

namespace {

void check_probability(double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::domain_error("product propagation value outside [0,1]");
    }
}

}  // namespace

double pp_combine_and(std::span<const double> child_values) {
    double product = 1.0;
    for (double v : child_values) {
        check_probability(v);
        product *= v;
    }
    return product;
}

double pp_combine_or(std::span<const double> child_values, double leaf_value) {
    if (child_values.empty()) {
        check_probability(leaf_value);
        return leaf_value;
    }
    double miss = 1.0;
    double best = 0.0;
    for (double v : child_values) {
        check_probability(v);
        miss *= 1.0 - v;
        best = std::max(best, v);
    }
    // 1 - (1 - v) can round below v; the exact value never does
    return std::max(1.0 - miss, best);
}

double pp_value(const OrNode& node) {
    switch (node.status) {
        case NodeStatus::proven: return 1.0;
        case NodeStatus::dead: return 0.0;
        case NodeStatus::open: break;
    }
    std::vector<double> values;
    values.reserve(node.children.size());
    for (const auto& child : node.children) {
        values.push_back(child->value);
    }
    return pp_combine_or(values, node.network_payout);
}

double pp_value(const AndNode& node) {
    if (node.status == NodeStatus::proven) {
        return 1.0;
    }
    std::vector<double> values;
    values.reserve(node.children.size());
    for (const auto& child : node.children) {
        values.push_back(child->value);
    }
    return pp_combine_and(values);
}

PnsPair pns_init(NodeStatus status) {
    switch (status) {
        case NodeStatus::proven: return {0, kInfiniteProofNumber};
        case NodeStatus::dead: return {kInfiniteProofNumber, 0};
        case NodeStatus::open: break;
    }
    return {1, 1};
}

PnsPair pns_combine_or(std::span<const PnsPair> children) {
    ProofNumber pn = kInfiniteProofNumber;
    ProofNumber dpn = 0;
    for (const auto& [cpn, cdpn] : children) {
        pn = std::min(pn, cpn);
        dpn = saturating_add(dpn, cdpn);
    }
    return {pn, dpn};
}

PnsPair pns_combine_and(std::span<const PnsPair> children) {
    ProofNumber pn = 0;
    ProofNumber dpn = kInfiniteProofNumber;
    for (const auto& [cpn, cdpn] : children) {
        pn = saturating_add(pn, cpn);
        dpn = std::min(dpn, cdpn);
    }
    return {pn, dpn};
}

PnsPair pns_update(const OrNode& node) {
    if (node.status != NodeStatus::open || node.children.empty()) {
        return pns_init(node.status);
    }
    std::vector<PnsPair> pairs;
    pairs.reserve(node.children.size());
    for (const auto& child : node.children) {
        pairs.emplace_back(child->pn, child->dpn);
    }
    return pns_combine_or(pairs);
}

PnsPair pns_update(const AndNode& node) {
    if (node.status != NodeStatus::open || node.children.empty()) {
        return pns_init(node.children.empty() ? NodeStatus::proven : node.status);
    }
    std::vector<PnsPair> pairs;
    pairs.reserve(node.children.size());
    for (const auto& child : node.children) {
        pairs.emplace_back(child->pn, child->dpn);
    }
    return pns_combine_and(pairs);
}

namespace {

/// Lowest-index argmax of `score` over open children.
template <class Children, class Score>
std::optional<std::size_t> argmax_open(const Children& children, Score score) {
    std::optional<std::size_t> best;
    double best_score = 0.0;
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (children[i]->status != NodeStatus::open) {
            continue;
        }
        const double s = score(*children[i]);
        if (!best || s > best_score) {
            best = i;
            best_score = s;
        }
    }
    return best;
}

template <class Children, class Key>
std::optional<std::size_t> argmin_open(const Children& children, Key key) {
    return argmax_open(children, [&](const auto& c) { return -key(c); });
}

template <class Children, class Key>
std::optional<std::size_t> argmin_number(const Children& children, Key key) {
    std::optional<std::size_t> best;
    ProofNumber best_key = 0;
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (children[i]->status != NodeStatus::open) {
            continue;
        }
        const ProofNumber k = key(*children[i]);
        if (!best || k < best_key) {
            best = i;
            best_key = k;
        }
    }
    return best;
}

double puct_exploration(double father_visit, const AndNode& child, double c) {
    return c * child.prior / (1.0 + static_cast<double>(child.visit)) * std::sqrt(father_visit);
}

}  // namespace

std::optional<std::size_t> pns_select(const OrNode& node, bool inverted_selection) {
    if (inverted_selection) {
        return argmin_number(node.children, [](const AndNode& c) { return c.dpn; });
    }
    return argmin_number(node.children, [](const AndNode& c) { return c.pn; });
}

std::optional<std::size_t> pns_select(const AndNode& node, bool inverted_selection) {
    if (inverted_selection) {
        return argmin_number(node.children, [](const OrNode& c) { return c.pn; });
    }
    return argmin_number(node.children, [](const OrNode& c) { return c.dpn; });
}

std::optional<std::size_t> select_and_child(const OrNode& node, const SearchConfig& config) {
    const double father = static_cast<double>(std::max<std::uint64_t>(node.visit, 1));
    switch (config.algorithm) {
        case Algorithm::holophrasm:
            return argmax_open(node.children,
                               [&](const AndNode& c) { return holophrasm_valuation(father, c); });
        case Algorithm::puct:
            return argmax_open(node.children, [&](const AndNode& c) {
                return puct_valuation(father, c, config.c_puct);
            });
        case Algorithm::pp:
            return argmax_open(node.children, [](const AndNode& c) { return c.value; });
        case Algorithm::pp_puct:
        case Algorithm::hypertree:
            return argmax_open(node.children, [&](const AndNode& c) {
                return c.value + puct_exploration(father, c, config.c_puct);
            });
        case Algorithm::pp_modified_bandit:
            return argmax_open(node.children, [&](const AndNode& c) {
                return modified_valuation(father, c, config.a, config.b);
            });
        case Algorithm::pns:
            return pns_select(node, config.pns_inverted_selection);
        case Algorithm::minimax:
            break;
    }
    return std::nullopt;
}

std::optional<std::size_t> select_or_child(const AndNode& node, const SearchConfig& config) {
    switch (config.algorithm) {
        case Algorithm::pp:
            return argmin_open(node.children, [](const OrNode& c) { return c.value; });
        case Algorithm::pns:
            return pns_select(node, config.pns_inverted_selection);
        case Algorithm::minimax:
            return std::nullopt;
        default:
            return argmin_open(node.children, [](const OrNode& c) {
                return c.value / static_cast<double>(std::max<std::uint64_t>(c.visit, 1));
            });
    }
}

}  // namespace andor
