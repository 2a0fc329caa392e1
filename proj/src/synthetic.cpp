#include "andor/synthetic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "andor/policies.hpp"

namespace andor::synthetic {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit_interval(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// std::mt19937_64 is fully specified; the distributions are not, so draws
// are reduced by hand to keep trees identical across standard libraries.
unsigned draw_count(std::mt19937_64& rng, unsigned max) {
    return 1 + static_cast<unsigned>(rng() % max);
}

bool draw_bernoulli(std::mt19937_64& rng, double p) {
    return unit_interval(rng()) < p;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw std::invalid_argument("bad value for '" + std::string(key) + "': " + std::string(text));
    }
    return value;
}

}  // namespace

void SyntheticSpec::validate() const {
    if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
    if (or_branching < 1 || and_branching < 1) throw std::invalid_argument("branchings must be >= 1");
    if (!(leaf_proven_prob >= 0.0 && leaf_proven_prob <= 1.0)) {
        throw std::invalid_argument("leaf_proven_prob must be in [0,1]");
    }
    if (!(oracle_noise >= 0.0 && oracle_noise <= 1.0)) {
        throw std::invalid_argument("oracle_noise must be in [0,1]");
    }
    if (!(prior_quality >= 0.0) || !std::isfinite(prior_quality)) {
        throw std::invalid_argument("prior_quality must be finite and >= 0");
    }
}

std::string to_text(const SyntheticSpec& spec) {
    std::ostringstream out;
    out.precision(17);
    out << "seed=" << spec.seed << " max_depth=" << spec.max_depth
        << " or_branching=" << spec.or_branching << " and_branching=" << spec.and_branching
        << " leaf_proven_prob=" << spec.leaf_proven_prob << " oracle_noise=" << spec.oracle_noise
        << " prior_quality=" << spec.prior_quality;
    return out.str();
}

SyntheticSpec parse_spec(std::string_view line) {
    SyntheticSpec spec;
    std::istringstream in{std::string(line)};
    std::string field;
    while (in >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("expected key=value, got '" + field + "'");
        }
        const std::string_view key = std::string_view(field).substr(0, eq);
        const std::string_view value = std::string_view(field).substr(eq + 1);
        if (key == "seed") spec.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "max_depth") spec.max_depth = parse_number<unsigned>(key, value);
        else if (key == "or_branching") spec.or_branching = parse_number<unsigned>(key, value);
        else if (key == "and_branching") spec.and_branching = parse_number<unsigned>(key, value);
        else if (key == "leaf_proven_prob") spec.leaf_proven_prob = parse_number<double>(key, value);
        else if (key == "oracle_noise") spec.oracle_noise = parse_number<double>(key, value);
        else if (key == "prior_quality") spec.prior_quality = parse_number<double>(key, value);
        else throw std::invalid_argument("unknown key '" + std::string(key) + "'");
    }
    spec.validate();
    return spec;
}

std::vector<SyntheticSpec> read_suite(std::istream& in) {
    std::vector<SyntheticSpec> specs;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        specs.push_back(parse_spec(line));
    }
    return specs;
}

void write_suite(std::ostream& out, std::span<const SyntheticSpec> specs) {
    for (const auto& spec : specs) {
        out << to_text(spec) << '\n';
    }
}

SyntheticSpec suite_spec(std::uint64_t index, std::uint64_t base_seed, double noise) {
    static constexpr double kLeafProbabilities[] = {0.35, 0.5, 0.65, 0.8, 0.9};
    const std::uint64_t h = splitmix64(base_seed * 0x100000001b3ULL + index);
    SyntheticSpec spec;
    spec.seed = splitmix64(h);
    spec.max_depth = 1 + static_cast<unsigned>(h % 5);
    spec.or_branching = 1 + static_cast<unsigned>((h >> 8) % 3);
    spec.and_branching = 1 + static_cast<unsigned>((h >> 16) % 3);
    spec.leaf_proven_prob = kLeafProbabilities[(h >> 24) % 5];
    spec.oracle_noise = noise;
    return spec;
}

std::vector<SyntheticSpec> make_suite(std::size_t count, std::uint64_t base_seed, double noise) {
    std::vector<SyntheticSpec> specs;
    specs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        specs.push_back(suite_spec(i, base_seed, noise));
    }
    return specs;
}

SyntheticTree generate(const SyntheticSpec& spec) {
    spec.validate();
    SyntheticTree tree;
    tree.spec = spec;
    std::mt19937_64 rng(spec.seed);

    tree.or_nodes.push_back({});
    std::deque<std::uint32_t> frontier{0};
    while (!frontier.empty()) {
        const std::uint32_t id = frontier.front();
        frontier.pop_front();
        const unsigned depth = tree.or_nodes[id].depth;
        if (depth >= spec.max_depth) {
            tree.or_nodes[id].leaf_proven = draw_bernoulli(rng, spec.leaf_proven_prob);
            continue;
        }
        const unsigned and_count = draw_count(rng, spec.or_branching);
        for (unsigned i = 0; i < and_count; ++i) {
            const auto and_id = static_cast<std::uint32_t>(tree.and_nodes.size());
            tree.and_nodes.push_back({id, {}});
            tree.or_nodes[id].ands.push_back(and_id);
            const unsigned or_count = draw_count(rng, spec.and_branching);
            for (unsigned j = 0; j < or_count; ++j) {
                const auto child = static_cast<std::uint32_t>(tree.or_nodes.size());
                tree.or_nodes.push_back({depth + 1, {}, false});
                tree.and_nodes[and_id].ors.push_back(child);
                frontier.push_back(child);
            }
        }
    }
    return tree;
}

std::vector<bool> brute_force_provability(const SyntheticTree& tree) {
    // Children always have larger ids than their parents, so one reverse
    // sweep sees every child before its parent.
    std::vector<bool> provable(tree.or_nodes.size(), false);
    for (std::size_t i = tree.or_nodes.size(); i-- > 0;) {
        const auto& node = tree.or_nodes[i];
        if (node.ands.empty()) {
            provable[i] = node.leaf_proven;
            continue;
        }
        bool any = false;
        for (std::uint32_t a : node.ands) {
            bool all = true;
            for (std::uint32_t o : tree.and_nodes[a].ors) {
                all = all && provable[o];
            }
            any = any || all;
        }
        provable[i] = any;
    }
    return provable;
}

bool brute_force_provable(const SyntheticTree& tree) {
    return brute_force_provability(tree)[0];
}

double brute_force_pp_value(const SyntheticTree& tree, std::span<const double> leaf_values) {
    if (leaf_values.size() != tree.or_nodes.size()) {
        throw std::invalid_argument("leaf_values must have one entry per OR node");
    }
    std::vector<double> value(tree.or_nodes.size(), 0.0);
    for (std::size_t i = tree.or_nodes.size(); i-- > 0;) {
        const auto& node = tree.or_nodes[i];
        if (node.ands.empty()) {
            value[i] = leaf_values[i];
            continue;
        }
        std::vector<double> and_values;
        for (std::uint32_t a : node.ands) {
            std::vector<double> or_values;
            for (std::uint32_t o : tree.and_nodes[a].ors) {
                or_values.push_back(value[o]);
            }
            and_values.push_back(pp_combine_and(or_values));
        }
        value[i] = pp_combine_or(and_values, 0.0);
    }
    return value[0];
}

double noisy_evaluate(bool provable, std::uint32_t node, double noise, std::uint64_t seed) {
    const double truth = provable ? 1.0 : 0.0;
    if (noise <= 0.0) {
        return truth;
    }
    const std::uint64_t bits = splitmix64(seed ^ splitmix64(node));
    const double magnitude = unit_interval(bits) * noise;
    const double signed_delta = (bits & 1U) ? magnitude : -magnitude;
    return std::clamp(truth + signed_delta, 0.0, 1.0);
}

SyntheticEnvironment::SyntheticEnvironment(std::shared_ptr<const SyntheticTree> tree,
                                           std::optional<std::vector<double>> leaf_values)
    : tree_(std::move(tree)), provable_(brute_force_provability(*tree_)), leaf_values_(std::move(leaf_values)) {
    if (leaf_values_ && leaf_values_->size() != tree_->or_nodes.size()) {
        throw std::invalid_argument("leaf_values must have one entry per OR node");
    }
}

double SyntheticEnvironment::evaluate(GoalId goal) {
    if (leaf_values_ && tree_->is_leaf(goal)) {
        return (*leaf_values_)[goal];
    }
    return noisy_evaluate(provable_[goal], goal, tree_->spec.oracle_noise, tree_->spec.seed);
}

std::vector<Candidate> SyntheticEnvironment::candidates(GoalId goal, std::size_t beam) {
    const auto& ands = tree_->or_nodes[goal].ands;
    const std::size_t n = std::min(beam, ands.size());
    if (n == 0) {
        return {};
    }
    std::vector<double> scores;
    scores.reserve(ands.size());
    for (std::uint32_t a : ands) {
        bool good = true;
        for (std::uint32_t o : tree_->and_nodes[a].ors) {
            good = good && provable_[o];
        }
        scores.push_back(1.0 + (good ? tree_->spec.prior_quality : 0.0));
    }
    const std::vector<double> priors = normalize_priors(scores);

    std::vector<Candidate> out;
    out.reserve(ands.size());
    for (std::size_t i = 0; i < ands.size(); ++i) {
        out.push_back({ands[i], 0, priors[i]});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Candidate& x, const Candidate& y) { return x.priority > y.priority; });
    out.resize(n);
    return out;
}

std::optional<std::vector<GoalId>> SyntheticEnvironment::apply(GoalId goal, const Candidate& candidate) {
    if (candidate.assertion >= tree_->and_nodes.size() ||
        tree_->and_nodes[candidate.assertion].parent != goal) {
        return std::nullopt;
    }
    const auto& ors = tree_->and_nodes[candidate.assertion].ors;
    return std::vector<GoalId>(ors.begin(), ors.end());
}

bool SyntheticEnvironment::trivially_proven(GoalId goal) const {
    const auto& node = tree_->or_nodes[goal];
    return node.ands.empty() && node.leaf_proven;
}

bool check_proof(const SyntheticTree& tree, const ProofNode& proof) {
    if (proof.goal >= tree.or_nodes.size()) {
        return false;
    }
    const auto& node = tree.or_nodes[proof.goal];
    if (!proof.step) {
        return node.ands.empty() && node.leaf_proven && proof.premises.empty();
    }
    const std::uint32_t a = proof.step->assertion;
    if (a >= tree.and_nodes.size() || tree.and_nodes[a].parent != proof.goal) {
        return false;
    }
    const auto& ors = tree.and_nodes[a].ors;
    if (ors.size() != proof.premises.size()) {
        return false;
    }
    for (std::size_t i = 0; i < ors.size(); ++i) {
        if (proof.premises[i].goal != ors[i] || !check_proof(tree, proof.premises[i])) {
            return false;
        }
    }
    return true;
}

}  // namespace andor::synthetic
