#include <algorithm>
#include <cassert>

#include "andor/metamath/matcher.hpp"

namespace andor::metamath {

namespace {

class PatternMatcher {
public:
    PatternMatcher(std::span<const SymbolId> pattern, std::span<const SymbolId> target,
                   const VariablePredicate& is_variable, const ImageFilter& accept, std::size_t cap)
        : pattern_(pattern), target_(target), is_variable_(is_variable), accept_(accept), cap_(cap) {}

    std::vector<Substitution> run() {
        if (cap_ > 0) {
            step(0, 0);
        }
        return std::move(results_);
    }

private:
    // Fewest target symbols the pattern suffix starting at `from` can consume.
    std::size_t min_length(std::size_t from) const {
        std::size_t n = 0;
        for (std::size_t i = from; i < pattern_.size(); ++i) {
            auto it = binding_.find(pattern_[i]);
            n += it != binding_.end() ? it->second.size() : 1;
        }
        return n;
    }

    void step(std::size_t pi, std::size_t ti) {
        if (results_.size() >= cap_) {
            return;
        }
        if (pi == pattern_.size()) {
            if (ti == target_.size()) {
                results_.push_back(binding_);
            }
            return;
        }
        const SymbolId symbol = pattern_[pi];
        const std::size_t remaining = target_.size() - ti;
        if (pi == 0 || !is_variable_(symbol)) {
            if (remaining > 0 && target_[ti] == symbol) {
                step(pi + 1, ti + 1);
            }
            return;
        }
        if (auto it = binding_.find(symbol); it != binding_.end()) {
            const auto& image = it->second;
            if (image.size() <= remaining &&
                std::equal(image.begin(), image.end(), target_.begin() + static_cast<std::ptrdiff_t>(ti))) {
                step(pi + 1, ti + image.size());
            }
            return;
        }
        const std::size_t rest = min_length(pi + 1);
        if (rest >= remaining) {
            return;
        }
        for (std::size_t len = remaining - rest; len >= 1; --len) {
            const auto image = target_.subspan(ti, len);
            if (!accept_(symbol, image)) {
                continue;
            }
            binding_.emplace(symbol, std::vector<SymbolId>(image.begin(), image.end()));
            step(pi + 1, ti + len);
            binding_.erase(symbol);
            if (results_.size() >= cap_) {
                return;
            }
        }
    }

    std::span<const SymbolId> pattern_;
    std::span<const SymbolId> target_;
    const VariablePredicate& is_variable_;
    const ImageFilter& accept_;
    std::size_t cap_;
    Substitution binding_;
    std::vector<Substitution> results_;
};

}  // namespace

std::vector<Substitution> match_pattern(std::span<const SymbolId> pattern,
                                        std::span<const SymbolId> target,
                                        const VariablePredicate& is_variable,
                                        const ImageFilter& accept, std::size_t cap) {
    if (pattern.empty() || target.empty()) {
        return {};
    }
    return PatternMatcher(pattern, target, is_variable, accept, cap).run();
}

std::map<SymbolId, SymbolId> variable_types(const MmDatabase& db, const Assertion& assertion) {
    std::map<SymbolId, SymbolId> types;
    for (std::uint32_t h : assertion.hypotheses) {
        const Hypothesis& hyp = db.hypotheses()[h];
        if (hyp.floating) {
            types.emplace(hyp.variable(), hyp.expression[0]);
        }
    }
    return types;
}

SyntaxParser::SyntaxParser(const MmDatabase& db, std::span<const std::uint32_t> floating,
                           std::size_t statement_limit)
    : db_(db) {
    for (std::uint32_t h : floating) {
        const Hypothesis& hyp = db.hypotheses()[h];
        if (hyp.floating) {
            context_.emplace(hyp.variable(), h);
        }
    }
    for (std::uint32_t i = 0; i < db.assertions().size(); ++i) {
        const Assertion& a = db.assertions()[i];
        if (a.statement < statement_limit && !db.is_logical(a)) {
            axioms_.push_back({i, variable_types(db, a)});
        }
    }
}

std::optional<SymbolId> SyntaxParser::variable_type(SymbolId variable) const {
    auto it = context_.find(variable);
    if (it == context_.end()) {
        return std::nullopt;
    }
    return db_.hypotheses()[it->second].expression[0];
}

bool SyntaxParser::accepts(SymbolId typecode, std::span<const SymbolId> body) {
    return solve(typecode, body).has_value();
}

std::optional<std::vector<std::string>> SyntaxParser::proof(SymbolId typecode,
                                                            std::span<const SymbolId> body) {
    return solve(typecode, body);
}

const std::optional<std::vector<std::string>>& SyntaxParser::solve(SymbolId typecode,
                                                                   std::span<const SymbolId> body) {
    auto key = std::make_pair(typecode, std::vector<SymbolId>(body.begin(), body.end()));
    if (auto it = memo_.find(key); it != memo_.end()) {
        // An in-progress entry is a left-recursive re-entry: treat as failure.
        return it->second.proof;
    }
    auto [slot, inserted] = memo_.emplace(key, Entry{});
    assert(inserted);

    std::optional<std::vector<std::string>> found;
    std::optional<std::uint32_t> used;
    std::vector<Subterm> parts;
    if (body.size() == 1 && db_.is_variable(body[0])) {
        if (auto it = context_.find(body[0]); it != context_.end()) {
            const Hypothesis& hyp = db_.hypotheses()[it->second];
            if (hyp.expression[0] == typecode) {
                found = std::vector<std::string>{hyp.label};
            }
        }
    }

    std::vector<SymbolId> target;
    target.reserve(body.size() + 1);
    target.push_back(typecode);
    target.insert(target.end(), body.begin(), body.end());
    const VariablePredicate is_variable = [this](SymbolId s) { return db_.is_variable(s); };

    for (const SyntaxAxiom& axiom : axioms_) {
        if (found) {
            break;
        }
        const Assertion& a = db_.assertions()[axiom.assertion];
        if (a.conclusion[0] != typecode) {
            continue;
        }
        const ImageFilter accept = [&](SymbolId var, std::span<const SymbolId> image) {
            auto t = axiom.variable_types.find(var);
            return t != axiom.variable_types.end() && accepts(t->second, image);
        };
        auto matches = match_pattern(a.conclusion, target, is_variable, accept, 1);
        if (matches.empty()) {
            continue;
        }
        const Substitution& sub = matches.front();
        std::vector<std::string> steps;
        for (std::uint32_t h : a.hypotheses) {
            const Hypothesis& hyp = db_.hypotheses()[h];
            const auto& image = sub.at(hyp.variable());
            const auto& part = solve(hyp.expression[0], image);
            steps.insert(steps.end(), part->begin(), part->end());
        }
        steps.push_back(a.label);
        found = std::move(steps);
        used = axiom.assertion;
        std::size_t at = 0;
        for (SymbolId s : std::span(a.conclusion).subspan(1)) {
            auto t = axiom.variable_types.find(s);
            if (db_.is_variable(s) && t != axiom.variable_types.end()) {
                const std::size_t n = sub.at(s).size();
                parts.push_back({t->second, at, n});
                at += n;
            } else {
                ++at;
            }
        }
    }

    // emplace may have been followed by other insertions; std::map nodes are stable.
    slot->second.in_progress = false;
    slot->second.proof = std::move(found);
    slot->second.axiom = used;
    slot->second.parts = std::move(parts);
    return slot->second.proof;
}

std::vector<SyntaxParser::Subterm> SyntaxParser::subterms(SymbolId typecode, std::span<const SymbolId> body) {
    std::vector<Subterm> out;
    if (accepts(typecode, body)) {
        collect(typecode, body, 0, out);
    }
    return out;
}

void SyntaxParser::collect(SymbolId typecode, std::span<const SymbolId> body, std::size_t offset,
                           std::vector<Subterm>& out) {
    out.push_back({typecode, offset, body.size()});
    const Entry& entry = memo_.at(std::make_pair(typecode, std::vector<SymbolId>(body.begin(), body.end())));
    // Copy: recursion may insert into memo_, but never mutates this entry.
    const std::vector<Subterm> parts = entry.parts;
    for (const Subterm& part : parts) {
        collect(part.typecode, body.subspan(part.offset, part.length), offset + part.offset, out);
    }
}

std::vector<Substitution> unify_conclusion(const MmDatabase& db, const Assertion& assertion,
                                           std::span<const SymbolId> goal, SyntaxParser& syntax,
                                           std::size_t cap) {
    const auto types = variable_types(db, assertion);
    const VariablePredicate is_variable = [&db](SymbolId s) { return db.is_variable(s); };
    const ImageFilter accept = [&](SymbolId var, std::span<const SymbolId> image) {
        auto t = types.find(var);
        return t != types.end() && syntax.accepts(t->second, image);
    };
    return match_pattern(assertion.conclusion, goal, is_variable, accept, cap);
}

}  // namespace andor::metamath
