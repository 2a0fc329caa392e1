#include <algorithm>
#include <set>
#include <sstream>

#include "andor/metamath/verifier.hpp"

namespace andor::metamath {

std::string_view to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::none: return "accepted";
        case RejectReason::unknown_label: return "unknown label";
        case RejectReason::stack_underflow: return "stack underflow";
        case RejectReason::hypothesis_mismatch: return "hypothesis mismatch";
        case RejectReason::disjoint_violation: return "disjoint violation";
        case RejectReason::wrong_final_statement: return "wrong final statement";
    }
    return "unknown";
}

namespace {

Verdict reject(RejectReason reason, std::string detail) {
    return Verdict{reason, std::move(detail)};
}

}  // namespace

Verdict verify_proof(const MmDatabase& db, std::string_view theorem, std::span<const std::string> proof) {
    const Assertion* target = db.find_assertion(theorem);
    if (target == nullptr) {
        return reject(RejectReason::unknown_label, "no theorem '" + std::string(theorem) + "'");
    }
    std::set<std::uint32_t> active(target->scope_hypotheses.begin(), target->scope_hypotheses.end());

    std::vector<Expression> stack;
    for (std::size_t step = 0; step < proof.size(); ++step) {
        const std::string& label = proof[step];
        const std::string where = "step " + std::to_string(step + 1) + " (" + label + ")";

        if (const Hypothesis* hyp = db.find_hypothesis(label)) {
            const auto index = static_cast<std::uint32_t>(hyp - db.hypotheses().data());
            if (!active.contains(index)) {
                return reject(RejectReason::unknown_label, where + ": hypothesis not in scope");
            }
            stack.push_back(hyp->expression);
            continue;
        }
        const Assertion* cited = db.find_assertion(label);
        if (cited == nullptr || cited->statement >= target->statement) {
            return reject(RejectReason::unknown_label, where + ": not an earlier assertion");
        }
        const std::size_t arity = cited->hypotheses.size();
        if (stack.size() < arity) {
            return reject(RejectReason::stack_underflow, where + ": needs " + std::to_string(arity) +
                                                             " entries, stack has " +
                                                             std::to_string(stack.size()));
        }
        const std::size_t base = stack.size() - arity;

        Substitution sub;
        for (std::size_t i = 0; i < arity; ++i) {
            const Hypothesis& h = db.hypotheses()[cited->hypotheses[i]];
            if (!h.floating) {
                continue;
            }
            const Expression& entry = stack[base + i];
            if (entry.empty() || entry[0] != h.expression[0]) {
                return reject(RejectReason::hypothesis_mismatch,
                              where + ": " + h.label + " expects typecode " + db.name(h.expression[0]));
            }
            sub[h.variable()] = std::vector<SymbolId>(entry.begin() + 1, entry.end());
        }
        for (std::size_t i = 0; i < arity; ++i) {
            const Hypothesis& h = db.hypotheses()[cited->hypotheses[i]];
            if (h.floating) {
                continue;
            }
            if (substitute(h.expression, sub) != stack[base + i]) {
                return reject(RejectReason::hypothesis_mismatch,
                              where + ": " + h.label + " does not match " + db.to_string(stack[base + i]));
            }
        }
        for (const auto& [x, y] : cited->disjoint) {
            for (SymbolId u : sub[x]) {
                if (!db.is_variable(u)) continue;
                for (SymbolId w : sub[y]) {
                    if (!db.is_variable(w)) continue;
                    if (u == w) {
                        return reject(RejectReason::disjoint_violation,
                                      where + ": " + db.name(u) + " shared by disjoint variables");
                    }
                    if (!target->scope_disjoint.contains(make_disjoint_pair(u, w))) {
                        return reject(RejectReason::disjoint_violation,
                                      where + ": missing $d " + db.name(u) + " " + db.name(w));
                    }
                }
            }
        }
        stack.resize(base);
        stack.push_back(substitute(cited->conclusion, sub));
    }
    if (stack.size() != 1) {
        return reject(RejectReason::wrong_final_statement,
                      "stack holds " + std::to_string(stack.size()) + " entries at the end");
    }
    if (stack.front() != target->conclusion) {
        return reject(RejectReason::wrong_final_statement, "proved " + db.to_string(stack.front()));
    }
    return {};
}

std::vector<std::pair<std::string, Verdict>> verify_database(const MmDatabase& db) {
    std::vector<std::pair<std::string, Verdict>> out;
    for (const Assertion& a : db.assertions()) {
        if (!a.axiom) {
            out.emplace_back(a.label, verify_proof(db, a.label, a.proof));
        }
    }
    return out;
}

std::string format_proof(std::span<const std::string> proof, std::size_t width) {
    std::string out;
    std::size_t column = 0;
    for (const std::string& label : proof) {
        if (column > 0 && column + 1 + label.size() > width) {
            out.push_back('\n');
            column = 0;
        } else if (column > 0) {
            out.push_back(' ');
            ++column;
        }
        out += label;
        column += label.size();
    }
    out.push_back('\n');
    return out;
}

std::vector<std::string> parse_proof_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::vector<std::string> tokens;
    std::string token;
    while (in >> token) {
        tokens.push_back(token);
    }
    auto open = std::find(tokens.begin(), tokens.end(), "$=");
    if (open == tokens.end()) {
        return tokens;
    }
    auto close = std::find(open, tokens.end(), "$.");
    return {open + 1, close};
}

}  // namespace andor::metamath
