#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "andor/metamath/database.hpp"

namespace andor::metamath {

using VariablePredicate = std::function<bool(SymbolId)>;
using ImageFilter = std::function<bool(SymbolId variable, std::span<const SymbolId> image)>;

/// One-way matching of `pattern` against the ground `target`; both start with
/// their typecode. Variables bind to non-empty symbol runs and repeated
/// variables must bind identically. Results come in left-greedy order (the
/// leftmost free variable tries its longest run first); at most `cap` are
/// returned.
std::vector<Substitution> match_pattern(std::span<const SymbolId> pattern,
                                        std::span<const SymbolId> target,
                                        const VariablePredicate& is_variable,
                                        const ImageFilter& accept, std::size_t cap);

/// Recognizes expressions of a syntax typecode using the database's syntax
/// axioms and produces their RPN syntax proofs. Results are memoized.
class SyntaxParser {
public:
    /// `floating` are the hypotheses typing the context's variables (usually
    /// a theorem's scope); only syntax axioms stated before `statement_limit`
    /// are used.
    SyntaxParser(const MmDatabase& db, std::span<const std::uint32_t> floating,
                 std::size_t statement_limit);

    bool accepts(SymbolId typecode, std::span<const SymbolId> body);
    std::optional<std::vector<std::string>> proof(SymbolId typecode, std::span<const SymbolId> body);

    struct Subterm {
        SymbolId typecode;
        std::size_t offset;
        std::size_t length;
    };
    /// Nodes of the parse tree of `body` in pre-order, the whole body first.
    /// Empty when the body does not parse.
    std::vector<Subterm> subterms(SymbolId typecode, std::span<const SymbolId> body);

    /// Typecode of a context variable.
    std::optional<SymbolId> variable_type(SymbolId variable) const;

private:
    struct SyntaxAxiom {
        std::uint32_t assertion;
        std::map<SymbolId, SymbolId> variable_types;
    };
    struct Entry {
        bool in_progress = true;
        std::optional<std::vector<std::string>> proof;
        /// Axiom used and the typecode/offset/length of each of its variables'
        /// images, in conclusion order. Empty axiom for a context variable.
        std::optional<std::uint32_t> axiom;
        std::vector<Subterm> parts;
    };

    void collect(SymbolId typecode, std::span<const SymbolId> body, std::size_t offset,
                 std::vector<Subterm>& out);

    const std::optional<std::vector<std::string>>& solve(SymbolId typecode, std::span<const SymbolId> body);

    const MmDatabase& db_;
    std::map<SymbolId, std::uint32_t> context_;
    std::vector<SyntaxAxiom> axioms_;
    std::map<std::pair<SymbolId, std::vector<SymbolId>>, Entry> memo_;
};

/// Backward-application match: binds the conclusion's variables so that it
/// becomes `goal`, keeping only type-correct images. Empty means no match.
std::vector<Substitution> unify_conclusion(const MmDatabase& db, const Assertion& assertion,
                                           std::span<const SymbolId> goal, SyntaxParser& syntax,
                                           std::size_t cap = 64);

/// Variable -> typecode for an assertion's mandatory floating hypotheses.
std::map<SymbolId, SymbolId> variable_types(const MmDatabase& db, const Assertion& assertion);

}  // namespace andor::metamath
