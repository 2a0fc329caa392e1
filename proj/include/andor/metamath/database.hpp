#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace andor::metamath {

using SymbolId = std::uint32_t;

/// Typecode followed by the symbol sequence.
using Expression = std::vector<SymbolId>;

/// Variable -> replacement symbol sequence (without typecode).
using Substitution = std::map<SymbolId, std::vector<SymbolId>>;

using DisjointPair = std::pair<SymbolId, SymbolId>;

DisjointPair make_disjoint_pair(SymbolId a, SymbolId b);

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

enum class StatementKind {
    constants,
    variables,
    floating,
    essential,
    disjoint,
    axiom,
    provable,
    open_block,
    close_block,
};

struct Statement {
    StatementKind kind = StatementKind::constants;
    std::string label;
    /// Declared symbols ($c/$v/$d) or the statement's expression.
    std::vector<SymbolId> symbols;
    /// Uncompressed proof labels ($p only).
    std::vector<std::string> proof;
    std::size_t line = 0;
};

struct Hypothesis {
    std::string label;
    Expression expression;
    bool floating = false;
    std::size_t statement = 0;

    /// The variable a floating hypothesis types.
    SymbolId variable() const { return expression.at(1); }
};

/// An axiom or theorem together with its frame.
struct Assertion {
    std::string label;
    bool axiom = true;
    Expression conclusion;
    /// Mandatory hypotheses in order of appearance (indices into hypotheses()).
    std::vector<std::uint32_t> hypotheses;
    /// Mandatory disjoint-variable pairs.
    std::vector<DisjointPair> disjoint;
    /// Every hypothesis active at this statement, mandatory or not.
    std::vector<std::uint32_t> scope_hypotheses;
    /// Every disjoint pair active at this statement.
    std::set<DisjointPair> scope_disjoint;
    std::vector<std::string> proof;
    std::size_t statement = 0;
};

class MmDatabase {
public:
    /// Interns a symbol name.
    SymbolId intern(std::string_view name);
    std::optional<SymbolId> find_symbol(std::string_view name) const;
    const std::string& name(SymbolId id) const { return names_.at(id); }
    std::size_t symbol_count() const { return names_.size(); }

    bool is_constant(SymbolId id) const { return constants_.contains(id); }
    bool is_variable(SymbolId id) const { return variables_.contains(id); }
    const std::set<SymbolId>& constants() const { return constants_; }
    const std::set<SymbolId>& variables() const { return variables_; }

    const std::vector<Statement>& statements() const { return statements_; }
    const std::vector<Hypothesis>& hypotheses() const { return hypotheses_; }
    const std::vector<Assertion>& assertions() const { return assertions_; }

    const Assertion* find_assertion(std::string_view label) const;
    std::optional<std::uint32_t> assertion_index(std::string_view label) const;
    const Hypothesis* find_hypothesis(std::string_view label) const;

    /// Typecodes that appear in floating hypotheses ("wff", "class", ...).
    bool is_syntax_typecode(SymbolId typecode) const { return syntax_typecodes_.contains(typecode); }
    /// True for axioms/theorems whose typecode is not a syntax typecode.
    bool is_logical(const Assertion& assertion) const;

    std::string to_string(std::span<const SymbolId> symbols) const;
    /// Parses whitespace-separated symbol names; throws std::invalid_argument
    /// on unknown names.
    Expression expression(std::string_view text) const;

    /// Same statements, symbols and proofs (line numbers ignored).
    bool same_content(const MmDatabase& other) const;

private:
    friend class Parser;

    std::vector<std::string> names_;
    std::unordered_map<std::string, SymbolId> ids_;
    std::set<SymbolId> constants_;
    std::set<SymbolId> variables_;
    std::set<SymbolId> syntax_typecodes_;
    std::vector<Statement> statements_;
    std::vector<Hypothesis> hypotheses_;
    std::vector<Assertion> assertions_;
    std::unordered_map<std::string, std::uint32_t> hypothesis_labels_;
    std::unordered_map<std::string, std::uint32_t> assertion_labels_;
};

/// Parses the uncompressed subset of the .mm language. Throws ParseError.
MmDatabase parse(std::string_view text);
MmDatabase parse_file(const std::filesystem::path& path);

/// Canonical text form; parse(print(db)) has the same content as db.
std::string print(const MmDatabase& db);

/// Applies `substitution` to every variable in `symbols` that it maps.
std::vector<SymbolId> substitute(std::span<const SymbolId> symbols, const Substitution& substitution);

}  // namespace andor::metamath
