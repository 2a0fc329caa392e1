#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "andor/metamath/database.hpp"

namespace andor::metamath {

namespace {

struct Token {
    std::string_view text;
    std::size_t line = 0;
};

bool is_keyword(std::string_view t) {
    return t.size() >= 2 && t[0] == '$';
}

bool valid_label(std::string_view t) {
    return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    });
}

bool valid_math_symbol(std::string_view t) {
    return !t.empty() && t.find('$') == std::string_view::npos;
}

}  // namespace

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    MmDatabase run();

private:
    struct Scope {
        std::vector<SymbolId> variables;
        std::vector<std::uint32_t> hypotheses;
        std::vector<DisjointPair> disjoint;
    };

    std::optional<Token> raw_token();
    std::optional<Token> next();
    Token expect_next(std::size_t line, std::string_view context);
    std::vector<Token> read_until(std::string_view terminator, std::size_t line, std::string_view context);

    void constants(const Token& kw);
    void variables(const Token& kw);
    void disjoint(const Token& kw);
    void labeled(const Token& label);
    void open_block(const Token& kw);
    void close_block(const Token& kw);

    Expression math_expression(const std::vector<Token>& tokens, std::size_t line);
    void check_label(const Token& label);
    Assertion make_frame(const Expression& conclusion) const;

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    MmDatabase db_;
    std::vector<Scope> scopes_;
    std::set<SymbolId> active_variables_;
    std::map<SymbolId, std::uint32_t> active_floating_;
};

std::optional<Token> Parser::raw_token() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        if (text_[pos_] == '\n') ++line_;
        ++pos_;
    }
    if (pos_ >= text_.size()) {
        return std::nullopt;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
    }
    return Token{text_.substr(start, pos_ - start), line_};
}

std::optional<Token> Parser::next() {
    for (;;) {
        auto tok = raw_token();
        if (!tok || tok->text != "$(") {
            return tok;
        }
        const std::size_t opened = tok->line;
        for (;;) {
            auto inner = raw_token();
            if (!inner) {
                throw ParseError(opened, "unterminated comment");
            }
            if (inner->text == "$)") break;
            if (inner->text == "$(") {
                throw ParseError(inner->line, "nested comment");
            }
        }
    }
}

Token Parser::expect_next(std::size_t line, std::string_view context) {
    auto tok = next();
    if (!tok) {
        throw ParseError(line, "unexpected end of input in " + std::string(context));
    }
    return *tok;
}

std::vector<Token> Parser::read_until(std::string_view terminator, std::size_t line,
                                      std::string_view context) {
    std::vector<Token> out;
    for (;;) {
        Token tok = expect_next(line, context);
        if (tok.text == terminator) {
            return out;
        }
        if (is_keyword(tok.text)) {
            throw ParseError(tok.line, "unexpected '" + std::string(tok.text) + "' in " + std::string(context));
        }
        out.push_back(tok);
    }
}

MmDatabase Parser::run() {
    scopes_.emplace_back();
    while (auto tok = next()) {
        const std::string_view t = tok->text;
        if (t == "${") open_block(*tok);
        else if (t == "$}") close_block(*tok);
        else if (t == "$c") constants(*tok);
        else if (t == "$v") variables(*tok);
        else if (t == "$d") disjoint(*tok);
        else if (is_keyword(t)) throw ParseError(tok->line, "unknown or misplaced keyword '" + std::string(t) + "'");
        else labeled(*tok);
    }
    if (scopes_.size() != 1) {
        throw ParseError(line_, "unterminated block: missing '$}'");
    }
    return std::move(db_);
}

void Parser::open_block(const Token& kw) {
    scopes_.emplace_back();
    db_.statements_.push_back({StatementKind::open_block, {}, {}, {}, kw.line});
}

void Parser::close_block(const Token& kw) {
    if (scopes_.size() == 1) {
        throw ParseError(kw.line, "'$}' without matching '${'");
    }
    Scope& scope = scopes_.back();
    for (SymbolId v : scope.variables) {
        active_variables_.erase(v);
    }
    for (std::uint32_t h : scope.hypotheses) {
        const Hypothesis& hyp = db_.hypotheses_[h];
        if (hyp.floating) {
            active_floating_.erase(hyp.variable());
        }
    }
    scopes_.pop_back();
    db_.statements_.push_back({StatementKind::close_block, {}, {}, {}, kw.line});
}

void Parser::constants(const Token& kw) {
    if (scopes_.size() != 1) {
        throw ParseError(kw.line, "'$c' is only allowed in the outermost block");
    }
    Statement st{StatementKind::constants, {}, {}, {}, kw.line};
    for (const Token& tok : read_until("$.", kw.line, "$c statement")) {
        if (!valid_math_symbol(tok.text)) {
            throw ParseError(tok.line, "invalid math symbol '" + std::string(tok.text) + "'");
        }
        const SymbolId id = db_.intern(tok.text);
        if (db_.is_constant(id) || db_.is_variable(id)) {
            throw ParseError(tok.line, "symbol '" + std::string(tok.text) + "' already declared");
        }
        db_.constants_.insert(id);
        st.symbols.push_back(id);
    }
    if (st.symbols.empty()) {
        throw ParseError(kw.line, "empty $c statement");
    }
    db_.statements_.push_back(std::move(st));
}

void Parser::variables(const Token& kw) {
    Statement st{StatementKind::variables, {}, {}, {}, kw.line};
    for (const Token& tok : read_until("$.", kw.line, "$v statement")) {
        if (!valid_math_symbol(tok.text)) {
            throw ParseError(tok.line, "invalid math symbol '" + std::string(tok.text) + "'");
        }
        const SymbolId id = db_.intern(tok.text);
        if (db_.is_constant(id)) {
            throw ParseError(tok.line, "'" + std::string(tok.text) + "' is already a constant");
        }
        if (active_variables_.contains(id)) {
            throw ParseError(tok.line, "variable '" + std::string(tok.text) + "' already active");
        }
        db_.variables_.insert(id);
        active_variables_.insert(id);
        scopes_.back().variables.push_back(id);
        st.symbols.push_back(id);
    }
    if (st.symbols.empty()) {
        throw ParseError(kw.line, "empty $v statement");
    }
    db_.statements_.push_back(std::move(st));
}

void Parser::disjoint(const Token& kw) {
    Statement st{StatementKind::disjoint, {}, {}, {}, kw.line};
    for (const Token& tok : read_until("$.", kw.line, "$d statement")) {
        auto id = db_.find_symbol(tok.text);
        if (!id || !active_variables_.contains(*id)) {
            throw ParseError(tok.line, "'" + std::string(tok.text) + "' in $d is not an active variable");
        }
        if (std::find(st.symbols.begin(), st.symbols.end(), *id) != st.symbols.end()) {
            throw ParseError(tok.line, "repeated variable '" + std::string(tok.text) + "' in $d");
        }
        st.symbols.push_back(*id);
    }
    if (st.symbols.size() < 2) {
        throw ParseError(kw.line, "$d needs at least two variables");
    }
    for (std::size_t i = 0; i < st.symbols.size(); ++i) {
        for (std::size_t j = i + 1; j < st.symbols.size(); ++j) {
            scopes_.back().disjoint.push_back(make_disjoint_pair(st.symbols[i], st.symbols[j]));
        }
    }
    db_.statements_.push_back(std::move(st));
}

void Parser::check_label(const Token& label) {
    if (!valid_label(label.text)) {
        throw ParseError(label.line, "invalid label '" + std::string(label.text) + "'");
    }
    const std::string key(label.text);
    if (db_.hypothesis_labels_.contains(key) || db_.assertion_labels_.contains(key)) {
        throw ParseError(label.line, "duplicate label '" + key + "'");
    }
}

Expression Parser::math_expression(const std::vector<Token>& tokens, std::size_t line) {
    if (tokens.empty()) {
        throw ParseError(line, "empty expression");
    }
    Expression out;
    out.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& tok = tokens[i];
        auto id = db_.find_symbol(tok.text);
        if (!id || (!db_.is_constant(*id) && !active_variables_.contains(*id))) {
            throw ParseError(tok.line, "undeclared symbol '" + std::string(tok.text) + "'");
        }
        if (i == 0 && !db_.is_constant(*id)) {
            throw ParseError(tok.line, "typecode '" + std::string(tok.text) + "' must be a constant");
        }
        if (db_.is_variable(*id) && !active_floating_.contains(*id)) {
            throw ParseError(tok.line, "variable '" + std::string(tok.text) + "' used before its $f");
        }
        out.push_back(*id);
    }
    return out;
}

Assertion Parser::make_frame(const Expression& conclusion) const {
    std::vector<std::uint32_t> active;
    std::vector<DisjointPair> pairs;
    for (const Scope& scope : scopes_) {
        active.insert(active.end(), scope.hypotheses.begin(), scope.hypotheses.end());
        pairs.insert(pairs.end(), scope.disjoint.begin(), scope.disjoint.end());
    }
    std::sort(active.begin(), active.end());

    std::set<SymbolId> mandatory_vars;
    auto collect = [&](const Expression& e) {
        for (SymbolId s : e) {
            if (db_.is_variable(s)) mandatory_vars.insert(s);
        }
    };
    collect(conclusion);
    for (std::uint32_t h : active) {
        if (!db_.hypotheses_[h].floating) collect(db_.hypotheses_[h].expression);
    }

    Assertion a;
    a.conclusion = conclusion;
    a.scope_hypotheses = active;
    for (std::uint32_t h : active) {
        const Hypothesis& hyp = db_.hypotheses_[h];
        if (!hyp.floating || mandatory_vars.contains(hyp.variable())) {
            a.hypotheses.push_back(h);
        }
    }
    a.scope_disjoint.insert(pairs.begin(), pairs.end());
    for (const DisjointPair& p : a.scope_disjoint) {
        if (mandatory_vars.contains(p.first) && mandatory_vars.contains(p.second)) {
            a.disjoint.push_back(p);
        }
    }
    return a;
}

void Parser::labeled(const Token& label) {
    check_label(label);
    const Token kw = expect_next(label.line, "labeled statement");
    const std::string key(label.text);

    if (kw.text == "$f") {
        const auto body = read_until("$.", kw.line, "$f statement");
        if (body.size() != 2) {
            throw ParseError(kw.line, "$f needs exactly a typecode and a variable");
        }
        auto type = db_.find_symbol(body[0].text);
        auto var = db_.find_symbol(body[1].text);
        if (!type || !db_.is_constant(*type)) {
            throw ParseError(body[0].line, "typecode '" + std::string(body[0].text) + "' is not a constant");
        }
        if (!var || !active_variables_.contains(*var)) {
            throw ParseError(body[1].line, "'" + std::string(body[1].text) + "' is not an active variable");
        }
        if (active_floating_.contains(*var)) {
            throw ParseError(body[1].line, "variable '" + std::string(body[1].text) + "' already has a $f");
        }
        const auto index = static_cast<std::uint32_t>(db_.hypotheses_.size());
        db_.hypotheses_.push_back({key, {*type, *var}, true, db_.statements_.size()});
        db_.hypothesis_labels_.emplace(key, index);
        db_.syntax_typecodes_.insert(*type);
        active_floating_.emplace(*var, index);
        scopes_.back().hypotheses.push_back(index);
        db_.statements_.push_back({StatementKind::floating, key, {*type, *var}, {}, label.line});
        return;
    }
    if (kw.text == "$e") {
        Expression expr = math_expression(read_until("$.", kw.line, "$e statement"), kw.line);
        const auto index = static_cast<std::uint32_t>(db_.hypotheses_.size());
        db_.hypotheses_.push_back({key, expr, false, db_.statements_.size()});
        db_.hypothesis_labels_.emplace(key, index);
        scopes_.back().hypotheses.push_back(index);
        db_.statements_.push_back({StatementKind::essential, key, std::move(expr), {}, label.line});
        return;
    }
    if (kw.text == "$a" || kw.text == "$p") {
        const bool provable = kw.text == "$p";
        Expression expr = math_expression(
            read_until(provable ? "$=" : "$.", kw.line, provable ? "$p statement" : "$a statement"), kw.line);
        std::vector<std::string> proof;
        if (provable) {
            const auto steps = read_until("$.", kw.line, "proof");
            if (!steps.empty() && steps.front().text == "(") {
                throw ParseError(steps.front().line, "compressed proofs are not supported");
            }
            for (const Token& s : steps) {
                proof.emplace_back(s.text);
            }
        }
        Assertion a = make_frame(expr);
        a.label = key;
        a.axiom = !provable;
        a.proof = proof;
        a.statement = db_.statements_.size();
        const auto index = static_cast<std::uint32_t>(db_.assertions_.size());
        db_.assertions_.push_back(std::move(a));
        db_.assertion_labels_.emplace(key, index);
        db_.statements_.push_back({provable ? StatementKind::provable : StatementKind::axiom, key,
                                   std::move(expr), std::move(proof), label.line});
        return;
    }
    throw ParseError(kw.line, "expected $f, $e, $a or $p after label '" + key + "'");
}

MmDatabase parse(std::string_view text) {
    return Parser(text).run();
}

}  // namespace andor::metamath
