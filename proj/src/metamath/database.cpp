#include <algorithm>
#include <fstream>
#include <sstream>

#include "andor/metamath/database.hpp"

namespace andor::metamath {

DisjointPair make_disjoint_pair(SymbolId a, SymbolId b) {
    return a < b ? DisjointPair{a, b} : DisjointPair{b, a};
}

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

SymbolId MmDatabase::intern(std::string_view name) {
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) {
        return it->second;
    }
    const auto id = static_cast<SymbolId>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
}

std::optional<SymbolId> MmDatabase::find_symbol(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    if (it == ids_.end()) {
        return std::nullopt;
    }
    return it->second;
}

const Assertion* MmDatabase::find_assertion(std::string_view label) const {
    auto index = assertion_index(label);
    return index ? &assertions_[*index] : nullptr;
}

std::optional<std::uint32_t> MmDatabase::assertion_index(std::string_view label) const {
    auto it = assertion_labels_.find(std::string(label));
    if (it == assertion_labels_.end()) {
        return std::nullopt;
    }
    return it->second;
}

const Hypothesis* MmDatabase::find_hypothesis(std::string_view label) const {
    auto it = hypothesis_labels_.find(std::string(label));
    return it == hypothesis_labels_.end() ? nullptr : &hypotheses_[it->second];
}

bool MmDatabase::is_logical(const Assertion& assertion) const {
    return !assertion.conclusion.empty() && !is_syntax_typecode(assertion.conclusion.front());
}

std::string MmDatabase::to_string(std::span<const SymbolId> symbols) const {
    std::string out;
    for (SymbolId s : symbols) {
        if (!out.empty()) {
            out.push_back(' ');
        }
        out += name(s);
    }
    return out;
}

Expression MmDatabase::expression(std::string_view text) const {
    Expression out;
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) {
        auto id = find_symbol(token);
        if (!id) {
            throw std::invalid_argument("unknown symbol '" + token + "'");
        }
        out.push_back(*id);
    }
    return out;
}

bool MmDatabase::same_content(const MmDatabase& other) const {
    if (statements_.size() != other.statements_.size()) {
        return false;
    }
    auto names_of = [](const MmDatabase& db, const std::vector<SymbolId>& symbols) {
        std::vector<std::string> out;
        out.reserve(symbols.size());
        for (SymbolId s : symbols) {
            out.push_back(db.name(s));
        }
        return out;
    };
    for (std::size_t i = 0; i < statements_.size(); ++i) {
        const Statement& a = statements_[i];
        const Statement& b = other.statements_[i];
        if (a.kind != b.kind || a.label != b.label || a.proof != b.proof ||
            names_of(*this, a.symbols) != names_of(other, b.symbols)) {
            return false;
        }
    }
    return true;
}

MmDatabase parse_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open database '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::string print(const MmDatabase& db) {
    std::ostringstream out;
    int depth = 0;
    auto indent = [&] {
        for (int i = 0; i < depth; ++i) out << "  ";
    };
    for (const Statement& st : db.statements()) {
        if (st.kind == StatementKind::close_block) {
            --depth;
        }
        indent();
        switch (st.kind) {
            case StatementKind::open_block: out << "${"; ++depth; break;
            case StatementKind::close_block: out << "$}"; break;
            case StatementKind::constants: out << "$c " << db.to_string(st.symbols) << " $."; break;
            case StatementKind::variables: out << "$v " << db.to_string(st.symbols) << " $."; break;
            case StatementKind::disjoint: out << "$d " << db.to_string(st.symbols) << " $."; break;
            case StatementKind::floating: out << st.label << " $f " << db.to_string(st.symbols) << " $."; break;
            case StatementKind::essential: out << st.label << " $e " << db.to_string(st.symbols) << " $."; break;
            case StatementKind::axiom: out << st.label << " $a " << db.to_string(st.symbols) << " $."; break;
            case StatementKind::provable:
                out << st.label << " $p " << db.to_string(st.symbols) << " $=";
                for (const auto& step : st.proof) out << ' ' << step;
                out << " $.";
                break;
        }
        out << '\n';
    }
    return out.str();
}

std::vector<SymbolId> substitute(std::span<const SymbolId> symbols, const Substitution& substitution) {
    std::vector<SymbolId> out;
    out.reserve(symbols.size());
    for (SymbolId s : symbols) {
        auto it = substitution.find(s);
        if (it == substitution.end()) {
            out.push_back(s);
        } else {
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
    }
    return out;
}

}  // namespace andor::metamath
