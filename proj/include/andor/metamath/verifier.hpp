#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "andor/metamath/database.hpp"

namespace andor::metamath {

enum class RejectReason {
    none,
    unknown_label,
    stack_underflow,
    hypothesis_mismatch,
    disjoint_violation,
    wrong_final_statement,
};

std::string_view to_string(RejectReason reason);

struct Verdict {
    RejectReason reason = RejectReason::none;
    std::string detail;

    bool accepted() const { return reason == RejectReason::none; }
    explicit operator bool() const { return accepted(); }
};

/// Stack-machine check of an uncompressed proof of `theorem`. Only the
/// theorem's active hypotheses and assertions stated before it may be cited.
Verdict verify_proof(const MmDatabase& db, std::string_view theorem, std::span<const std::string> proof);

/// Checks the proof stored with every `$p` statement.
std::vector<std::pair<std::string, Verdict>> verify_database(const MmDatabase& db);

/// Whitespace-separated labels wrapped to `width` columns.
std::string format_proof(std::span<const std::string> proof, std::size_t width = 79);

/// Reads labels from proof text. If the text contains `$=`, only the labels
/// between it and the following `$.` are taken.
std::vector<std::string> parse_proof_text(std::string_view text);

}  // namespace andor::metamath
