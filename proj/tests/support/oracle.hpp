#pragma once

#include <optional>
#include <set>
#include <string>

#include "kopl/kb.hpp"
#include "kopl/program.hpp"

namespace kopl::testing {

/// Outcome of the brute-force evaluator: the set of answers the root can take, or the class of
/// the error that stops execution earlier.
struct OracleOutcome {
    std::optional<std::string> error; // error class name, e.g. "NonUniqueEntity"
    std::set<std::string> answers;

    bool unique() const { return !error && answers.size() == 1; }
    /// Error class, with a root answer set of size != 1 reported as NonUniqueAnswer.
    std::string error_class() const;
    const std::string& answer() const { return *answers.begin(); }
};

/// Re-executes a program by scanning every entity, fact and relation at every step. Shares no
/// code with the interpreter beyond value parsing and comparison.
OracleOutcome oracle_execute(const KnowledgeBase& kb, const Program& program);

} // namespace kopl::testing
