#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kopl {

enum class ErrorCode {
    // kb
    MalformedInput,
    DanglingReference,
    CyclicConceptGraph,
    // program
    UnknownFunction,
    ArityMismatch,
    EmptyProgram,
    NotPostOrder,
    KindMismatch,
    BadToken,
    // interpreter
    NonUniqueAnswer,
    NonUniqueEntity,
    MissingFacts,
    FactNotFound,
    // sparql
    Unsupported,
    UnboundVariable,
    SubsetViolation,
    NothingDroppable,
    // generator
    NoViableSample,
    IncompatibleTarget,
    ExhaustedAttempts,
    // cli / io
    Io,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Error attributed to one call of a program (typecheck or execution).
class CallError : public Error {
public:
    CallError(ErrorCode code, int call_index, const std::string& message)
        : Error(code, "call " + std::to_string(call_index) + ": " + message), call_index_(call_index) {}

    int call_index() const noexcept { return call_index_; }

private:
    int call_index_;
};

} // namespace kopl
