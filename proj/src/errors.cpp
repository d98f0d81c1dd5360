#include "kopl/errors.hpp"

namespace kopl {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedInput: return "MalformedInput";
        case ErrorCode::DanglingReference: return "DanglingReference";
        case ErrorCode::CyclicConceptGraph: return "CyclicConceptGraph";
        case ErrorCode::UnknownFunction: return "UnknownFunction";
        case ErrorCode::ArityMismatch: return "ArityMismatch";
        case ErrorCode::EmptyProgram: return "EmptyProgram";
        case ErrorCode::NotPostOrder: return "NotPostOrder";
        case ErrorCode::KindMismatch: return "KindMismatch";
        case ErrorCode::BadToken: return "BadToken";
        case ErrorCode::NonUniqueAnswer: return "NonUniqueAnswer";
        case ErrorCode::NonUniqueEntity: return "NonUniqueEntity";
        case ErrorCode::MissingFacts: return "MissingFacts";
        case ErrorCode::FactNotFound: return "FactNotFound";
        case ErrorCode::Unsupported: return "Unsupported";
        case ErrorCode::UnboundVariable: return "UnboundVariable";
        case ErrorCode::SubsetViolation: return "SubsetViolation";
        case ErrorCode::NothingDroppable: return "NothingDroppable";
        case ErrorCode::NoViableSample: return "NoViableSample";
        case ErrorCode::IncompatibleTarget: return "IncompatibleTarget";
        case ErrorCode::ExhaustedAttempts: return "ExhaustedAttempts";
        case ErrorCode::Io: return "Io";
    }
    return "Error";
}

} // namespace kopl
