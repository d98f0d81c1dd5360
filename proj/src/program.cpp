#include "kopl/program.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "kopl/errors.hpp"

namespace kopl {

using nlohmann::json;

namespace {

using DK = DataKind;
using AR = ArgRole;

const std::vector<Signature>& signature_table() {
    static const std::vector<Signature> table = {
        {Function::FindAll, "FindAll", {}, {}, DK::Entities, {}},
        {Function::Find, "Find", {}, {AR::Name}, DK::Entities, {}},
        {Function::FilterConcept, "FilterConcept", {DK::Entities}, {AR::Name}, DK::Entities, {}},
        {Function::FilterStr, "FilterStr", {DK::Entities}, {AR::Key, AR::TypedValue}, DK::EntitiesWithFacts, ValueKind::Text},
        {Function::FilterNum, "FilterNum", {DK::Entities}, {AR::Key, AR::TypedValue, AR::Op}, DK::EntitiesWithFacts, ValueKind::Quantity},
        {Function::FilterYear, "FilterYear", {DK::Entities}, {AR::Key, AR::TypedValue, AR::Op}, DK::EntitiesWithFacts, ValueKind::Year},
        {Function::FilterDate, "FilterDate", {DK::Entities}, {AR::Key, AR::TypedValue, AR::Op}, DK::EntitiesWithFacts, ValueKind::Date},
        {Function::QFilterStr, "QFilterStr", {DK::EntitiesWithFacts}, {AR::QKey, AR::TypedValue}, DK::EntitiesWithFacts, ValueKind::Text},
        {Function::QFilterNum, "QFilterNum", {DK::EntitiesWithFacts}, {AR::QKey, AR::TypedValue, AR::Op}, DK::EntitiesWithFacts, ValueKind::Quantity},
        {Function::QFilterYear, "QFilterYear", {DK::EntitiesWithFacts}, {AR::QKey, AR::TypedValue, AR::Op}, DK::EntitiesWithFacts, ValueKind::Year},
        {Function::QFilterDate, "QFilterDate", {DK::EntitiesWithFacts}, {AR::QKey, AR::TypedValue, AR::Op}, DK::EntitiesWithFacts, ValueKind::Date},
        {Function::Relate, "Relate", {DK::Entities}, {AR::Pred, AR::Dir}, DK::EntitiesWithFacts, {}},
        {Function::And, "And", {DK::Entities, DK::Entities}, {}, DK::Entities, {}},
        {Function::Or, "Or", {DK::Entities, DK::Entities}, {}, DK::Entities, {}},
        {Function::QueryName, "QueryName", {DK::Entities}, {}, DK::String, {}},
        {Function::Count, "Count", {DK::Entities}, {}, DK::Number, {}},
        {Function::QueryAttr, "QueryAttr", {DK::Entities}, {AR::Key}, DK::Value, {}},
        {Function::QueryAttrUnderCondition, "QueryAttrUnderCondition", {DK::Entities}, {AR::Key, AR::QKey, AR::AnyValue}, DK::Value, {}},
        {Function::QueryRelation, "QueryRelation", {DK::Entities, DK::Entities}, {}, DK::Predicate, {}},
        {Function::SelectBetween, "SelectBetween", {DK::Entities, DK::Entities}, {AR::Key, AR::BetweenOp}, DK::String, {}},
        {Function::SelectAmong, "SelectAmong", {DK::Entities}, {AR::Key, AR::AmongOp}, DK::String, {}},
        {Function::VerifyStr, "VerifyStr", {DK::Value}, {AR::TypedValue}, DK::Boolean, ValueKind::Text},
        {Function::VerifyNum, "VerifyNum", {DK::Value}, {AR::TypedValue, AR::Op}, DK::Boolean, ValueKind::Quantity},
        {Function::VerifyYear, "VerifyYear", {DK::Value}, {AR::TypedValue, AR::Op}, DK::Boolean, ValueKind::Year},
        {Function::VerifyDate, "VerifyDate", {DK::Value}, {AR::TypedValue, AR::Op}, DK::Boolean, ValueKind::Date},
        {Function::QueryAttrQualifier, "QueryAttrQualifier", {DK::Entities}, {AR::Key, AR::AnyValue, AR::QKey}, DK::Value, {}},
        {Function::QueryRelationQualifier, "QueryRelationQualifier", {DK::Entities, DK::Entities}, {AR::Pred, AR::QKey}, DK::Value, {}},
    };
    return table;
}

bool satisfies(DataKind found, DataKind expected) {
    return found == expected || (expected == DK::Entities && found == DK::EntitiesWithFacts);
}

bool is_answer_kind(DataKind k) {
    return k == DK::String || k == DK::Number || k == DK::Boolean || k == DK::Value || k == DK::Predicate;
}

void flatten(const ProgramNode& node, std::vector<FunctionCall>& out) {
    std::vector<int> deps;
    for (const auto& child : node.children) {
        flatten(child, out);
        deps.push_back(static_cast<int>(out.size()) - 1);
    }
    out.push_back({node.function, node.textual_inputs, std::move(deps)});
}

ProgramNode unflatten(const std::vector<FunctionCall>& calls, int index) {
    const auto& call = calls[static_cast<std::size_t>(index)];
    ProgramNode node{call.function, call.textual_inputs, {}};
    for (int d : call.functional_inputs) node.children.push_back(unflatten(calls, d));
    return node;
}

constexpr std::string_view kFuncMarker = " <func> ";
constexpr std::string_view kArgMarker = " <arg> ";

std::vector<std::string> split(std::string_view s, std::string_view sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            return out;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + sep.size();
    }
}

} // namespace

std::string_view data_kind_name(DataKind kind) {
    switch (kind) {
        case DK::Entities: return "ENTITIES";
        case DK::EntitiesWithFacts: return "ENTITIES_WITH_FACTS";
        case DK::Value: return "VALUE";
        case DK::String: return "STRING";
        case DK::Number: return "NUMBER";
        case DK::Boolean: return "BOOLEAN";
        case DK::Predicate: return "PREDICATE";
    }
    return "?";
}

const Signature& signature(Function f) { return signature_table()[static_cast<std::size_t>(f)]; }

std::string_view function_name(Function f) { return signature(f).name; }

std::optional<Function> parse_function(std::string_view name) {
    for (const auto& s : signature_table()) {
        if (s.name == name) return s.function;
    }
    if (name == "What") return Function::QueryName; // name used by published datasets
    return std::nullopt;
}

std::span<const Function> all_functions() {
    static const auto fns = [] {
        std::array<Function, kFunctionCount> out{};
        for (std::size_t i = 0; i < kFunctionCount; ++i) out[i] = static_cast<Function>(i);
        return out;
    }();
    return fns;
}

bool is_verify(Function f) {
    return f == Function::VerifyStr || f == Function::VerifyNum || f == Function::VerifyYear || f == Function::VerifyDate;
}

bool is_attribute_filter(Function f) {
    return f == Function::FilterStr || f == Function::FilterNum || f == Function::FilterYear || f == Function::FilterDate;
}

bool is_qualifier_filter(Function f) {
    return f == Function::QFilterStr || f == Function::QFilterNum || f == Function::QFilterYear || f == Function::QFilterDate;
}

Program::Program(std::vector<FunctionCall> calls) : calls_(std::move(calls)) {
    if (calls_.empty()) throw Error(ErrorCode::EmptyProgram, "a program needs at least one call");
    std::vector<int> stack;
    for (std::size_t i = 0; i < calls_.size(); ++i) {
        const auto& call = calls_[i];
        const auto& sig = signature(call.function);
        const int index = static_cast<int>(i);
        if (call.textual_inputs.size() != sig.textual.size()) {
            throw CallError(ErrorCode::ArityMismatch, index,
                            std::string(sig.name) + " takes " + std::to_string(sig.textual.size()) + " textual inputs, got " +
                                std::to_string(call.textual_inputs.size()));
        }
        if (call.functional_inputs.size() != sig.inputs.size()) {
            throw CallError(ErrorCode::ArityMismatch, index,
                            std::string(sig.name) + " takes " + std::to_string(sig.inputs.size()) +
                                " functional inputs, got " + std::to_string(call.functional_inputs.size()));
        }
        for (int d : call.functional_inputs) {
            if (d < 0 || d >= index) {
                throw CallError(ErrorCode::NotPostOrder, index, "dependency " + std::to_string(d) + " is not an earlier call");
            }
        }
        if (stack.size() < sig.inputs.size()) {
            throw CallError(ErrorCode::ArityMismatch, index, "not enough operands for " + std::string(sig.name));
        }
        std::vector<int> popped(stack.end() - static_cast<std::ptrdiff_t>(sig.inputs.size()), stack.end());
        if (popped != call.functional_inputs) {
            throw CallError(ErrorCode::NotPostOrder, index, "dependencies do not follow post-order");
        }
        stack.resize(stack.size() - sig.inputs.size());
        stack.push_back(index);
    }
    if (stack.size() != 1) {
        throw Error(ErrorCode::ArityMismatch, std::to_string(stack.size() - 1) + " call result(s) are never consumed");
    }
}

Program Program::from_tree(const ProgramNode& root) {
    std::vector<FunctionCall> calls;
    flatten(root, calls);
    return Program(std::move(calls));
}

ProgramNode Program::to_tree() const { return unflatten(calls_, static_cast<int>(calls_.size()) - 1); }

Program parse_text(std::string_view text) {
    if (trim(text).empty()) throw Error(ErrorCode::EmptyProgram, "empty program text");
    std::vector<FunctionCall> calls;
    std::vector<int> stack;
    auto pieces = split(text, kFuncMarker);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        auto parts = split(pieces[i], kArgMarker);
        const auto name = std::string(trim(parts.front()));
        auto fn = parse_function(name);
        if (!fn) throw CallError(ErrorCode::UnknownFunction, static_cast<int>(i), "unknown function \"" + name + "\"");
        const auto& sig = signature(*fn);
        FunctionCall call;
        call.function = *fn;
        call.textual_inputs.assign(parts.begin() + 1, parts.end());
        if (stack.size() < sig.inputs.size()) {
            throw CallError(ErrorCode::ArityMismatch, static_cast<int>(i),
                            std::string(sig.name) + " needs " + std::to_string(sig.inputs.size()) + " functional input(s)");
        }
        call.functional_inputs.assign(stack.end() - static_cast<std::ptrdiff_t>(sig.inputs.size()), stack.end());
        stack.resize(stack.size() - sig.inputs.size());
        stack.push_back(static_cast<int>(i));
        calls.push_back(std::move(call));
    }
    return Program(std::move(calls));
}

std::string serialize(const Program& program) {
    std::string out;
    for (std::size_t i = 0; i < program.size(); ++i) {
        if (i > 0) out += kFuncMarker;
        out += function_name(program[i].function);
        for (const auto& a : program[i].textual_inputs) {
            out += kArgMarker;
            out += a;
        }
    }
    return out;
}

json program_to_json(const Program& program) {
    json out = json::array();
    for (const auto& call : program.calls()) {
        out.push_back({{"function", std::string(function_name(call.function))},
                       {"inputs", call.textual_inputs},
                       {"dependencies", call.functional_inputs}});
    }
    return out;
}

Program program_from_json(const json& j) {
    if (!j.is_array()) throw Error(ErrorCode::MalformedInput, "program JSON must be an array of calls");
    if (j.empty()) throw Error(ErrorCode::EmptyProgram, "empty program");
    std::vector<FunctionCall> calls;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& c = j[i];
        const int index = static_cast<int>(i);
        if (!c.is_object() || !c.contains("function") || !c["function"].is_string())
            throw CallError(ErrorCode::MalformedInput, index, "expected {\"function\", \"inputs\", \"dependencies\"}");
        auto fn = parse_function(c["function"].get<std::string>());
        if (!fn) throw CallError(ErrorCode::UnknownFunction, index, "unknown function \"" + c["function"].get<std::string>() + "\"");
        FunctionCall call;
        call.function = *fn;
        try {
            if (c.contains("inputs")) call.textual_inputs = c["inputs"].get<std::vector<std::string>>();
            if (c.contains("dependencies")) call.functional_inputs = c["dependencies"].get<std::vector<int>>();
        } catch (const json::exception& e) {
            throw CallError(ErrorCode::MalformedInput, index, e.what());
        }
        calls.push_back(std::move(call));
    }
    return Program(std::move(calls));
}

Program parse_program(std::string_view text) {
    auto t = trim(text);
    if (!t.empty() && t.front() == '[') {
        json j;
        try {
            j = json::parse(t);
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::MalformedInput, std::string("program JSON: ") + e.what());
        }
        return program_from_json(j);
    }
    return parse_text(text);
}

std::vector<DataKind> typecheck(const Program& program) {
    std::vector<DataKind> kinds;
    kinds.reserve(program.size());
    for (std::size_t i = 0; i < program.size(); ++i) {
        const auto& call = program[i];
        const auto& sig = signature(call.function);
        const int index = static_cast<int>(i);
        for (std::size_t k = 0; k < sig.inputs.size(); ++k) {
            const auto found = kinds[static_cast<std::size_t>(call.functional_inputs[k])];
            if (!satisfies(found, sig.inputs[k])) {
                throw CallError(ErrorCode::KindMismatch, index,
                                std::string(sig.name) + " expects " + std::string(data_kind_name(sig.inputs[k])) +
                                    ", found " + std::string(data_kind_name(found)));
            }
        }
        for (std::size_t k = 0; k < sig.textual.size(); ++k) {
            const auto& arg = call.textual_inputs[k];
            bool ok = true;
            switch (sig.textual[k]) {
                case AR::Dir: ok = arg == "forward" || arg == "backward"; break;
                case AR::Op: ok = parse_compare_op(arg).has_value(); break;
                case AR::BetweenOp: ok = arg == "greater" || arg == "less"; break;
                case AR::AmongOp: ok = arg == "largest" || arg == "smallest"; break;
                case AR::TypedValue: ok = parse_value_as(*sig.value_kind, arg).has_value(); break;
                default: break;
            }
            if (!ok) {
                throw CallError(ErrorCode::BadToken, index,
                                std::string(sig.name) + " argument " + std::to_string(k) + " \"" + arg + "\" is out of domain");
            }
        }
        kinds.push_back(sig.output);
    }
    if (!is_answer_kind(kinds.back())) {
        throw CallError(ErrorCode::KindMismatch, static_cast<int>(kinds.size()) - 1,
                        "root must produce an answer, found " + std::string(data_kind_name(kinds.back())));
    }
    return kinds;
}

} // namespace kopl
