#include "harness.hpp"

#include <algorithm>
#include <set>

#include "kopl/errors.hpp"
#include "oracle.hpp"

namespace kopl::testing {

namespace {

std::string entity_set(const KnowledgeBase& kb, const std::vector<EntityIndex>& es) {
    std::vector<std::string> names;
    for (auto e : es) names.push_back(kb.entity(e).name);
    std::sort(names.begin(), names.end());
    std::string out = "{";
    for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "; " : "") + names[i];
    return out + "}";
}

} // namespace

std::string run_with_interpreter(const Interpreter& interpreter, const Program& program) {
    std::vector<ExecutionState> states;
    try {
        for (const auto& c : program.calls()) {
            std::vector<const ExecutionState*> in;
            for (int d : c.functional_inputs) in.push_back(&states[static_cast<std::size_t>(d)]);
            states.push_back(interpreter.apply(c, in));
        }
    } catch (const Error& e) {
        return "!" + std::string(error_code_name(e.code()));
    }
    const auto& last = states.back();
    if (last.answer) return "=" + last.answer->render();
    return entity_set(interpreter.kb(), last.distinct_entities());
}

std::string run_with_oracle(const KnowledgeBase& kb, const Program& program) {
    auto out = oracle_execute(kb, program);
    if (out.error) return "!" + *out.error;
    if (out.answers.size() != 1) return "!NonUniqueAnswer";
    return "=" + out.answer();
}

RandomPrograms::RandomPrograms(const KnowledgeBase& kb, std::uint64_t seed) : kb_(kb), rng_(seed) {
    std::set<std::string> keys, qkeys, preds;
    std::set<std::pair<ValueKind, std::string>> values;
    auto add_value = [&](const Value& v) {
        values.insert({v.kind(), v.is_quantity() ? format_magnitude(v.as_quantity().magnitude) + " " + v.as_quantity().unit
                                                 : v.render()});
        if (v.is_date()) values.insert({ValueKind::Year, std::to_string(v.as_date().year)});
    };
    for (const auto& e : kb.entities()) {
        names_.push_back(e.name);
        for (const auto& a : e.attributes) {
            keys.insert(a.key);
            add_value(a.value);
            for (const auto& q : a.qualifiers) {
                qkeys.insert(q.key);
                add_value(q.value);
            }
        }
    }
    for (const auto& r : kb.relations()) {
        preds.insert(r.predicate);
        for (const auto& q : r.qualifiers) {
            qkeys.insert(q.key);
            add_value(q.value);
        }
    }
    for (const auto& c : kb.concepts()) concepts_.push_back(c.name);
    keys_.assign(keys.begin(), keys.end());
    qkeys_.assign(qkeys.begin(), qkeys.end());
    predicates_.assign(preds.begin(), preds.end());
    values_.assign(values.begin(), values.end());
    names_.push_back("Nobody");
    keys_.push_back("no such key");
    qkeys_.push_back("no such qualifier");
    predicates_.push_back("no such relation");
}

Program RandomPrograms::next() {
    for (;;) {
        auto p = Program::from_tree(root());
        try {
            typecheck(p);
            return p;
        } catch (const Error&) {
        }
    }
}

std::string RandomPrograms::op(bool allow_ne) {
    static const std::vector<std::string> ops{"=", "<", ">", "!="};
    return ops[std::uniform_int_distribution<std::size_t>(0, allow_ne ? 3 : 2)(rng_)];
}
std::string RandomPrograms::name() { return pick(names_); }
std::string RandomPrograms::concept_name() { return pick(concepts_); }
std::string RandomPrograms::key() { return pick(keys_); }
std::string RandomPrograms::qkey() { return pick(qkeys_); }
std::string RandomPrograms::predicate() { return pick(predicates_); }

std::array<std::string, 5> RandomPrograms::real_attribute() {
    for (;;) {
        const auto& e = pick(kb_.entities());
        if (e.attributes.empty()) continue;
        const auto& a = pick(e.attributes);
        const auto& v = a.value;
        std::string vt = v.is_quantity() ? format_magnitude(v.as_quantity().magnitude) + " " + v.as_quantity().unit : v.render();
        if (a.qualifiers.empty()) return {e.name, a.key, vt, qkey(), value_text(ValueKind::Year)};
        const auto& q = pick(a.qualifiers);
        return {e.name, a.key, vt, q.key, q.value.render()};
    }
}

std::array<std::string, 4> RandomPrograms::real_relation() {
    if (kb_.relations().empty()) return {name(), predicate(), name(), qkey()};
    const auto& r = pick(kb_.relations());
    return {kb_.entity(r.subject).name, r.predicate, kb_.entity(r.object).name, r.qualifiers.empty() ? qkey() : pick(r.qualifiers).key};
}

std::string RandomPrograms::value_text(ValueKind kind) {
    std::vector<std::string> same;
    for (const auto& [k, s] : values_) {
        if (k == kind) same.push_back(s);
    }
    if (same.empty() || chance(0.1)) {
        switch (kind) {
            case ValueKind::Text: return "nothing";
            case ValueKind::Quantity: return "100 centimetre";
            case ValueKind::Date: return "2000-01-01";
            case ValueKind::Year: return "1999";
        }
    }
    return pick(same);
}

ProgramNode RandomPrograms::attribute_filter(ProgramNode child) {
    static const Function fs[] = {Function::FilterStr, Function::FilterNum, Function::FilterYear, Function::FilterDate};
    const auto f = fs[std::uniform_int_distribution<int>(0, 3)(rng_)];
    ProgramNode n{f, {key(), value_text(*signature(f).value_kind)}, {}};
    if (f != Function::FilterStr) n.textual_inputs.push_back(op());
    n.children.push_back(std::move(child));
    return n;
}

ProgramNode RandomPrograms::facts(int depth) {
    ProgramNode n;
    if (chance(0.5)) {
        n = attribute_filter(entities(depth - 1));
    } else {
        n = {Function::Relate, {predicate(), chance(0.5) ? "forward" : "backward"}, {entities(depth - 1)}};
    }
    if (chance(0.4)) {
        static const Function qs[] = {Function::QFilterStr, Function::QFilterNum, Function::QFilterYear, Function::QFilterDate};
        const auto f = qs[std::uniform_int_distribution<int>(0, 3)(rng_)];
        ProgramNode q{f, {qkey(), value_text(*signature(f).value_kind)}, {}};
        if (f != Function::QFilterStr) q.textual_inputs.push_back(op());
        q.children.push_back(std::move(n));
        return q;
    }
    return n;
}

ProgramNode RandomPrograms::entities(int depth) {
    const int pick_max = depth <= 0 ? 1 : 6;
    switch (std::uniform_int_distribution<int>(0, pick_max)(rng_)) {
        case 0: return {Function::FindAll, {}, {}};
        case 1: return {Function::Find, {name()}, {}};
        case 2: return {Function::FilterConcept, {concept_name()}, {entities(depth - 1)}};
        case 3:
        case 4: return facts(depth);
        case 5: return {Function::And, {}, {entities(depth - 1), entities(depth - 1)}};
        default: return {Function::Or, {}, {entities(depth - 1), entities(depth - 1)}};
    }
}

ProgramNode RandomPrograms::root() {
    const int depth = std::uniform_int_distribution<int>(1, 3)(rng_);
    auto single = [&] { return chance(0.7) ? ProgramNode{Function::Find, {name()}, {}} : entities(depth); };
    switch (std::uniform_int_distribution<int>(0, 12)(rng_)) {
        case 0: return {Function::QueryName, {}, {entities(depth)}};
        case 1: return {Function::Count, {}, {entities(depth)}};
        case 2: return {Function::QueryAttr, {key()}, {single()}};
        case 3: {
            if (chance(0.6)) {
                const auto [e, k, v, qk, qv] = real_attribute();
                return {Function::QueryAttrUnderCondition, {k, qk, qv}, {{Function::Find, {e}, {}}}};
            }
            const auto kind = chance(0.5) ? ValueKind::Year : ValueKind::Text;
            return {Function::QueryAttrUnderCondition, {key(), qkey(), value_text(kind)}, {single()}};
        }
        case 4: {
            if (chance(0.6)) {
                const auto [s, p, o, qk] = real_relation();
                return {Function::QueryRelation, {}, {{Function::Find, {s}, {}}, {Function::Find, {o}, {}}}};
            }
            return {Function::QueryRelation, {}, {single(), single()}};
        }
        case 5: return {Function::SelectBetween, {key(), chance(0.5) ? "greater" : "less"}, {single(), single()}};
        case 6: return {Function::SelectAmong, {key(), chance(0.5) ? "largest" : "smallest"}, {entities(depth)}};
        case 7: {
            static const Function vs[] = {Function::VerifyStr, Function::VerifyNum, Function::VerifyYear, Function::VerifyDate};
            const auto f = vs[std::uniform_int_distribution<int>(0, 3)(rng_)];
            ProgramNode n{f, {value_text(*signature(f).value_kind)}, {}};
            if (f != Function::VerifyStr) n.textual_inputs.push_back(op());
            n.children.push_back({Function::QueryAttr, {key()}, {single()}});
            return n;
        }
        case 8: {
            if (chance(0.6)) {
                const auto [e, k, v, qk, qv] = real_attribute();
                return {Function::QueryAttrQualifier, {k, v, qk}, {{Function::Find, {e}, {}}}};
            }
            const auto kind = static_cast<ValueKind>(std::uniform_int_distribution<int>(0, 3)(rng_));
            return {Function::QueryAttrQualifier, {key(), value_text(kind), qkey()}, {single()}};
        }
        case 9: {
            if (chance(0.6)) {
                const auto [s, p, o, qk] = real_relation();
                return {Function::QueryRelationQualifier, {p, qk}, {{Function::Find, {s}, {}}, {Function::Find, {o}, {}}}};
            }
            return {Function::QueryRelationQualifier, {predicate(), qkey()}, {single(), single()}};
        }
        case 10: return {Function::Count, {}, {facts(depth)}};
        case 11: return {Function::QueryName, {}, {facts(depth)}};
        default: return {Function::SelectAmong, {key(), chance(0.5) ? "largest" : "smallest"}, {facts(depth)}};
    }
}

} // namespace kopl::testing
