#include "kopl/interpreter.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "kopl/errors.hpp"

namespace kopl {

using nlohmann::json;

const std::vector<Qualifier>& FactRef::qualifiers(const KnowledgeBase& kb) const {
    if (kind == Kind::Relation) return kb.relation(owner).qualifiers;
    return kb.entity(owner).attributes[position].qualifiers;
}

std::string Answer::render() const {
    switch (kind) {
        case DataKind::String:
        case DataKind::Predicate: return text;
        case DataKind::Number: return std::to_string(number);
        case DataKind::Boolean: return boolean ? "yes" : "no";
        case DataKind::Value: return value.render();
        default: return {};
    }
}

std::vector<EntityIndex> ExecutionState::distinct_entities() const {
    std::vector<EntityIndex> out;
    std::unordered_set<EntityIndex> seen;
    for (auto e : entities) {
        if (seen.insert(e).second) out.push_back(e);
    }
    return out;
}

std::optional<Value> parse_typed(const KnowledgeBase& kb, ValueKind kind, std::string_view text) {
    auto v = parse_value_as(kind, text);
    if (v && v->is_quantity()) {
        const auto& q = v->as_quantity();
        return Value::quantity(q.magnitude, kb.canonical_unit(q.unit));
    }
    return v;
}

std::optional<Value> coerce_untyped(const KnowledgeBase& kb, std::string_view text, const Value& like) {
    if (like.is_date()) {
        if (auto d = parse_value_as(ValueKind::Date, text)) return d;
        return parse_value_as(ValueKind::Year, text);
    }
    return parse_typed(kb, like.kind(), text);
}

namespace {

struct Group {
    std::vector<std::size_t> members;
};

bool same_value_set_member(const std::vector<Value>& values, const Value& v) {
    return std::find(values.begin(), values.end(), v) != values.end();
}

} // namespace

EntityIndex select_extreme(const KnowledgeBase& kb, const std::vector<SelectCandidate>& candidates, bool largest,
                           std::vector<std::string>* notes) {
    auto note = [&](const std::string& s) {
        if (notes) notes->push_back(s);
    };
    std::map<std::string, Group> groups;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        const auto& name = kb.entity(c.entity).name;
        if (c.values.empty()) {
            note("skipped " + name + ": no value");
            continue;
        }
        if (c.values.size() > 1) {
            note("skipped " + name + ": " + std::to_string(c.values.size()) + " values");
            continue;
        }
        const auto& v = c.values.front();
        if (v.is_text()) {
            note("skipped " + name + ": text value");
            continue;
        }
        const std::string key = v.is_quantity() ? "unit " + v.as_quantity().unit : std::string("temporal");
        groups[key].members.push_back(i);
    }
    if (groups.empty()) throw Error(ErrorCode::NonUniqueAnswer, "no comparable candidate");

    // plurality group; std::map order gives the smallest name on ties
    const Group* best = nullptr;
    std::string best_key;
    for (const auto& [key, g] : groups) {
        if (!best || g.members.size() > best->members.size()) {
            best = &g;
            best_key = key;
        }
    }
    for (const auto& [key, g] : groups) {
        if (&g == best) continue;
        for (auto i : g.members) note("skipped " + kb.entity(candidates[i].entity).name + ": " + key + " outside plurality " + best_key);
    }

    const auto better = largest ? CompareOp::Gt : CompareOp::Lt;
    std::vector<std::size_t> winners;
    for (auto i : best->members) {
        const auto& v = candidates[i].values.front();
        bool beaten = false;
        for (auto j : best->members) {
            if (j != i && compare(candidates[j].values.front(), v, better)) {
                beaten = true;
                break;
            }
        }
        if (!beaten) winners.push_back(i);
    }
    if (winners.size() != 1) {
        throw Error(ErrorCode::NonUniqueAnswer, std::to_string(winners.size()) + " candidates tie at the " +
                                                    (largest ? "largest" : "smallest") + " value");
    }
    return candidates[winners.front()].entity;
}

namespace {

class Step {
public:
    Step(const KnowledgeBase& kb, const FunctionCall& call, const std::vector<const ExecutionState*>& in)
        : kb_(kb), call_(call), in_(in) {}

    ExecutionState run() {
        const auto& a = call_.textual_inputs;
        switch (call_.function) {
            case Function::FindAll: return find_all();
            case Function::Find: return find(a[0]);
            case Function::FilterConcept: return filter_concept(a[0]);
            case Function::FilterStr: return filter_attribute(a[0], a[1], "=");
            case Function::FilterNum:
            case Function::FilterYear:
            case Function::FilterDate: return filter_attribute(a[0], a[1], a[2]);
            case Function::QFilterStr: return qualifier_filter(a[0], a[1], "=");
            case Function::QFilterNum:
            case Function::QFilterYear:
            case Function::QFilterDate: return qualifier_filter(a[0], a[1], a[2]);
            case Function::Relate: return relate(a[0], a[1]);
            case Function::And: return set_and();
            case Function::Or: return set_or();
            case Function::QueryName: return query_name();
            case Function::Count: return answer(Answer::count(static_cast<std::int64_t>(operand(0).distinct_entities().size())));
            case Function::QueryAttr: return query_attr(a[0], nullptr, nullptr);
            case Function::QueryAttrUnderCondition: return query_attr(a[0], &a[1], &a[2]);
            case Function::QueryRelation: return query_relation();
            case Function::SelectBetween: return select_between(a[0], a[1]);
            case Function::SelectAmong: return select_among(a[0], a[1]);
            case Function::VerifyStr: return verify(a[0], "=");
            case Function::VerifyNum:
            case Function::VerifyYear:
            case Function::VerifyDate: return verify(a[0], a[1]);
            case Function::QueryAttrQualifier: return query_attr_qualifier(a[0], a[1], a[2]);
            case Function::QueryRelationQualifier: return query_relation_qualifier(a[0], a[1]);
        }
        throw Error(ErrorCode::UnknownFunction, "unhandled function");
    }

private:
    const ExecutionState& operand(std::size_t i) const {
        if (i >= in_.size() || !in_[i]) throw Error(ErrorCode::ArityMismatch, "missing operand");
        return *in_[i];
    }

    static ExecutionState entities(std::vector<EntityIndex> es) {
        ExecutionState s;
        s.kind = DataKind::Entities;
        s.entities = std::move(es);
        return s;
    }

    static ExecutionState with_facts(std::vector<EntityIndex> es, std::vector<FactRef> fs) {
        ExecutionState s;
        s.kind = DataKind::EntitiesWithFacts;
        s.entities = std::move(es);
        s.facts = std::move(fs);
        return s;
    }

    static ExecutionState answer(Answer a) {
        ExecutionState s;
        s.kind = a.kind;
        s.answer = std::move(a);
        return s;
    }

    ValueKind typed_kind() const { return *signature(call_.function).value_kind; }

    Value typed(const std::string& text) const {
        auto v = parse_typed(kb_, typed_kind(), text);
        if (!v) {
            throw Error(ErrorCode::BadToken, "\"" + text + "\" is not a " + std::string(value_kind_name(typed_kind())));
        }
        return *v;
    }

    static CompareOp op_of(const std::string& token) {
        auto op = parse_compare_op(token);
        if (!op) throw Error(ErrorCode::BadToken, "unknown comparison \"" + token + "\"");
        return *op;
    }

    EntityIndex single(std::size_t i) const {
        auto es = operand(i).distinct_entities();
        if (es.size() != 1) {
            throw Error(ErrorCode::NonUniqueEntity, "expected one entity, got " + std::to_string(es.size()));
        }
        return es.front();
    }

    ExecutionState find_all() const {
        std::vector<EntityIndex> es(kb_.entities().size());
        for (EntityIndex i = 0; i < es.size(); ++i) es[i] = i;
        return entities(std::move(es));
    }

    ExecutionState find(const std::string& name) const {
        auto span = kb_.entities_named(name);
        return entities({span.begin(), span.end()});
    }

    ExecutionState filter_concept(const std::string& concept_name) const {
        auto members = kb_.entities_of_concept(concept_name);
        std::unordered_set<EntityIndex> keep(members.begin(), members.end());
        std::vector<EntityIndex> out;
        for (auto e : operand(0).distinct_entities()) {
            if (keep.count(e)) out.push_back(e);
        }
        return entities(std::move(out));
    }

    ExecutionState filter_attribute(const std::string& key, const std::string& value, const std::string& op_token) const {
        const Value target = typed(value);
        const CompareOp op = op_of(op_token);
        std::vector<EntityIndex> es;
        std::vector<FactRef> fs;
        for (auto e : operand(0).distinct_entities()) {
            const auto& attrs = kb_.entity(e).attributes;
            for (std::uint32_t i = 0; i < attrs.size(); ++i) {
                if (attrs[i].key == key && compare(attrs[i].value, target, op)) {
                    es.push_back(e);
                    fs.push_back(FactRef::attribute(e, i));
                }
            }
        }
        return with_facts(std::move(es), std::move(fs));
    }

    ExecutionState qualifier_filter(const std::string& qkey, const std::string& value, const std::string& op_token) const {
        const auto& in = operand(0);
        if (!in.has_facts()) throw Error(ErrorCode::MissingFacts, "input carries no facts");
        const Value target = typed(value);
        const CompareOp op = op_of(op_token);
        std::vector<EntityIndex> es;
        std::vector<FactRef> fs;
        for (std::size_t i = 0; i < in.entities.size(); ++i) {
            for (const auto& q : in.facts[i].qualifiers(kb_)) {
                if (q.key == qkey && compare(q.value, target, op)) {
                    es.push_back(in.entities[i]);
                    fs.push_back(in.facts[i]);
                    break;
                }
            }
        }
        return with_facts(std::move(es), std::move(fs));
    }

    ExecutionState relate(const std::string& predicate, const std::string& direction) const {
        bool forward;
        if (direction == "forward") forward = true;
        else if (direction == "backward") forward = false;
        else throw Error(ErrorCode::BadToken, "direction \"" + direction + "\"");
        std::vector<EntityIndex> es;
        std::vector<FactRef> fs;
        std::set<std::pair<EntityIndex, RelationIndex>> seen;
        for (auto e : operand(0).distinct_entities()) {
            for (auto r : forward ? kb_.outgoing(e) : kb_.incoming(e)) {
                const auto& fact = kb_.relation(r);
                if (fact.predicate != predicate) continue;
                const EntityIndex other = forward ? fact.object : fact.subject;
                if (seen.emplace(other, r).second) {
                    es.push_back(other);
                    fs.push_back(FactRef::relation(r));
                }
            }
        }
        return with_facts(std::move(es), std::move(fs));
    }

    ExecutionState set_and() const {
        auto b = operand(1).distinct_entities();
        std::unordered_set<EntityIndex> in_b(b.begin(), b.end());
        std::vector<EntityIndex> out;
        for (auto e : operand(0).distinct_entities()) {
            if (in_b.count(e)) out.push_back(e);
        }
        return entities(std::move(out));
    }

    ExecutionState set_or() const {
        auto out = operand(0).distinct_entities();
        std::unordered_set<EntityIndex> seen(out.begin(), out.end());
        for (auto e : operand(1).distinct_entities()) {
            if (seen.insert(e).second) out.push_back(e);
        }
        return entities(std::move(out));
    }

    ExecutionState query_name() const {
        auto es = operand(0).distinct_entities();
        if (es.size() != 1) {
            throw Error(ErrorCode::NonUniqueAnswer, "QueryName over " + std::to_string(es.size()) + " entities");
        }
        return answer(Answer::name(kb_.entity(es.front()).name));
    }

    bool has_qualifier(const std::vector<Qualifier>& qs, const std::string& qkey, const std::string& qvalue) const {
        for (const auto& q : qs) {
            if (q.key != qkey) continue;
            auto v = coerce_untyped(kb_, qvalue, q.value);
            if (v && compare(q.value, *v, CompareOp::Eq)) return true;
        }
        return false;
    }

    static void add_distinct(std::vector<Value>& values, const Value& v) {
        if (!same_value_set_member(values, v)) values.push_back(v);
    }

    static ExecutionState unique_value(std::vector<Value> values, const std::string& what) {
        if (values.size() != 1) {
            throw Error(ErrorCode::NonUniqueAnswer, std::to_string(values.size()) + " candidate values for " + what);
        }
        return answer(Answer::of_value(std::move(values.front())));
    }

    ExecutionState query_attr(const std::string& key, const std::string* qkey, const std::string* qvalue) const {
        const EntityIndex e = single(0);
        std::vector<Value> values;
        for (const auto& a : kb_.entity(e).attributes) {
            if (a.key != key) continue;
            if (qkey && !has_qualifier(a.qualifiers, *qkey, *qvalue)) continue;
            add_distinct(values, a.value);
        }
        return unique_value(std::move(values), "\"" + key + "\"");
    }

    ExecutionState query_relation() const {
        const EntityIndex a = single(0);
        const EntityIndex b = single(1);
        std::set<std::string> predicates;
        for (auto r : kb_.outgoing(a)) {
            if (kb_.relation(r).object == b) predicates.insert(kb_.relation(r).predicate);
        }
        if (predicates.size() != 1) {
            throw Error(ErrorCode::NonUniqueAnswer, std::to_string(predicates.size()) + " relations between the entities");
        }
        return answer(Answer::predicate(*predicates.begin()));
    }

    SelectCandidate candidate(EntityIndex e, const std::string& key) const {
        SelectCandidate c{e, {}};
        for (const auto& a : kb_.entity(e).attributes) {
            if (a.key == key) add_distinct(c.values, a.value);
        }
        return c;
    }

    ExecutionState select_between(const std::string& key, const std::string& op) const {
        bool largest;
        if (op == "greater") largest = true;
        else if (op == "less") largest = false;
        else throw Error(ErrorCode::BadToken, "SelectBetween op \"" + op + "\"");
        const EntityIndex a = single(0);
        const EntityIndex b = single(1);
        std::vector<SelectCandidate> cands{candidate(a, key)};
        if (b != a) cands.push_back(candidate(b, key));
        ExecutionState s;
        const EntityIndex w = select_extreme(kb_, cands, largest, &s.notes);
        s.kind = DataKind::String;
        s.answer = Answer::name(kb_.entity(w).name);
        return s;
    }

    ExecutionState select_among(const std::string& key, const std::string& op) const {
        bool largest;
        if (op == "largest") largest = true;
        else if (op == "smallest") largest = false;
        else throw Error(ErrorCode::BadToken, "SelectAmong op \"" + op + "\"");
        std::vector<SelectCandidate> cands;
        for (auto e : operand(0).distinct_entities()) cands.push_back(candidate(e, key));
        ExecutionState s;
        const EntityIndex w = select_extreme(kb_, cands, largest, &s.notes);
        s.kind = DataKind::String;
        s.answer = Answer::name(kb_.entity(w).name);
        return s;
    }

    ExecutionState verify(const std::string& value, const std::string& op_token) const {
        const auto& in = operand(0);
        if (!in.answer || in.answer->kind != DataKind::Value) throw Error(ErrorCode::KindMismatch, "Verify needs a VALUE");
        return answer(Answer::truth(compare(in.answer->value, typed(value), op_of(op_token))));
    }

    ExecutionState query_attr_qualifier(const std::string& key, const std::string& value, const std::string& qkey) const {
        const EntityIndex e = single(0);
        bool found = false;
        std::vector<Value> values;
        for (const auto& a : kb_.entity(e).attributes) {
            if (a.key != key) continue;
            auto v = coerce_untyped(kb_, value, a.value);
            if (!v || !compare(a.value, *v, CompareOp::Eq)) continue;
            found = true;
            for (const auto& q : a.qualifiers) {
                if (q.key == qkey) add_distinct(values, q.value);
            }
        }
        if (!found) throw Error(ErrorCode::FactNotFound, "no \"" + key + "\" fact with value " + value);
        return unique_value(std::move(values), "qualifier \"" + qkey + "\"");
    }

    ExecutionState query_relation_qualifier(const std::string& predicate, const std::string& qkey) const {
        const EntityIndex a = single(0);
        const EntityIndex b = single(1);
        bool found = false;
        std::vector<Value> values;
        for (auto r : kb_.outgoing(a)) {
            const auto& fact = kb_.relation(r);
            if (fact.object != b || fact.predicate != predicate) continue;
            found = true;
            for (const auto& q : fact.qualifiers) {
                if (q.key == qkey) add_distinct(values, q.value);
            }
        }
        if (!found) throw Error(ErrorCode::FactNotFound, "no \"" + predicate + "\" fact between the entities");
        return unique_value(std::move(values), "qualifier \"" + qkey + "\"");
    }

    const KnowledgeBase& kb_;
    const FunctionCall& call_;
    const std::vector<const ExecutionState*>& in_;
};

std::string preview_item(const KnowledgeBase& kb, const ExecutionState& s, std::size_t i) {
    std::string out = kb.entity(s.entities[i]).name;
    if (!s.has_facts()) return out;
    const auto& f = s.facts[i];
    if (f.kind == FactRef::Kind::Relation) {
        const auto& r = kb.relation(f.owner);
        out += " [" + kb.entity(r.subject).name + " | " + r.predicate + " | " + kb.entity(r.object).name + "]";
    } else {
        const auto& a = kb.entity(f.owner).attributes[f.position];
        out += " [" + a.key + " = " + a.value.render() + "]";
    }
    for (const auto& q : f.qualifiers(kb)) out += " (" + q.key + ": " + q.value.render() + ")";
    return out;
}

} // namespace

ExecutionState Interpreter::apply(const FunctionCall& call, const std::vector<const ExecutionState*>& operands) const {
    return Step(kb_, call, operands).run();
}

ExecutionResult Interpreter::execute(const Program& program) const {
    typecheck(program);
    ExecutionResult result;
    result.trace.reserve(program.size());
    for (std::size_t i = 0; i < program.size(); ++i) {
        const auto& call = program[i];
        std::vector<const ExecutionState*> operands;
        for (int d : call.functional_inputs) operands.push_back(&result.trace[static_cast<std::size_t>(d)]);
        try {
            result.trace.push_back(apply(call, operands));
        } catch (const CallError&) {
            throw;
        } catch (const Error& e) {
            std::string msg = e.what();
            const auto prefix = std::string(error_code_name(e.code())) + ": ";
            if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
            throw CallError(e.code(), static_cast<int>(i), std::string(function_name(call.function)) + ": " + msg);
        }
    }
    result.answer = *result.trace.back().answer;
    result.rendered = result.answer.render();
    return result;
}

json trace_to_json(const KnowledgeBase& kb, const Program& program, const std::vector<ExecutionState>& trace) {
    constexpr std::size_t kPreview = 20;
    json out = json::array();
    for (std::size_t i = 0; i < trace.size() && i < program.size(); ++i) {
        const auto& s = trace[i];
        json step = {{"index", i},
                     {"function", std::string(function_name(program[i].function))},
                     {"inputs", program[i].textual_inputs},
                     {"dependencies", program[i].functional_inputs},
                     {"kind", std::string(data_kind_name(s.kind))}};
        if (s.answer) {
            step["answer"] = s.answer->render();
        } else {
            step["size"] = s.entities.size();
            json preview = json::array();
            for (std::size_t k = 0; k < s.entities.size() && k < kPreview; ++k) preview.push_back(preview_item(kb, s, k));
            step["preview"] = std::move(preview);
        }
        if (!s.notes.empty()) step["notes"] = s.notes;
        out.push_back(std::move(step));
    }
    return out;
}

} // namespace kopl
