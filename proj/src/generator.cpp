#include "kopl/generator.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "kopl/errors.hpp"

namespace kopl {

using nlohmann::json;

// ---------------------------------------------------------------------------------------------
// config

std::map<std::string, double> GeneratorConfig::default_weights() {
    return {
        {"EntityName", 1.0},      {"ConceptName", 0.6},       {"ConceptLiteral", 1.0},
        {"ConceptRelational", 1.0}, {"RecursiveMultiHop", 0.6}, {"Intersection", 0.4},
        {"Union", 0.4},
        {"QueryName", 1.0},       {"Count", 1.0},             {"QueryAttribute", 1.0},
        {"Relation", 1.0},        {"SelectAmong", 0.7},       {"SelectBetween", 1.0},
        {"Verify", 1.0},          {"QualifierLiteral", 1.0},  {"QualifierRelational", 1.0},
    };
}

namespace {

bool is_locating(std::string_view s) {
    return std::find(kLocatingStrategies.begin(), kLocatingStrategies.end(), s) != kLocatingStrategies.end();
}
bool is_asking(std::string_view s) {
    return std::find(kAskingStrategies.begin(), kAskingStrategies.end(), s) != kAskingStrategies.end();
}

double weight_of(const std::map<std::string, double>& w, std::string_view name) {
    auto it = w.find(std::string(name));
    return it == w.end() ? 0.0 : it->second;
}

} // namespace

void GeneratorConfig::validate() const {
    auto bad = [](const std::string& m) { throw Error(ErrorCode::MalformedInput, "generator config: " + m); };
    if (max_depth < 1) bad("max_depth must be at least 1");
    if (!(qualifier_probability >= 0.0 && qualifier_probability <= 1.0)) bad("qualifier_probability must lie in [0, 1]");
    if (max_attempts_per_instance < 1) bad("max_attempts_per_instance must be at least 1");
    double locating = 0, asking = 0;
    for (const auto& [name, w] : strategy_weights) {
        if (!is_locating(name) && !is_asking(name)) bad("unknown strategy \"" + name + "\"");
        if (!(w >= 0.0)) bad("weight of " + name + " is negative");
        (is_locating(name) ? locating : asking) += w;
    }
    if (!(locating > 0)) bad("no locating strategy has positive weight");
    if (!(asking > 0)) bad("no asking strategy has positive weight");
}

GeneratorConfig GeneratorConfig::from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "generator config must be a JSON object");
    GeneratorConfig c;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "count") c.count = v.get<std::size_t>();
            else if (key == "max_depth") c.max_depth = v.get<int>();
            else if (key == "qualifier_probability") c.qualifier_probability = v.get<double>();
            else if (key == "max_attempts_per_instance") c.max_attempts_per_instance = v.get<int>();
            else if (key == "threads") c.threads = v.get<unsigned>();
            else if (key == "strategy_weights") {
                // A given map replaces the defaults: unlisted strategies are disabled.
                c.strategy_weights.clear();
                for (const auto& [name, w] : v.items()) c.strategy_weights[name] = w.get<double>();
            } else {
                throw Error(ErrorCode::MalformedInput, "generator config: unknown field \"" + key + "\"");
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("generator config: ") + e.what());
    }
    c.validate();
    return c;
}

GeneratorConfig GeneratorConfig::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    try {
        return from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::MalformedInput, path.string() + ": " + e.what());
    }
}

json GeneratorConfig::to_json() const {
    json w = json::object();
    for (const auto& [name, v] : strategy_weights) w[name] = v;
    return {{"seed", seed},
            {"count", count},
            {"max_depth", max_depth},
            {"strategy_weights", w},
            {"qualifier_probability", qualifier_probability},
            {"max_attempts_per_instance", max_attempts_per_instance},
            {"threads", threads}};
}

// ---------------------------------------------------------------------------------------------
// templates

std::string fill_template(std::string_view templ, const std::vector<TemplateSlot>& slots) {
    static const std::map<std::string, Placeholder, std::less<>> names{
        {"E", Placeholder::E}, {"C", Placeholder::C},   {"K", Placeholder::K},   {"OP", Placeholder::OP},
        {"V", Placeholder::V}, {"QK", Placeholder::QK}, {"QV", Placeholder::QV}, {"P", Placeholder::P}};
    std::vector<bool> used(slots.size(), false);
    std::string out;
    std::size_t i = 0;
    while (i < templ.size()) {
        if (templ[i] == '<') {
            const auto close = templ.find('>', i);
            if (close != std::string_view::npos) {
                auto it = names.find(templ.substr(i + 1, close - i - 1));
                if (it != names.end()) {
                    std::size_t k = 0;
                    while (k < slots.size() && (used[k] || slots[k].placeholder != it->second)) ++k;
                    if (k == slots.size()) {
                        throw Error(ErrorCode::NoViableSample, "unbound placeholder <" + it->first + "> in \"" + std::string(templ) + "\"");
                    }
                    used[k] = true;
                    out += slots[k].surface;
                    i = close + 1;
                    continue;
                }
            }
        }
        out += templ[i++];
    }
    if (std::find(used.begin(), used.end(), false) != used.end()) {
        throw Error(ErrorCode::NoViableSample, "unused slot for \"" + std::string(templ) + "\"");
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// meta and serialization

int hop_count(const Program& program) {
    int hops = 0;
    for (const auto& c : program.calls()) {
        if (c.function == Function::Relate || is_attribute_filter(c.function) || is_qualifier_filter(c.function)) ++hops;
    }
    return hops;
}

InstanceMeta program_meta(const Program& program) {
    InstanceMeta m;
    m.hop_count = hop_count(program);
    for (const auto& c : program.calls()) {
        const auto f = c.function;
        if (is_qualifier_filter(f) || f == Function::QueryAttrUnderCondition || f == Function::QueryAttrQualifier ||
            f == Function::QueryRelationQualifier) {
            m.uses_qualifier = true;
        }
        if (f == Function::And || f == Function::Or) m.is_logical = true;
    }
    const auto root = program.root().function;
    m.is_comparison = root == Function::SelectAmong || root == Function::SelectBetween;
    m.is_count = root == Function::Count;
    m.is_verify = is_verify(root);
    return m;
}

namespace {

template <typename J>
J meta_json(const InstanceMeta& m) {
    J j;
    j["question_type"] = m.question_type;
    j["hop_count"] = m.hop_count;
    j["uses_qualifier"] = m.uses_qualifier;
    j["is_comparison"] = m.is_comparison;
    j["is_logical"] = m.is_logical;
    j["is_count"] = m.is_count;
    j["is_verify"] = m.is_verify;
    j["padded"] = m.padded;
    j["locating"] = m.locating;
    return j;
}

} // namespace

json instance_to_json(const Instance& inst) {
    return {{"question", inst.question},
            {"program", program_to_json(inst.program)},
            {"sparql", inst.sparql},
            {"choices", inst.choices},
            {"answer", inst.answer},
            {"meta", meta_json<json>(inst.meta)}};
}

std::string instance_to_line(const Instance& inst) {
    nlohmann::ordered_json j;
    j["question"] = inst.question;
    j["program"] = nlohmann::ordered_json::parse(program_to_json(inst.program).dump());
    j["sparql"] = inst.sparql;
    j["choices"] = inst.choices;
    j["answer"] = inst.answer;
    j["meta"] = meta_json<nlohmann::ordered_json>(inst.meta);
    return j.dump();
}

Instance instance_from_json(const json& j) {
    try {
        Instance inst;
        inst.question = j.at("question").get<std::string>();
        inst.program = program_from_json(j.at("program"));
        inst.sparql = j.value("sparql", std::string{});
        inst.choices = j.value("choices", std::vector<std::string>{});
        inst.answer = j.at("answer").get<std::string>();
        if (j.contains("meta")) {
            const auto& m = j["meta"];
            inst.meta.question_type = m.value("question_type", std::string{});
            inst.meta.hop_count = m.value("hop_count", 0);
            inst.meta.uses_qualifier = m.value("uses_qualifier", false);
            inst.meta.is_comparison = m.value("is_comparison", false);
            inst.meta.is_logical = m.value("is_logical", false);
            inst.meta.is_count = m.value("is_count", false);
            inst.meta.is_verify = m.value("is_verify", false);
            inst.meta.padded = m.value("padded", false);
            inst.meta.locating = m.value("locating", std::vector<std::string>{});
        } else {
            inst.meta = program_meta(inst.program);
        }
        return inst;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("instance: ") + e.what());
    }
}

void GenerationStats::merge(const GenerationStats& other) {
    for (const auto& [name, t] : other.per_strategy) {
        auto& mine = per_strategy[name];
        mine.attempts += t.attempts;
        mine.emitted += t.emitted;
        for (const auto& [reason, n] : t.failures) mine.failures[reason] += n;
    }
    channel_mismatches += other.channel_mismatches;
    intended_mismatches += other.intended_mismatches;
}

json GenerationStats::to_json() const {
    json s = json::object();
    for (const auto& [name, t] : per_strategy) {
        s[name] = {{"attempts", t.attempts}, {"emitted", t.emitted}, {"failures", t.failures}};
    }
    return {{"strategies", s}, {"channel_mismatches", channel_mismatches}, {"intended_mismatches", intended_mismatches}};
}

// ---------------------------------------------------------------------------------------------
// sampling

namespace {

std::string pluralize(const std::string& noun) {
    if (noun.empty()) return noun;
    const auto space = noun.rfind(' ');
    const std::string head = space == std::string::npos ? "" : noun.substr(0, space + 1);
    const std::string last = space == std::string::npos ? noun : noun.substr(space + 1);
    static const std::map<std::string, std::string> irregular{{"person", "people"}, {"man", "men"}, {"woman", "women"},
                                                              {"child", "children"}};
    if (auto it = irregular.find(last); it != irregular.end()) return head + it->second;
    auto ends = [&](std::string_view suf) { return last.size() >= suf.size() && last.compare(last.size() - suf.size(), suf.size(), suf) == 0; };
    if (ends("y") && last.size() > 1 && std::string_view("aeiou").find(last[last.size() - 2]) == std::string_view::npos) {
        return head + last.substr(0, last.size() - 1) + "ies";
    }
    if (ends("s") || ends("x") || ends("z") || ends("ch") || ends("sh")) return head + last + "es";
    return head + last + "s";
}

/// Verb phrase agreeing with a plural subject.
std::string plural_verb(const std::string& phrase) {
    static const std::vector<std::pair<std::string, std::string>> forms{{"was ", "were "}, {"is ", "are "}, {"has ", "have "}};
    for (const auto& [sg, pl] : forms) {
        if (phrase.rfind(sg, 0) == 0) return pl + phrase.substr(sg.size());
    }
    return phrase;
}

std::string capitalize(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

std::string op_surface(ValueKind kind, CompareOp op) {
    switch (kind) {
        case ValueKind::Year:
            switch (op) {
                case CompareOp::Eq: return "in";
                case CompareOp::Ne: return "not in";
                case CompareOp::Lt: return "before";
                case CompareOp::Gt: return "after";
            }
            break;
        case ValueKind::Date:
            switch (op) {
                case CompareOp::Eq: return "on";
                case CompareOp::Ne: return "not equal to";
                case CompareOp::Lt: return "before";
                case CompareOp::Gt: return "after";
            }
            break;
        default:
            switch (op) {
                case CompareOp::Eq: return "equal to";
                case CompareOp::Ne: return "not equal to";
                case CompareOp::Lt: return "less than";
                case CompareOp::Gt: return "greater than";
            }
    }
    return "equal to";
}

enum class Family { Filter, QFilter, Verify };

Function family_function(Family family, ValueKind kind) {
    static const std::map<std::pair<Family, ValueKind>, Function> table{
        {{Family::Filter, ValueKind::Text}, Function::FilterStr},       {{Family::Filter, ValueKind::Quantity}, Function::FilterNum},
        {{Family::Filter, ValueKind::Year}, Function::FilterYear},      {{Family::Filter, ValueKind::Date}, Function::FilterDate},
        {{Family::QFilter, ValueKind::Text}, Function::QFilterStr},     {{Family::QFilter, ValueKind::Quantity}, Function::QFilterNum},
        {{Family::QFilter, ValueKind::Year}, Function::QFilterYear},    {{Family::QFilter, ValueKind::Date}, Function::QFilterDate},
        {{Family::Verify, ValueKind::Text}, Function::VerifyStr},       {{Family::Verify, ValueKind::Quantity}, Function::VerifyNum},
        {{Family::Verify, ValueKind::Year}, Function::VerifyYear},      {{Family::Verify, ValueKind::Date}, Function::VerifyDate},
    };
    return table.at({family, kind});
}

/// A comparison `fact value OP target` that holds (or, for Verify, may fail) on the fact value.
struct Comparison {
    Value target;
    CompareOp op = CompareOp::Eq;

    ValueKind kind() const { return target.kind(); }
    bool typed_op() const { return !target.is_text(); }
};

bool same_group(const Value& a, const Value& b) {
    if (a.is_quantity() && b.is_quantity()) return a.as_quantity().unit == b.as_quantity().unit;
    const bool ta = a.is_date() || a.is_year();
    const bool tb = b.is_date() || b.is_year();
    return ta && tb;
}

bool orderable_value(const Value& v) { return !v.is_text(); }

ProgramNode node(Function f, std::vector<std::string> args, std::vector<ProgramNode> children = {}) {
    return ProgramNode{f, std::move(args), std::move(children)};
}

} // namespace

/// One generation attempt: composes question text and program tree together.
class Sampler {
public:
    Sampler(const Generator& g, Rng& rng) : g_(g), kb_(g.kb_), rng_(rng), cfg_(g.config_) {}

    Candidate ask(std::string_view strategy) {
        Candidate c;
        c.question_type = std::string(strategy);
        if (strategy == "QueryName") query_name(c);
        else if (strategy == "Count") count(c);
        else if (strategy == "QueryAttribute") query_attribute(c);
        else if (strategy == "Relation") relation(c);
        else if (strategy == "SelectAmong") select_among(c);
        else if (strategy == "SelectBetween") select_between(c);
        else if (strategy == "Verify") verify(c);
        else if (strategy == "QualifierLiteral") qualifier_literal(c);
        else if (strategy == "QualifierRelational") qualifier_relational(c);
        else throw Error(ErrorCode::IncompatibleTarget, "unknown asking strategy " + std::string(strategy));
        c.question = capitalize(c.question);
        c.locating = locating_;
        return c;
    }

private:
    struct Desc {
        ProgramNode node;
        std::string singular;
        std::string plural;
    };

    enum class Scope { UniqueTop, SetTop, Inner, Operand };

    [[noreturn]] static void no_sample(const std::string& m) { throw Error(ErrorCode::NoViableSample, m); }
    [[noreturn]] static void incompatible(const std::string& m) { throw Error(ErrorCode::IncompatibleTarget, m); }

    // ---- KB helpers

    std::vector<EntityIndex> evaluate(const ProgramNode& n) const { return run(n).distinct_entities(); }

    ExecutionState run(const ProgramNode& n) const {
        std::vector<ExecutionState> kids;
        kids.reserve(n.children.size());
        for (const auto& c : n.children) kids.push_back(run(c));
        std::vector<const ExecutionState*> ops;
        for (const auto& k : kids) ops.push_back(&k);
        return g_.interpreter_.apply(FunctionCall{n.function, n.textual_inputs, {}}, ops);
    }

    bool is_person(EntityIndex e) const {
        for (auto c : kb_.concept_closure(e)) {
            const auto& name = kb_.concept_at(c).name;
            if (name == "person" || name == "human") return true;
        }
        return false;
    }
    std::string pronoun(EntityIndex e) const { return is_person(e) ? "his/her" : "its"; }

    /// A concept of e: usually a direct one, sometimes an ancestor.
    std::optional<std::string> concept_of(EntityIndex e) {
        const auto& direct = kb_.entity(e).instance_of;
        const auto& closure = kb_.concept_closure(e);
        if (closure.empty()) return std::nullopt;
        if (!direct.empty() && rng_.chance(0.75)) return kb_.concept_at(rng_.pick(direct)).name;
        return kb_.concept_at(rng_.pick(closure)).name;
    }

    const std::vector<Value>& attribute_pool(const std::string& key) const {
        static const std::vector<Value> none;
        auto it = g_.attribute_values_.find(key);
        return it == g_.attribute_values_.end() ? none : it->second;
    }
    const std::vector<Value>& qualifier_pool(const std::string& key) const {
        static const std::vector<Value> none;
        auto it = g_.qualifier_values_.find(key);
        return it == g_.qualifier_values_.end() ? none : it->second;
    }

    std::vector<Value> distinct_values(EntityIndex e, const std::string& key) const {
        std::vector<Value> out;
        for (const auto& f : kb_.entity(e).attributes) {
            if (f.key == key && std::find(out.begin(), out.end(), f.value) == out.end()) out.push_back(f.value);
        }
        return out;
    }

    CompareOp sample_op(bool ordered) {
        if (!ordered) return CompareOp::Eq;
        static const std::array<double, 4> w{0.4, 0.1, 0.25, 0.25};
        return static_cast<CompareOp>(rng_.weighted(std::span<const double>(w)));
    }

    /// Comparison satisfied by `v`, with the target drawn from `pool` when the operator allows it.
    Comparison satisfied_comparison(const Value& v, const std::vector<Value>& pool, bool allow_ops) {
        Value base = v;
        std::vector<Value> targets;
        if (v.is_date() && rng_.chance(0.5)) {
            // Year-granular condition on a date.
            base = Value::year(v.as_date().year);
            for (const auto& p : pool) {
                if (p.is_date()) targets.push_back(Value::year(p.as_date().year));
                else if (p.is_year()) targets.push_back(p);
            }
        } else {
            for (const auto& p : pool) {
                if (p.kind() == v.kind()) targets.push_back(p);
            }
        }
        Comparison c{base, CompareOp::Eq};
        const auto op = sample_op(allow_ops && orderable_value(v));
        if (op == CompareOp::Eq) return c;
        std::vector<Value> ok;
        for (const auto& t : targets) {
            if (compare(v, t, op) && std::find(ok.begin(), ok.end(), t) == ok.end()) ok.push_back(t);
        }
        if (ok.empty()) return c;
        return {rng_.pick(ok), op};
    }

    /// Comparison for Verify: the true value or another KB value, with any operator.
    Comparison verify_comparison(const Value& v, const std::vector<Value>& pool) {
        Value base = v;
        std::vector<Value> others;
        if (v.is_date() && rng_.chance(0.5)) {
            base = Value::year(v.as_date().year);
            for (const auto& p : pool) {
                if (p.is_date()) others.push_back(Value::year(p.as_date().year));
            }
        } else {
            for (const auto& p : pool) {
                if (p.kind() == v.kind() && (!v.is_quantity() || same_group(p, v))) others.push_back(p);
            }
        }
        Comparison c{base, sample_op(orderable_value(v))};
        if (!others.empty() && rng_.chance(0.5)) c.target = rng_.pick(others);
        return c;
    }

    struct Clause {
        Function function;
        std::vector<std::string> args;
        std::string text;
    };

    /// "<K> is <OP> <V>" for attribute filters, "(<QK> is <OP> <QV>)" for qualifier filters.
    Clause condition(Family family, const std::string& key, const Comparison& cmp) {
        Clause cl;
        cl.function = family_function(family, cmp.kind());
        cl.args = {key, cmp.target.render()};
        if (cmp.typed_op()) cl.args.push_back(std::string(compare_op_token(cmp.op)));
        const bool qualifier = family == Family::QFilter;
        const Placeholder kp = qualifier ? Placeholder::QK : Placeholder::K;
        const Placeholder vp = qualifier ? Placeholder::QV : Placeholder::V;
        std::vector<TemplateSlot> slots{{kp, key}};
        std::string templ = qualifier ? "(<QK> is " : "<K> is ";
        if (cmp.typed_op()) {
            templ += "<OP> ";
            slots.push_back({Placeholder::OP, op_surface(cmp.kind(), cmp.op)});
        }
        templ += qualifier ? "<QV>)" : "<V>";
        slots.push_back({vp, cmp.target.render()});
        cl.text = fill_template(templ, slots);
        return cl;
    }

    /// Optional "(<QK> is <QV>)" clause over one of the fact's qualifiers.
    std::optional<Clause> qualifier_clause(const std::vector<Qualifier>& qualifiers) {
        if (qualifiers.empty() || !rng_.chance(cfg_.qualifier_probability)) return std::nullopt;
        const auto& q = rng_.pick(qualifiers);
        return condition(Family::QFilter, q.key, satisfied_comparison(q.value, qualifier_pool(q.key), rng_.chance(0.5)));
    }

    // ---- locating

    std::vector<std::string_view> allowed(Scope scope, int depth) const {
        std::vector<std::string_view> out;
        switch (scope) {
            case Scope::UniqueTop:
                out = {"EntityName", "ConceptName", "ConceptLiteral", "ConceptRelational", "RecursiveMultiHop", "Intersection"};
                break;
            case Scope::SetTop:
                out = {"ConceptName", "ConceptLiteral", "ConceptRelational", "RecursiveMultiHop", "Intersection", "Union"};
                break;
            case Scope::Inner:
                out = {"ConceptLiteral", "ConceptRelational", "RecursiveMultiHop"};
                break;
            case Scope::Operand:
                out = {"ConceptName", "ConceptLiteral", "ConceptRelational"};
                break;
        }
        if (depth < 2) std::erase(out, std::string_view("RecursiveMultiHop"));
        return out;
    }

    std::string_view pick_strategy(Scope scope, int depth, bool allow_name) {
        auto options = allowed(scope, depth);
        if (!allow_name) std::erase(options, std::string_view("EntityName"));
        std::vector<double> w;
        for (auto s : options) w.push_back(weight_of(cfg_.strategy_weights, s));
        double total = 0;
        for (double x : w) total += x;
        if (!(total > 0)) no_sample("no locating strategy with positive weight applies");
        return options[rng_.weighted(std::span<const double>(w))];
    }

    /// Description of a set containing e; exactly {e} when `unique`.
    Desc describe(EntityIndex e, int depth, Scope scope, bool allow_name = true) {
        const bool unique = scope == Scope::UniqueTop;
        std::string last_error = "no description";
        for (int attempt = 0; attempt < 6; ++attempt) {
            const auto mark = locating_.size();
            try {
                const auto strategy = pick_strategy(scope, depth, allow_name);
                locating_.emplace_back(strategy);
                Desc d = build(strategy, e, depth);
                const auto set = evaluate(d.node);
                if (std::find(set.begin(), set.end(), e) == set.end()) no_sample("description misses its target");
                if (unique && set.size() != 1) no_sample("description is not unique");
                return d;
            } catch (const Error& err) {
                if (err.code() != ErrorCode::NoViableSample) throw;
                last_error = err.what();
                locating_.resize(mark);
            }
        }
        throw Error(ErrorCode::NoViableSample, last_error);
    }

    Desc build(std::string_view strategy, EntityIndex e, int depth) {
        if (strategy == "EntityName") return entity_name(e);
        if (strategy == "ConceptName") return concept_name(e);
        if (strategy == "ConceptLiteral") return concept_literal(e);
        if (strategy == "ConceptRelational") return concept_relational(e, 0);
        if (strategy == "RecursiveMultiHop") return concept_relational(e, depth - 1);
        if (strategy == "Intersection") return intersection(e, depth);
        return union_of(e, depth);
    }

    Desc entity_name(EntityIndex e) {
        const auto& name = kb_.entity(e).name;
        return {node(Function::Find, {name}), name, name};
    }

    Desc concept_name(EntityIndex e) {
        auto c = concept_of(e);
        if (!c) no_sample("entity has no concept");
        return {node(Function::FilterConcept, {*c}, {node(Function::FindAll, {})}), fill_template("the <C>", {{Placeholder::C, *c}}),
                fill_template("<C>", {{Placeholder::C, pluralize(*c)}})};
    }

    /// "the <C>" / "the one" heads with optional FilterConcept on top of `inner`.
    Desc with_head(EntityIndex e, ProgramNode inner, const std::string& link_sg, const std::string& link_pl) {
        std::optional<std::string> c;
        if (rng_.chance(0.85)) c = concept_of(e);
        if (c) {
            return {node(Function::FilterConcept, {*c}, {std::move(inner)}),
                    fill_template("the <C> ", {{Placeholder::C, *c}}) + link_sg,
                    fill_template("<C> ", {{Placeholder::C, pluralize(*c)}}) + link_pl};
        }
        return {std::move(inner), "the one " + link_sg, "entities " + link_pl};
    }

    Desc concept_literal(EntityIndex e) {
        const auto& facts = kb_.entity(e).attributes;
        if (facts.empty()) no_sample("entity has no attributes");
        const auto& f = rng_.pick(facts);
        auto cl = condition(Family::Filter, f.key, satisfied_comparison(f.value, attribute_pool(f.key), true));
        ProgramNode n = node(cl.function, cl.args, {node(Function::FindAll, {})});
        std::string text = cl.text;
        if (auto q = qualifier_clause(f.qualifiers)) {
            n = node(q->function, q->args, {std::move(n)});
            text += " " + q->text;
        }
        return with_head(e, std::move(n), "whose " + text, "whose " + text);
    }

    /// "the <C> that <P> <E>"; the other end is named when inner_depth is 0, otherwise described.
    Desc concept_relational(EntityIndex e, int inner_depth) {
        std::vector<std::pair<RelationIndex, bool>> options; // (fact, e is subject)
        for (auto r : kb_.outgoing(e)) options.emplace_back(r, true);
        for (auto r : kb_.incoming(e)) options.emplace_back(r, false);
        if (options.empty()) no_sample("entity has no relations");
        const auto [r, subject] = rng_.pick(options);
        const auto& fact = kb_.relation(r);
        const EntityIndex other = subject ? fact.object : fact.subject;
        Desc o = inner_depth >= 1 ? describe(other, inner_depth, Scope::Inner) : entity_name(other);
        const auto pt = g_.templates_.predicate(fact.predicate);
        const std::string verb = subject ? pt.as_subject : pt.as_object;
        // From the other end: its subjects are reached backward, its objects forward.
        ProgramNode n = node(Function::Relate, {fact.predicate, subject ? "backward" : "forward"}, {std::move(o.node)});
        std::string tail = fill_template("<P> <E>", {{Placeholder::P, verb}, {Placeholder::E, o.singular}});
        std::string tail_pl = fill_template("<P> <E>", {{Placeholder::P, plural_verb(verb)}, {Placeholder::E, o.singular}});
        if (auto q = qualifier_clause(fact.qualifiers)) {
            n = node(q->function, q->args, {std::move(n)});
            tail += " " + q->text;
            tail_pl += " " + q->text;
        }
        return with_head(e, std::move(n), "that " + tail, "that " + tail_pl);
    }

    Desc intersection(EntityIndex e, int depth) {
        Desc a = describe(e, depth - 1, Scope::Operand);
        Desc b = describe(e, depth - 1, Scope::Operand);
        if (a.singular == b.singular) no_sample("intersection of identical conditions");
        return {node(Function::And, {}, {std::move(a.node), std::move(b.node)}), a.singular + " and " + b.singular,
                a.plural + " and " + b.plural};
    }

    Desc union_of(EntityIndex e, int depth) {
        // The second operand describes a different entity sharing a concept with e.
        std::vector<EntityIndex> peers;
        const auto& direct = kb_.entity(e).instance_of;
        if (direct.empty()) no_sample("entity has no concept");
        for (auto p : kb_.entities_of_concept(kb_.concept_at(rng_.pick(direct)).name)) {
            if (p != e) peers.push_back(p);
        }
        if (peers.empty()) no_sample("no peer entity for a union");
        const EntityIndex e2 = rng_.pick(peers);
        Desc a = describe(e, depth - 1, Scope::Operand);
        Desc b = describe(e2, depth - 1, Scope::Operand);
        if (a.singular == b.singular) no_sample("union of identical conditions");
        return {node(Function::Or, {}, {std::move(a.node), std::move(b.node)}), a.singular + " or " + b.singular,
                a.plural + " or " + b.plural};
    }

    Desc unique(EntityIndex e, bool allow_name = true) { return describe(e, cfg_.max_depth, Scope::UniqueTop, allow_name); }
    Desc set(EntityIndex e) { return describe(e, cfg_.max_depth, Scope::SetTop); }

    // ---- asking

    EntityIndex any_entity() {
        if (g_.typed_entities_.empty()) incompatible("KB has no typed entities");
        return rng_.pick(g_.typed_entities_);
    }

    const AttributeFact& attribute_fact(const std::pair<EntityIndex, std::uint32_t>& ref) const {
        return kb_.entity(ref.first).attributes[ref.second];
    }

    void query_name(Candidate& c) {
        const auto e = any_entity();
        Desc d = unique(e, false);
        c.root = node(Function::QueryName, {}, {std::move(d.node)});
        const std::string wh = rng_.chance(0.5) ? "Who" : "What";
        c.question = wh + " is " + d.singular + "?";
        c.intended_answer = kb_.entity(e).name;
    }

    void count(Candidate& c) {
        Desc d = set(any_entity());
        c.root = node(Function::Count, {}, {std::move(d.node)});
        c.question = fill_template("How many <E>?", {{Placeholder::E, d.plural}});
    }

    /// QueryAttr, or QueryAttrUnderCondition over one of the fact's qualifiers.
    ProgramNode attribute_query(EntityIndex e, const AttributeFact& f, ProgramNode located, std::string& clause) {
        const bool several = distinct_values(e, f.key).size() > 1;
        if (!f.qualifiers.empty() && (several || rng_.chance(cfg_.qualifier_probability))) {
            const auto& q = rng_.pick(f.qualifiers);
            clause = fill_template(" (<QK> is <QV>)", {{Placeholder::QK, q.key}, {Placeholder::QV, q.value.render()}});
            return node(Function::QueryAttrUnderCondition, {f.key, q.key, q.value.render()}, {std::move(located)});
        }
        // Without a qualifier a multi-valued key has no unique answer; the uniqueness check rejects it.
        return node(Function::QueryAttr, {f.key}, {std::move(located)});
    }

    void query_attribute(Candidate& c) {
        if (g_.attribute_facts_.empty()) incompatible("KB has no attribute facts");
        const auto ref = rng_.pick(g_.attribute_facts_);
        const auto& f = attribute_fact(ref);
        Desc d = unique(ref.first);
        std::string clause;
        c.root = attribute_query(ref.first, f, std::move(d.node), clause);
        c.question = fill_template("For <E>, what is " + pronoun(ref.first) + " <K>", {{Placeholder::E, d.singular}, {Placeholder::K, f.key}}) +
                     clause + "?";
        c.intended_answer = f.value.render();
    }

    void relation(Candidate& c) {
        if (kb_.relations().empty()) incompatible("KB has no relation facts");
        const auto& fact = kb_.relation(static_cast<RelationIndex>(rng_.below(kb_.relations().size())));
        Desc s = unique(fact.subject);
        Desc o = unique(fact.object);
        c.root = node(Function::QueryRelation, {}, {std::move(s.node), std::move(o.node)});
        c.question = fill_template("What is the relation from <E> to <E>?", {{Placeholder::E, s.singular}, {Placeholder::E, o.singular}});
        c.intended_answer = fact.predicate;
    }

    /// An orderable attribute fact of a random entity.
    std::pair<EntityIndex, const AttributeFact*> orderable_fact() {
        std::vector<std::pair<EntityIndex, std::uint32_t>> refs;
        for (const auto& ref : g_.attribute_facts_) {
            if (orderable_value(attribute_fact(ref).value)) refs.push_back(ref);
        }
        if (refs.empty()) incompatible("KB has no orderable attribute");
        const auto ref = rng_.pick(refs);
        return {ref.first, &attribute_fact(ref)};
    }

    void select_among(Candidate& c) {
        const auto [e, f] = orderable_fact();
        Desc d = set(e);
        if (evaluate(d.node).size() < 2) no_sample("SelectAmong needs at least two entities");
        const bool largest = rng_.chance(0.5);
        c.root = node(Function::SelectAmong, {f->key, largest ? "largest" : "smallest"}, {std::move(d.node)});
        c.question = fill_template("Among <E>, which one has the <OP> <K>?",
                                   {{Placeholder::E, d.plural}, {Placeholder::OP, largest ? "largest" : "smallest"}, {Placeholder::K, f->key}});
    }

    void select_between(Candidate& c) {
        const auto [a, fa] = orderable_fact();
        const auto va = distinct_values(a, fa->key);
        if (va.size() != 1) no_sample("first entity has several values");
        std::vector<EntityIndex> rivals;
        for (const auto& ref : g_.attribute_facts_) {
            if (ref.first == a || attribute_fact(ref).key != fa->key) continue;
            const auto vb = distinct_values(ref.first, fa->key);
            if (vb.size() == 1 && same_group(va[0], vb[0]) && !compare(va[0], vb[0], CompareOp::Eq) &&
                (rivals.empty() || rivals.back() != ref.first)) {
                rivals.push_back(ref.first);
            }
        }
        if (rivals.empty()) no_sample("no comparable second entity");
        const EntityIndex b = rng_.pick(rivals);
        const Value vb = distinct_values(b, fa->key)[0];
        const bool greater = rng_.chance(0.5);
        Desc da = unique(a);
        Desc db = unique(b);
        c.root = node(Function::SelectBetween, {fa->key, greater ? "greater" : "less"}, {std::move(da.node), std::move(db.node)});
        c.question = fill_template("Which one has the <OP> <K>, <E> or <E>?", {{Placeholder::OP, greater ? "larger" : "smaller"},
                                                                               {Placeholder::K, fa->key},
                                                                               {Placeholder::E, da.singular},
                                                                               {Placeholder::E, db.singular}});
        const bool a_wins = compare(va[0], vb, greater ? CompareOp::Gt : CompareOp::Lt);
        c.intended_answer = kb_.entity(a_wins ? a : b).name;
    }

    void verify(Candidate& c) {
        if (g_.attribute_facts_.empty()) incompatible("KB has no attribute facts");
        const auto ref = rng_.pick(g_.attribute_facts_);
        const auto& f = attribute_fact(ref);
        Desc d = unique(ref.first);
        std::string clause;
        ProgramNode value = attribute_query(ref.first, f, std::move(d.node), clause);
        const auto cmp = verify_comparison(f.value, attribute_pool(f.key));
        std::vector<std::string> args{cmp.target.render()};
        if (cmp.typed_op()) args.push_back(std::string(compare_op_token(cmp.op)));
        c.root = node(family_function(Family::Verify, cmp.kind()), args, {std::move(value)});
        std::vector<TemplateSlot> slots{{Placeholder::E, d.singular}, {Placeholder::K, f.key}};
        std::string templ = "For <E>, is " + pronoun(ref.first) + " <K> ";
        if (cmp.typed_op()) {
            templ += "<OP> ";
            slots.push_back({Placeholder::OP, op_surface(cmp.kind(), cmp.op)});
        }
        templ += "<V>";
        slots.push_back({Placeholder::V, cmp.target.render()});
        c.question = fill_template(templ, slots) + clause + "?";
        c.intended_answer = compare(f.value, cmp.target, cmp.op) ? "yes" : "no";
    }

    void qualifier_literal(Candidate& c) {
        if (g_.qualified_attribute_facts_.empty()) incompatible("KB has no qualified attribute facts");
        const auto ref = rng_.pick(g_.qualified_attribute_facts_);
        const auto& f = attribute_fact(ref);
        const auto& q = rng_.pick(f.qualifiers);
        Desc d = unique(ref.first);
        c.root = node(Function::QueryAttrQualifier, {f.key, f.value.render(), q.key}, {std::move(d.node)});
        c.question = fill_template("For <E>, " + pronoun(ref.first) + " <K> is <V>, what is the <QK>?",
                                   {{Placeholder::E, d.singular}, {Placeholder::K, f.key}, {Placeholder::V, f.value.render()}, {Placeholder::QK, q.key}});
        c.intended_answer = q.value.render();
    }

    void qualifier_relational(Candidate& c) {
        if (g_.qualified_relations_.empty()) incompatible("KB has no qualified relation facts");
        const auto& fact = kb_.relation(rng_.pick(g_.qualified_relations_));
        const auto& q = rng_.pick(fact.qualifiers);
        Desc s = unique(fact.subject);
        Desc o = unique(fact.object);
        c.root = node(Function::QueryRelationQualifier, {fact.predicate, q.key}, {std::move(s.node), std::move(o.node)});
        c.question = fill_template("<E> <P> <E>, what is the <QK>?", {{Placeholder::E, s.singular},
                                                                      {Placeholder::P, g_.templates_.predicate(fact.predicate).as_subject},
                                                                      {Placeholder::E, o.singular},
                                                                      {Placeholder::QK, q.key}});
        c.intended_answer = q.value.render();
    }

    const Generator& g_;
    const KnowledgeBase& kb_;
    Rng& rng_;
    const GeneratorConfig& cfg_;
    std::vector<std::string> locating_;
};

// ---------------------------------------------------------------------------------------------
// generator

namespace {

void add_distinct(std::vector<Value>& pool, const Value& v) {
    if (std::find(pool.begin(), pool.end(), v) == pool.end()) pool.push_back(v);
}

} // namespace

Generator::Generator(const KnowledgeBase& kb, GeneratorConfig config, TemplateBank templates)
    : kb_(kb), config_(std::move(config)), templates_(std::move(templates)), interpreter_(kb), evaluator_(kb) {
    config_.validate();
    std::set<std::string> names, preds;
    for (EntityIndex e = 0; e < kb.entities().size(); ++e) {
        const auto& ent = kb.entity(e);
        names.insert(ent.name);
        if (!kb.concept_closure(e).empty()) typed_entities_.push_back(e);
        for (std::uint32_t i = 0; i < ent.attributes.size(); ++i) {
            const auto& f = ent.attributes[i];
            add_distinct(attribute_values_[f.key], f.value);
            attribute_facts_.emplace_back(e, i);
            if (!f.qualifiers.empty()) qualified_attribute_facts_.emplace_back(e, i);
            for (const auto& q : f.qualifiers) add_distinct(qualifier_values_[q.key], q.value);
        }
    }
    for (RelationIndex r = 0; r < kb.relations().size(); ++r) {
        const auto& fact = kb.relation(r);
        preds.insert(fact.predicate);
        if (!fact.qualifiers.empty()) qualified_relations_.push_back(r);
        for (const auto& q : fact.qualifiers) add_distinct(qualifier_values_[q.key], q.value);
    }
    for (auto* pools : {&attribute_values_, &qualifier_values_}) {
        for (auto& [key, pool] : *pools) std::sort(pool.begin(), pool.end(), canonical_less);
    }
    entity_names_.assign(names.begin(), names.end());
    predicates_.assign(preds.begin(), preds.end());
}

std::vector<std::string> Generator::make_choices(const Program& program, const sparql::Query& query, const std::string& answer,
                                                 Rng& rng, bool* padded) const {
    constexpr std::size_t kChoices = 10;
    const auto& root = program.root();
    std::vector<std::string> out;
    if (padded) *padded = false;
    if (is_verify(root.function)) {
        out = {"yes", "no"};
        out.resize(kChoices, "unknown");
        rng.shuffle(out);
        return out;
    }

    std::vector<std::string> distractors;
    try {
        const auto abridged = sparql::abridge(query, rng);
        for (auto& cand : evaluator_.answer_candidates(abridged.query)) {
            if (cand != answer) distractors.push_back(std::move(cand));
        }
    } catch (const Error&) {
        // no droppable condition: fall through to padding
    }
    rng.shuffle(distractors);
    if (distractors.size() > kChoices - 1) distractors.resize(kChoices - 1);

    if (distractors.size() < kChoices - 1) {
        if (padded) *padded = true;
        std::set<std::string> taken(distractors.begin(), distractors.end());
        taken.insert(answer);
        auto take_from = [&](std::vector<std::string> pool) {
            rng.shuffle(pool);
            for (auto& s : pool) {
                if (distractors.size() >= kChoices - 1) break;
                if (taken.insert(s).second) distractors.push_back(std::move(s));
            }
        };
        auto rendered = [](const std::vector<Value>* values) {
            std::vector<std::string> out;
            if (values) {
                for (const auto& v : *values) out.push_back(v.render());
            }
            return out;
        };
        auto lookup = [](const std::map<std::string, std::vector<Value>>& m, const std::string& key) -> const std::vector<Value>* {
            auto it = m.find(key);
            return it == m.end() ? nullptr : &it->second;
        };
        const auto& a = root.textual_inputs;
        switch (root.function) {
            case Function::QueryName:
            case Function::SelectAmong:
            case Function::SelectBetween:
                take_from(entity_names_);
                break;
            case Function::QueryRelation:
                take_from(predicates_);
                break;
            case Function::QueryAttr:
            case Function::QueryAttrUnderCondition:
                take_from(rendered(lookup(attribute_values_, a[0])));
                break;
            case Function::QueryAttrQualifier:
                take_from(rendered(lookup(qualifier_values_, a[2])));
                break;
            case Function::QueryRelationQualifier:
                take_from(rendered(lookup(qualifier_values_, a[1])));
                break;
            case Function::Count: {
                const long long n = std::stoll(answer);
                for (long long d = 1; distractors.size() < kChoices - 1 && d < 1000; ++d) {
                    for (long long k : {n + d, n - d}) {
                        if (k >= 0 && distractors.size() < kChoices - 1 && taken.insert(std::to_string(k)).second) {
                            distractors.push_back(std::to_string(k));
                        }
                    }
                }
                break;
            }
            default:
                break;
        }
        distractors.resize(kChoices - 1, "unknown");
    }
    out = std::move(distractors);
    out.push_back(answer);
    rng.shuffle(out);
    return out;
}

std::optional<Instance> Generator::finalize(const Candidate& c, Rng& rng, std::string* reason, GenerationStats* stats) const {
    auto discard = [&](std::string why) -> std::optional<Instance> {
        if (reason) *reason = std::move(why);
        return std::nullopt;
    };
    std::optional<Program> program;
    ExecutionResult result;
    try {
        program.emplace(Program::from_tree(c.root));
        result = interpreter_.execute(*program);
    } catch (const Error& e) {
        return discard(std::string(error_code_name(e.code())));
    }
    if (c.intended_answer && *c.intended_answer != result.rendered) {
        if (stats) ++stats->intended_mismatches;
        return discard("IntendedMismatch");
    }
    Instance inst;
    sparql::Query query;
    try {
        inst.sparql = sparql::render(sparql::compile(*program));
        query = sparql::parse_sparql(inst.sparql);
        const auto qa = evaluator_.answer(query);
        if (!qa.unique || qa.answer != result.rendered) {
            if (stats) ++stats->channel_mismatches;
            return discard("ChannelMismatch");
        }
    } catch (const Error& e) {
        if (stats) ++stats->channel_mismatches;
        return discard("ChannelMismatch");
    }
    inst.program = std::move(*program);
    inst.answer = result.rendered;
    inst.question = paraphrase_ ? paraphrase_(c.question) : c.question;
    bool padded = false;
    inst.choices = make_choices(inst.program, query, inst.answer, rng, &padded);
    inst.meta = program_meta(inst.program);
    inst.meta.question_type = c.question_type;
    inst.meta.padded = padded;
    inst.meta.locating = c.locating;
    return inst;
}

Instance Generator::generate_one(std::uint64_t index, GenerationStats* stats) const {
    Rng rng = Rng::derive(config_.seed, index);
    std::vector<std::string_view> names(kAskingStrategies.begin(), kAskingStrategies.end());
    std::vector<double> weights;
    for (auto n : names) weights.push_back(weight_of(config_.strategy_weights, n));
    GenerationStats local;
    for (int attempt = 0; attempt < config_.max_attempts_per_instance; ++attempt) {
        const auto strategy = names[rng.weighted(std::span<const double>(weights))];
        auto& tally = local.per_strategy[std::string(strategy)];
        ++tally.attempts;
        std::string reason;
        std::optional<Instance> inst;
        try {
            Sampler sampler(*this, rng);
            inst = finalize(sampler.ask(strategy), rng, &reason, &local);
        } catch (const Error& e) {
            reason = std::string(error_code_name(e.code()));
        }
        if (inst) {
            ++tally.emitted;
            if (stats) stats->merge(local);
            return std::move(*inst);
        }
        ++tally.failures[reason];
    }
    if (stats) stats->merge(local);
    std::string msg = "instance " + std::to_string(index) + ": no instance after " + std::to_string(config_.max_attempts_per_instance) +
                      " attempts;";
    for (const auto& [name, t] : local.per_strategy) {
        msg += " " + name + " " + std::to_string(t.attempts) + " attempts (";
        bool first = true;
        for (const auto& [why, n] : t.failures) {
            msg += (first ? "" : ", ") + why + " " + std::to_string(n);
            first = false;
        }
        msg += ");";
    }
    throw Error(ErrorCode::ExhaustedAttempts, msg);
}

std::vector<Instance> Generator::generate(GenerationStats* stats) const {
    const std::size_t n = config_.count;
    std::vector<std::optional<Instance>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::vector<GenerationStats> partial(std::max(1u, config_.threads));
    std::atomic<std::size_t> next{0};
    auto worker = [&](unsigned w) {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i] = generate_one(i, &partial[w]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(config_.threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }
    if (stats) {
        for (const auto& p : partial) stats->merge(p);
    }
    std::vector<Instance> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

void Generator::write_jsonl(std::ostream& out, GenerationStats* stats) const {
    for (const auto& inst : generate(stats)) out << instance_to_line(inst) << '\n';
}

// ---------------------------------------------------------------------------------------------
// statistics

namespace {

std::size_t token_count(const std::string& s) {
    std::istringstream in(s);
    std::size_t n = 0;
    for (std::string w; in >> w;) ++n;
    return n;
}

} // namespace

Statistics report_statistics(const std::vector<Instance>& instances, std::size_t top_k) {
    if (instances.empty()) throw Error(ErrorCode::MalformedInput, "statistics of an empty instance collection");
    Statistics s;
    s.count = instances.size();
    std::map<std::string, std::size_t> answers;
    double q = 0, p = 0, sp = 0;
    for (const auto& inst : instances) {
        ++s.question_types[inst.meta.question_type.empty() ? "unknown" : inst.meta.question_type];
        ++s.hop_counts[hop_count(inst.program)];
        q += static_cast<double>(token_count(inst.question));
        p += static_cast<double>(inst.program.size());
        sp += static_cast<double>(token_count(inst.sparql));
        if (inst.meta.padded) ++s.padded;
        ++answers[inst.answer];
    }
    const auto n = static_cast<double>(s.count);
    s.avg_question_tokens = q / n;
    s.avg_program_calls = p / n;
    s.avg_sparql_tokens = sp / n;
    s.top_answers.assign(answers.begin(), answers.end());
    std::stable_sort(s.top_answers.begin(), s.top_answers.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    if (s.top_answers.size() > top_k) s.top_answers.resize(top_k);
    return s;
}

json Statistics::to_json() const {
    json hops = json::object();
    for (const auto& [h, n] : hop_counts) hops[std::to_string(h)] = n;
    json top = json::array();
    for (const auto& [a, n] : top_answers) top.push_back({{"answer", a}, {"count", n}});
    return {{"count", count},
            {"question_types", question_types},
            {"hop_counts", hops},
            {"avg_question_tokens", avg_question_tokens},
            {"avg_program_calls", avg_program_calls},
            {"avg_sparql_tokens", avg_sparql_tokens},
            {"padded", padded},
            {"top_answers", top}};
}

std::string Statistics::to_text() const {
    std::ostringstream out;
    auto pct = [&](std::size_t k) { return 100.0 * static_cast<double>(k) / static_cast<double>(count); };
    out << "instances            " << count << '\n';
    out << "avg question tokens  " << avg_question_tokens << '\n';
    out << "avg program calls    " << avg_program_calls << '\n';
    out << "avg sparql tokens    " << avg_sparql_tokens << '\n';
    out << "padded choices       " << padded << '\n';
    out << "question types\n";
    for (const auto& [t, k] : question_types) {
        char line[96];
        std::snprintf(line, sizeof line, "  %-22s %6zu  %5.1f%%\n", t.c_str(), k, pct(k));
        out << line;
    }
    out << "hop counts\n";
    for (const auto& [h, k] : hop_counts) {
        char line[96];
        std::snprintf(line, sizeof line, "  %-22d %6zu  %5.1f%%\n", h, k, pct(k));
        out << line;
    }
    out << "top answers\n";
    for (const auto& [a, k] : top_answers) out << "  " << a << "  " << k << '\n';
    return out.str();
}

} // namespace kopl
