#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "kopl/kb.hpp"
#include "kopl/program.hpp"
#include "kopl/rng.hpp"
#include "kopl/triples.hpp"
#include "kopl/value.hpp"

namespace kopl::sparql {

/// Position in a triple pattern or a FILTER comparison: ?var, constant term, or an untyped literal
/// ("..."^^pred:any) coerced at evaluation time to the type of the value it meets.
struct Operand {
    enum class Kind { Var, Const, Untyped };

    Kind kind = Kind::Var;
    std::string text; // variable name without '?', or the untyped lexical form
    Term term;

    static Operand var(std::string name) { return {Kind::Var, std::move(name), {}}; }
    static Operand constant(Term t) { return {Kind::Const, {}, std::move(t)}; }
    static Operand iri(std::string s) { return constant(Term::iri(std::move(s))); }
    static Operand lit(Value v) { return constant(Term::lit(std::move(v))); }
    static Operand untyped(std::string s) { return {Kind::Untyped, std::move(s), {}}; }

    bool is_var() const { return kind == Kind::Var; }

    bool operator==(const Operand&) const = default;
};

struct TriplePattern {
    Operand s, p, o;

    bool operator==(const TriplePattern&) const = default;
};

/// FILTER expression: a comparison, or a disjunction/conjunction of sub-expressions.
struct Expr {
    enum class Kind { Compare, Or, And };

    Kind kind = Kind::Compare;
    CompareOp op = CompareOp::Eq;
    Operand lhs, rhs;
    std::vector<Expr> args;

    static Expr cmp(Operand l, CompareOp op, Operand r) { return {Kind::Compare, op, std::move(l), std::move(r), {}}; }

    bool operator==(const Expr&) const = default;
};

struct Filter {
    Expr expr;

    bool operator==(const Filter&) const = default;
};

struct Group;

struct Union {
    std::vector<Group> branches;

    bool operator==(const Union& other) const;
};

using Element = std::variant<TriplePattern, Filter, Union>;

struct Group {
    std::vector<Element> elements;

    bool operator==(const Group&) const = default;
};

inline bool Union::operator==(const Union& other) const { return branches == other.branches; }

enum class Form { Select, SelectCount, Ask };

struct OrderBy {
    std::string var;
    bool descending = false;

    bool operator==(const OrderBy&) const = default;
};

struct Query {
    Form form = Form::Select;
    bool distinct = true;
    std::vector<std::string> projection; // SelectCount: the single counted variable
    std::string count_alias = "count";
    Group where;
    std::optional<OrderBy> order_by;
    std::optional<std::int64_t> limit;

    bool operator==(const Query&) const = default;
};

/// Query with one top-level condition removed.
struct AbridgedQuery {
    Query base;
    Query query;
    std::size_t dropped_index = 0;
};

/// Syntax-directed translation of a typechecked program. KB-free. Throws Error(Unsupported).
Query compile(const Program& program);

/// Canonical text: one pattern per line, two-space indent per nesting level.
std::string render(const Query& q);
/// Throws Error(SubsetViolation) naming the byte offset for anything outside the subset.
Query parse_sparql(std::string_view text);

/// Every variable mentioned anywhere in the group (patterns and filters), in first-use order.
std::vector<std::string> variables(const Group& g);

/// Top-level condition indices that abridge may remove.
std::vector<std::size_t> droppable_conditions(const Query& q);
/// Drop one droppable condition chosen uniformly; ORDER BY/LIMIT are removed too so the result
/// enumerates every candidate. Throws Error(NothingDroppable).
AbridgedQuery abridge(const Query& q, Rng& rng);

/// Interned copy of triple_view(kb) with subject/predicate/object indexes.
class TripleStore {
public:
    using Id = std::uint32_t;
    static constexpr Id kNone = UINT32_MAX;

    explicit TripleStore(const KnowledgeBase& kb);

    const KnowledgeBase& kb() const { return kb_; }
    std::size_t size() const { return triples_.size(); }

    Id lookup(const Term& t) const;
    const Term& term(Id id) const { return terms_[id]; }

    /// Literal value, or the value carried by a value node (pred:value plus pred:unit).
    const std::optional<Value>& value_of(Id id) const { return values_[id]; }
    /// pred:name of an IRI node, if any.
    const std::string* name_of(Id id) const;
    /// Answer rendering of a bound term: entity name, value, or IRI text.
    std::string render(Id id) const;

    struct Triple {
        Id s, p, o;
    };
    const Triple& triple(std::uint32_t i) const { return triples_[i]; }

    /// Triple indices matching the given ids (kNone = wildcard). Returns the smallest index list
    /// that covers the pattern; callers still check every position.
    const std::vector<std::uint32_t>& candidates(Id s, Id p, Id o) const;

private:
    Id intern(const Term& t);
    static std::string key(const Term& t);

    const KnowledgeBase& kb_;
    std::vector<Term> terms_;
    std::unordered_map<std::string, Id> ids_;
    std::vector<std::optional<Value>> values_;
    std::unordered_map<Id, std::string> names_;
    std::vector<Triple> triples_;
    std::vector<std::uint32_t> all_;
    std::unordered_map<Id, std::vector<std::uint32_t>> by_s_, by_p_, by_o_;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_sp_, by_po_;
    std::vector<std::uint32_t> empty_;
};

/// Solutions restricted to the query's projection (Select), the count (SelectCount) or a boolean (Ask).
struct ResultSet {
    Form form = Form::Select;
    std::vector<std::string> columns;
    std::vector<std::vector<TripleStore::Id>> rows;
    bool boolean = false;
    std::int64_t count = 0;
};

/// Outcome of the answer layer: a unique rendered answer, or the reason there is none.
struct QueryAnswer {
    bool unique = false;
    std::string answer;
    std::string reason;
};

/// In-process evaluator for the subset: backtracking join over the store with FILTERs applied as
/// soon as their variables are bound.
class Evaluator {
public:
    explicit Evaluator(const KnowledgeBase& kb);
    explicit Evaluator(std::shared_ptr<const TripleStore> store);

    /// Throws Error(UnboundVariable) when a projected, ordered or filtered variable never occurs in
    /// a triple pattern.
    ResultSet evaluate(const Query& q) const;

    /// Answer semantics shared with the interpreter: every projected variable must take exactly one
    /// distinct value (entities by identity, value nodes by rendered value); COUNT renders the
    /// number of distinct bindings; ORDER BY ... LIMIT 1 queries are decided over all solutions with
    /// the interpreter's tie and unit-plurality rules; ASK renders yes/no.
    QueryAnswer answer(const Query& q) const;

    /// Distinct renderings of the answer variable over all solutions (ORDER BY/LIMIT ignored); for
    /// COUNT the single count. Used to harvest distractor choices.
    std::vector<std::string> answer_candidates(const Query& q) const;

    std::vector<std::vector<std::string>> render_rows(const ResultSet& rs) const;

    const TripleStore& store() const { return *store_; }

private:
    struct Solutions {
        std::vector<std::string> vars;
        std::vector<std::vector<TripleStore::Id>> rows;
        std::size_t slot(const std::string& v) const;
    };
    Solutions solve(const Query& q) const;

    std::shared_ptr<const TripleStore> store_;
};

} // namespace kopl::sparql
