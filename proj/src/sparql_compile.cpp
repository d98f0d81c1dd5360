#include <map>
#include <optional>

#include "kopl/errors.hpp"
#include "kopl/sparql.hpp"

namespace kopl::sparql {

namespace {

Operand var(const std::string& name) { return Operand::var(name); }
Operand iri(std::string_view s) { return Operand::iri(std::string(s)); }
Operand text(const std::string& s) { return Operand::lit(Value::text(s)); }

class Compiler {
public:
    Query root(const ProgramNode& n) {
        Query q;
        const auto& a = n.textual_inputs;
        switch (n.function) {
            case Function::QueryName:
                entities(child(n, 0), "e", q.where);
                q.projection = {"e"};
                return q;
            case Function::Count:
                entities(child(n, 0), "e", q.where);
                q.form = Form::SelectCount;
                q.projection = {"e"};
                return q;
            case Function::QueryAttr:
            case Function::QueryAttrUnderCondition:
            case Function::QueryAttrQualifier:
            case Function::QueryRelationQualifier:
            case Function::QueryRelation: {
                auto node = value_node(n, q.where);
                q.projection = node.projection;
                return q;
            }
            case Function::SelectAmong:
            case Function::SelectBetween: {
                const bool between = n.function == Function::SelectBetween;
                if (between) {
                    Union u;
                    u.branches.resize(2);
                    entities(child(n, 0), "e", u.branches[0]);
                    entities(child(n, 1), "e", u.branches[1]);
                    q.where.elements.push_back(std::move(u));
                } else {
                    entities(child(n, 0), "e", q.where);
                }
                const auto f = fresh("f");
                const auto v = fresh("v");
                add(q.where, var("e"), iri(a[0]), var(f));
                add(q.where, var(f), iri(vocab::value), var(v));
                q.projection = {"e"};
                q.order_by = OrderBy{v, a[1] == "greater" || a[1] == "largest"};
                q.limit = 1;
                return q;
            }
            case Function::VerifyStr:
            case Function::VerifyNum:
            case Function::VerifyYear:
            case Function::VerifyDate: {
                q.form = Form::Ask;
                auto node = value_node(child(n, 0), q.where);
                const auto kind = *signature(n.function).value_kind;
                const auto op = n.function == Function::VerifyStr ? CompareOp::Eq : parse_op(a[1]);
                if (kind == ValueKind::Quantity) {
                    quantity_condition(q.where, node.var, a[0], op, node.value_var);
                } else {
                    filter(q.where, Expr::cmp(var(node.var), op, typed_literal(kind, a[0])));
                }
                return q;
            }
            default:
                throw Error(ErrorCode::Unsupported, std::string(function_name(n.function)) + " cannot be the root of a query");
        }
    }

private:
    struct ValueNode {
        std::string var; // value node or qualifier value
        std::vector<std::string> projection;
        std::optional<std::string> value_var; // ?v of an existing `?node pred:value ?v`
    };

    static const ProgramNode& child(const ProgramNode& n, std::size_t i) {
        if (i >= n.children.size()) throw Error(ErrorCode::Unsupported, "malformed program tree");
        return n.children[i];
    }

    std::string fresh(const std::string& prefix) { return prefix + std::to_string(++counters_[prefix]); }

    static void add(Group& g, Operand s, Operand p, Operand o) {
        g.elements.push_back(TriplePattern{std::move(s), std::move(p), std::move(o)});
    }
    static void filter(Group& g, Expr e) { g.elements.push_back(Filter{std::move(e)}); }

    static CompareOp parse_op(const std::string& token) {
        auto op = parse_compare_op(token);
        if (!op) throw Error(ErrorCode::Unsupported, "comparison \"" + token + "\"");
        return *op;
    }

    static Value typed_value(ValueKind kind, const std::string& s) {
        auto v = parse_value_as(kind, s);
        if (!v) throw Error(ErrorCode::Unsupported, "\"" + s + "\" is not a " + std::string(value_kind_name(kind)));
        return *v;
    }
    static Operand typed_literal(ValueKind kind, const std::string& s) { return Operand::lit(typed_value(kind, s)); }

    /// ?node pred:value ?v . ?node pred:unit "u" . FILTER(?v op m), with != also true on a unit mismatch.
    void quantity_condition(Group& g, const std::string& node, const std::string& arg, CompareOp op,
                            const std::optional<std::string>& value_var = std::nullopt) {
        const auto q = typed_value(ValueKind::Quantity, arg).as_quantity();
        std::string v;
        if (value_var) {
            v = *value_var;
        } else {
            v = fresh("v");
            add(g, var(node), iri(vocab::value), var(v));
        }
        const auto magnitude = Operand::lit(Value::quantity(q.magnitude));
        if (op == CompareOp::Ne) {
            const auto u = fresh("u");
            add(g, var(node), iri(vocab::unit), var(u));
            Expr e;
            e.kind = Expr::Kind::Or;
            e.args = {Expr::cmp(var(v), CompareOp::Ne, magnitude), Expr::cmp(var(u), CompareOp::Ne, text(q.unit))};
            filter(g, std::move(e));
        } else {
            add(g, var(node), iri(vocab::unit), text(q.unit));
            filter(g, Expr::cmp(var(v), op, magnitude));
        }
    }

    /// Restrict ?x to the entity set computed by n. Returns the evidence-fact variable when n yields facts.
    std::optional<std::string> entities(const ProgramNode& n, const std::string& x, Group& g) {
        const auto& a = n.textual_inputs;
        switch (n.function) {
            case Function::FindAll:
                add(g, var(x), iri(vocab::kind), text("entity"));
                return std::nullopt;
            case Function::Find:
                add(g, var(x), iri(vocab::name), text(a[0]));
                add(g, var(x), iri(vocab::kind), text("entity"));
                return std::nullopt;
            case Function::FilterConcept: {
                entities(child(n, 0), x, g);
                const auto c = fresh("c");
                add(g, var(x), iri(vocab::instance_of), var(c));
                add(g, var(c), iri(vocab::name), text(a[0]));
                return std::nullopt;
            }
            case Function::FilterStr:
            case Function::FilterNum:
            case Function::FilterYear:
            case Function::FilterDate: {
                entities(child(n, 0), x, g);
                const auto f = fresh("f");
                add(g, var(x), iri(a[0]), var(f));
                const auto kind = *signature(n.function).value_kind;
                const auto op = n.function == Function::FilterStr ? CompareOp::Eq : parse_op(a[2]);
                if (kind == ValueKind::Quantity) {
                    quantity_condition(g, f, a[1], op);
                } else {
                    const auto v = fresh("v");
                    add(g, var(f), iri(vocab::value), var(v));
                    filter(g, Expr::cmp(var(v), op, typed_literal(kind, a[1])));
                }
                return f;
            }
            case Function::QFilterStr:
            case Function::QFilterNum:
            case Function::QFilterYear:
            case Function::QFilterDate: {
                auto f = entities(child(n, 0), x, g);
                if (!f) throw Error(ErrorCode::Unsupported, "qualifier filter over an input without facts");
                const auto q = fresh("q");
                add(g, var(*f), iri(a[0]), var(q));
                const auto kind = *signature(n.function).value_kind;
                const auto op = n.function == Function::QFilterStr ? CompareOp::Eq : parse_op(a[2]);
                if (kind == ValueKind::Quantity) {
                    quantity_condition(g, q, a[1], op);
                } else {
                    filter(g, Expr::cmp(var(q), op, typed_literal(kind, a[1])));
                }
                return f;
            }
            case Function::Relate: {
                const auto y = fresh("e");
                entities(child(n, 0), y, g);
                const auto f = fresh("f");
                const bool forward = a[1] == "forward";
                if (!forward && a[1] != "backward") throw Error(ErrorCode::Unsupported, "direction \"" + a[1] + "\"");
                add(g, var(f), iri(vocab::fact_h), var(forward ? y : x));
                add(g, var(f), iri(vocab::fact_r), iri(a[0]));
                add(g, var(f), iri(vocab::fact_t), var(forward ? x : y));
                return f;
            }
            case Function::And:
                entities(child(n, 0), x, g);
                entities(child(n, 1), x, g);
                return std::nullopt;
            case Function::Or: {
                Union u;
                u.branches.resize(2);
                entities(child(n, 0), x, u.branches[0]);
                entities(child(n, 1), x, u.branches[1]);
                g.elements.push_back(std::move(u));
                return std::nullopt;
            }
            default:
                throw Error(ErrorCode::Unsupported, std::string(function_name(n.function)) + " does not produce entities");
        }
    }

    /// Patterns binding the value produced by a VALUE/PREDICATE node.
    ValueNode value_node(const ProgramNode& n, Group& g) {
        const auto& a = n.textual_inputs;
        switch (n.function) {
            case Function::QueryAttr:
            case Function::QueryAttrUnderCondition: {
                entities(child(n, 0), "e", g);
                const auto f = fresh("f");
                add(g, var("e"), iri(a[0]), var(f));
                const auto v = fresh("v");
                add(g, var(f), iri(vocab::value), var(v));
                if (n.function == Function::QueryAttrUnderCondition) {
                    const auto q = fresh("q");
                    add(g, var(f), iri(a[1]), var(q));
                    filter(g, Expr::cmp(var(q), CompareOp::Eq, Operand::untyped(a[2])));
                }
                return {f, {"e", f}, v};
            }
            case Function::QueryAttrQualifier: {
                entities(child(n, 0), "e", g);
                const auto f = fresh("f");
                add(g, var("e"), iri(a[0]), var(f));
                filter(g, Expr::cmp(var(f), CompareOp::Eq, Operand::untyped(a[1])));
                const auto q = fresh("q");
                add(g, var(f), iri(a[2]), var(q));
                return {q, {"e", q}, std::nullopt};
            }
            case Function::QueryRelationQualifier: {
                const auto e1 = fresh("e");
                const auto e2 = fresh("e");
                entities(child(n, 0), e1, g);
                entities(child(n, 1), e2, g);
                const auto f = fresh("f");
                add(g, var(f), iri(vocab::fact_h), var(e1));
                add(g, var(f), iri(vocab::fact_r), iri(a[0]));
                add(g, var(f), iri(vocab::fact_t), var(e2));
                const auto q = fresh("q");
                add(g, var(f), iri(a[1]), var(q));
                return {q, {e1, e2, q}, std::nullopt};
            }
            case Function::QueryRelation: {
                const auto e1 = fresh("e");
                const auto e2 = fresh("e");
                entities(child(n, 0), e1, g);
                entities(child(n, 1), e2, g);
                const auto f = fresh("f");
                add(g, var(f), iri(vocab::fact_h), var(e1));
                add(g, var(f), iri(vocab::fact_t), var(e2));
                add(g, var(f), iri(vocab::fact_r), var("p"));
                return {"p", {e1, e2, "p"}, std::nullopt};
            }
            default:
                throw Error(ErrorCode::Unsupported, std::string(function_name(n.function)) + " does not produce a value");
        }
    }

    std::map<std::string, int> counters_;
};

} // namespace

Query compile(const Program& program) {
    Compiler c;
    return c.root(program.to_tree());
}

} // namespace kopl::sparql
