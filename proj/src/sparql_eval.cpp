#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_set>

#include "kopl/errors.hpp"
#include "kopl/interpreter.hpp"
#include "kopl/sparql.hpp"

namespace kopl::sparql {

using Id = TripleStore::Id;

namespace {

std::uint64_t pair_key(Id a, Id b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

} // namespace

std::string TripleStore::key(const Term& t) { return render_term(t); }

TripleStore::Id TripleStore::intern(const Term& t) {
    auto k = key(t);
    auto it = ids_.find(k);
    if (it != ids_.end()) return it->second;
    const Id id = static_cast<Id>(terms_.size());
    terms_.push_back(t);
    values_.push_back(t.is_literal() ? std::optional<Value>(t.literal) : std::nullopt);
    ids_.emplace(std::move(k), id);
    return id;
}

TripleStore::TripleStore(const KnowledgeBase& kb) : kb_(kb) {
    const auto view = triple_view(kb);
    std::set<std::tuple<Id, Id, Id>> seen;
    for (const auto& t : view) {
        Triple tr{intern(t.subject), intern(t.predicate), intern(t.object)};
        if (!seen.emplace(tr.s, tr.p, tr.o).second) continue;
        triples_.push_back(tr);
    }
    const Id value_p = lookup(Term::iri(std::string(vocab::value)));
    const Id unit_p = lookup(Term::iri(std::string(vocab::unit)));
    const Id name_p = lookup(Term::iri(std::string(vocab::name)));
    std::unordered_map<Id, Id> node_value, node_unit;
    for (std::uint32_t i = 0; i < triples_.size(); ++i) {
        const auto& t = triples_[i];
        all_.push_back(i);
        by_s_[t.s].push_back(i);
        by_p_[t.p].push_back(i);
        by_o_[t.o].push_back(i);
        by_sp_[pair_key(t.s, t.p)].push_back(i);
        by_po_[pair_key(t.p, t.o)].push_back(i);
        if (t.p == value_p) node_value[t.s] = t.o;
        if (t.p == unit_p) node_unit[t.s] = t.o;
        if (t.p == name_p && terms_[t.o].is_literal() && terms_[t.o].literal.is_text()) {
            names_.emplace(t.s, terms_[t.o].literal.as_text());
        }
    }
    for (const auto& [node, lit] : node_value) {
        const auto& v = values_[lit];
        if (!v) continue;
        auto u = node_unit.find(node);
        if (v->is_quantity() && u != node_unit.end() && values_[u->second] && values_[u->second]->is_text()) {
            values_[node] = Value::quantity(v->as_quantity().magnitude, values_[u->second]->as_text());
        } else {
            values_[node] = v;
        }
    }
}

TripleStore::Id TripleStore::lookup(const Term& t) const {
    auto it = ids_.find(key(t));
    return it == ids_.end() ? kNone : it->second;
}

const std::string* TripleStore::name_of(Id id) const {
    auto it = names_.find(id);
    return it == names_.end() ? nullptr : &it->second;
}

std::string TripleStore::render(Id id) const {
    if (id == kNone) return {};
    const auto& t = terms_[id];
    if (t.is_iri()) {
        if (const auto* n = name_of(id)) return *n;
        return t.text;
    }
    if (values_[id]) return values_[id]->render();
    return render_term(t);
}

const std::vector<std::uint32_t>& TripleStore::candidates(Id s, Id p, Id o) const {
    auto pick = [&](const auto& index, auto k) -> const std::vector<std::uint32_t>& {
        auto it = index.find(k);
        return it == index.end() ? empty_ : it->second;
    };
    if (s != kNone && p != kNone) return pick(by_sp_, pair_key(s, p));
    if (p != kNone && o != kNone) return pick(by_po_, pair_key(p, o));
    if (s != kNone) return pick(by_s_, s);
    if (o != kNone) return pick(by_o_, o);
    if (p != kNone) return pick(by_p_, p);
    return all_;
}

namespace {

constexpr Id kUnbound = TripleStore::kNone;
// constant that does not occur in the store: the pattern can never match
constexpr Id kMissing = TripleStore::kNone - 1;

struct Slot {
    bool is_var = false;
    std::uint32_t index = 0; // variable slot or term id
};

struct POperand {
    enum class Kind { Var, Value, Term, Untyped };
    Kind kind = Kind::Var;
    std::uint32_t slot = 0;
    Value value;
    Id term = kMissing;
    std::string text;
};

struct PExpr {
    Expr::Kind kind = Expr::Kind::Compare;
    CompareOp op = CompareOp::Eq;
    POperand lhs, rhs;
    std::vector<PExpr> args;
};

struct PFilter {
    PExpr expr;
    std::vector<std::uint32_t> slots;
};

struct PGroup;

struct PUnion {
    std::vector<PGroup> branches;
    std::vector<std::uint32_t> slots;
};

struct PGroup {
    std::vector<std::array<Slot, 3>> triples;
    std::vector<PFilter> filters;
    std::vector<PUnion> unions;
};

class Prepared {
public:
    Prepared(const TripleStore& store, const Query& q) : store_(store) {
        collect_unit_vars(q.where);
        root = group(q.where);
    }

    std::uint32_t slot(const std::string& v) {
        auto it = slots_.find(v);
        if (it != slots_.end()) return it->second;
        const auto s = static_cast<std::uint32_t>(names.size());
        names.push_back(v);
        slots_.emplace(v, s);
        return s;
    }

    std::vector<std::string> names;
    PGroup root;

private:
    void collect_unit_vars(const Group& g) {
        for (const auto& el : g.elements) {
            if (const auto* t = std::get_if<TriplePattern>(&el)) {
                if (!t->p.is_var() && t->p.term.is_iri() && t->p.term.text == vocab::unit && t->o.is_var()) {
                    unit_vars_.insert(t->o.text);
                }
            } else if (const auto* u = std::get_if<Union>(&el)) {
                for (const auto& b : u->branches) collect_unit_vars(b);
            }
        }
    }

    Value canonical(const Value& v, bool unit_position) const {
        if (unit_position && v.is_text()) return Value::text(store_.kb().canonical_unit(v.as_text()));
        if (v.is_quantity()) return Value::quantity(v.as_quantity().magnitude, store_.kb().canonical_unit(v.as_quantity().unit));
        return v;
    }

    Slot position(const Operand& o, bool unit_position) {
        if (o.is_var()) return {true, slot(o.text)};
        if (o.kind == Operand::Kind::Untyped) return {false, kMissing};
        Term t = o.term;
        if (t.is_literal()) t.literal = canonical(t.literal, unit_position);
        const Id id = store_.lookup(t);
        return {false, id == TripleStore::kNone ? kMissing : id};
    }

    POperand operand(const Operand& o, bool unit_position) {
        POperand p;
        switch (o.kind) {
            case Operand::Kind::Var:
                p.kind = POperand::Kind::Var;
                p.slot = slot(o.text);
                break;
            case Operand::Kind::Untyped:
                p.kind = POperand::Kind::Untyped;
                p.text = o.text;
                break;
            case Operand::Kind::Const:
                if (o.term.is_literal()) {
                    p.kind = POperand::Kind::Value;
                    p.value = canonical(o.term.literal, unit_position);
                } else {
                    p.kind = POperand::Kind::Term;
                    p.term = store_.lookup(o.term);
                    if (p.term == TripleStore::kNone) p.term = kMissing;
                }
                break;
        }
        return p;
    }

    bool is_unit_var(const Operand& o) const { return o.is_var() && unit_vars_.count(o.text) > 0; }

    PExpr expr(const Expr& e, std::vector<std::uint32_t>& slots) {
        PExpr p;
        p.kind = e.kind;
        p.op = e.op;
        if (e.kind == Expr::Kind::Compare) {
            p.lhs = operand(e.lhs, is_unit_var(e.rhs));
            p.rhs = operand(e.rhs, is_unit_var(e.lhs));
            if (p.lhs.kind == POperand::Kind::Var) slots.push_back(p.lhs.slot);
            if (p.rhs.kind == POperand::Kind::Var) slots.push_back(p.rhs.slot);
        } else {
            for (const auto& a : e.args) p.args.push_back(expr(a, slots));
        }
        return p;
    }

    PGroup group(const Group& g) {
        PGroup out;
        for (const auto& el : g.elements) {
            if (const auto* t = std::get_if<TriplePattern>(&el)) {
                const bool unit = !t->p.is_var() && t->p.term.is_iri() && t->p.term.text == vocab::unit;
                out.triples.push_back({position(t->s, false), position(t->p, false), position(t->o, unit)});
            } else if (const auto* f = std::get_if<Filter>(&el)) {
                PFilter pf;
                pf.expr = expr(f->expr, pf.slots);
                std::sort(pf.slots.begin(), pf.slots.end());
                pf.slots.erase(std::unique(pf.slots.begin(), pf.slots.end()), pf.slots.end());
                out.filters.push_back(std::move(pf));
            } else {
                const auto& u = std::get<Union>(el);
                PUnion pu;
                for (const auto& b : u.branches) pu.branches.push_back(group(b));
                for (const auto& v : variables(Group{{el}})) pu.slots.push_back(slot(v));
                out.unions.push_back(std::move(pu));
            }
        }
        return out;
    }

    const TripleStore& store_;
    std::map<std::string, std::uint32_t> slots_;
    std::set<std::string> unit_vars_;
};

class Solver {
public:
    Solver(const TripleStore& store, std::size_t nslots, std::function<void(const std::vector<Id>&)> emit)
        : store_(store), binding_(nslots, kUnbound), emit_(std::move(emit)) {}

    void run(const PGroup& g) {
        solve(g, [this] { emit_(binding_); });
    }

private:
    struct Progress {
        std::vector<char> triple_done, union_done, filter_done;
    };

    using Cont = std::function<void()>;

    void solve(const PGroup& g, const Cont& k) {
        Progress pr{std::vector<char>(g.triples.size(), 0), std::vector<char>(g.unions.size(), 0),
                    std::vector<char>(g.filters.size(), 0)};
        step(g, pr, k);
    }

    Id resolve(const Slot& s) const { return s.is_var ? binding_[s.index] : s.index; }

    std::optional<Value> value_of(const POperand& o, Id& term_out) const {
        term_out = kMissing;
        switch (o.kind) {
            case POperand::Kind::Var: {
                const Id id = binding_[o.slot];
                term_out = id;
                if (id == kUnbound) return std::nullopt;
                return store_.value_of(id);
            }
            case POperand::Kind::Value: return o.value;
            case POperand::Kind::Term: term_out = o.term; return std::nullopt;
            case POperand::Kind::Untyped: return std::nullopt;
        }
        return std::nullopt;
    }

    bool eval(const PExpr& e) const {
        if (e.kind == Expr::Kind::Or) {
            for (const auto& a : e.args) {
                if (eval(a)) return true;
            }
            return false;
        }
        if (e.kind == Expr::Kind::And) {
            for (const auto& a : e.args) {
                if (!eval(a)) return false;
            }
            return true;
        }
        Id lt, rt;
        auto lv = value_of(e.lhs, lt);
        auto rv = value_of(e.rhs, rt);
        if (e.lhs.kind == POperand::Kind::Untyped && rv) lv = coerce_untyped(store_.kb(), e.lhs.text, *rv);
        if (e.rhs.kind == POperand::Kind::Untyped && lv) rv = coerce_untyped(store_.kb(), e.rhs.text, *lv);
        if (lv && rv) return compare(*lv, *rv, e.op);
        // term identity for IRIs and value-less nodes
        if (!lv && !rv && lt != kMissing && rt != kMissing && lt != kUnbound && rt != kUnbound) {
            if (e.op == CompareOp::Eq) return lt == rt;
            if (e.op == CompareOp::Ne) return lt != rt;
        }
        return false;
    }

    bool filters_hold(const PGroup& g, Progress& pr, std::vector<std::size_t>& applied) const {
        for (std::size_t i = 0; i < g.filters.size(); ++i) {
            if (pr.filter_done[i]) continue;
            const auto& f = g.filters[i];
            bool ready = true;
            for (auto s : f.slots) {
                if (binding_[s] == kUnbound) {
                    ready = false;
                    break;
                }
            }
            if (!ready) continue;
            pr.filter_done[i] = 1;
            applied.push_back(i);
            if (!eval(f.expr)) return false;
        }
        return true;
    }

    std::size_t estimate(const std::array<Slot, 3>& t) const {
        const Id s = resolve(t[0]), p = resolve(t[1]), o = resolve(t[2]);
        if (s == kMissing || p == kMissing || o == kMissing) return 0;
        return store_.candidates(s, p, o).size();
    }

    void step(const PGroup& g, Progress& pr, const Cont& k) {
        std::vector<std::size_t> applied;
        if (filters_hold(g, pr, applied)) {
            pick_and_extend(g, pr, k);
        }
        for (auto i : applied) pr.filter_done[i] = 0;
    }

    void pick_and_extend(const PGroup& g, Progress& pr, const Cont& k) {
        constexpr std::size_t kUnionThreshold = 64;
        std::size_t best = SIZE_MAX, best_count = SIZE_MAX;
        for (std::size_t i = 0; i < g.triples.size(); ++i) {
            if (pr.triple_done[i]) continue;
            const auto c = estimate(g.triples[i]);
            if (c < best_count) {
                best = i;
                best_count = c;
            }
        }
        std::size_t next_union = SIZE_MAX;
        for (std::size_t i = 0; i < g.unions.size(); ++i) {
            if (!pr.union_done[i]) {
                next_union = i;
                break;
            }
        }
        if (best == SIZE_MAX && next_union == SIZE_MAX) {
            // filters whose variables never got bound evaluate to false
            for (std::size_t i = 0; i < g.filters.size(); ++i) {
                if (!pr.filter_done[i]) return;
            }
            k();
            return;
        }
        if (next_union != SIZE_MAX && (best == SIZE_MAX || best_count > kUnionThreshold)) {
            pr.union_done[next_union] = 1;
            for (const auto& branch : g.unions[next_union].branches) {
                solve(branch, [&] { step(g, pr, k); });
            }
            pr.union_done[next_union] = 0;
            return;
        }
        pr.triple_done[best] = 1;
        const auto& t = g.triples[best];
        const Id s = resolve(t[0]), p = resolve(t[1]), o = resolve(t[2]);
        if (s != kMissing && p != kMissing && o != kMissing) {
            for (auto idx : store_.candidates(s, p, o)) {
                const auto& tr = store_.triple(idx);
                if ((s != kUnbound && tr.s != s) || (p != kUnbound && tr.p != p) || (o != kUnbound && tr.o != o)) continue;
                std::array<std::uint32_t, 3> newly{};
                std::size_t n = 0;
                bool ok = true;
                const Id vals[3] = {tr.s, tr.p, tr.o};
                for (int pos = 0; pos < 3 && ok; ++pos) {
                    const auto& sl = t[static_cast<std::size_t>(pos)];
                    if (!sl.is_var) continue;
                    auto& b = binding_[sl.index];
                    if (b == kUnbound) {
                        b = vals[pos];
                        newly[n++] = sl.index;
                    } else if (b != vals[pos]) {
                        ok = false; // same variable twice in one pattern
                    }
                }
                if (ok) step(g, pr, k);
                for (std::size_t j = 0; j < n; ++j) binding_[newly[j]] = kUnbound;
            }
        }
        pr.triple_done[best] = 0;
    }

    const TripleStore& store_;
    std::vector<Id> binding_;
    std::function<void(const std::vector<Id>&)> emit_;
};

void bound_in_triples(const Group& g, std::set<std::string>& out) {
    for (const auto& el : g.elements) {
        if (const auto* t = std::get_if<TriplePattern>(&el)) {
            for (const auto* o : {&t->s, &t->p, &t->o}) {
                if (o->is_var()) out.insert(o->text);
            }
        } else if (const auto* u = std::get_if<Union>(&el)) {
            for (const auto& b : u->branches) bound_in_triples(b, out);
        }
    }
}

void check_bound(const Query& q) {
    std::set<std::string> bound;
    bound_in_triples(q.where, bound);
    auto need = [&](const std::string& v, const char* where) {
        if (!bound.count(v)) throw Error(ErrorCode::UnboundVariable, "?" + v + " in " + where + " is never bound");
    };
    for (const auto& v : q.projection) need(v, "the projection");
    if (q.order_by) need(q.order_by->var, "ORDER BY");
    for (const auto& v : variables(q.where)) need(v, "a FILTER");
}

std::string row_key(const TripleStore& store, Id id) {
    if (id == kUnbound) return "\x01unbound";
    if (const auto& v = store.value_of(id)) return "V" + std::string(value_kind_name(v->kind())) + ":" + v->render();
    return "T" + std::to_string(id);
}

} // namespace

std::size_t Evaluator::Solutions::slot(const std::string& v) const {
    auto it = std::find(vars.begin(), vars.end(), v);
    if (it == vars.end()) throw Error(ErrorCode::UnboundVariable, "?" + v + " is not bound by the query");
    return static_cast<std::size_t>(it - vars.begin());
}

Evaluator::Evaluator(const KnowledgeBase& kb) : store_(std::make_shared<TripleStore>(kb)) {}

Evaluator::Evaluator(std::shared_ptr<const TripleStore> store) : store_(std::move(store)) {}

Evaluator::Solutions Evaluator::solve(const Query& q) const {
    check_bound(q);
    Prepared prep(*store_, q);
    Solutions out;
    out.vars = prep.names;
    std::set<std::vector<Id>> seen;
    Solver solver(*store_, prep.names.size(), [&](const std::vector<Id>& b) {
        if (seen.insert(b).second) out.rows.push_back(b);
    });
    solver.run(prep.root);
    return out;
}

ResultSet Evaluator::evaluate(const Query& q) const {
    const auto sol = solve(q);
    ResultSet rs;
    rs.form = q.form;
    if (q.form == Form::Ask) {
        rs.boolean = !sol.rows.empty();
        return rs;
    }
    if (q.form == Form::SelectCount) {
        const auto s = sol.slot(q.projection.front());
        if (q.distinct) {
            std::set<Id> ids;
            for (const auto& r : sol.rows) ids.insert(r[s]);
            rs.count = static_cast<std::int64_t>(ids.size());
        } else {
            rs.count = static_cast<std::int64_t>(sol.rows.size());
        }
        rs.columns = {q.count_alias};
        return rs;
    }
    rs.columns = q.projection;
    std::vector<std::size_t> slots;
    for (const auto& v : q.projection) slots.push_back(sol.slot(v));
    std::vector<std::pair<std::optional<Value>, std::vector<Id>>> rows;
    std::set<std::vector<Id>> seen;
    const std::size_t order_slot = q.order_by ? sol.slot(q.order_by->var) : 0;
    for (const auto& r : sol.rows) {
        std::vector<Id> row;
        for (auto s : slots) row.push_back(r[s]);
        if (q.distinct && !seen.insert(row).second) continue;
        std::optional<Value> key;
        if (q.order_by) key = store_->value_of(r[order_slot]);
        rows.emplace_back(std::move(key), std::move(row));
    }
    if (q.order_by) {
        const bool desc = q.order_by->descending;
        std::stable_sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
            // unbound/value-less keys sort last in both directions
            if (!a.first || !b.first) return a.first.has_value() && !b.first.has_value();
            return desc ? canonical_less(*b.first, *a.first) : canonical_less(*a.first, *b.first);
        });
    }
    for (auto& r : rows) {
        if (q.limit && static_cast<std::int64_t>(rs.rows.size()) >= *q.limit) break;
        rs.rows.push_back(std::move(r.second));
    }
    return rs;
}

std::vector<std::vector<std::string>> Evaluator::render_rows(const ResultSet& rs) const {
    std::vector<std::vector<std::string>> out;
    if (rs.form == Form::Ask) return {{rs.boolean ? "yes" : "no"}};
    if (rs.form == Form::SelectCount) return {{std::to_string(rs.count)}};
    for (const auto& r : rs.rows) {
        std::vector<std::string> line;
        for (auto id : r) line.push_back(store_->render(id));
        out.push_back(std::move(line));
    }
    return out;
}

namespace {

/// Subject of the top-level pattern `?node pred:value ?v`, if any.
std::optional<std::string> value_node_of(const Query& q, const std::string& v) {
    for (const auto& el : q.where.elements) {
        const auto* t = std::get_if<TriplePattern>(&el);
        if (t && t->s.is_var() && !t->p.is_var() && t->p.term.is_iri() && t->p.term.text == vocab::value && t->o.is_var() &&
            t->o.text == v) {
            return t->s.text;
        }
    }
    return std::nullopt;
}

} // namespace

QueryAnswer Evaluator::answer(const Query& q) const {
    QueryAnswer out;
    if (q.form == Form::Ask) {
        out.unique = true;
        out.answer = evaluate(q).boolean ? "yes" : "no";
        return out;
    }
    if (q.form == Form::SelectCount) {
        out.unique = true;
        out.answer = std::to_string(evaluate(q).count);
        return out;
    }
    if (q.projection.empty()) {
        out.reason = "empty projection";
        return out;
    }
    const auto sol = solve(q);
    if (q.order_by) {
        const auto es = sol.slot(q.projection.front());
        const auto node = value_node_of(q, q.order_by->var);
        const auto vs = sol.slot(node ? *node : q.order_by->var);
        std::vector<SelectCandidate> cands;
        std::map<Id, std::size_t> pos;
        for (const auto& r : sol.rows) {
            const Id e = r[es];
            auto it = pos.find(e);
            if (it == pos.end()) {
                auto idx = store_->term(e).is_iri() ? store_->kb().find_entity(store_->term(e).text) : std::nullopt;
                if (!idx) {
                    out.reason = "ordered variable is not bound to an entity";
                    return out;
                }
                it = pos.emplace(e, cands.size()).first;
                cands.push_back({*idx, {}});
            }
            const auto& v = store_->value_of(r[vs]);
            if (!v) continue;
            auto& values = cands[it->second].values;
            if (std::find(values.begin(), values.end(), *v) == values.end()) values.push_back(*v);
        }
        try {
            const auto w = select_extreme(store_->kb(), cands, q.order_by->descending);
            out.unique = true;
            out.answer = store_->kb().entity(w).name;
        } catch (const Error& e) {
            out.reason = e.what();
        }
        return out;
    }
    Id answer_id = kUnbound;
    for (const auto& v : q.projection) {
        const auto s = sol.slot(v);
        std::map<std::string, Id> keys;
        for (const auto& r : sol.rows) keys.emplace(row_key(*store_, r[s]), r[s]);
        if (keys.size() != 1) {
            out.reason = std::to_string(keys.size()) + " distinct bindings for ?" + v;
            return out;
        }
        answer_id = keys.begin()->second;
    }
    out.unique = true;
    out.answer = store_->render(answer_id);
    return out;
}

std::vector<std::string> Evaluator::answer_candidates(const Query& q) const {
    if (q.form == Form::Ask) return {"yes", "no"};
    if (q.form == Form::SelectCount) return {std::to_string(evaluate(q).count)};
    std::vector<std::string> out;
    if (q.projection.empty()) return out;
    const auto sol = solve(q);
    const auto s = sol.slot(q.projection.back());
    std::unordered_set<std::string> seen;
    for (const auto& r : sol.rows) {
        auto text = store_->render(r[s]);
        if (seen.insert(text).second) out.push_back(std::move(text));
    }
    return out;
}

} // namespace kopl::sparql
