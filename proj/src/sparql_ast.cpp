#include <algorithm>
#include <set>

#include "kopl/errors.hpp"
#include "kopl/sparql.hpp"

namespace kopl::sparql {

namespace {

void add_var(const Operand& o, std::vector<std::string>& out) {
    if (o.is_var() && std::find(out.begin(), out.end(), o.text) == out.end()) out.push_back(o.text);
}

void expr_vars(const Expr& e, std::vector<std::string>& out) {
    if (e.kind == Expr::Kind::Compare) {
        add_var(e.lhs, out);
        add_var(e.rhs, out);
    } else {
        for (const auto& a : e.args) expr_vars(a, out);
    }
}

void group_vars(const Group& g, std::vector<std::string>& out) {
    for (const auto& el : g.elements) {
        if (const auto* t = std::get_if<TriplePattern>(&el)) {
            add_var(t->s, out);
            add_var(t->p, out);
            add_var(t->o, out);
        } else if (const auto* f = std::get_if<Filter>(&el)) {
            expr_vars(f->expr, out);
        } else {
            for (const auto& b : std::get<Union>(el).branches) group_vars(b, out);
        }
    }
}

std::vector<std::string> element_vars(const Element& el) {
    std::vector<std::string> out;
    group_vars(Group{{el}}, out);
    return out;
}

void bound_vars(const Element& el, std::set<std::string>& out) {
    if (const auto* t = std::get_if<TriplePattern>(&el)) {
        for (const auto* o : {&t->s, &t->p, &t->o}) {
            if (o->is_var()) out.insert(o->text);
        }
    } else if (const auto* u = std::get_if<Union>(&el)) {
        for (const auto& b : u->branches) {
            for (const auto& e : b.elements) bound_vars(e, out);
        }
    }
}

bool is_reserved(const Operand& p, std::string_view term) { return !p.is_var() && p.term.is_iri() && p.term.text == term; }

/// Guards and the name pattern anchoring the answer variable are never dropped.
bool protected_element(const Query& q, const Element& el) {
    const auto* t = std::get_if<TriplePattern>(&el);
    if (!t) return false;
    if (is_reserved(t->p, vocab::kind)) return true;
    if (is_reserved(t->p, vocab::name) && t->s.is_var()) {
        return std::find(q.projection.begin(), q.projection.end(), t->s.text) != q.projection.end();
    }
    return false;
}

/// Remaining elements stay bound and connected to the projection after removing `drop`.
bool well_formed_without(const Query& q, std::size_t drop) {
    const auto& els = q.where.elements;
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < els.size(); ++i) {
        if (i != drop) rest.push_back(i);
    }
    if (rest.empty()) return false;

    std::set<std::string> bound;
    for (auto i : rest) bound_vars(els[i], bound);
    std::vector<std::string> needed = q.projection;
    if (q.order_by) needed.push_back(q.order_by->var);
    for (auto i : rest) {
        if (std::holds_alternative<Filter>(els[i])) {
            for (const auto& v : element_vars(els[i])) needed.push_back(v);
        }
    }
    for (const auto& v : needed) {
        if (!bound.count(v)) return false;
    }

    // connectivity through shared variables, seeded by the projection
    std::vector<std::vector<std::string>> vars;
    for (auto i : rest) vars.push_back(element_vars(els[i]));
    std::set<std::string> reached(q.projection.begin(), q.projection.end());
    if (reached.empty() && !vars.empty() && !vars.front().empty()) reached.insert(vars.front().front());
    std::vector<char> done(rest.size(), 0);
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t k = 0; k < rest.size(); ++k) {
            if (done[k]) continue;
            bool touches = false;
            for (const auto& v : vars[k]) {
                if (reached.count(v)) {
                    touches = true;
                    break;
                }
            }
            if (!touches) continue;
            done[k] = 1;
            grew = true;
            reached.insert(vars[k].begin(), vars[k].end());
        }
    }
    return std::all_of(done.begin(), done.end(), [](char c) { return c != 0; });
}

} // namespace

std::vector<std::string> variables(const Group& g) {
    std::vector<std::string> out;
    group_vars(g, out);
    return out;
}

std::vector<std::size_t> droppable_conditions(const Query& q) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < q.where.elements.size(); ++i) {
        if (protected_element(q, q.where.elements[i])) continue;
        if (well_formed_without(q, i)) out.push_back(i);
    }
    return out;
}

AbridgedQuery abridge(const Query& q, Rng& rng) {
    const auto candidates = droppable_conditions(q);
    if (candidates.empty()) throw Error(ErrorCode::NothingDroppable, "no condition can be removed");
    AbridgedQuery out;
    out.base = q;
    out.dropped_index = candidates[rng.below(candidates.size())];
    out.query = q;
    out.query.where.elements.erase(out.query.where.elements.begin() + static_cast<std::ptrdiff_t>(out.dropped_index));
    out.query.order_by.reset();
    out.query.limit.reset();
    return out;
}

} // namespace kopl::sparql
