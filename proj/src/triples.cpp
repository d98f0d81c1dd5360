#include "kopl/triples.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <ostream>

namespace kopl {

std::string quote_string(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    out.push_back('"');
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

std::string render_literal(const Value& v) {
    switch (v.kind()) {
        case ValueKind::Text: return quote_string(v.as_text());
        case ValueKind::Quantity: {
            // only dimensionless magnitudes appear as literals; units live on pred:unit edges
            const auto& q = v.as_quantity();
            if (q.unit == "1") return format_magnitude(q.magnitude);
            return quote_string(v.render()) + "^^pred:quantity";
        }
        case ValueKind::Date: return quote_string(v.render()) + "^^xsd:date";
        case ValueKind::Year: return quote_string(v.render()) + "^^xsd:gYear";
    }
    return {};
}

std::string render_term(const Term& t) {
    switch (t.kind) {
        case Term::Kind::Iri: return "<" + t.text + ">";
        case Term::Kind::Blank: return "_:" + t.text;
        case Term::Kind::Literal: return render_literal(t.literal);
    }
    return {};
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string label_for(std::string_view content) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "b%016llx", static_cast<unsigned long long>(fnv1a(content)));
    return buf;
}

std::string qualifier_content(const std::vector<Qualifier>& qs) {
    std::string s;
    for (const auto& q : qs) {
        s += '\x1f';
        s += q.key;
        s += '=';
        s += render_literal(q.value);
        if (q.value.is_quantity()) s += "@" + q.value.as_quantity().unit;
    }
    return s;
}

Term iri(std::string_view s) { return Term::iri(std::string(s)); }

void emit_value(std::vector<Triple>& out, const Term& node, const Value& v) {
    if (v.is_quantity()) {
        out.push_back({node, iri(vocab::value), Term::lit(Value::quantity(v.as_quantity().magnitude))});
        out.push_back({node, iri(vocab::unit), Term::lit(Value::text(v.as_quantity().unit))});
    } else {
        out.push_back({node, iri(vocab::value), Term::lit(v)});
    }
}

void emit_qualifiers(std::vector<Triple>& out, const Term& fact_node, const std::vector<Qualifier>& qs) {
    for (std::size_t i = 0; i < qs.size(); ++i) {
        const auto& q = qs[i];
        if (q.value.is_quantity()) {
            Term qnode = Term::blank(label_for(fact_node.text + "|q|" + std::to_string(i)));
            out.push_back({fact_node, Term::iri(q.key), qnode});
            emit_value(out, qnode, q.value);
        } else {
            out.push_back({fact_node, Term::iri(q.key), Term::lit(q.value)});
        }
    }
}

} // namespace

std::string attribute_node_label(const KnowledgeBase& kb, const AttributeFact& fact) {
    std::string content = "A\x1f" + kb.entity(fact.subject).id + "\x1f" + fact.key + "\x1f" + render_literal(fact.value);
    if (fact.value.is_quantity()) content += "@" + fact.value.as_quantity().unit;
    content += qualifier_content(fact.qualifiers);
    return label_for(content);
}

std::string relation_node_label(const KnowledgeBase& kb, const RelationFact& fact) {
    std::string content = "R\x1f" + kb.entity(fact.subject).id + "\x1f" + fact.predicate + "\x1f" +
                          kb.entity(fact.object).id + qualifier_content(fact.qualifiers);
    return label_for(content);
}

std::vector<Triple> triple_view(const KnowledgeBase& kb) {
    std::vector<Triple> out;
    const Term name = iri(vocab::name);
    const Term kind = iri(vocab::kind);

    for (const auto& c : kb.concepts()) {
        Term node = Term::iri(c.id);
        out.push_back({node, kind, Term::lit(Value::text("concept"))});
        out.push_back({node, name, Term::lit(Value::text(c.name))});
        for (auto p : c.subclass_of) out.push_back({node, iri(vocab::subclass_of), Term::iri(kb.concept_at(p).id)});
    }

    for (EntityIndex ei = 0; ei < kb.entities().size(); ++ei) {
        const auto& e = kb.entity(ei);
        Term node = Term::iri(e.id);
        out.push_back({node, kind, Term::lit(Value::text("entity"))});
        out.push_back({node, name, Term::lit(Value::text(e.name))});
        for (auto c : kb.concept_closure(ei)) out.push_back({node, iri(vocab::instance_of), Term::iri(kb.concept_at(c).id)});

        for (const auto& a : e.attributes) {
            Term fact = Term::blank(attribute_node_label(kb, a));
            out.push_back({node, Term::iri(a.key), fact});
            emit_value(out, fact, a.value);
            out.push_back({fact, iri(vocab::fact_h), node});
            out.push_back({fact, iri(vocab::fact_r), Term::iri(a.key)});
            emit_qualifiers(out, fact, a.qualifiers);
        }
    }

    for (const auto& r : kb.relations()) {
        Term s = Term::iri(kb.entity(r.subject).id);
        Term o = Term::iri(kb.entity(r.object).id);
        Term fact = Term::blank(relation_node_label(kb, r));
        out.push_back({s, Term::iri(r.predicate), o});
        out.push_back({fact, iri(vocab::fact_h), s});
        out.push_back({fact, iri(vocab::fact_r), Term::iri(r.predicate)});
        out.push_back({fact, iri(vocab::fact_t), o});
        emit_qualifiers(out, fact, r.qualifiers);
    }
    return out;
}

void dump_triples(const KnowledgeBase& kb, std::ostream& out) {
    std::vector<std::string> lines;
    for (const auto& t : triple_view(kb)) {
        lines.push_back(render_term(t.subject) + "\t" + render_term(t.predicate) + "\t" + render_term(t.object));
    }
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
    for (const auto& l : lines) out << l << '\n';
}

} // namespace kopl
