#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "kopl/kb.hpp"
#include "kopl/value.hpp"

namespace kopl {

/// Reserved vocabulary of the reified triple encoding.
namespace vocab {
inline constexpr std::string_view name = "pred:name";
inline constexpr std::string_view instance_of = "pred:instance_of";
inline constexpr std::string_view subclass_of = "pred:subclass_of";
inline constexpr std::string_view kind = "pred:kind";
inline constexpr std::string_view value = "pred:value";
inline constexpr std::string_view unit = "pred:unit";
inline constexpr std::string_view fact_h = "pred:fact_h";
inline constexpr std::string_view fact_r = "pred:fact_r";
inline constexpr std::string_view fact_t = "pred:fact_t";
} // namespace vocab

/// RDF-style term: IRI, blank node, or typed literal.
struct Term {
    enum class Kind { Iri, Blank, Literal };

    Kind kind = Kind::Iri;
    std::string text; // IRI body or blank-node label; empty for literals
    Value literal;

    static Term iri(std::string s) { return Term{Kind::Iri, std::move(s), {}}; }
    static Term blank(std::string label) { return Term{Kind::Blank, std::move(label), {}}; }
    static Term lit(Value v) { return Term{Kind::Literal, {}, std::move(v)}; }

    bool is_iri() const { return kind == Kind::Iri; }
    bool is_blank() const { return kind == Kind::Blank; }
    bool is_literal() const { return kind == Kind::Literal; }

    bool operator==(const Term&) const = default;
};

/// SPARQL/N-Triples surface form: <iri>, _:label, "text", 206, "2003"^^xsd:gYear, "1980-06-01"^^xsd:date.
std::string render_term(const Term& t);
std::string render_literal(const Value& v);
std::string quote_string(std::string_view s);

struct Triple {
    Term subject;
    Term predicate;
    Term object;

    bool operator==(const Triple&) const = default;
};

/// Reified encoding of the KB consumed by the SPARQL evaluator. Each attribute fact gets one
/// blank node acting as both fact node (pred:fact_h / pred:fact_r) and value node (pred:value,
/// pred:unit); each relation fact gets a fact node with pred:fact_h / pred:fact_r / pred:fact_t.
/// Qualifiers hang off the fact node. Blank labels are content hashes, so output is deterministic.
std::vector<Triple> triple_view(const KnowledgeBase& kb);

/// Sorted, tab-separated dump of triple_view, one triple per line.
void dump_triples(const KnowledgeBase& kb, std::ostream& out);

/// Blank-node label of an attribute fact / relation fact as used by triple_view.
std::string attribute_node_label(const KnowledgeBase& kb, const AttributeFact& fact);
std::string relation_node_label(const KnowledgeBase& kb, const RelationFact& fact);

} // namespace kopl
