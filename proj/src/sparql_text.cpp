#include <cctype>
#include <cstdlib>

#include "kopl/errors.hpp"
#include "kopl/sparql.hpp"

namespace kopl::sparql {

namespace {

std::string render_operand(const Operand& o) {
    switch (o.kind) {
        case Operand::Kind::Var: return "?" + o.text;
        case Operand::Kind::Const: return render_term(o.term);
        case Operand::Kind::Untyped: return quote_string(o.text) + "^^pred:any";
    }
    return {};
}

std::string render_expr(const Expr& e) {
    if (e.kind == Expr::Kind::Compare) {
        return render_operand(e.lhs) + " " + std::string(compare_op_token(e.op)) + " " + render_operand(e.rhs);
    }
    const char* sep = e.kind == Expr::Kind::Or ? " || " : " && ";
    std::string out;
    for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i > 0) out += sep;
        if (e.args[i].kind == Expr::Kind::Compare) out += render_expr(e.args[i]);
        else out += "(" + render_expr(e.args[i]) + ")";
    }
    return out;
}

void render_group(const Group& g, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    for (const auto& el : g.elements) {
        if (const auto* t = std::get_if<TriplePattern>(&el)) {
            out += pad + render_operand(t->s) + " " + render_operand(t->p) + " " + render_operand(t->o) + " .\n";
        } else if (const auto* f = std::get_if<Filter>(&el)) {
            out += pad + "FILTER (" + render_expr(f->expr) + ")\n";
        } else {
            const auto& u = std::get<Union>(el);
            for (std::size_t i = 0; i < u.branches.size(); ++i) {
                out += i == 0 ? pad + "{\n" : pad + "} UNION {\n";
                render_group(u.branches[i], depth + 1, out);
            }
            out += pad + "}\n";
        }
    }
}

} // namespace

std::string render(const Query& q) {
    std::string out;
    switch (q.form) {
        case Form::Select:
            out = q.distinct ? "SELECT DISTINCT" : "SELECT";
            for (const auto& v : q.projection) out += " ?" + v;
            out += " WHERE {\n";
            break;
        case Form::SelectCount:
            out = "SELECT (COUNT(";
            if (q.distinct) out += "DISTINCT ";
            out += "?" + (q.projection.empty() ? std::string("e") : q.projection.front()) + ") AS ?" + q.count_alias +
                   ") WHERE {\n";
            break;
        case Form::Ask: out = "ASK {\n"; break;
    }
    render_group(q.where, 1, out);
    out += "}";
    if (q.order_by) out += std::string("\nORDER BY ") + (q.order_by->descending ? "DESC" : "ASC") + "(?" + q.order_by->var + ")";
    if (q.limit) out += "\nLIMIT " + std::to_string(*q.limit);
    return out;
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Query query() {
        Query q;
        skip();
        if (accept_keyword("ASK")) {
            q.form = Form::Ask;
            accept_keyword("WHERE");
        } else {
            expect_keyword("SELECT");
            q.distinct = accept_keyword("DISTINCT");
            if (q.distinct && peek() == '(') fail("DISTINCT before an aggregate");
            if (peek() == '(') {
                expect('(');
                expect_keyword("COUNT");
                expect('(');
                q.distinct = accept_keyword("DISTINCT");
                q.projection = {variable()};
                expect(')');
                expect_keyword("AS");
                q.count_alias = variable();
                expect(')');
                q.form = Form::SelectCount;
            } else {
                if (peek() == '*') fail("SELECT * is outside the subset");
                while (peek() == '?' || peek() == '$') q.projection.push_back(variable());
                if (q.projection.empty()) fail("expected a projected variable");
            }
            expect_keyword("WHERE");
        }
        q.where = group();
        if (accept_keyword("ORDER")) {
            expect_keyword("BY");
            OrderBy ob;
            if (accept_keyword("DESC")) {
                ob.descending = true;
                expect('(');
                ob.var = variable();
                expect(')');
            } else if (accept_keyword("ASC")) {
                expect('(');
                ob.var = variable();
                expect(')');
            } else {
                ob.var = variable();
            }
            q.order_by = ob;
        }
        if (accept_keyword("LIMIT")) q.limit = integer();
        skip();
        if (pos_ < s_.size()) fail("unexpected trailing input");
        return q;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::SubsetViolation, "offset " + std::to_string(pos_) + ": " + msg);
    }

    void skip() {
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    std::string word_at() {
        skip();
        std::size_t end = pos_;
        while (end < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) ++end;
        std::string w(s_.substr(pos_, end - pos_));
        for (auto& ch : w) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        return w;
    }

    bool accept_keyword(std::string_view kw) {
        if (word_at() != kw) return false;
        pos_ += kw.size();
        return true;
    }

    void expect_keyword(std::string_view kw) {
        if (!accept_keyword(kw)) fail("expected " + std::string(kw));
    }

    std::string variable() {
        const char c = peek();
        if (c != '?' && c != '$') fail("expected a variable");
        ++pos_;
        std::size_t end = pos_;
        while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) ++end;
        if (end == pos_) fail("empty variable name");
        std::string name(s_.substr(pos_, end - pos_));
        pos_ = end;
        return name;
    }

    std::int64_t integer() {
        skip();
        std::size_t end = pos_;
        while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end]))) ++end;
        if (end == pos_) fail("expected an integer");
        auto v = std::strtoll(std::string(s_.substr(pos_, end - pos_)).c_str(), nullptr, 10);
        pos_ = end;
        return v;
    }

    Group group() {
        expect('{');
        Group g;
        while (true) {
            const char c = peek();
            if (c == '}') {
                ++pos_;
                return g;
            }
            if (c == '\0') fail("unterminated group");
            if (c == '{') {
                Union u;
                u.branches.push_back(group());
                if (!accept_keyword("UNION")) fail("nested groups are only allowed as UNION branches");
                u.branches.push_back(group());
                while (accept_keyword("UNION")) u.branches.push_back(group());
                g.elements.push_back(std::move(u));
                accept('.');
                continue;
            }
            const auto w = word_at();
            if (w == "FILTER") {
                pos_ += w.size();
                expect('(');
                Filter f{expr()};
                expect(')');
                g.elements.push_back(std::move(f));
                accept('.');
                continue;
            }
            if (w == "OPTIONAL" || w == "MINUS" || w == "BIND" || w == "VALUES" || w == "GRAPH" || w == "SERVICE" ||
                w == "SELECT") {
                fail(w + " is outside the subset");
            }
            TriplePattern t;
            t.s = term(false);
            t.p = term(false);
            t.o = term(false);
            if (peek() == ';' || peek() == ',') fail("predicate/object lists are outside the subset");
            if (!accept('.') && peek() != '}') fail("expected '.' after a triple pattern");
            g.elements.push_back(std::move(t));
        }
    }

    Expr expr() {
        Expr first = conjunction();
        if (!at_op("||")) return first;
        Expr e;
        e.kind = Expr::Kind::Or;
        e.args.push_back(std::move(first));
        while (at_op("||")) {
            pos_ += 2;
            e.args.push_back(conjunction());
        }
        return e;
    }

    Expr conjunction() {
        Expr first = primary();
        if (!at_op("&&")) return first;
        Expr e;
        e.kind = Expr::Kind::And;
        e.args.push_back(std::move(first));
        while (at_op("&&")) {
            pos_ += 2;
            e.args.push_back(primary());
        }
        return e;
    }

    bool at_op(std::string_view op) {
        skip();
        return s_.substr(pos_, op.size()) == op;
    }

    Expr primary() {
        if (peek() == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        Operand lhs = term(true);
        skip();
        CompareOp op;
        if (at_op("!=")) {
            op = CompareOp::Ne;
            pos_ += 2;
        } else if (at_op("<=") || at_op(">=")) {
            fail("<= and >= are outside the subset");
        } else if (at_op("=")) {
            op = CompareOp::Eq;
            ++pos_;
        } else if (at_op("<")) {
            op = CompareOp::Lt;
            ++pos_;
        } else if (at_op(">")) {
            op = CompareOp::Gt;
            ++pos_;
        } else {
            fail("expected a comparison operator");
        }
        Operand rhs = term(true);
        return Expr::cmp(std::move(lhs), op, std::move(rhs));
    }

    std::string string_body() {
        // at opening quote
        ++pos_;
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            char c = s_[pos_++];
            if (c == '\\') {
                if (pos_ >= s_.size()) fail("dangling escape");
                const char e = s_[pos_++];
                switch (e) {
                    case 'n': out.push_back('\n'); break;
                    case 'r': out.push_back('\r'); break;
                    case 't': out.push_back('\t'); break;
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    default: fail(std::string("unknown escape \\") + e);
                }
            } else {
                out.push_back(c);
            }
        }
        if (pos_ >= s_.size()) fail("unterminated string");
        ++pos_;
        return out;
    }

    std::string datatype() {
        skip();
        if (pos_ < s_.size() && s_[pos_] == '<') {
            auto end = s_.find('>', pos_);
            if (end == std::string_view::npos) fail("unterminated datatype IRI");
            std::string t(s_.substr(pos_ + 1, end - pos_ - 1));
            pos_ = end + 1;
            return t;
        }
        std::size_t end = pos_;
        while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == ':' || s_[end] == '_')) ++end;
        if (end == pos_) fail("expected a datatype");
        std::string t(s_.substr(pos_, end - pos_));
        pos_ = end;
        return t;
    }

    Operand typed_literal(const std::string& body, const std::string& type, std::size_t at) {
        auto bad = [&]() -> Operand {
            pos_ = at;
            fail("\"" + body + "\" is not a valid " + type);
        };
        if (type == "pred:any") return Operand::untyped(body);
        if (type == "xsd:string") return Operand::lit(Value::text(body));
        if (type == "xsd:date") {
            auto d = parse_value_as(ValueKind::Date, body);
            return d ? Operand::lit(*d) : bad();
        }
        if (type == "xsd:gYear") {
            auto y = parse_value_as(ValueKind::Year, body);
            return y ? Operand::lit(*y) : bad();
        }
        if (type == "xsd:integer" || type == "xsd:decimal" || type == "xsd:double" || type == "pred:quantity") {
            auto v = parse_value_as(ValueKind::Quantity, body);
            if (!v || (type != "pred:quantity" && v->as_quantity().unit != "1")) return bad();
            return Operand::lit(*v);
        }
        pos_ = at;
        fail("datatype " + type + " is outside the subset");
    }

    Operand term(bool in_filter) {
        const char c = peek();
        const std::size_t at = pos_;
        if (c == '?' || c == '$') return Operand::var(variable());
        if (c == '<') {
            auto end = s_.find('>', pos_);
            auto nl = s_.find('\n', pos_);
            if (end == std::string_view::npos || (nl != std::string_view::npos && nl < end)) fail("unterminated IRI");
            std::string iri(s_.substr(pos_ + 1, end - pos_ - 1));
            pos_ = end + 1;
            return Operand::iri(std::move(iri));
        }
        if (c == '_' && s_.substr(pos_, 2) == "_:") {
            if (in_filter) fail("blank nodes are not allowed in FILTER");
            pos_ += 2;
            std::size_t end = pos_;
            while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) ++end;
            if (end == pos_) fail("empty blank node label");
            std::string label(s_.substr(pos_, end - pos_));
            pos_ = end;
            return Operand::constant(Term::blank(std::move(label)));
        }
        if (c == '"') {
            auto body = string_body();
            if (s_.substr(pos_, 2) == "^^") {
                pos_ += 2;
                return typed_literal(body, datatype(), at);
            }
            if (pos_ < s_.size() && s_[pos_] == '@') fail("language tags are outside the subset");
            return Operand::lit(Value::text(std::move(body)));
        }
        if (c == '-' || c == '+' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t end = pos_ + 1;
            while (end < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
                                       s_[end] == 'e' || s_[end] == 'E' ||
                                       ((s_[end] == '-' || s_[end] == '+') && (s_[end - 1] == 'e' || s_[end - 1] == 'E'))))
                ++end;
            // a trailing '.' ends the triple
            if (end > pos_ + 1 && s_[end - 1] == '.') --end;
            auto m = parse_magnitude(s_.substr(pos_, end - pos_));
            if (!m) fail("malformed number");
            pos_ = end;
            return Operand::lit(Value::quantity(*m));
        }
        fail("expected a term");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace

Query parse_sparql(std::string_view text) { return Parser(text).query(); }

} // namespace kopl::sparql
