#include "kopl/value.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <tuple>

namespace kopl {

std::string_view value_kind_name(ValueKind kind) {
    switch (kind) {
        case ValueKind::Text: return "string";
        case ValueKind::Quantity: return "quantity";
        case ValueKind::Date: return "date";
        case ValueKind::Year: return "year";
    }
    return "string";
}

std::optional<ValueKind> parse_value_kind(std::string_view name) {
    if (name == "string") return ValueKind::Text;
    if (name == "quantity") return ValueKind::Quantity;
    if (name == "date") return ValueKind::Date;
    if (name == "year") return ValueKind::Year;
    return std::nullopt;
}

Value Value::quantity(double magnitude, std::string unit) {
    if (unit.empty()) unit = "1";
    return Value(Data(Quantity{magnitude, std::move(unit)}));
}

Value Value::date(int y, int m, int d) {
    if (!valid_gregorian(y, m, d)) {
        throw std::invalid_argument("not a calendar day: " + std::to_string(y) + "-" + std::to_string(m) +
                                    "-" + std::to_string(d));
    }
    return Value(Data(Date{y, m, d}));
}

bool valid_gregorian(int year, int month, int day) {
    if (month < 1 || month > 12 || day < 1) return false;
    static constexpr std::array<int, 12> days{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    int limit = days[static_cast<std::size_t>(month - 1)];
    if (month == 2 && leap) limit = 29;
    return day <= limit;
}

std::string format_magnitude(double magnitude) {
    if (magnitude == 0.0) return "0";
    if (std::nearbyint(magnitude) == magnitude && std::fabs(magnitude) < 1e15) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(magnitude));
        return std::string(buf, res.ptr);
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, magnitude);
    return std::string(buf, res.ptr);
}

namespace {

std::string format_year(int y) {
    char buf[16];
    if (y < 0) {
        std::snprintf(buf, sizeof buf, "-%04d", -y);
    } else {
        std::snprintf(buf, sizeof buf, "%04d", y);
    }
    return buf;
}

} // namespace

std::string Value::render() const {
    switch (kind()) {
        case ValueKind::Text: return as_text();
        case ValueKind::Quantity: {
            const auto& q = as_quantity();
            auto m = format_magnitude(q.magnitude);
            if (q.unit == "1") return m;
            return m + " " + q.unit;
        }
        case ValueKind::Date: {
            const auto& d = as_date();
            char buf[32];
            std::snprintf(buf, sizeof buf, "%s-%02d-%02d", format_year(d.year).c_str(), d.month, d.day);
            return buf;
        }
        case ValueKind::Year: return std::to_string(as_year());
    }
    return {};
}

bool canonical_less(const Value& a, const Value& b) {
    if (a.kind() != b.kind()) return a.kind() < b.kind();
    switch (a.kind()) {
        case ValueKind::Text: return a.as_text() < b.as_text();
        case ValueKind::Quantity:
            return std::tie(a.as_quantity().unit, a.as_quantity().magnitude) <
                   std::tie(b.as_quantity().unit, b.as_quantity().magnitude);
        case ValueKind::Date: return a.as_date() < b.as_date();
        case ValueKind::Year: return a.as_year() < b.as_year();
    }
    return false;
}

std::optional<CompareOp> parse_compare_op(std::string_view token) {
    if (token == "=") return CompareOp::Eq;
    if (token == "!=") return CompareOp::Ne;
    if (token == "<") return CompareOp::Lt;
    if (token == ">") return CompareOp::Gt;
    return std::nullopt;
}

std::string_view compare_op_token(CompareOp op) {
    switch (op) {
        case CompareOp::Eq: return "=";
        case CompareOp::Ne: return "!=";
        case CompareOp::Lt: return "<";
        case CompareOp::Gt: return ">";
    }
    return "=";
}

std::string_view trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

namespace {

template <typename T>
bool apply_order(const T& a, const T& b, CompareOp op) {
    switch (op) {
        case CompareOp::Eq: return a == b;
        case CompareOp::Ne: return !(a == b);
        case CompareOp::Lt: return a < b;
        case CompareOp::Gt: return b < a;
    }
    return false;
}

bool is_temporal(const Value& v) { return v.is_date() || v.is_year(); }

} // namespace

bool orderable(const Value& a, const Value& b) {
    if (a.is_quantity() && b.is_quantity()) return a.as_quantity().unit == b.as_quantity().unit;
    return is_temporal(a) && is_temporal(b);
}

bool compare(const Value& a, const Value& b, CompareOp op) {
    if (a.is_text() && b.is_text()) {
        const bool eq = trim(a.as_text()) == trim(b.as_text());
        if (op == CompareOp::Eq) return eq;
        if (op == CompareOp::Ne) return !eq;
        return false;
    }
    if (a.is_quantity() && b.is_quantity()) {
        const auto& qa = a.as_quantity();
        const auto& qb = b.as_quantity();
        if (qa.unit != qb.unit) return op == CompareOp::Ne;
        return apply_order(qa.magnitude, qb.magnitude, op);
    }
    if (is_temporal(a) && is_temporal(b)) {
        if (a.is_date() && b.is_date()) return apply_order(a.as_date(), b.as_date(), op);
        const int ya = a.is_date() ? a.as_date().year : a.as_year();
        const int yb = b.is_date() ? b.as_date().year : b.as_year();
        return apply_order(ya, yb, op);
    }
    return false;
}

bool units_match(std::string_view a, std::string_view b) {
    if (a == b) return true;
    if (a.size() > b.size()) std::swap(a, b);
    if (b.substr(0, a.size()) != a) return false;
    auto rest = b.substr(a.size());
    return rest == "s" || rest == "es";
}

std::optional<double> parse_magnitude(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    std::string cleaned;
    cleaned.reserve(text.size());
    bool seen_point = false;
    bool seen_exp = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == ',') {
            // thousands separator: must sit between digits, before any point/exponent
            if (seen_point || seen_exp || i == 0 || i + 1 >= text.size()) return std::nullopt;
            if (!std::isdigit(static_cast<unsigned char>(text[i - 1])) ||
                !std::isdigit(static_cast<unsigned char>(text[i + 1])))
                return std::nullopt;
            continue;
        }
        if (c == '.') seen_point = true;
        if (c == 'e' || c == 'E') seen_exp = true;
        cleaned.push_back(c);
    }
    const char* first = cleaned.data();
    const char* last = cleaned.data() + cleaned.size();
    if (*first == '+') ++first;
    double out = 0.0;
    auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last) return std::nullopt;
    if (!std::isfinite(out)) return std::nullopt;
    return out;
}

std::optional<Quantity> parse_quantity(std::string_view text) {
    text = trim(text);
    auto space = text.find(' ');
    auto head = text.substr(0, space);
    auto magnitude = parse_magnitude(head);
    if (!magnitude) return std::nullopt;
    std::string unit = "1";
    if (space != std::string_view::npos) {
        auto rest = trim(text.substr(space + 1));
        if (!rest.empty()) unit = std::string(rest);
    }
    return Quantity{*magnitude, std::move(unit)};
}

std::optional<int> parse_year(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') ++first;
    int out = 0;
    auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last) return std::nullopt;
    return out;
}

std::optional<Date> parse_date(std::string_view text) {
    text = trim(text);
    bool negative = false;
    if (!text.empty() && text.front() == '-') {
        negative = true;
        text.remove_prefix(1);
    }
    auto d1 = text.find('-');
    if (d1 == std::string_view::npos) return std::nullopt;
    auto d2 = text.find('-', d1 + 1);
    if (d2 == std::string_view::npos) return std::nullopt;
    auto num = [](std::string_view s) -> std::optional<int> {
        if (s.empty()) return std::nullopt;
        int v = 0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || v < 0) return std::nullopt;
        return v;
    };
    auto y = num(text.substr(0, d1));
    auto m = num(text.substr(d1 + 1, d2 - d1 - 1));
    auto d = num(text.substr(d2 + 1));
    if (!y || !m || !d) return std::nullopt;
    int year = negative ? -*y : *y;
    if (!valid_gregorian(year, *m, *d)) return std::nullopt;
    return Date{year, *m, *d};
}

std::optional<Value> parse_value_as(ValueKind kind, std::string_view text) {
    switch (kind) {
        case ValueKind::Text: return Value::text(std::string(trim(text)));
        case ValueKind::Quantity: {
            auto q = parse_quantity(text);
            if (!q) return std::nullopt;
            return Value::quantity(q->magnitude, q->unit);
        }
        case ValueKind::Date: {
            auto d = parse_date(text);
            if (!d) return std::nullopt;
            return Value::date(d->year, d->month, d->day);
        }
        case ValueKind::Year: {
            auto y = parse_year(text);
            if (!y) return std::nullopt;
            return Value::year(*y);
        }
    }
    return std::nullopt;
}

} // namespace kopl
