#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace kopl {

struct Quantity {
    double magnitude = 0.0;
    std::string unit = "1"; // dimensionless quantities use "1"

    bool operator==(const Quantity&) const = default;
};

struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    bool operator==(const Date&) const = default;
    auto operator<=>(const Date&) const = default;
};

struct Year {
    int value = 0;

    bool operator==(const Year&) const = default;
};

enum class ValueKind { Text, Quantity, Date, Year };

std::string_view value_kind_name(ValueKind kind);
std::optional<ValueKind> parse_value_kind(std::string_view name);

/// Literal value of an attribute or qualifier: string, number-with-unit, date, or year.
class Value {
public:
    Value() : data_(std::string{}) {}

    static Value text(std::string s) { return Value(Data(std::move(s))); }
    static Value quantity(double magnitude, std::string unit = "1");
    /// Throws std::invalid_argument when (year, month, day) is not a Gregorian day.
    static Value date(int year, int month, int day);
    static Value year(int y) { return Value(Data(Year{y})); }

    ValueKind kind() const { return static_cast<ValueKind>(data_.index()); }
    bool is_text() const { return kind() == ValueKind::Text; }
    bool is_quantity() const { return kind() == ValueKind::Quantity; }
    bool is_date() const { return kind() == ValueKind::Date; }
    bool is_year() const { return kind() == ValueKind::Year; }

    const std::string& as_text() const { return std::get<std::string>(data_); }
    const Quantity& as_quantity() const { return std::get<Quantity>(data_); }
    const Date& as_date() const { return std::get<Date>(data_); }
    int as_year() const { return std::get<Year>(data_).value; }

    /// Canonical rendering used for answers: "206 centimetre", "2003", "1980-06-01".
    /// Dimensionless quantities render as the bare magnitude.
    std::string render() const;

    bool operator==(const Value& other) const = default;

private:
    using Data = std::variant<std::string, Quantity, Date, Year>;
    explicit Value(Data d) : data_(std::move(d)) {}
    Data data_;
};

/// Total order used for canonical sorting of facts (kind first, then payload).
bool canonical_less(const Value& a, const Value& b);

enum class CompareOp { Eq, Ne, Lt, Gt };

std::optional<CompareOp> parse_compare_op(std::string_view token);
std::string_view compare_op_token(CompareOp op);

/// Typed comparison. Never throws.
///   text      : trimmed equality; < and > are false
///   quantity  : by magnitude when units are identical; otherwise =,<,> false and != true
///   date/year : calendar order, a year compared with a date uses the date's year
/// Any other pairing is incomparable and yields false for every operator.
bool compare(const Value& a, const Value& b, CompareOp op);

/// True when the two values can be ordered against each other by compare().
bool orderable(const Value& a, const Value& b);

/// Unit strings equal up to a trailing plural "s"/"es".
bool units_match(std::string_view a, std::string_view b);

bool valid_gregorian(int year, int month, int day);

std::string format_magnitude(double magnitude);
/// Accepts optional sign, thousands separators ("199,110"), decimals and exponents.
std::optional<double> parse_magnitude(std::string_view text);
std::optional<Quantity> parse_quantity(std::string_view text);
std::optional<Date> parse_date(std::string_view text);
std::optional<int> parse_year(std::string_view text);

/// Parse a textual program argument as a value of the requested kind.
std::optional<Value> parse_value_as(ValueKind kind, std::string_view text);

std::string_view trim(std::string_view s);

} // namespace kopl
