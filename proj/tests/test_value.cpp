#include "doctest.h"

#include <stdexcept>

#include "kopl/value.hpp"

using namespace kopl;

TEST_CASE("magnitudes accept separators, signs and exponents") {
    CHECK(parse_magnitude("199,110") == 199110.0);
    CHECK(parse_magnitude("3,500,000") == 3500000.0);
    CHECK(parse_magnitude("-2.5") == -2.5);
    CHECK(parse_magnitude("+7") == 7.0);
    CHECK(parse_magnitude("1e3") == 1000.0);
    CHECK_FALSE(parse_magnitude(",100"));
    CHECK_FALSE(parse_magnitude("1.5,000"));
    CHECK_FALSE(parse_magnitude("abc"));
    CHECK_FALSE(parse_magnitude(""));
}

TEST_CASE("quantities default to the dimensionless unit") {
    auto q = parse_quantity("206 centimetre");
    REQUIRE(q);
    CHECK(q->magnitude == 206.0);
    CHECK(q->unit == "centimetre");
    CHECK(parse_quantity("42")->unit == "1");
    CHECK(parse_quantity("  5   square kilometre ")->unit == "square kilometre");
}

TEST_CASE("dates are Gregorian") {
    CHECK(parse_date("2000-02-29"));
    CHECK_FALSE(parse_date("1900-02-29"));
    CHECK_FALSE(parse_date("2001-13-01"));
    CHECK_FALSE(parse_date("2001-04-31"));
    CHECK(parse_date("-0044-03-15")->year == -44);
    CHECK_THROWS_AS(Value::date(2001, 2, 29), std::invalid_argument);
}

TEST_CASE("rendering is canonical") {
    CHECK(Value::quantity(206, "centimetre").render() == "206 centimetre");
    CHECK(Value::quantity(199110).render() == "199110");
    CHECK(Value::quantity(2.5, "metre").render() == "2.5 metre");
    CHECK(Value::date(1980, 6, 1).render() == "1980-06-01");
    CHECK(Value::year(2003).render() == "2003");
    CHECK(Value::text("male").render() == "male");
}

TEST_CASE("text comparison is trimmed equality") {
    CHECK(compare(Value::text(" male "), Value::text("male"), CompareOp::Eq));
    CHECK(compare(Value::text("male"), Value::text("female"), CompareOp::Ne));
    CHECK_FALSE(compare(Value::text("a"), Value::text("b"), CompareOp::Lt));
    CHECK_FALSE(compare(Value::text("b"), Value::text("a"), CompareOp::Gt));
}

TEST_CASE("quantities compare only within one unit") {
    const auto cm = Value::quantity(206, "centimetre");
    CHECK(compare(cm, Value::quantity(200, "centimetre"), CompareOp::Gt));
    CHECK(compare(cm, Value::quantity(206, "centimetre"), CompareOp::Eq));
    CHECK_FALSE(compare(cm, Value::quantity(2.06, "metre"), CompareOp::Eq));
    CHECK_FALSE(compare(cm, Value::quantity(1, "metre"), CompareOp::Gt));
    CHECK_FALSE(compare(cm, Value::quantity(1, "metre"), CompareOp::Lt));
    CHECK(compare(cm, Value::quantity(2.06, "metre"), CompareOp::Ne));
    CHECK_FALSE(orderable(cm, Value::quantity(1, "metre")));
}

TEST_CASE("a year against a date uses the date's year") {
    const auto d = Value::date(1984, 12, 30);
    CHECK(compare(d, Value::year(1984), CompareOp::Eq));
    CHECK(compare(Value::year(1985), d, CompareOp::Gt));
    CHECK(compare(d, Value::date(1985, 1, 1), CompareOp::Lt));
    CHECK(orderable(d, Value::year(1)));
}

TEST_CASE("mixed kinds are incomparable") {
    for (auto op : {CompareOp::Eq, CompareOp::Ne, CompareOp::Lt, CompareOp::Gt}) {
        CHECK_FALSE(compare(Value::text("2003"), Value::year(2003), op));
        CHECK_FALSE(compare(Value::quantity(2003), Value::year(2003), op));
    }
}

TEST_CASE("units match up to a plural suffix") {
    CHECK(units_match("centimetre", "centimetres"));
    CHECK(units_match("inch", "inches"));
    CHECK_FALSE(units_match("metre", "centimetre"));
}

TEST_CASE("operator tokens") {
    CHECK(parse_compare_op("!=") == CompareOp::Ne);
    CHECK(compare_op_token(CompareOp::Lt) == "<");
    CHECK_FALSE(parse_compare_op("<="));
    CHECK(parse_value_kind("quantity") == ValueKind::Quantity);
    CHECK(parse_value_kind("string") == ValueKind::Text);
}

TEST_CASE("canonical order is total over kinds") {
    CHECK(canonical_less(Value::text("z"), Value::quantity(1)));
    CHECK(canonical_less(Value::quantity(1, "a"), Value::quantity(1, "b")));
    CHECK_FALSE(canonical_less(Value::year(3), Value::year(3)));
}
