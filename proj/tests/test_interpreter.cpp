#include "doctest.h"

#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "kopl/errors.hpp"
#include "kopl/fixtures.hpp"
#include "kopl/interpreter.hpp"
#include "conformance_cases.hpp"
#include "harness.hpp"
#include "oracle.hpp"

using namespace kopl;

namespace {

const KnowledgeBase& mini() {
    static const auto kb = fixtures::nba_mini();
    return kb;
}

ErrorCode run_error(const std::string& text) {
    try {
        Interpreter(mini()).execute(parse_text(text));
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Io;
}

} // namespace

TEST_CASE("conformance cases cover every function at least three times") {
    std::map<std::string, int> per;
    for (const auto& c : testing::conformance_cases()) ++per[c.function];
    CHECK(per.size() == kFunctionCount);
    for (auto f : all_functions()) {
        CAPTURE(function_name(f));
        CHECK(per[std::string(function_name(f))] >= 3);
    }
}

TEST_CASE("conformance cases on nba-mini") {
    const Interpreter interpreter(mini());
    for (const auto& c : testing::conformance_cases()) {
        const std::string text = c.program;
        CAPTURE(text);
        const auto program = parse_text(c.program);
        CHECK(program[program.size() - 1].function == program.root().function);
        CHECK(testing::run_with_interpreter(interpreter, program) == c.expect);
        // the brute-force evaluator agrees on every answer and error
        if (c.expect[0] != '{') CHECK(testing::run_with_oracle(mini(), program) == c.expect);
    }
}

TEST_CASE("the drafted-by program executes with a trace") {
    const Interpreter interpreter(mini());
    const auto p = parse_text("Find <arg> LeBron James <func> Relate <arg> drafted by <arg> forward <func> FilterConcept <arg> team "
                              "<func> QueryName");
    const auto r = interpreter.execute(p);
    CHECK(r.rendered == "Cleveland Cavaliers");
    CHECK(r.answer.kind == DataKind::String);
    REQUIRE(r.trace.size() == 4);
    CHECK(r.trace[1].has_facts());
    CHECK(r.trace[1].facts.size() == 1);
    CHECK_FALSE(r.trace[2].has_facts());
    const auto j = trace_to_json(mini(), p, r.trace);
    REQUIRE(j.is_array());
    CHECK(j.size() == 4);
    CHECK(j[1]["function"] == "Relate");
    CHECK(j[1]["size"] == 1);

    // the backward direction finds nothing on this KB
    CHECK(run_error("Find <arg> LeBron James <func> Relate <arg> drafted by <arg> backward <func> FilterConcept <arg> team "
                    "<func> QueryName") == ErrorCode::NonUniqueAnswer);
}

TEST_CASE("errors carry the failing call index") {
    try {
        Interpreter(mini()).execute(parse_text("FindAll <func> FilterConcept <arg> person <func> QueryAttr <arg> height"));
        FAIL("expected NonUniqueEntity");
    } catch (const CallError& e) {
        CHECK(e.code() == ErrorCode::NonUniqueEntity);
        CHECK(e.call_index() == 2);
    }
    CHECK(run_error("FindAll") == ErrorCode::KindMismatch);
}

TEST_CASE("the population probe is rejected") {
    CHECK(run_error("Find <arg> Akron <func> QueryAttr <arg> population") == ErrorCode::NonUniqueAnswer);
    CHECK(Interpreter(mini()).run(parse_text("Find <arg> Akron <func> QueryAttrUnderCondition <arg> population <arg> point in time "
                                             "<arg> 2010")) == "199110");
}

TEST_CASE("answers render canonically") {
    CHECK(Answer::count(3).render() == "3");
    CHECK(Answer::truth(true).render() == "yes");
    CHECK(Answer::truth(false).render() == "no");
    CHECK(Answer::of_value(Value::quantity(206, "centimetre")).render() == "206 centimetre");
    CHECK(Answer::predicate("father").render() == "father");
}

TEST_CASE("select_extreme uses the most populated unit group") {
    const auto& kb = mini();
    const auto a = kb.entities_named("Akron")[0];
    const auto c = kb.entities_named("Cleveland")[0];
    const auto l = kb.entities_named("LeBron James")[0];
    std::vector<SelectCandidate> cands{{a, {Value::quantity(5, "metre")}},
                                       {c, {Value::quantity(3, "metre")}},
                                       {l, {Value::quantity(900, "centimetre")}}};
    CHECK(select_extreme(kb, cands, true) == a);
    CHECK(select_extreme(kb, cands, false) == c);
    std::vector<std::string> notes;
    std::vector<SelectCandidate> mixed{{a, {Value::quantity(1), Value::quantity(2)}}, {c, {}}, {l, {Value::text("x")}}};
    CHECK_THROWS_AS(select_extreme(kb, mixed, true, &notes), Error);
    CHECK(notes.size() == 3);
    std::vector<SelectCandidate> tie{{a, {Value::year(1990)}}, {c, {Value::date(1990, 5, 1)}}};
    CHECK_THROWS_AS(select_extreme(kb, tie, true), Error);
}

TEST_CASE("interpreter and brute-force evaluator agree on random programs") {
    const auto kb = KnowledgeBase::from_json(fixtures::expand_nba_mini(120, 5));
    const Interpreter interpreter(kb);
    testing::RandomPrograms gen(kb, 99);
    std::set<std::string> classes;
    for (int i = 0; i < 300; ++i) {
        const auto p = gen.next();
        CAPTURE(serialize(p));
        const auto mine = testing::run_with_interpreter(interpreter, p);
        const auto theirs = testing::run_with_oracle(kb, p);
        CHECK(mine == theirs);
        classes.insert(mine[0] == '!' ? mine : "=");
    }
    CHECK(classes.count("="));
    CHECK(classes.count("!NonUniqueAnswer"));
}
