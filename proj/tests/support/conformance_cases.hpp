#pragma once

#include <string>
#include <vector>

namespace kopl::testing {

/// Hand-checked behaviour of one function on nba-mini. `expect` is one of
///   "=answer"          rendered root answer
///   "!Code"            error class raised during execution
///   "{a; b}"           distinct entity names of the last call, sorted
struct ConformanceCase {
    const char* function;
    const char* program;
    const char* expect;
};

inline const std::vector<ConformanceCase>& conformance_cases() {
    static const std::vector<ConformanceCase> cases = {
        {"FindAll", "FindAll", "{Akron; Cleveland; Cleveland Cavaliers; LeBron James; LeBron James Jr.}"},
        {"FindAll", "FindAll <func> Count", "=5"},
        {"FindAll", "FindAll <func> QueryName", "!NonUniqueAnswer"},

        {"Find", "Find <arg> LeBron James", "{LeBron James}"},
        {"Find", "Find <arg> Nobody", "{}"},
        {"Find", "Find <arg> Akron <func> Count", "=1"},

        {"FilterConcept", "FindAll <func> FilterConcept <arg> person", "{LeBron James; LeBron James Jr.}"},
        {"FilterConcept", "FindAll <func> FilterConcept <arg> team", "{Cleveland Cavaliers}"},
        {"FilterConcept", "FindAll <func> FilterConcept <arg> athlete <func> Count", "=2"},
        {"FilterConcept", "Find <arg> LeBron James <func> FilterConcept <arg> city", "{}"},

        {"FilterStr", "FindAll <func> FilterStr <arg> sex or gender <arg> male", "{LeBron James; LeBron James Jr.}"},
        {"FilterStr", "FindAll <func> FilterStr <arg> sex or gender <arg> female", "{}"},
        {"FilterStr", "FindAll <func> FilterStr <arg> height <arg> male", "{}"},

        {"FilterNum", "FindAll <func> FilterNum <arg> height <arg> 200 centimetre <arg> >", "{LeBron James}"},
        {"FilterNum", "FindAll <func> FilterNum <arg> height <arg> 190 centimetres <arg> <", "{LeBron James Jr.}"},
        {"FilterNum", "FindAll <func> FilterNum <arg> height <arg> 206 metre <arg> =", "{}"},
        {"FilterNum", "FindAll <func> FilterNum <arg> height <arg> 206 metre <arg> !=", "{LeBron James; LeBron James Jr.}"},
        {"FilterNum", "FindAll <func> FilterNum <arg> population <arg> 200,000 <arg> <", "{Akron}"},

        {"FilterYear", "FindAll <func> FilterYear <arg> inception <arg> 1970 <arg> =", "{Cleveland Cavaliers}"},
        {"FilterYear", "FindAll <func> FilterYear <arg> date of birth <arg> 1990 <arg> <", "{LeBron James}"},
        {"FilterYear", "FindAll <func> FilterYear <arg> date of birth <arg> 2004 <arg> =", "{LeBron James Jr.}"},

        {"FilterDate", "FindAll <func> FilterDate <arg> date of birth <arg> 1984-12-30 <arg> =", "{LeBron James}"},
        {"FilterDate", "FindAll <func> FilterDate <arg> date of birth <arg> 2000-01-01 <arg> >", "{LeBron James Jr.}"},
        {"FilterDate", "FindAll <func> FilterDate <arg> date of birth <arg> 1984-12-30 <arg> !=", "{LeBron James Jr.}"},

        {"QFilterStr",
         "FindAll <func> FilterNum <arg> population <arg> 100000 <arg> > <func> QFilterStr <arg> determination method <arg> census",
         "{Akron}"},
        {"QFilterStr",
         "FindAll <func> FilterNum <arg> population <arg> 100000 <arg> > <func> QFilterStr <arg> determination method <arg> survey",
         "{}"},
        {"QFilterStr",
         "Find <arg> LeBron James <func> Relate <arg> drafted by <arg> forward <func> QFilterStr <arg> point in time <arg> 2003",
         "{}"},
        {"QFilterStr",
         "FindAll <func> FilterNum <arg> population <arg> 100000 <arg> > <func> QFilterStr <arg> determination method <arg> estimate "
         "<func> QueryAttrQualifier <arg> population <arg> 217000 <arg> point in time",
         "=1990"},

        {"QFilterNum",
         "Find <arg> Akron <func> FilterNum <arg> population <arg> 0 <arg> > <func> QFilterNum <arg> point in time <arg> 2010 <arg> =",
         "{}"},
        {"QFilterNum",
         "Find <arg> Akron <func> FilterNum <arg> population <arg> 0 <arg> > <func> QFilterNum <arg> point in time <arg> 2010 <arg> !=",
         "{}"},
        {"QFilterNum", "Find <arg> Akron <func> QFilterNum <arg> point in time <arg> 2010 <arg> =", "!MissingFacts"},

        {"QFilterYear",
         "FindAll <func> FilterNum <arg> population <arg> 0 <arg> > <func> QFilterYear <arg> point in time <arg> 2000 <arg> >",
         "{Akron}"},
        {"QFilterYear",
         "Find <arg> LeBron James <func> Relate <arg> drafted by <arg> forward <func> QFilterYear <arg> point in time <arg> 2003 <arg> =",
         "{Cleveland Cavaliers}"},
        {"QFilterYear",
         "Find <arg> LeBron James <func> Relate <arg> drafted by <arg> forward <func> QFilterYear <arg> point in time <arg> 2003 <arg> <",
         "{}"},
        {"QFilterYear",
         "Find <arg> LeBron James Jr. <func> FilterNum <arg> height <arg> 0 centimetre <arg> > <func> QFilterYear <arg> point in time "
         "<arg> 2023 <arg> =",
         "{LeBron James Jr.}"},

        {"QFilterDate",
         "FindAll <func> FilterNum <arg> height <arg> 100 centimetre <arg> > <func> QFilterDate <arg> point in time <arg> 2023-06-01 "
         "<arg> =",
         "{LeBron James Jr.}"},
        {"QFilterDate",
         "FindAll <func> FilterNum <arg> height <arg> 100 centimetre <arg> > <func> QFilterDate <arg> point in time <arg> 2023-01-01 "
         "<arg> <",
         "{}"},
        {"QFilterDate",
         "FindAll <func> FilterNum <arg> population <arg> 0 <arg> > <func> QFilterDate <arg> point in time <arg> 2000-01-01 <arg> >",
         "{Akron}"},

        {"Relate", "Find <arg> LeBron James <func> Relate <arg> drafted by <arg> forward", "{Cleveland Cavaliers}"},
        {"Relate", "Find <arg> Cleveland Cavaliers <func> Relate <arg> drafted by <arg> backward", "{LeBron James}"},
        {"Relate", "Find <arg> LeBron James <func> Relate <arg> father <arg> backward", "{LeBron James Jr.}"},
        {"Relate", "Find <arg> LeBron James <func> Relate <arg> drafted by <arg> backward", "{}"},

        {"And",
         "FindAll <func> FilterConcept <arg> person <func> FindAll <func> FilterStr <arg> sex or gender <arg> male <func> And",
         "{LeBron James; LeBron James Jr.}"},
        {"And", "FindAll <func> FilterConcept <arg> city <func> Find <arg> Akron <func> And", "{Akron}"},
        {"And", "Find <arg> LeBron James <func> Find <arg> Akron <func> And", "{}"},

        {"Or", "Find <arg> Akron <func> Find <arg> Cleveland <func> Or", "{Akron; Cleveland}"},
        {"Or", "Find <arg> Akron <func> FindAll <func> FilterConcept <arg> city <func> Or <func> Count", "=2"},
        {"Or", "Find <arg> Nobody <func> Find <arg> Nobody <func> Or", "{}"},

        {"QueryName", "Find <arg> LeBron James <func> Relate <arg> drafted by <arg> forward <func> QueryName", "=Cleveland Cavaliers"},
        {"QueryName", "FindAll <func> FilterConcept <arg> city <func> QueryName", "!NonUniqueAnswer"},
        {"QueryName", "Find <arg> Nobody <func> QueryName", "!NonUniqueAnswer"},

        {"Count", "FindAll <func> FilterConcept <arg> person <func> Count", "=2"},
        {"Count", "FindAll <func> FilterNum <arg> population <arg> 0 <arg> > <func> Count", "=1"},
        {"Count", "Find <arg> Nobody <func> Count", "=0"},

        {"QueryAttr", "Find <arg> LeBron James <func> QueryAttr <arg> height", "=206 centimetre"},
        {"QueryAttr", "Find <arg> Akron <func> QueryAttr <arg> population", "!NonUniqueAnswer"},
        {"QueryAttr", "Find <arg> Cleveland <func> QueryAttr <arg> population", "!NonUniqueAnswer"},
        {"QueryAttr", "FindAll <func> FilterConcept <arg> person <func> QueryAttr <arg> height", "!NonUniqueEntity"},
        {"QueryAttr", "Find <arg> Cleveland Cavaliers <func> QueryAttr <arg> social media followers", "=3500000"},

        {"QueryAttrUnderCondition", "Find <arg> Akron <func> QueryAttrUnderCondition <arg> population <arg> point in time <arg> 2010",
         "=199110"},
        {"QueryAttrUnderCondition",
         "Find <arg> Akron <func> QueryAttrUnderCondition <arg> population <arg> determination method <arg> estimate", "=217000"},
        {"QueryAttrUnderCondition", "Find <arg> Akron <func> QueryAttrUnderCondition <arg> population <arg> point in time <arg> 2000",
         "!NonUniqueAnswer"},
        {"QueryAttrUnderCondition",
         "Find <arg> LeBron James Jr. <func> QueryAttrUnderCondition <arg> height <arg> point in time <arg> 2023", "=188 centimetre"},

        {"QueryRelation", "Find <arg> LeBron James <func> Find <arg> Cleveland Cavaliers <func> QueryRelation", "=drafted by"},
        {"QueryRelation", "Find <arg> Cleveland Cavaliers <func> Find <arg> LeBron James <func> QueryRelation", "!NonUniqueAnswer"},
        {"QueryRelation", "Find <arg> LeBron James Jr. <func> Find <arg> LeBron James <func> QueryRelation", "=father"},
        {"QueryRelation", "FindAll <func> FilterConcept <arg> city <func> Find <arg> LeBron James <func> QueryRelation",
         "!NonUniqueEntity"},

        {"SelectBetween", "Find <arg> LeBron James <func> Find <arg> LeBron James Jr. <func> SelectBetween <arg> height <arg> greater",
         "=LeBron James"},
        {"SelectBetween", "Find <arg> LeBron James <func> Find <arg> LeBron James Jr. <func> SelectBetween <arg> height <arg> less",
         "=LeBron James Jr."},
        {"SelectBetween", "Find <arg> LeBron James <func> Find <arg> Akron <func> SelectBetween <arg> height <arg> greater",
         "=LeBron James"},
        {"SelectBetween", "Find <arg> LeBron James <func> Find <arg> LeBron James <func> SelectBetween <arg> height <arg> less",
         "=LeBron James"},

        {"SelectAmong", "FindAll <func> FilterConcept <arg> person <func> SelectAmong <arg> height <arg> largest", "=LeBron James"},
        {"SelectAmong", "FindAll <func> FilterConcept <arg> person <func> SelectAmong <arg> date of birth <arg> smallest",
         "=LeBron James"},
        {"SelectAmong", "FindAll <func> SelectAmong <arg> population <arg> largest", "!NonUniqueAnswer"},
        {"SelectAmong", "FindAll <func> SelectAmong <arg> sex or gender <arg> largest", "!NonUniqueAnswer"},

        {"VerifyStr", "Find <arg> LeBron James <func> QueryAttr <arg> sex or gender <func> VerifyStr <arg> male", "=yes"},
        {"VerifyStr", "Find <arg> LeBron James <func> QueryAttr <arg> sex or gender <func> VerifyStr <arg> female", "=no"},
        {"VerifyStr", "Find <arg> LeBron James <func> QueryAttr <arg> height <func> VerifyStr <arg> male", "=no"},

        {"VerifyNum",
         "Find <arg> LeBron James Jr. <func> Relate <arg> father <arg> forward <func> QueryAttr <arg> height <func> VerifyNum <arg> "
         "180 centimetre <arg> >",
         "=yes"},
        {"VerifyNum", "Find <arg> LeBron James <func> QueryAttr <arg> height <func> VerifyNum <arg> 206 centimetres <arg> =", "=yes"},
        {"VerifyNum", "Find <arg> LeBron James <func> QueryAttr <arg> height <func> VerifyNum <arg> 2.06 metre <arg> =", "=no"},
        {"VerifyNum", "Find <arg> LeBron James <func> QueryAttr <arg> height <func> VerifyNum <arg> 2 metre <arg> !=", "=yes"},

        {"VerifyYear", "Find <arg> Cleveland Cavaliers <func> QueryAttr <arg> inception <func> VerifyYear <arg> 1970 <arg> =", "=yes"},
        {"VerifyYear", "Find <arg> Cleveland Cavaliers <func> QueryAttr <arg> inception <func> VerifyYear <arg> 1980 <arg> <", "=yes"},
        {"VerifyYear", "Find <arg> LeBron James <func> QueryAttr <arg> date of birth <func> VerifyYear <arg> 1984 <arg> =", "=yes"},

        {"VerifyDate", "Find <arg> LeBron James <func> QueryAttr <arg> date of birth <func> VerifyDate <arg> 1984-12-30 <arg> =",
         "=yes"},
        {"VerifyDate", "Find <arg> LeBron James <func> QueryAttr <arg> date of birth <func> VerifyDate <arg> 1985-01-01 <arg> >",
         "=no"},
        {"VerifyDate", "Find <arg> Cleveland Cavaliers <func> QueryAttr <arg> inception <func> VerifyDate <arg> 1969-12-31 <arg> >",
         "=yes"},

        {"QueryAttrQualifier", "Find <arg> Akron <func> QueryAttrQualifier <arg> population <arg> 199,110 <arg> point in time", "=2010"},
        {"QueryAttrQualifier", "Find <arg> Akron <func> QueryAttrQualifier <arg> population <arg> 217000 <arg> determination method",
         "=estimate"},
        {"QueryAttrQualifier", "Find <arg> Akron <func> QueryAttrQualifier <arg> population <arg> 5 <arg> point in time",
         "!FactNotFound"},
        {"QueryAttrQualifier", "Find <arg> LeBron James <func> QueryAttrQualifier <arg> height <arg> 206 centimetre <arg> point in time",
         "!NonUniqueAnswer"},

        {"QueryRelationQualifier",
         "Find <arg> LeBron James <func> Find <arg> Cleveland Cavaliers <func> QueryRelationQualifier <arg> drafted by <arg> point in time",
         "=2003"},
        {"QueryRelationQualifier",
         "Find <arg> LeBron James <func> Find <arg> Akron <func> QueryRelationQualifier <arg> place of birth <arg> point in time",
         "!NonUniqueAnswer"},
        {"QueryRelationQualifier",
         "Find <arg> Cleveland Cavaliers <func> Find <arg> LeBron James <func> QueryRelationQualifier <arg> drafted by <arg> point in time",
         "!FactNotFound"},
    };
    return cases;
}

} // namespace kopl::testing
