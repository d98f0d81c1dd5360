// Acceptance run: one PASS/FAIL/SKIP/REPORT line per criterion; exit status 1 on any FAIL.
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "kopl/errors.hpp"
#include "kopl/fixtures.hpp"
#include "kopl/generator.hpp"
#include "kopl/interpreter.hpp"
#include "kopl/sparql.hpp"
#include "conformance_cases.hpp"
#include "harness.hpp"
#include "oracle.hpp"

using namespace kopl;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const char* status, int id, const std::string& name, const std::string& detail) {
    std::cout << status << " [" << id << "] " << name << ": " << detail << std::endl;
    if (std::string(status) == "FAIL") ++failures;
}

void verdict(bool ok, int id, const std::string& name, const std::string& detail) {
    report(ok ? "PASS" : "FAIL", id, name, detail);
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string execute_class(const Interpreter& interpreter, const Program& p) {
    try {
        return "=" + interpreter.run(p);
    } catch (const Error& e) {
        return "!" + std::string(error_code_name(e.code()));
    }
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GeneratorConfig config(std::uint64_t seed, std::size_t count, unsigned threads = 1) {
    GeneratorConfig c;
    c.seed = seed;
    c.count = count;
    c.threads = threads;
    return c;
}

} // namespace

int main() {
    const auto mini = fixtures::nba_mini();
    const auto big_json = fixtures::expand_nba_mini(500, 7);
    const auto big = KnowledgeBase::from_json(big_json);
    const Interpreter interpreter(big);
    const sparql::Evaluator evaluator(big);

    // 1. the interpreter, the SPARQL channel and the generated answer agree
    std::vector<Instance> instances;
    {
        const auto start = Clock::now();
        GenerationStats stats;
        instances = Generator(big, config(2024, 1000)).generate(&stats);
        std::size_t agree = 0;
        for (const auto& inst : instances) {
            const auto a = evaluator.answer(sparql::parse_sparql(inst.sparql));
            if (interpreter.run(inst.program) == inst.answer && a.unique && a.answer == inst.answer) ++agree;
        }
        const double secs = seconds_since(start);
        std::ostringstream d;
        d << agree << "/" << instances.size() << " instances agree on all three channels in " << secs << " s (limit 120 s); "
          << stats.channel_mismatches << " candidates discarded for channel disagreement";
        verdict(instances.size() == 1000 && agree == 1000 && secs < 120.0, 1, "tri-channel equivalence", d.str());
    }

    // 2. brute-force evaluator versus interpreter on random programs
    {
        testing::RandomPrograms gen(big, 77);
        std::size_t same = 0;
        std::map<std::string, std::size_t> classes;
        std::string first_diff;
        for (int i = 0; i < 1000; ++i) {
            const auto p = gen.next();
            const auto mine = execute_class(interpreter, p);
            const auto theirs = testing::run_with_oracle(big, p);
            ++classes[mine[0] == '=' ? "answer" : mine.substr(1)];
            if (mine == theirs) ++same;
            else if (first_diff.empty()) first_diff = serialize(p) + " -> " + mine + " vs " + theirs;
        }
        std::ostringstream d;
        d << same << "/1000 identical outcomes;";
        for (const auto& [k, n] : classes) d << " " << k << "=" << n;
        if (!first_diff.empty()) d << "; first difference: " << first_diff;
        verdict(same == 1000, 2, "brute-force oracle equivalence", d.str());
    }

    // 3. round trips
    {
        const auto many = Generator(big, config(99, 10000, std::max(1u, std::thread::hardware_concurrency()))).generate();
        std::size_t text_ok = 0, sparql_ok = 0;
        for (const auto& inst : many) {
            if (parse_text(serialize(inst.program)) == inst.program) ++text_ok;
            const auto q = sparql::parse_sparql(inst.sparql);
            if (sparql::render(q) == inst.sparql && sparql::parse_sparql(sparql::render(q)) == q) ++sparql_ok;
        }
        bool kb_ok = true;
        for (const auto* kb : {&mini, &big}) {
            std::stringstream a;
            kb->serialize(a);
            const auto again = KnowledgeBase::load(a);
            std::stringstream b;
            again.serialize(b);
            kb_ok = kb_ok && again == *kb && a.str() == b.str();
        }
        std::ostringstream d;
        d << "program text " << text_ok << "/" << many.size() << ", SPARQL fixpoint " << sparql_ok << "/" << many.size()
          << ", KB load/serialize " << (kb_ok ? "identical" : "differs");
        verdict(many.size() == 10000 && text_ok == many.size() && sparql_ok == many.size() && kb_ok, 3, "round trips", d.str());
    }

    // 4. choices
    {
        std::size_t ok = 0, verify = 0;
        for (const auto& inst : instances) {
            const auto& c = inst.choices;
            bool good = c.size() == 10 && std::count(c.begin(), c.end(), inst.answer) == 1;
            if (inst.meta.is_verify) {
                ++verify;
                good = good && std::count(c.begin(), c.end(), "yes") == 1 && std::count(c.begin(), c.end(), "no") == 1 &&
                       std::count(c.begin(), c.end(), "unknown") == 8;
            } else {
                // distractors are distinct; only the "unknown" filler may repeat
                std::map<std::string, int> seen;
                for (const auto& x : c) ++seen[x];
                for (const auto& [x, n] : seen) good = good && (n == 1 || x == "unknown");
            }
            if (good) ++ok;
        }
        std::ostringstream d;
        d << ok << "/" << instances.size() << " instances with 10 valid choices (" << verify << " verify questions)";
        verdict(ok == instances.size(), 4, "choices", d.str());
    }

    // 5. unique answers under the brute-force evaluator, and the ambiguous probe is rejected
    {
        std::size_t unique = 0;
        for (const auto& inst : instances) {
            const auto o = testing::oracle_execute(big, inst.program);
            if (o.unique() && o.answer() == inst.answer) ++unique;
        }
        const Generator gen(mini, GeneratorConfig{});
        Candidate probe;
        probe.root = {Function::QueryAttr, {"population"}, {{Function::Find, {"Akron"}, {}}}};
        probe.question = "What is the population of Akron?";
        probe.question_type = "QueryAttribute";
        Rng rng(1);
        std::string reason;
        const bool rejected = !gen.finalize(probe, rng, &reason);
        const auto probe_oracle = testing::oracle_execute(mini, Program::from_tree(probe.root));
        std::ostringstream d;
        d << unique << "/" << instances.size() << " with answer-set cardinality 1; population probe "
          << (rejected ? "rejected (" + reason + ")" : "accepted") << " with " << probe_oracle.answers.size() << " candidate answers";
        verdict(unique == instances.size() && rejected && probe_oracle.answers.size() == 2, 5, "answer uniqueness", d.str());
    }

    // 6. hand-checked cases per function on nba-mini
    {
        const Interpreter mini_interpreter(mini);
        std::map<std::string, int> passed;
        std::size_t ok = 0;
        for (const auto& c : testing::conformance_cases()) {
            if (testing::run_with_interpreter(mini_interpreter, parse_text(c.program)) == c.expect) {
                ++ok;
                ++passed[c.function];
            }
        }
        int weakest = 1 << 30;
        for (auto f : all_functions()) weakest = std::min(weakest, passed[std::string(function_name(f))]);
        std::ostringstream d;
        d << ok << "/" << testing::conformance_cases().size() << " cases pass; fewest passing cases for one function: " << weakest;
        verdict(ok == testing::conformance_cases().size() && weakest >= 3, 6, "function conformance", d.str());
    }

    // 7. determinism and the golden file
    {
        std::ostringstream a, b;
        Generator(big, config(5, 1000)).write_jsonl(a);
        Generator(big, config(5, 1000, 4)).write_jsonl(b);
        std::ostringstream g;
        Generator(mini, config(7, 20)).write_jsonl(g);
        const bool golden = g.str() == slurp(fs::path(KOPL_TEST_DATA) / "golden_nba_mini_seed7.jsonl");
        std::ostringstream d;
        d << "two runs " << (a.str() == b.str() ? "byte-identical" : "differ") << " (" << a.str().size() << " bytes); golden file "
          << (golden ? "matches" : "differs");
        verdict(a.str() == b.str() && golden, 7, "deterministic generation", d.str());
    }

    // 8. published benchmark programs on their KB (optional)
    {
        const char* env = std::getenv("KOPL_BENCHMARK_DIR");
        const fs::path dir = env ? fs::path(env) : fs::path(KOPL_TEST_DATA) / "benchmark";
        fs::path gold = dir / "val.json";
        if (!fs::exists(gold)) gold = dir / "train.json";
        if (!fs::exists(dir / "kb.json") || !fs::exists(gold)) {
            report("SKIP", 8, "benchmark gold programs", "no kb.json with val.json or train.json under " + dir.string());
        } else {
            const auto kb = KnowledgeBase::load_file(dir / "kb.json");
            const Interpreter kq(kb);
            std::ifstream in(gold);
            const auto items = nlohmann::json::parse(in);
            std::size_t total = 0, match = 0;
            std::map<std::string, std::size_t> misses;
            for (const auto& item : items) {
                if (!item.contains("program") || !item.contains("answer")) continue;
                ++total;
                std::string got;
                try {
                    got = "=" + kq.run(program_from_json(item["program"]));
                } catch (const Error& e) {
                    got = "!" + std::string(error_code_name(e.code()));
                }
                if (got == "=" + item["answer"].get<std::string>()) ++match;
                else ++misses[got[0] == '!' ? got.substr(1) : "wrong answer"];
            }
            const double rate = total ? static_cast<double>(match) / static_cast<double>(total) : 0.0;
            std::ostringstream d;
            d << match << "/" << total << " gold programs reproduce the answer (" << 100.0 * rate << "%, need 95%)";
            for (const auto& [k, n] : misses) d << "; " << k << "=" << n;
            verdict(total > 0 && rate >= 0.95, 8, "benchmark gold programs", d.str());
        }
    }

    // 9. dataset statistics (report only)
    {
        const auto s = report_statistics(instances);
        std::ostringstream d;
        d << "avg program calls " << s.avg_program_calls << " (reference 4.79), avg question tokens " << s.avg_question_tokens
          << ", avg SPARQL tokens " << s.avg_sparql_tokens << ", padded choices " << s.padded << "/" << s.count << "; types:";
        for (const auto& [t, n] : s.question_types) d << " " << t << "=" << n;
        report("REPORT", 9, "dataset statistics", d.str());
    }

    std::cout << (failures ? "acceptance: FAILED (" + std::to_string(failures) + ")" : std::string("acceptance: all criteria passed"))
              << std::endl;
    return failures ? 1 : 0;
}
