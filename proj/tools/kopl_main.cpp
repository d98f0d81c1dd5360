// kopl: command-line front end for the KoPL engine.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kopl/errors.hpp"
#include "kopl/evaluation.hpp"
#include "kopl/fixtures.hpp"
#include "kopl/generator.hpp"
#include "kopl/interpreter.hpp"
#include "kopl/kb.hpp"
#include "kopl/program.hpp"
#include "kopl/sparql.hpp"
#include "kopl/templates.hpp"
#include "kopl/triples.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::string_view kBuiltinKb = "nba-mini";

kopl::KnowledgeBase load_kb(const std::string& source) {
    if (source == kBuiltinKb) return kopl::fixtures::nba_mini();
    return kopl::KnowledgeBase::load_file(source);
}

/// The argument itself, or the contents of the file it names.
std::string text_or_file(const std::string& arg) {
    std::error_code ec;
    if (arg.size() < 4096 && fs::is_regular_file(arg, ec)) {
        std::ifstream in(arg, std::ios::binary);
        if (!in) throw kopl::Error(kopl::ErrorCode::Io, "cannot open " + arg);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    return arg;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw kopl::Error(kopl::ErrorCode::Io, "cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

struct Options {
    std::string kb = std::string(kBuiltinKb);
    std::string program;
    std::string sparql;
    std::string config;
    std::string templates;
    std::string out;
    std::string gold;
    std::string predictions;
    std::string train_answers;
    std::string input;
    std::string mode = "answer";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> count;
    std::optional<unsigned> threads;
    std::size_t entities = 500;
    bool trace = false;
    bool json_out = false;
    bool choices_only = false;
    bool answer = false;
    bool stats = false;
};

int cmd_validate(const Options& o) {
    const auto kb = load_kb(o.kb);
    std::size_t rel_qualifiers = 0, attr_qualifiers = 0;
    for (const auto& r : kb.relations()) rel_qualifiers += r.qualifiers.size();
    for (const auto& e : kb.entities()) {
        for (const auto& f : e.attributes) attr_qualifiers += f.qualifiers.size();
    }
    if (o.json_out) {
        std::cout << json{{"valid", true},
                          {"concepts", kb.concepts().size()},
                          {"entities", kb.entities().size()},
                          {"relation_facts", kb.relations().size()},
                          {"attribute_facts", kb.attribute_fact_count()},
                          {"qualifiers", attr_qualifiers + rel_qualifiers}}
                         .dump(2)
                  << '\n';
    } else {
        std::cout << "ok: " << kb.concepts().size() << " concepts, " << kb.entities().size() << " entities, "
                  << kb.relations().size() << " relation facts, " << kb.attribute_fact_count() << " attribute facts, "
                  << attr_qualifiers + rel_qualifiers << " qualifiers\n";
    }
    return 0;
}

int cmd_run(const Options& o) {
    const auto kb = load_kb(o.kb);
    const auto program = kopl::parse_program(text_or_file(o.program));
    const kopl::Interpreter interpreter(kb);
    const auto result = interpreter.execute(program);
    if (o.json_out || o.trace) {
        json out{{"answer", result.rendered}};
        if (o.trace) out["trace"] = kopl::trace_to_json(kb, program, result.trace);
        std::cout << out.dump(2) << '\n';
    } else {
        std::cout << result.rendered << '\n';
    }
    return 0;
}

int cmd_compile(const Options& o) {
    const auto program = kopl::parse_program(text_or_file(o.program));
    kopl::typecheck(program);
    std::cout << kopl::sparql::render(kopl::sparql::compile(program)) << '\n';
    return 0;
}

int cmd_query(const Options& o) {
    const auto kb = load_kb(o.kb);
    const auto query = kopl::sparql::parse_sparql(text_or_file(o.sparql));
    const kopl::sparql::Evaluator evaluator(kb);
    if (o.answer) {
        const auto a = evaluator.answer(query);
        if (o.json_out) {
            std::cout << json{{"unique", a.unique}, {"answer", a.answer}, {"reason", a.reason}}.dump(2) << '\n';
        } else if (a.unique) {
            std::cout << a.answer << '\n';
        } else {
            throw kopl::Error(kopl::ErrorCode::NonUniqueAnswer, a.reason);
        }
        return 0;
    }
    const auto rs = evaluator.evaluate(query);
    if (rs.form == kopl::sparql::Form::Ask) {
        std::cout << (o.json_out ? json{{"boolean", rs.boolean}}.dump(2) : std::string(rs.boolean ? "true" : "false")) << '\n';
        return 0;
    }
    if (rs.form == kopl::sparql::Form::SelectCount) {
        std::cout << (o.json_out ? json{{"count", rs.count}}.dump(2) : std::to_string(rs.count)) << '\n';
        return 0;
    }
    const auto rows = evaluator.render_rows(rs);
    if (o.json_out) {
        json out{{"columns", rs.columns}, {"rows", rows}};
        std::cout << out.dump(2) << '\n';
        return 0;
    }
    for (std::size_t i = 0; i < rs.columns.size(); ++i) std::cout << (i ? "\t" : "") << '?' << rs.columns[i];
    std::cout << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "\t" : "") << row[i];
        std::cout << '\n';
    }
    return 0;
}

int cmd_generate(const Options& o) {
    const auto kb = load_kb(o.kb);
    auto config = o.config.empty() ? kopl::GeneratorConfig{} : kopl::GeneratorConfig::load_file(o.config);
    if (o.seed) config.seed = *o.seed;
    if (o.count) config.count = *o.count;
    if (o.threads) config.threads = *o.threads;
    const auto templates = o.templates.empty() ? kopl::TemplateBank::defaults() : kopl::TemplateBank::load_file(o.templates);
    const kopl::Generator generator(kb, config, templates);
    kopl::GenerationStats gstats;
    const auto instances = generator.generate(&gstats);
    Output out(o.out);
    for (const auto& inst : instances) out.stream() << kopl::instance_to_line(inst) << '\n';
    if (o.stats && !instances.empty()) {
        const auto s = kopl::report_statistics(instances);
        if (o.json_out) {
            std::cerr << json{{"config", config.to_json()}, {"statistics", s.to_json()}, {"generation", gstats.to_json()}}.dump(2) << '\n';
        } else {
            std::cerr << "config " << config.to_json().dump() << '\n' << s.to_text();
        }
    }
    return 0;
}

std::vector<kopl::Instance> load_instances(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw kopl::Error(kopl::ErrorCode::Io, "cannot open " + path);
    std::vector<kopl::Instance> out;
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (kopl::trim(line).empty()) continue;
        try {
            out.push_back(kopl::instance_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw kopl::Error(kopl::ErrorCode::MalformedInput, path + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const kopl::Error& e) {
            throw kopl::Error(e.code(), path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

int cmd_stats(const Options& o) {
    const auto s = kopl::report_statistics(load_instances(o.input));
    std::cout << (o.json_out ? s.to_json().dump(2) + "\n" : s.to_text());
    return 0;
}

int cmd_evaluate(const Options& o) {
    const auto kb = load_kb(o.kb);
    const auto gold = kopl::load_gold(o.gold);
    const auto predictions = kopl::load_predictions(o.predictions);
    std::optional<std::set<std::string>> train;
    if (!o.train_answers.empty()) train = kopl::load_answer_set(o.train_answers);
    const auto mode = o.mode == "program" ? kopl::PredictionMode::Program : kopl::PredictionMode::Answer;
    const auto report = kopl::evaluate_predictions(kb, gold, predictions, mode, o.choices_only, train ? &*train : nullptr);
    std::cout << (o.json_out ? report.to_json().dump(2) + "\n" : report.to_text());
    return 0;
}

int cmd_triples(const Options& o) {
    const auto kb = load_kb(o.kb);
    Output out(o.out);
    kopl::dump_triples(kb, out.stream());
    return 0;
}

int cmd_synth(const Options& o) {
    const auto doc = kopl::fixtures::expand_nba_mini(o.entities, o.seed.value_or(7));
    const auto kb = kopl::KnowledgeBase::from_json(doc);
    Output out(o.out);
    kb.serialize(out.stream());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"KoPL engine: knowledge base, program interpreter, SPARQL subset and dataset generator"};
    app.require_subcommand(1);
    Options o;

    auto kb_opt = [&](CLI::App* sub) {
        sub->add_option("--kb", o.kb, "knowledge base JSON file, or \"nba-mini\" for the built-in fixture")->capture_default_str();
    };
    auto json_flag = [&](CLI::App* sub) { sub->add_flag("--json", o.json_out, "JSON output"); };

    auto* validate = app.add_subcommand("validate", "load and check a knowledge base");
    kb_opt(validate);
    json_flag(validate);

    auto* run = app.add_subcommand("run", "execute a program (text or JSON form, inline or a file path)");
    kb_opt(run);
    run->add_option("--program", o.program, "program")->required();
    run->add_flag("--trace", o.trace, "print the per-step trace as JSON");
    json_flag(run);

    auto* compile = app.add_subcommand("compile", "translate a program to SPARQL");
    compile->add_option("--program", o.program, "program")->required();

    auto* query = app.add_subcommand("query", "evaluate a SPARQL query");
    kb_opt(query);
    query->add_option("--sparql", o.sparql, "query text or file path")->required();
    query->add_flag("--answer", o.answer, "apply the unique-answer layer");
    json_flag(query);

    auto* generate = app.add_subcommand("generate", "generate question instances as JSON lines");
    kb_opt(generate);
    generate->add_option("--config", o.config, "generator config JSON");
    generate->add_option("--templates", o.templates, "predicate template bank JSON");
    generate->add_option("--seed", o.seed, "override config seed");
    generate->add_option("--count", o.count, "override config count");
    generate->add_option("--threads", o.threads, "worker threads (output is identical for any value)");
    generate->add_option("--out", o.out, "output file (default stdout)");
    generate->add_flag("--stats", o.stats, "print statistics to stderr");
    json_flag(generate);

    auto* evaluate = app.add_subcommand("evaluate", "score predictions against gold questions");
    kb_opt(evaluate);
    evaluate->add_option("--gold", o.gold, "gold instances (JSON lines or JSON array)")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--predictions", o.predictions, "one prediction per line")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--mode", o.mode, "prediction kind")->check(CLI::IsMember({"answer", "program"}))->capture_default_str();
    evaluate->add_flag("--choices-only", o.choices_only, "predictions outside the 10 choices count as wrong");
    evaluate->add_option("--train-answers", o.train_answers, "training answers for the Zero-shot category")->check(CLI::ExistingFile);
    json_flag(evaluate);

    auto* stats = app.add_subcommand("stats", "summarize a generated instance file");
    stats->add_option("--in", o.input, "instance file")->required()->check(CLI::ExistingFile);
    json_flag(stats);

    auto* triples = app.add_subcommand("triples", "dump the reified triple view");
    kb_opt(triples);
    triples->add_option("--out", o.out, "output file (default stdout)");

    auto* synth = app.add_subcommand("synth", "write a synthetic knowledge base expanded from nba-mini");
    synth->add_option("--entities", o.entities, "entity count")->capture_default_str();
    synth->add_option("--seed", o.seed, "expansion seed (default 7)");
    synth->add_option("--out", o.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*validate) return cmd_validate(o);
        if (*run) return cmd_run(o);
        if (*compile) return cmd_compile(o);
        if (*query) return cmd_query(o);
        if (*generate) return cmd_generate(o);
        if (*evaluate) return cmd_evaluate(o);
        if (*stats) return cmd_stats(o);
        if (*triples) return cmd_triples(o);
        if (*synth) return cmd_synth(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
