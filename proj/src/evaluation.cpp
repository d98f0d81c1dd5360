#include "kopl/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kopl/errors.hpp"
#include "kopl/interpreter.hpp"

namespace kopl {

using nlohmann::json;

std::vector<std::string> question_categories(const Program& program, const std::string& answer,
                                             const std::set<std::string>* train_answers) {
    bool relate = false, qualifier = false, logical = false;
    for (const auto& c : program.calls()) {
        const auto f = c.function;
        relate |= f == Function::Relate;
        qualifier |= is_qualifier_filter(f) || f == Function::QueryAttrUnderCondition || f == Function::QueryAttrQualifier ||
                     f == Function::QueryRelationQualifier;
        logical |= f == Function::And || f == Function::Or;
    }
    const auto root = program.root().function;
    std::vector<std::string> out;
    if (relate) out.emplace_back("Multi-hop");
    if (qualifier) out.emplace_back("Qualifier");
    if (root == Function::SelectAmong || root == Function::SelectBetween) out.emplace_back("Comparison");
    if (logical) out.emplace_back("Logical");
    if (root == Function::Count) out.emplace_back("Count");
    if (is_verify(root)) out.emplace_back("Verify");
    if (train_answers && !train_answers->contains(answer)) out.emplace_back("Zero-shot");
    return out;
}

namespace {

std::string read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool starts_with_bracket(const std::string& text) {
    const auto pos = text.find_first_not_of(" \t\r\n");
    return pos != std::string::npos && text[pos] == '[';
}

/// Parsed JSON documents with their 1-based line numbers (0 for a whole-file array).
std::vector<std::pair<std::size_t, json>> json_records(const std::filesystem::path& path) {
    const auto text = read_all(path);
    std::vector<std::pair<std::size_t, json>> out;
    try {
        if (starts_with_bracket(text)) {
            for (auto& item : json::parse(text)) out.emplace_back(0, std::move(item));
            return out;
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, path.string() + ": " + e.what());
    }
    std::istringstream in(text);
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            out.emplace_back(line_no, json::parse(line));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::MalformedInput, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::string where(const std::filesystem::path& path, std::size_t line, std::size_t item) {
    return path.string() + (line ? ":" + std::to_string(line) : " item " + std::to_string(item));
}

} // namespace

std::vector<GoldItem> load_gold(const std::filesystem::path& path) {
    std::vector<GoldItem> out;
    std::size_t item = 0;
    for (const auto& [line, j] : json_records(path)) {
        try {
            const auto& p = j.at("program");
            GoldItem g{p.is_string() ? parse_program(p.get<std::string>()) : program_from_json(p), j.at("answer").get<std::string>(),
                       j.value("choices", std::vector<std::string>{})};
            out.push_back(std::move(g));
        } catch (const Error& e) {
            throw Error(e.code(), where(path, line, item) + ": " + e.what());
        } catch (const json::exception& e) {
            throw Error(ErrorCode::MalformedInput, where(path, line, item) + ": " + e.what());
        }
        ++item;
    }
    return out;
}

std::set<std::string> load_answer_set(const std::filesystem::path& path) {
    const auto text = read_all(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    std::set<std::string> out;
    if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
        for (const auto& [line, j] : json_records(path)) {
            if (!j.is_object() || !j.contains("answer")) {
                throw Error(ErrorCode::MalformedInput, where(path, line, out.size()) + ": record without an answer");
            }
            out.insert(j["answer"].get<std::string>());
        }
        return out;
    }
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        const auto t = trim(line);
        if (!t.empty()) out.emplace(t);
    }
    return out;
}

std::vector<std::string> load_predictions(const std::filesystem::path& path) {
    std::istringstream in(read_all(path));
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back(line);
    }
    while (!out.empty() && trim(out.back()).empty()) out.pop_back();
    return out;
}

EvaluationReport evaluate_predictions(const KnowledgeBase& kb, const std::vector<GoldItem>& gold,
                                      const std::vector<std::string>& predictions, PredictionMode mode, bool choices_only,
                                      const std::set<std::string>* train_answers) {
    if (predictions.size() != gold.size()) {
        throw Error(ErrorCode::MalformedInput, std::to_string(predictions.size()) + " predictions for " + std::to_string(gold.size()) +
                                                   " gold questions");
    }
    Interpreter interpreter(kb);
    EvaluationReport r;
    for (auto c : kCategories) {
        if (c != "Zero-shot" || train_answers) r.n[std::string(c)] = 0, r.correct_per[std::string(c)] = 0;
    }
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const auto& g = gold[i];
        std::string predicted = std::string(trim(predictions[i]));
        if (mode == PredictionMode::Program) {
            try {
                predicted = interpreter.run(parse_program(predicted));
            } catch (const Error&) {
                predicted.clear();
            }
        }
        bool ok = predicted == g.answer;
        if (ok && choices_only && std::find(g.choices.begin(), g.choices.end(), predicted) == g.choices.end()) ok = false;
        ++r.total;
        r.correct += ok;
        for (const auto& c : question_categories(g.program, g.answer, train_answers)) {
            ++r.n[c];
            r.correct_per[c] += ok;
        }
    }
    r.overall_accuracy = r.total ? static_cast<double>(r.correct) / static_cast<double>(r.total) : 0.0;
    for (const auto& [c, k] : r.n) {
        if (k) r.per_category[c] = static_cast<double>(r.correct_per[c]) / static_cast<double>(k);
    }
    return r;
}

json EvaluationReport::to_json() const {
    json cats = json::object();
    for (auto c : kCategories) {
        const std::string name(c);
        if (!n.contains(name)) continue;
        auto it = per_category.find(name);
        cats[name] = {{"n", n.at(name)}, {"correct", correct_per.at(name)}, {"accuracy", it == per_category.end() ? json() : json(it->second)}};
    }
    return {{"overall_accuracy", overall_accuracy}, {"n", total}, {"correct", correct}, {"per_category", cats}};
}

std::string EvaluationReport::to_text() const {
    std::ostringstream out;
    char line[128];
    std::snprintf(line, sizeof line, "%-12s %8s %8s %9s\n", "category", "n", "correct", "accuracy");
    out << line;
    std::snprintf(line, sizeof line, "%-12s %8zu %8zu %9.4f\n", "Overall", total, correct, overall_accuracy);
    out << line;
    for (auto c : kCategories) {
        const std::string name(c);
        if (!n.contains(name)) continue;
        auto it = per_category.find(name);
        if (it == per_category.end()) {
            std::snprintf(line, sizeof line, "%-12s %8zu %8zu %9s\n", name.c_str(), n.at(name), correct_per.at(name), "-");
        } else {
            std::snprintf(line, sizeof line, "%-12s %8zu %8zu %9.4f\n", name.c_str(), n.at(name), correct_per.at(name), it->second);
        }
        out << line;
    }
    return out.str();
}

} // namespace kopl
