#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kopl/kb.hpp"
#include "kopl/program.hpp"

namespace kopl {

inline constexpr std::array<std::string_view, 7> kCategories{"Multi-hop", "Qualifier", "Comparison", "Logical",
                                                             "Count",     "Verify",    "Zero-shot"};

/// Categories of a question, from its program structure. Zero-shot needs a training answer set.
std::vector<std::string> question_categories(const Program& program, const std::string& answer,
                                             const std::set<std::string>* train_answers = nullptr);

struct GoldItem {
    Program program;
    std::string answer;
    std::vector<std::string> choices;
};

/// Gold questions from a JSON-lines file of instances or a JSON array with program/answer fields.
/// Throws Error(MalformedInput) naming the file and line.
std::vector<GoldItem> load_gold(const std::filesystem::path& path);

/// Answers from a JSON-lines instance file, a JSON array of objects with "answer", or plain lines.
std::set<std::string> load_answer_set(const std::filesystem::path& path);

/// Non-empty prediction lines are kept verbatim; one per gold item.
std::vector<std::string> load_predictions(const std::filesystem::path& path);

enum class PredictionMode { Answer, Program };

struct EvaluationReport {
    std::size_t total = 0;
    std::size_t correct = 0;
    double overall_accuracy = 0;
    std::map<std::string, std::size_t> n;
    std::map<std::string, std::size_t> correct_per;
    std::map<std::string, double> per_category; // only categories with n > 0

    nlohmann::json to_json() const;
    std::string to_text() const;
};

/// Exact string match after canonical rendering. Program predictions are executed first and
/// count as wrong when they fail. With `choices_only`, predictions outside the 10 choices are wrong.
EvaluationReport evaluate_predictions(const KnowledgeBase& kb, const std::vector<GoldItem>& gold,
                                      const std::vector<std::string>& predictions, PredictionMode mode,
                                      bool choices_only = false, const std::set<std::string>* train_answers = nullptr);

} // namespace kopl
