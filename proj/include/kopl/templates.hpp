#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

namespace kopl {

/// Surface text of a relation predicate, depending on which end is being described.
struct PredicateText {
    std::string as_subject; // "<subject> was drafted by <object>"
    std::string as_object;  // "<object> drafted <subject>"
};

/// Editable predicate surface texts. The JSON form maps a predicate either to one string (used
/// when the described entity is the subject) or to {"as_subject": ..., "as_object": ...}.
class TemplateBank {
public:
    static TemplateBank defaults();
    static TemplateBank from_json(const nlohmann::json& j);
    static TemplateBank load_file(const std::filesystem::path& path);
    nlohmann::json to_json() const;

    /// Unknown predicates fall back to "has relation <p> with" / "is the <p> of".
    PredicateText predicate(std::string_view p) const;

    void set(std::string predicate, PredicateText text) { predicates_[std::move(predicate)] = std::move(text); }

private:
    std::map<std::string, PredicateText, std::less<>> predicates_;
};

} // namespace kopl
