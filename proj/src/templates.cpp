#include "kopl/templates.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "kopl/errors.hpp"

namespace kopl {

using nlohmann::json;

TemplateBank TemplateBank::defaults() {
    TemplateBank b;
    b.set("drafted by", {"was drafted by", "drafted"});
    b.set("place of birth", {"was born in", "is the place of birth of"});
    b.set("father", {"is the child of", "is the father of"});
    b.set("member of sports team", {"is a member of", "has the member"});
    b.set("located in", {"is located in", "is the location of"});
    return b;
}

TemplateBank TemplateBank::from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "template bank must be a JSON object");
    TemplateBank b;
    for (const auto& [pred, text] : j.items()) {
        PredicateText t;
        if (text.is_string()) {
            t.as_subject = text.get<std::string>();
        } else if (text.is_object()) {
            if (text.contains("as_subject")) t.as_subject = text["as_subject"].get<std::string>();
            if (text.contains("as_object")) t.as_object = text["as_object"].get<std::string>();
        } else {
            throw Error(ErrorCode::MalformedInput, "template for \"" + pred + "\" must be a string or an object");
        }
        b.set(pred, std::move(t));
    }
    return b;
}

TemplateBank TemplateBank::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    try {
        return from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, path.string() + ": " + e.what());
    }
}

json TemplateBank::to_json() const {
    json out = json::object();
    for (const auto& [pred, t] : predicates_) {
        json entry = json::object();
        if (!t.as_subject.empty()) entry["as_subject"] = t.as_subject;
        if (!t.as_object.empty()) entry["as_object"] = t.as_object;
        out[pred] = std::move(entry);
    }
    return out;
}

PredicateText TemplateBank::predicate(std::string_view p) const {
    PredicateText out;
    if (auto it = predicates_.find(p); it != predicates_.end()) out = it->second;
    if (out.as_subject.empty()) out.as_subject = "has relation " + std::string(p) + " with";
    if (out.as_object.empty()) out.as_object = "is the " + std::string(p) + " of";
    return out;
}

} // namespace kopl
