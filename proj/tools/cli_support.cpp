#include "cli_support.hpp"

#include <cmath>
#include <fstream>

namespace gpvw::cli {

namespace {

/// Option text as a JSON value: numbers and booleans typed, everything else a string.
json typed_value(const std::string& text) {
    if (text == "true" || text == "false") return text == "true";
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size() && std::isfinite(v)) {
            if (text.find_first_of(".eE") == std::string::npos) return static_cast<long long>(v);
            return v;
        }
    } catch (const std::exception&) {
    }
    return text;
}

std::string option_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw UsageError("config value must be a string, number, boolean or array of those");
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

void merge_json_config(CLI::App& sub, const std::filesystem::path& path) {
    const json j = read_json_file(path);
    if (!j.is_object()) throw UsageError("config file " + path.string() + " must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
        CLI::Option* opt = sub.get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config") throw UsageError("unknown config key '" + key + "' for " + sub.get_name());
        if (opt->count() > 0) continue;  // the command line wins
        try {
            if (value.is_array()) {
                for (const auto& v : value) opt->add_result(option_text(v));
            } else {
                opt->add_result(option_text(value));
            }
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError("config key '" + key + "': " + e.what());
        }
    }
}

json resolved_options(const CLI::App& sub) {
    json out = json::object();
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string name = opt->get_single_name();
        if (name.empty() || name == "help" || name == "config") continue;
        std::vector<std::string> values = opt->count() > 0 ? opt->results() : std::vector<std::string>{};
        if (values.empty()) {
            const std::string def = opt->get_default_str();
            if (def.empty()) {
                out[name] = nullptr;
                continue;
            }
            if (def.front() == '[') {
                try {
                    out[name] = json::parse(def);
                    continue;
                } catch (const json::parse_error&) {
                }
            }
            values = {def};
        }
        if (opt->get_expected_max() > 1) {
            json arr = json::array();
            for (const auto& v : values) arr.push_back(typed_value(v));
            out[name] = arr;
        } else {
            out[name] = typed_value(values.back());
        }
    }
    return out;
}

json report_header(const std::string& command, const json& config) {
    json j;
    j["tool"] = "gpvw";
    j["version"] = GPVW_VERSION;
    j["command"] = command;
    j["config"] = config;
    return j;
}

void prepare_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
}

void write_json(const std::filesystem::path& path, const json& j) {
    prepare_output(path);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void CheckList::add(const std::string& name, bool passed, json measured, json limit) {
    json item;
    item["name"] = name;
    item["passed"] = passed;
    item["measured"] = std::move(measured);
    item["limit"] = std::move(limit);
    items_.push_back(std::move(item));
    passed_ = passed_ && passed;
}

void CheckList::skip(const std::string& name, const std::string& reason) {
    json item;
    item["name"] = name;
    item["skipped"] = reason;
    items_.push_back(std::move(item));
}

void CheckList::append(const CheckList& other) {
    for (const auto& item : other.items_) items_.push_back(item);
    passed_ = passed_ && other.passed_;
}

}  // namespace gpvw::cli
