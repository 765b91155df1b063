#include "ea/bundle.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ea/provn.hpp"

namespace ea::service {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::optional<std::string> read_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

std::vector<fs::path> sorted_files(const fs::path& dir,
                                   std::string_view extension) {
    std::vector<fs::path> files;
    if (!fs::is_directory(dir))
        return files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == extension)
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

class Loader {
public:
    explicit Loader(const fs::path& dir) : dir_(dir) {}

    LoadOutcome run() {
        load_manifest();
        if (!manifest_ok_)
            return finish();
        load_templates();
        resolve_decision_type();
        load_queries();
        load_plans();
        load_dictionary();
        cross_check();
        return finish();
    }

private:
    void error(std::string code, std::string message, std::string artifact) {
        findings_.push_back({Finding::Severity::Error, std::move(code),
                             std::move(message), std::move(artifact)});
    }

    void load_manifest() {
        auto text = read_file(dir_ / "manifest.json");
        if (!text) {
            error("B1", "manifest.json is missing or unreadable",
                  "manifest.json");
            return;
        }
        json manifest;
        try {
            manifest = json::parse(*text);
        } catch (const json::parse_error& e) {
            error("B1", std::string("malformed JSON: ") + e.what(),
                  "manifest.json");
            return;
        }
        try {
            bundle_.app = manifest.at("app").get<std::string>();
            decision_type_text_ =
                manifest.at("decision_type").get<std::string>();
            const json namespaces = manifest.value("namespaces", json::object());
            for (const auto& [prefix, iri] : namespaces.items())
                bundle_.namespaces.declare(prefix, iri.get<std::string>());
            const json explanations =
                manifest.value("explanations", json::array());
            for (const auto& item : explanations) {
                ExplanationSpec spec;
                spec.id = item.at("id").get<std::string>();
                spec.query = item.at("query").get<std::string>();
                for (const auto& name : item.at("plans"))
                    spec.plans.push_back(name.get<std::string>());
                for (const auto& name : item.at("profiles"))
                    spec.profiles.push_back(name.get<std::string>());
                spec.audience = item.value("audience", "");
                if (spec.plans.empty())
                    error("B2", "explanation '" + spec.id +
                                    "': plans list is empty",
                          "manifest.json");
                if (spec.profiles.empty())
                    error("B2", "explanation '" + spec.id +
                                    "': profiles list is empty",
                          "manifest.json");
                for (const ExplanationSpec& existing : bundle_.manifest)
                    if (existing.id == spec.id)
                        error("B2", "duplicate explanation id '" + spec.id +
                                        "'",
                              "manifest.json");
                bundle_.manifest.push_back(std::move(spec));
            }
        } catch (const std::exception& e) {
            error("B1", std::string("invalid manifest: ") + e.what(),
                  "manifest.json");
            return;
        }
        if (bundle_.app.empty()) {
            error("B1", "manifest declares an empty app name",
                  "manifest.json");
            return;
        }
        manifest_ok_ = true;
    }

    void load_templates() {
        for (const fs::path& file : sorted_files(dir_ / "templates", ".provn")) {
            std::string artifact = "templates/" + file.filename().string();
            auto text = read_file(file);
            if (!text) {
                error("B3", "unreadable file", artifact);
                continue;
            }
            try {
                ProvDocument doc = parse_provn(*text);
                bundle_.namespaces.merge(doc.namespaces());
                bundle_.templates.push_back(
                    tmpl::load_template(std::move(doc), file.stem().string()));
            } catch (const Error& e) {
                error("B3", e.what(), artifact);
            }
        }
    }

    void resolve_decision_type() {
        auto colon = decision_type_text_.find(':');
        if (colon == std::string::npos || colon == 0 ||
            colon + 1 == decision_type_text_.size()) {
            error("B1", "decision_type '" + decision_type_text_ +
                            "' is not a qualified name",
                  "manifest.json");
            return;
        }
        try {
            bundle_.decision_type = bundle_.namespaces.resolve(
                decision_type_text_.substr(0, colon),
                decision_type_text_.substr(colon + 1));
        } catch (const Error& e) {
            error("B1", std::string("decision_type: ") + e.what(),
                  "manifest.json");
        }
    }

    void load_queries() {
        for (const fs::path& file : sorted_files(dir_ / "queries", ".pq")) {
            std::string name = file.stem().string();
            std::string artifact = "queries/" + file.filename().string();
            auto text = read_file(file);
            if (!text) {
                error("V5", "unreadable file", artifact);
                failed_queries_.insert(name);
                continue;
            }
            try {
                bundle_.queries.emplace(name, query::parse_query(*text));
            } catch (const Error& e) {
                error("V5", e.what(), artifact);
                failed_queries_.insert(name);
            }
        }
    }

    void load_plans() {
        for (const fs::path& file : sorted_files(dir_ / "plans", ".json")) {
            std::string name = file.stem().string();
            std::string artifact = "plans/" + file.filename().string();
            auto text = read_file(file);
            if (!text) {
                error("B4", "unreadable file", artifact);
                failed_plans_.insert(name);
                continue;
            }
            try {
                bundle_.plans.emplace(
                    name, plan::parse_plan(*text, bundle_.namespaces));
            } catch (const Error& e) {
                error("B4", e.what(), artifact);
                failed_plans_.insert(name);
            }
        }
    }

    void load_dictionary() {
        auto text = read_file(dir_ / "dictionary.json");
        if (!text) {
            error("B5", "dictionary.json is missing or unreadable",
                  "dictionary.json");
            return;
        }
        try {
            bundle_.dictionary =
                plan::parse_dictionary(*text, bundle_.namespaces);
        } catch (const Error& e) {
            error("B5", e.what(), "dictionary.json");
            return;
        }
        dictionary_ok_ = true;
        for (const auto& [profile, key] :
             plan::profile_key_gaps(bundle_.dictionary))
            error("V3", "profile '" + profile + "' is missing key '" + key +
                            "' defined by another profile",
                  "dictionary.json");
    }

    void cross_check() {
        for (const ExplanationSpec& spec : bundle_.manifest) {
            std::string artifact = "manifest.json#" + spec.id;
            bool query_ok = bundle_.queries.count(spec.query) != 0;
            if (!query_ok && !failed_queries_.count(spec.query))
                error("B2", "explanation '" + spec.id +
                                "' references unknown query '" + spec.query +
                                "'",
                      artifact);
            for (const std::string& plan_name : spec.plans) {
                bool plan_ok = bundle_.plans.count(plan_name) != 0;
                if (!plan_ok && !failed_plans_.count(plan_name)) {
                    error("B2", "explanation '" + spec.id +
                                    "' references unknown plan '" + plan_name +
                                    "'",
                          artifact);
                }
                if (plan_ok && query_ok)
                    check_plan_variables(spec, plan_name);
            }
            if (dictionary_ok_)
                for (const std::string& profile : spec.profiles)
                    if (!bundle_.dictionary.has_profile(profile))
                        error("B2", "explanation '" + spec.id +
                                        "' references unknown profile '" +
                                        profile + "'",
                              artifact);
        }

        if (dictionary_ok_)
            check_dict_references();
    }

    void check_plan_variables(const ExplanationSpec& spec,
                              const std::string& plan_name) {
        const query::QueryAst& ast = bundle_.queries.at(spec.query);
        for (const std::string& variable :
             plan::referenced_variables(bundle_.plans.at(plan_name)))
            if (!ast.declares_var(variable))
                error("V2", "plan '" + plan_name + "' references variable '" +
                                variable + "' not provided by query '" +
                                spec.query + "'",
                      "plans/" + plan_name + ".json");
    }

    void check_dict_references() {
        std::set<std::string> keys;
        for (const auto& [name, plan_node] : bundle_.plans)
            for (std::string& key : plan::referenced_dict_keys(plan_node))
                keys.insert(std::move(key));
        for (std::string& key :
             plan::referenced_dict_keys(bundle_.dictionary))
            keys.insert(std::move(key));

        for (const std::string& key : keys)
            for (const auto& [profile, entries] : bundle_.dictionary.profiles)
                if (!entries.count(key))
                    error("V3", "dictionary reference '##" + key +
                                    "' is not defined in profile '" + profile +
                                    "'",
                          "dictionary.json");
    }

    LoadOutcome finish() {
        LoadOutcome outcome;
        outcome.findings = std::move(findings_);
        bool any_error = std::any_of(
            outcome.findings.begin(), outcome.findings.end(),
            [](const Finding& f) {
                return f.severity == Finding::Severity::Error;
            });
        if (!any_error)
            outcome.bundle = std::move(bundle_);
        return outcome;
    }

    fs::path dir_;
    Bundle bundle_;
    std::vector<Finding> findings_;
    std::string decision_type_text_;
    std::set<std::string> failed_queries_;
    std::set<std::string> failed_plans_;
    bool manifest_ok_ = false;
    bool dictionary_ok_ = false;
};

} // namespace

const ExplanationSpec* Bundle::find_explanation(const std::string& id) const {
    for (const ExplanationSpec& spec : manifest)
        if (spec.id == id)
            return &spec;
    return nullptr;
}

const tmpl::Template* Bundle::find_template(const std::string& name) const {
    for (const tmpl::Template& t : templates)
        if (t.name == name)
            return &t;
    return nullptr;
}

LoadOutcome load_bundle_checked(const std::filesystem::path& dir) {
    if (!fs::is_directory(dir))
        throw_config("bundle directory " + dir.string() + " does not exist");
    return Loader(dir).run();
}

Bundle load_bundle(const std::filesystem::path& dir) {
    LoadOutcome outcome = load_bundle_checked(dir);
    if (outcome.bundle)
        return std::move(*outcome.bundle);
    for (const Finding& finding : outcome.findings)
        if (finding.severity == Finding::Severity::Error)
            throw_config(finding.artifact + ": " + finding.message);
    throw_config("bundle failed to load"); // unreachable
}

} // namespace ea::service
