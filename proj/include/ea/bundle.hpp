#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ea/plan.hpp"
#include "ea/query.hpp"
#include "ea/template_engine.hpp"

namespace ea::service {

/// One configured explanation: which query feeds which plans, for which
/// audience profiles.
struct ExplanationSpec {
    std::string id;
    std::string query;
    std::vector<std::string> plans; // one sentence each, in order
    std::vector<std::string> profiles;
    std::string audience;
};

/// The deployable configuration of an Explanation Assistant.
struct Bundle {
    std::string app;
    NamespaceTable namespaces; // manifest plus all template declarations
    std::vector<tmpl::Template> templates;
    std::map<std::string, query::QueryAst> queries;
    std::map<std::string, plan::PlanNode> plans;
    plan::Dictionary dictionary;
    std::vector<ExplanationSpec> manifest;
    QualifiedName decision_type;

    Bundle() = default;
    Bundle(Bundle&&) = default;
    Bundle& operator=(Bundle&&) = default;
    Bundle(const Bundle&) = delete;
    Bundle& operator=(const Bundle&) = delete;

    const ExplanationSpec* find_explanation(const std::string& id) const;
    const tmpl::Template* find_template(const std::string& name) const;
};

/// One validation finding. Codes: V2 dangling plan variable, V3 dictionary
/// reference missing from a profile, V5 unparseable query, B1..B5 structural
/// problems (manifest, cross-references, templates, plans, dictionary).
/// The sample-data checks V1 and V4 are produced by the validator, not the
/// loader.
struct Finding {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    std::string artifact; // file or logical locator within the bundle
};

struct LoadOutcome {
    std::optional<Bundle> bundle; // set iff there are no error findings
    std::vector<Finding> findings;
};

/// Loads a bundle collecting every problem instead of stopping at the first.
/// Zero error findings guarantee a usable bundle (and vice versa), which is
/// what ties `validate` to the service's loader.
LoadOutcome load_bundle_checked(const std::filesystem::path& dir);

/// Loads manifest.json, templates/*.provn, queries/*.pq, plans/*.json and
/// dictionary.json from a bundle directory, verifying every cross-reference
/// (spec -> query/plan/profile, plan variables -> query variables, dictionary
/// references -> profile keys). Fails atomically with a Config error naming
/// the offending file.
Bundle load_bundle(const std::filesystem::path& dir);

} // namespace ea::service
