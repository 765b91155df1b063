#include "ea/validate.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "ea/template_engine.hpp"

namespace ea::tools {

namespace {

using service::Bundle;
using service::Finding;

void warn(ValidationReport& report, std::string code, std::string message,
          std::string artifact) {
    report.findings.push_back({Finding::Severity::Warning, std::move(code),
                               std::move(message), std::move(artifact)});
}

/// V4: every (template, instance) group binds every variable of its
/// template. Returns the groups that can be expanded.
std::vector<const tmpl::BindingsTable::Group*>
check_coverage(const Bundle& bundle, const tmpl::BindingsTable& table,
               ValidationReport& report) {
    std::vector<const tmpl::BindingsTable::Group*> expandable;
    for (const tmpl::BindingsTable::Group& group : table.groups) {
        const tmpl::Template* tmpl = bundle.find_template(group.template_name);
        if (!tmpl) {
            warn(report, "V4",
                 "sample bindings name unknown template '" +
                     group.template_name + "'",
                 "bindings#" + group.template_name + "/" + group.instance);
            continue;
        }
        std::string missing;
        for (const std::string& variable : tmpl->variables)
            if (!group.bindings.count(variable))
                missing += missing.empty() ? variable : ", " + variable;
        if (!missing.empty()) {
            warn(report, "V4",
                 "instance '" + group.instance + "' of template '" +
                     group.template_name + "' leaves variables unbound: " +
                     missing,
                 "bindings#" + group.template_name + "/" + group.instance);
            continue;
        }
        expandable.push_back(&group);
    }
    return expandable;
}

/// V1: the whole expanded trace must be reachable, undirected, from some
/// entity of the bundle's decision type.
void check_connectivity(const Bundle& bundle, const ProvDocument& trace,
                        ValidationReport& report) {
    if (trace.empty())
        return;

    std::vector<const Element*> decisions;
    for (const Statement& statement : trace.statements()) {
        const auto* element = std::get_if<Element>(&statement);
        if (!element || element->kind != ElementKind::Entity)
            continue;
        static const QualifiedName prov_type{
            "prov", "type", std::string(wellknown::kProv) + "type"};
        for (const AttributeValue* value :
             attribute_values(element->attributes, prov_type))
            if (const auto* q = std::get_if<QualifiedName>(value))
                if (*q == bundle.decision_type)
                    decisions.push_back(element);
    }
    if (decisions.empty()) {
        warn(report, "V1",
             "the expanded trace has no entity typed '" +
                 bundle.decision_type.compact() + "' to anchor connectivity",
             "bindings");
        return;
    }

    std::set<std::string> best;
    const Element* anchor = decisions.front();
    for (const Element* decision : decisions) {
        std::set<std::string> reached = undirected_reach(trace, decision->id);
        if (reached.size() == trace.size())
            return; // fully connected
        if (reached.size() > best.size()) {
            best = std::move(reached);
            anchor = decision;
        }
    }

    std::string orphans;
    for (const Statement& statement : trace.statements()) {
        const QualifiedName& id = statement_id(statement);
        if (!best.count(id.iri))
            orphans += orphans.empty() ? id.compact() : ", " + id.compact();
    }
    warn(report, "V1",
         "trace is not connected: unreachable from '" +
             anchor->id.compact() + "': " + orphans,
         "bindings");
}

} // namespace

int ValidationReport::errors() const {
    return static_cast<int>(std::count_if(
        findings.begin(), findings.end(), [](const Finding& f) {
            return f.severity == Finding::Severity::Error;
        }));
}

int ValidationReport::warnings() const {
    return static_cast<int>(findings.size()) - errors();
}

ValidationReport
validate_bundle(const std::filesystem::path& dir,
                const std::optional<std::string>& sample_csv) {
    service::LoadOutcome outcome = service::load_bundle_checked(dir);
    ValidationReport report;
    report.findings = std::move(outcome.findings);
    if (!outcome.bundle || !sample_csv)
        return report;
    const Bundle& bundle = *outcome.bundle;

    tmpl::BindingsTable table;
    try {
        table = tmpl::parse_bindings_csv(*sample_csv, bundle.namespaces);
    } catch (const Error& e) {
        warn(report, "V4", std::string("sample bindings unreadable: ") +
                               e.what(),
             "bindings");
        return report;
    }

    auto expandable = check_coverage(bundle, table, report);
    tmpl::BindingsTable usable;
    for (const tmpl::BindingsTable::Group* group : expandable)
        usable.groups.push_back(*group);

    ProvDocument trace;
    try {
        trace = tmpl::expand_decision(bundle.templates, usable,
                                      bundle.namespaces);
    } catch (const Error& e) {
        warn(report, "V4",
             std::string("sample bindings do not expand: ") + e.what(),
             "bindings");
        return report;
    }
    check_connectivity(bundle, trace, report);
    return report;
}

std::string format_report(const ValidationReport& report) {
    std::ostringstream out;
    for (const service::Finding& finding : report.findings)
        out << (finding.severity == Finding::Severity::Error ? "error  "
                                                             : "warning")
            << "  " << finding.code << "  " << finding.artifact << ": "
            << finding.message << "\n";
    out << report.errors() << " error(s), " << report.warnings()
        << " warning(s)\n";
    return out.str();
}

std::string report_to_json(const ValidationReport& report) {
    nlohmann::json findings = nlohmann::json::array();
    for (const service::Finding& finding : report.findings)
        findings.push_back(
            {{"severity", finding.severity == Finding::Severity::Error
                              ? "error"
                              : "warning"},
             {"code", finding.code},
             {"message", finding.message},
             {"artifact", finding.artifact}});
    nlohmann::json body{{"findings", findings},
                        {"errors", report.errors()},
                        {"warnings", report.warnings()}};
    return body.dump(2) + "\n";
}

} // namespace ea::tools
