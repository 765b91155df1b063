#include "ea/stats.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace ea::tools {

StatsReport compute_stats(const service::Bundle& bundle) {
    StatsReport report;
    for (const tmpl::Template& t : bundle.templates) {
        ++report.templates;
        report.template_statements +=
            static_cast<int>(t.body.statements().size());
    }
    for (const auto& [name, ast] : bundle.queries) {
        ++report.queries;
        query::QueryCost cost = query::query_cost(ast);
        report.query_joins += cost.joins;
        report.query_filters += cost.filters;
    }
    for (const auto& [name, plan_node] : bundle.plans) {
        ++report.plans;
        report.plan_nodes += plan::plan_size(plan_node);
    }
    for (const auto& [section, entries] : bundle.dictionary.sections)
        report.dictionary_terms += static_cast<int>(entries.size());
    for (const auto& [profile, entries] : bundle.dictionary.profiles)
        report.dictionary_terms += static_cast<int>(entries.size());
    report.profiles = static_cast<int>(bundle.dictionary.profiles.size());
    for (const service::ExplanationSpec& spec : bundle.manifest)
        report.sentences += static_cast<int>(spec.plans.size());
    return report;
}

std::string format_table(const StatsReport& report) {
    std::ostringstream out;
    auto row = [&out](const char* label, int value) {
        out << "  " << std::left << std::setw(28) << label << std::right
            << std::setw(6) << value << "\n";
    };
    out << "Artefact                        Count\n";
    row("Templates", report.templates);
    row("  provenance records", report.template_statements);
    row("Queries", report.queries);
    row("  joins", report.query_joins);
    row("  filters", report.query_filters);
    row("Explanation plans", report.plans);
    row("  syntax-tree nodes", report.plan_nodes);
    row("Sentences", report.sentences);
    row("Dictionary terms", report.dictionary_terms);
    row("Profiles", report.profiles);
    return out.str();
}

std::string stats_to_json(const StatsReport& report) {
    nlohmann::json body{{"templates", report.templates},
                        {"template_statements", report.template_statements},
                        {"queries", report.queries},
                        {"query_joins", report.query_joins},
                        {"query_filters", report.query_filters},
                        {"plans", report.plans},
                        {"plan_nodes", report.plan_nodes},
                        {"sentences", report.sentences},
                        {"dictionary_terms", report.dictionary_terms},
                        {"profiles", report.profiles}};
    return body.dump(2) + "\n";
}

} // namespace ea::tools
