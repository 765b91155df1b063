#include "ea/service.hpp"

#include "ea/provn.hpp"
#include "ea/realizer.hpp"

namespace ea::service {

std::vector<std::string> render_explanation(const Bundle& bundle,
                                            const ProvDocument& document,
                                            const ExplanationSpec& spec,
                                            const std::string& profile,
                                            Format format) {
    query::ResultTable table =
        query::evaluate(bundle.queries.at(spec.query), document);
    if (table.rows.empty())
        throw Error(ErrorKind::Unavailable,
                    "explanation unavailable for this decision");

    std::vector<std::string> sentences;
    for (const query::ResultRow& row : table.rows) {
        for (const std::string& plan_name : spec.plans) {
            plan::PlanNode resolved =
                plan::instantiate(bundle.plans.at(plan_name), table, row,
                                  bundle.dictionary, profile);
            sentences.push_back(nlg::realize(resolved, format).text);
        }
    }
    return sentences;
}

ExplanationService::ExplanationService(Bundle bundle,
                                       std::filesystem::path store_dir)
    : bundle_(std::move(bundle)), store_(std::move(store_dir)) {}

void ExplanationService::check_app(const std::string& app) const {
    if (app != bundle_.app)
        throw_not_found("unknown app '" + app + "'");
}

ProvDocument ExplanationService::expand_csv(const std::string& csv) const {
    tmpl::BindingsTable table =
        tmpl::parse_bindings_csv(csv, bundle_.namespaces);
    return tmpl::expand_decision(bundle_.templates, table,
                                 bundle_.namespaces);
}

ExplanationService::PostResult
ExplanationService::post_bindings(const std::string& app,
                                  const std::string& decision,
                                  const std::string& csv) {
    check_app(app);
    if (!DecisionStore::valid_key(decision))
        throw_data("decision ids must match [A-Za-z0-9._-]+");

    // Reject unusable logs up front; expansion itself stays lazy.
    tmpl::BindingsTable table =
        tmpl::parse_bindings_csv(csv, bundle_.namespaces);
    for (const tmpl::BindingsTable::Group& group : table.groups)
        if (!bundle_.find_template(group.template_name))
            throw_data("unknown template '" + group.template_name + "'");

    auto result = store_.put(app, decision, csv);
    return PostResult{result.created};
}

std::string ExplanationService::get_provenance(const std::string& app,
                                               const std::string& decision) {
    check_app(app);
    auto document = store_.expanded(
        app, decision, [this](const std::string& csv) {
            try {
                return expand_csv(csv);
            } catch (const Error& e) {
                // Stored bindings that no longer expand point at the bundle
                // configuration, not the caller.
                throw Error(ErrorKind::Config, e.what());
            }
        });
    return write_provn(*document);
}

std::vector<std::string> ExplanationService::get_explanation(
    const std::string& app, const std::string& decision,
    const std::string& explanation_id, const std::string& profile,
    Format format) {
    check_app(app);
    const ExplanationSpec* spec = bundle_.find_explanation(explanation_id);
    if (!spec)
        throw_not_found("unknown explanation '" + explanation_id + "'");
    bool profile_supported = false;
    for (const std::string& candidate : spec->profiles)
        if (candidate == profile)
            profile_supported = true;
    if (!profile_supported)
        throw_not_found("explanation '" + explanation_id +
                        "' does not support profile '" + profile + "'");

    auto document = store_.expanded(
        app, decision, [this](const std::string& csv) {
            try {
                return expand_csv(csv);
            } catch (const Error& e) {
                throw Error(ErrorKind::Config, e.what());
            }
        });

    return render_explanation(bundle_, *document, *spec, profile, format);
}

} // namespace ea::service
