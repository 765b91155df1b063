#include "ea/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ea/provn.hpp"
#include "ea/service.hpp"
#include "ea/stats.hpp"
#include "ea/validate.hpp"

namespace ea::tools {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitConfig = 2;
constexpr int kExitUsage = 64;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Config:
        return kExitConfig;
    case ErrorKind::Usage:
        return kExitUsage;
    default:
        return kExitData;
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw_data("cannot read file '" + path + "'");
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

Format parse_format(const std::string& name) {
    if (name == "text")
        return Format::Text;
    if (name == "html")
        return Format::Html;
    throw_usage("format must be 'text' or 'html'");
}

std::vector<tmpl::Template> load_templates(
    const std::vector<std::string>& files) {
    std::vector<tmpl::Template> templates;
    for (const std::string& file : files) {
        ProvDocument doc;
        try {
            doc = parse_provn(slurp(file));
        } catch (const Error& e) {
            throw Error(e.kind(), file + ": " + e.what());
        }
        std::string name = std::filesystem::path(file).stem().string();
        templates.push_back(tmpl::load_template(std::move(doc), name));
    }
    return templates;
}

int cmd_expand(const std::vector<std::string>& template_files,
               const std::string& bindings_file, std::ostream& out) {
    std::vector<tmpl::Template> templates = load_templates(template_files);
    NamespaceTable namespaces;
    for (const tmpl::Template& t : templates)
        namespaces.merge(t.body.namespaces());
    tmpl::BindingsTable table =
        tmpl::parse_bindings_csv(slurp(bindings_file), namespaces);
    out << write_provn(tmpl::expand_decision(templates, table));
    return kExitOk;
}

nlohmann::json cell_to_json(const query::ResultCell& cell) {
    if (cell.is_seq) {
        nlohmann::json seq = nlohmann::json::array();
        for (const query::RecordRef& ref : cell.refs)
            seq.push_back(ref.id().compact());
        return seq;
    }
    return cell.single().id().compact();
}

int cmd_query(const std::string& query_file, const std::string& provn_file,
              std::ostream& out) {
    query::QueryAst ast;
    try {
        ast = query::parse_query(slurp(query_file));
    } catch (const Error& e) {
        throw Error(e.kind(), query_file + ": " + e.what());
    }
    ProvDocument doc;
    try {
        doc = parse_provn(slurp(provn_file));
    } catch (const Error& e) {
        throw Error(e.kind(), provn_file + ": " + e.what());
    }
    query::ResultTable table = query::evaluate(ast, doc);

    nlohmann::json rows = nlohmann::json::array();
    for (const query::ResultRow& row : table.rows) {
        nlohmann::json cells = nlohmann::json::object();
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            cells[table.columns[i]] = cell_to_json(row[i]);
        rows.push_back(std::move(cells));
    }
    nlohmann::json body{{"columns", table.columns}, {"rows", rows}};
    out << body.dump(2) << "\n";
    return kExitOk;
}

int cmd_explain(const std::string& bundle_dir, const std::string& bindings,
                const std::string& explanation_id, const std::string& profile,
                const std::string& format_name, std::ostream& out) {
    service::Bundle bundle = service::load_bundle(bundle_dir);
    const service::ExplanationSpec* spec =
        bundle.find_explanation(explanation_id);
    if (!spec)
        throw_not_found("unknown explanation '" + explanation_id + "'");
    bool supported = false;
    for (const std::string& candidate : spec->profiles)
        supported = supported || candidate == profile;
    if (!supported)
        throw_not_found("explanation '" + explanation_id +
                        "' does not support profile '" + profile + "'");

    tmpl::BindingsTable table =
        tmpl::parse_bindings_csv(slurp(bindings), bundle.namespaces);
    ProvDocument document =
        tmpl::expand_decision(bundle.templates, table, bundle.namespaces);
    for (const std::string& sentence : service::render_explanation(
             bundle, document, *spec, profile, parse_format(format_name)))
        out << sentence << "\n";
    return kExitOk;
}

bool report_as_json(const std::string& format) {
    if (format == "json")
        return true;
    if (format == "text")
        return false;
    throw_usage("format must be 'text' or 'json'");
}

int cmd_validate(const std::string& bundle_dir,
                 const std::string& bindings_file, const std::string& format,
                 std::ostream& out) {
    bool as_json = report_as_json(format);
    std::optional<std::string> sample;
    if (!bindings_file.empty())
        sample = slurp(bindings_file);
    ValidationReport report = validate_bundle(bundle_dir, sample);
    out << (as_json ? report_to_json(report) : format_report(report));
    return report.ok() ? kExitOk : kExitConfig;
}

int cmd_stats(const std::string& bundle_dir, const std::string& format,
              std::ostream& out) {
    bool as_json = report_as_json(format);
    service::Bundle bundle = service::load_bundle(bundle_dir);
    StatsReport report = compute_stats(bundle);
    out << (as_json ? stats_to_json(report) : format_table(report));
    return kExitOk;
}

int cmd_serve(const std::string& bundle_dir, const std::string& listen,
              const std::string& store_dir, std::ostream& out) {
    auto colon = listen.rfind(':');
    if (colon == std::string::npos)
        throw_usage("--listen expects HOST:PORT");
    std::string host = listen.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(listen.substr(colon + 1));
    } catch (const std::exception&) {
        throw_usage("invalid port in '" + listen + "'");
    }

    auto service = std::make_shared<service::ExplanationService>(
        service::load_bundle(bundle_dir), store_dir);
    out << "explanation assistant for app '" << service->bundle().app
        << "' listening on " << host << ":" << port << "\n"
        << "store: " << store_dir << "\n";
    out.flush();
    service::AssistantServer server(std::move(service));
    server.run(host, port);
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Explanation Assistant: decision provenance and "
                 "audience-tailored explanations"};
    app.require_subcommand(1);

    // expand
    auto* expand = app.add_subcommand(
        "expand", "Expand templates with logged bindings into PROV-N");
    std::vector<std::string> template_files;
    std::string bindings_file;
    expand->add_option("-t,--template", template_files,
                       "Template file (.provn); repeatable")
        ->required();
    expand->add_option("-b,--bindings", bindings_file, "Bindings CSV")
        ->required();

    // query
    auto* query_cmd = app.add_subcommand(
        "query", "Run a provenance query over a PROV-N document");
    std::string query_file;
    std::string provn_file;
    query_cmd->add_option("-q,--query", query_file, "Query file (.pq)")
        ->required();
    query_cmd
        ->add_option("-p,--provenance", provn_file, "PROV-N document")
        ->required();

    // explain
    auto* explain = app.add_subcommand(
        "explain", "Render an explanation offline from a bundle and bindings");
    std::string bundle_dir;
    std::string explanation_id;
    std::string profile;
    std::string format_name = "text";
    explain->add_option("--bundle", bundle_dir, "Bundle directory")
        ->required();
    explain->add_option("-b,--bindings", bindings_file, "Bindings CSV")
        ->required();
    explain
        ->add_option("-e,--explanation", explanation_id, "Explanation id")
        ->required();
    explain->add_option("-p,--profile", profile, "Audience profile")
        ->required();
    explain->add_option("--format", format_name, "text or html");

    // validate
    auto* validate = app.add_subcommand(
        "validate", "Check a bundle (and optionally sample bindings)");
    std::string report_format = "text";
    validate->add_option("--bundle", bundle_dir, "Bundle directory")
        ->required();
    validate->add_option("-b,--bindings", bindings_file,
                         "Sample bindings CSV for the V1/V4 checks");
    validate->add_option("--format", report_format, "text or json");

    // stats
    auto* stats = app.add_subcommand(
        "stats", "Cost metrics for a bundle's artifacts");
    stats->add_option("--bundle", bundle_dir, "Bundle directory")->required();
    stats->add_option("--format", report_format, "text or json");
    stats->add_flag_callback(
        "--json", [&report_format] { report_format = "json"; },
        "Shorthand for --format json");
    validate->add_flag_callback(
        "--json", [&report_format] { report_format = "json"; },
        "Shorthand for --format json");

    // serve
    auto* serve =
        app.add_subcommand("serve", "Run the Explanation Assistant service");
    std::string listen = "127.0.0.1:8080";
    std::string store_dir = "ea-store";
    serve->add_option("--bundle", bundle_dir, "Bundle directory")
        ->envname("EA_BUNDLE_DIR")
        ->required();
    serve->add_option("--listen", listen, "HOST:PORT")->envname("EA_LISTEN");
    serve->add_option("--store", store_dir, "Decision store directory")
        ->envname("EA_STORE_DIR");

    std::vector<const char*> argv;
    argv.push_back("ea");
    for (const std::string& arg : args)
        argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(expand))
            return cmd_expand(template_files, bindings_file, out);
        if (app.got_subcommand(query_cmd))
            return cmd_query(query_file, provn_file, out);
        if (app.got_subcommand(explain))
            return cmd_explain(bundle_dir, bindings_file, explanation_id,
                               profile, format_name, out);
        if (app.got_subcommand(validate))
            return cmd_validate(bundle_dir, bindings_file, report_format,
                                out);
        if (app.got_subcommand(stats))
            return cmd_stats(bundle_dir, report_format, out);
        if (app.got_subcommand(serve))
            return cmd_serve(bundle_dir, listen, store_dir, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitUsage;
}

} // namespace ea::tools
