#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ea/bundle.hpp"
#include "ea/store.hpp"
#include "ea/text_format.hpp"

namespace ea::service {

/// The explanation pipeline after expansion: evaluate the spec's query, then
/// instantiate and realize each plan per result row. Throws Unavailable when
/// the query matches nothing. Shared by the service and the offline CLI so
/// their outputs are identical.
std::vector<std::string> render_explanation(const Bundle& bundle,
                                            const ProvDocument& document,
                                            const ExplanationSpec& spec,
                                            const std::string& profile,
                                            Format format);

/// The Explanation Assistant pipeline behind the HTTP routes: bindings in,
/// expanded provenance and rendered sentences out. Engine calls are pure, so
/// concurrent use is safe; the store serializes writes per decision.
class ExplanationService {
public:
    ExplanationService(Bundle bundle, std::filesystem::path store_dir);

    struct PostResult {
        bool created = false;
    };

    /// Logging API: stores the CSV after checking it parses and names only
    /// known templates.
    PostResult post_bindings(const std::string& app,
                             const std::string& decision,
                             const std::string& csv);

    /// The decision's full provenance as PROV-N, expanded on demand and
    /// cached until the next write.
    std::string get_provenance(const std::string& app,
                               const std::string& decision);

    /// Explanation API: one sentence per (result row, plan) pair, in order.
    std::vector<std::string> get_explanation(const std::string& app,
                                             const std::string& decision,
                                             const std::string& explanation_id,
                                             const std::string& profile,
                                             Format format);

    const Bundle& bundle() const { return bundle_; }

    ProvDocument expand_csv(const std::string& csv) const;

private:
    void check_app(const std::string& app) const;

    Bundle bundle_;
    DecisionStore store_;
};

/// HTTP front end. Routes:
///   POST /apps/{app}/decisions/{id}/bindings          (text/csv)
///   GET  /apps/{app}/decisions/{id}/provenance        (PROV-N)
///   GET  /apps/{app}/decisions/{id}/explanations/{explId}?profile=P&format=F
///   GET  /apps/{app}/explanations
///   GET  /health
class AssistantServer {
public:
    explicit AssistantServer(std::shared_ptr<ExplanationService> service);
    ~AssistantServer();

    AssistantServer(const AssistantServer&) = delete;
    AssistantServer& operator=(const AssistantServer&) = delete;

    /// Binds and serves on a background thread. Port 0 picks a free port;
    /// the bound port is returned.
    int start(const std::string& host, int port);

    /// Serves on the calling thread until stop().
    void run(const std::string& host, int port);

    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace ea::service
