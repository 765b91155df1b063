#include "ea/service.hpp"

#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace ea::service {

namespace {

using nlohmann::json;

struct HttpError {
    int status;
    const char* code;
};

HttpError http_error(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Data:
        return {400, "data-error"};
    case ErrorKind::Config:
        return {500, "configuration-error"};
    case ErrorKind::NotFound:
        return {404, "not-found"};
    case ErrorKind::Unavailable:
        return {404, "explanation-unavailable"};
    case ErrorKind::Usage:
        return {400, "usage-error"};
    }
    return {500, "configuration-error"};
}

void reply_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <typename F>
void guarded(httplib::Response& res, F&& handler) {
    try {
        handler();
    } catch (const Error& e) {
        HttpError mapped = http_error(e.kind());
        reply_json(res, mapped.status,
                   json{{"error",
                         {{"code", mapped.code}, {"message", e.what()}}}});
    } catch (const std::exception& e) {
        reply_json(res, 500,
                   json{{"error", {{"code", "configuration-error"},
                                   {"message", e.what()}}}});
    }
}

} // namespace

struct AssistantServer::Impl {
    // Keep-alive connections hold a worker each; size the pool for bursts
    // of concurrent readers rather than for core count.
    static constexpr int kWorkerThreads = 48;

    std::shared_ptr<ExplanationService> service;
    httplib::Server server;
    std::thread worker;

    explicit Impl(std::shared_ptr<ExplanationService> svc)
        : service(std::move(svc)) {
        server.new_task_queue = [] {
            return new httplib::ThreadPool(kWorkerThreads);
        };
        register_routes();
    }

    void register_routes() {
        server.Get("/health",
                   [](const httplib::Request&, httplib::Response& res) {
                       reply_json(res, 200, json{{"status", "ok"}});
                   });

        server.Post(
            R"(/apps/([^/]+)/decisions/([^/]+)/bindings)",
            [this](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                    auto result = service->post_bindings(
                        req.matches[1], req.matches[2], req.body);
                    reply_json(res, result.created ? 201 : 200,
                               json{{"app", std::string(req.matches[1])},
                                    {"decision", std::string(req.matches[2])},
                                    {"status", result.created ? "created"
                                                              : "updated"}});
                });
            });

        server.Get(
            R"(/apps/([^/]+)/decisions/([^/]+)/provenance)",
            [this](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                    std::string provn =
                        service->get_provenance(req.matches[1], req.matches[2]);
                    res.status = 200;
                    res.set_content(provn, "text/provenance-notation");
                });
            });

        server.Get(
            R"(/apps/([^/]+)/decisions/([^/]+)/explanations/([^/]+))",
            [this](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                    std::string profile = req.get_param_value("profile");
                    if (profile.empty())
                        throw_usage("missing required query parameter "
                                    "'profile'");
                    std::string format_name =
                        req.has_param("format") ? req.get_param_value("format")
                                                : "text";
                    Format format;
                    if (format_name == "text")
                        format = Format::Text;
                    else if (format_name == "html")
                        format = Format::Html;
                    else
                        throw_usage("format must be 'text' or 'html'");
                    auto sentences = service->get_explanation(
                        req.matches[1], req.matches[2], req.matches[3],
                        profile, format);
                    reply_json(res, 200, json{{"sentences", sentences}});
                });
            });

        server.Get(
            R"(/apps/([^/]+)/explanations)",
            [this](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                    if (std::string(req.matches[1]) != service->bundle().app)
                        throw_not_found("unknown app '" +
                                        std::string(req.matches[1]) + "'");
                    json listing = json::array();
                    for (const ExplanationSpec& spec :
                         service->bundle().manifest)
                        listing.push_back({{"id", spec.id},
                                           {"query", spec.query},
                                           {"plans", spec.plans},
                                           {"profiles", spec.profiles},
                                           {"audience", spec.audience}});
                    reply_json(res, 200,
                               json{{"app", service->bundle().app},
                                    {"explanations", listing}});
                });
            });
    }
};

AssistantServer::AssistantServer(std::shared_ptr<ExplanationService> service)
    : impl_(std::make_unique<Impl>(std::move(service))) {}

AssistantServer::~AssistantServer() { stop(); }

int AssistantServer::start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
        if (bound <= 0)
            throw_config("cannot bind to " + host);
    } else if (!impl_->server.bind_to_port(host, port)) {
        throw_config("cannot bind to " + host + ":" + std::to_string(port));
    }
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

void AssistantServer::run(const std::string& host, int port) {
    if (!impl_->server.listen(host, port))
        throw_config("cannot listen on " + host + ":" + std::to_string(port));
}

void AssistantServer::stop() {
    impl_->server.stop();
    if (impl_->worker.joinable())
        impl_->worker.join();
}

} // namespace ea::service
