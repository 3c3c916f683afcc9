#include "robobench/server.hpp"

#include <httplib.h>

namespace robobench {

struct ApiServerImpl {
    httplib::Server server;
};

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& kind,
                const std::string& detail) {
    send_json(res, status, Json{{"error", kind}, {"detail", detail}});
}

}  // namespace

ApiServer::ApiServer(ServerConfig config)
    : config_(std::move(config)), impl_(std::make_unique<ApiServerImpl>()) {
    create_session_with_id("default", config_.default_env);
    setup_routes();
}

ApiServer::~ApiServer() {
    stop();
}

void ApiServer::setup_routes() {
    auto& svr = impl_->server;

    svr.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, Json{{"ok", true}});
    });

    svr.Post("/session", [this](const httplib::Request& req, httplib::Response& res) {
        Json body;
        try {
            body = Json::parse(req.body.empty() ? "{}" : req.body);
        } catch (const Json::parse_error& e) {
            send_error(res, 400, "schema_error", std::string("request body is not JSON: ") + e.what());
            return;
        }
        if (!body.is_object() || !body.contains("env_id") ||
            !body["env_id"].is_number_integer()) {
            send_error(res, 400, "schema_error", "expected {\"env_id\": 1|2|3}");
            return;
        }
        int env_id = body["env_id"].get<int>();
        try {
            std::string id = create_session(env_id);
            send_json(res, 200, Json{{"session_id", id}});
        } catch (const ConfigError& e) {
            send_error(res, 400, "schema_error", e.what());
        }
    });

    svr.Get(R"(/session/([^/]+)/trace)", [this](const httplib::Request& req,
                                                httplib::Response& res) {
        auto session = find_session(req.matches[1]);
        if (!session) {
            send_error(res, 404, "unknown_session", "no session " + std::string(req.matches[1]));
            return;
        }
        std::lock_guard<std::mutex> lock(session->mutex);
        Json lines = Json::array();
        for (auto& line : session->world.trace_lines()) {
            lines.push_back(line);
        }
        send_json(res, 200, Json{{"trace", std::move(lines)}});
    });

    svr.Post(R"(/session/([^/]+)/([^/]+))", [this](const httplib::Request& req,
                                                   httplib::Response& res) {
        std::string session_id = req.matches[1];
        std::string action = req.matches[2];
        auto session = find_session(session_id);
        if (!session) {
            send_error(res, 404, "unknown_session", "no session " + session_id);
            return;
        }
        if (find_action(action) == nullptr) {
            send_error(res, 404, "unknown_action", "no action " + action);
            return;
        }
        Json args;
        try {
            args = Json::parse(req.body.empty() ? "{}" : req.body);
        } catch (const Json::parse_error& e) {
            send_error(res, 400, "schema_error", std::string("request body is not JSON: ") + e.what());
            return;
        }
        DispatchOutcome outcome;
        {
            std::lock_guard<std::mutex> lock(session->mutex);
            outcome = dispatch_action(session->world, action, args);
        }
        switch (outcome.status) {
            case DispatchOutcome::Status::Ok:
                send_json(res, 200, outcome.to_json());
                break;
            case DispatchOutcome::Status::SchemaError:
                send_error(res, 400, "schema_error", outcome.error);
                break;
            case DispatchOutcome::Status::UnknownAction:
                send_error(res, 404, "unknown_action", outcome.error);
                break;
        }
    });
}

std::shared_ptr<ApiServer::Session> ApiServer::find_session(const std::string& id) {
    std::lock_guard<std::mutex> lock(sessions_mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::string ApiServer::create_session(int env_id) {
    std::string id;
    {
        std::lock_guard<std::mutex> lock(sessions_mutex_);
        id = "s" + std::to_string(++next_session_);
    }
    create_session_with_id(id, env_id);
    return id;
}

void ApiServer::create_session_with_id(const std::string& id, int env_id) {
    auto session = std::make_shared<Session>();
    session->id = id;
    session->world = World::load_environment(env_id);  // throws ConfigError on bad id
    session->created_at = std::chrono::system_clock::now();
    std::lock_guard<std::mutex> lock(sessions_mutex_);
    sessions_[id] = std::move(session);
}

void ApiServer::start() {
    auto& svr = impl_->server;
    if (config_.port == 0) {
        bound_port_ = svr.bind_to_any_port(config_.host);
        if (bound_port_ <= 0) {
            throw ConfigError("failed to bind to an ephemeral port on " + config_.host);
        }
    } else {
        if (!svr.bind_to_port(config_.host, config_.port)) {
            throw ConfigError("failed to bind " + config_.host + ":" +
                              std::to_string(config_.port));
        }
        bound_port_ = config_.port;
    }
    thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
    svr.wait_until_ready();
}

void ApiServer::run_blocking() {
    auto& svr = impl_->server;
    if (!svr.bind_to_port(config_.host, config_.port)) {
        throw ConfigError("failed to bind " + config_.host + ":" + std::to_string(config_.port));
    }
    bound_port_ = config_.port;
    svr.listen_after_bind();
}

void ApiServer::stop() {
    impl_->server.stop();
    if (thread_.joinable()) {
        thread_.join();
    }
}

std::string ApiServer::base_url() const {
    return "http://" + config_.host + ":" + std::to_string(bound_port_);
}

HttpDispatcher::HttpDispatcher(std::string base_url, std::string session_id)
    : base_url_(std::move(base_url)), session_id_(std::move(session_id)) {}

std::unique_ptr<HttpDispatcher> HttpDispatcher::create_session(const std::string& base_url,
                                                               int env_id) {
    httplib::Client client(base_url);
    Json body{{"env_id", env_id}};
    auto res = client.Post("/session", body.dump(), "application/json");
    if (!res) {
        throw DispatchTransportError("action service unreachable: " +
                                     httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw ConfigError("session creation failed (" + std::to_string(res->status) +
                          "): " + res->body);
    }
    Json parsed = Json::parse(res->body);
    return std::make_unique<HttpDispatcher>(base_url, parsed.at("session_id").get<std::string>());
}

DispatchOutcome HttpDispatcher::dispatch(const std::string& action, const Json& args) {
    httplib::Client client(base_url_);
    auto res = client.Post("/session/" + session_id_ + "/" + action, args.dump(),
                           "application/json");
    if (!res) {
        throw DispatchTransportError("action service unreachable: " +
                                     httplib::to_string(res.error()));
    }
    Json body;
    try {
        body = Json::parse(res->body);
    } catch (const Json::parse_error&) {
        body = Json{{"detail", res->body}};
    }
    if (res->status == 200) {
        ActionResult result;
        result.ok = body.value("ok", false);
        result.message = body.value("message", "");
        result.data = body.contains("data") ? body["data"] : Json(nullptr);
        return {DispatchOutcome::Status::Ok, std::move(result), ""};
    }
    std::string detail = body.value("detail", res->body);
    if (res->status == 404) {
        return {DispatchOutcome::Status::UnknownAction, {}, detail};
    }
    return {DispatchOutcome::Status::SchemaError, {}, detail};
}

std::vector<std::string> HttpDispatcher::trace_lines() {
    httplib::Client client(base_url_);
    auto res = client.Get("/session/" + session_id_ + "/trace");
    if (!res) {
        throw DispatchTransportError("action service unreachable: " +
                                     httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw DispatchTransportError("trace fetch failed with status " +
                                     std::to_string(res->status));
    }
    Json body = Json::parse(res->body);
    std::vector<std::string> lines;
    for (const auto& line : body.at("trace")) {
        lines.push_back(line.get<std::string>());
    }
    return lines;
}

}  // namespace robobench
