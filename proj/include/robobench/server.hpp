#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "robobench/actions.hpp"

namespace robobench {

struct ServerConfig {
    std::string host = "127.0.0.1";
    int port = 8080;      // 0 binds an ephemeral port
    int default_env = 1;  // environment of the always-present "default" session
};

/// RESTful action service. Wire protocol (JSON bodies):
///
///   POST /session                     {"env_id": 1|2|3}   -> {"session_id": "..."}
///   POST /session/{id}/{action}       action arguments    -> {"ok", "message", "data"?}
///   GET  /session/{id}/trace                              -> {"trace": ["pick(...) -> ok", ...]}
///   GET  /health                                          -> {"ok": true}
///
/// Transport and schema problems map to 4xx; in-domain action failures are
/// 200 with ok=false so agents see descriptive feedback rather than HTTP
/// errors. Requests within one session are serialized; different sessions
/// proceed in parallel.
class ApiServer {
public:
    explicit ApiServer(ServerConfig config);
    ~ApiServer();

    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    /// Starts the listener on a background thread; returns once it accepts
    /// connections. Throws ConfigError on bind failure.
    void start();
    void stop();

    /// Serves on the calling thread until stop() is invoked elsewhere.
    void run_blocking();

    int port() const { return bound_port_; }
    std::string base_url() const;

private:
    struct Session {
        std::string id;
        World world;
        std::mutex mutex;
        std::chrono::system_clock::time_point created_at;
    };

    void setup_routes();
    std::shared_ptr<Session> find_session(const std::string& id);
    std::string create_session(int env_id);
    void create_session_with_id(const std::string& id, int env_id);

    ServerConfig config_;
    int bound_port_ = 0;
    std::unique_ptr<struct ApiServerImpl> impl_;
    std::thread thread_;

    std::mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    int next_session_ = 0;
};

/// ActionDispatcher backed by a remote ApiServer session. Transport failures
/// surface as DispatchTransportError.
class HttpDispatcher : public ActionDispatcher {
public:
    HttpDispatcher(std::string base_url, std::string session_id);

    /// Creates a fresh session on the remote server.
    static std::unique_ptr<HttpDispatcher> create_session(const std::string& base_url, int env_id);

    DispatchOutcome dispatch(const std::string& action, const Json& args) override;
    std::vector<std::string> trace_lines() override;

    const std::string& session_id() const { return session_id_; }

private:
    std::string base_url_;
    std::string session_id_;
};

}  // namespace robobench
