#pragma once

#include "qoffload/runtime.hpp"
#include "qoffload/wire.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

namespace qoffload {

struct Endpoint {
    std::string host;
    std::uint16_t port = 0;

    /// "host:port"; throws InvalidArgument.
    static Endpoint parse(std::string_view text);
    [[nodiscard]] std::string str() const { return host + ":" + std::to_string(port); }
};

struct ServerConfig {
    std::string bind = "127.0.0.1:7117";
    std::size_t capacity = kDefaultMaxQubits;
    /// Delay applied to every message leg, inbound and outbound.
    std::chrono::milliseconds latency{0};
    /// Fetched results are evicted this long after their first fetch.
    std::chrono::milliseconds result_ttl = std::chrono::minutes(10);
};

/// Resource-manager service. Connections are served concurrently; jobs run
/// one at a time on the backend device in arrival order.
class Server {
public:
    /// Rewrites a parsed circuit before it is queued. The default is the identity.
    using Pass = std::function<Circuit(Circuit)>;

    explicit Server(ServerConfig config, std::unique_ptr<Backend> backend = nullptr);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and starts accepting. Throws Error(Bind) if the address is unusable.
    void start();
    /// Stops accepting, lets the running job finish, fails queued jobs, closes connections.
    void stop();

    [[nodiscard]] std::uint16_t port() const noexcept { return port_; }
    [[nodiscard]] std::string endpoint() const;
    [[nodiscard]] const ServerConfig& config() const noexcept { return config_; }

    void set_pass(Pass pass);

    /// Number of job records currently held (queued, running, or awaiting eviction).
    [[nodiscard]] std::size_t retained_jobs() const;

private:
    struct Record {
        JobHandle handle;
        std::optional<Clock::time_point> fetched_at;
    };
    struct Connection {
        std::thread thread;
        std::shared_ptr<std::atomic<bool>> finished;
    };

    void accept_loop();
    void serve_connection(int fd);
    wire::Message handle(const wire::Message& request);
    wire::Message submit(const wire::SubmitJob& req);
    wire::Message status(const wire::QueryStatus& req);
    wire::Message fetch(const wire::FetchResult& req);
    void evict_expired();
    void delay() const;

    ServerConfig config_;
    DeviceRegistry registry_;
    Pass pass_;
    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
    std::thread acceptor_;
    std::mutex conn_mutex_;
    std::list<Connection> connections_;
    mutable std::mutex jobs_mutex_;
    std::map<std::uint64_t, Record> jobs_;
};

/// Starts a server; the returned object keeps it alive.
[[nodiscard]] std::unique_ptr<Server> serve(const ServerConfig& config,
                                            std::unique_ptr<Backend> backend = nullptr);

struct ClientOptions {
    /// Client-side delay per message leg, modelling link distance.
    std::chrono::milliseconds latency{0};
    std::chrono::milliseconds poll_interval{1};
    std::chrono::milliseconds timeout = std::chrono::minutes(10);
};

/// One framed request/response connection to a resource manager.
class ClientConnection {
public:
    explicit ClientConnection(const std::string& endpoint, ClientOptions options = {});
    ~ClientConnection();
    ClientConnection(const ClientConnection&) = delete;
    ClientConnection& operator=(const ClientConnection&) = delete;

    /// Sends one request and returns the response. Error replies are returned, not thrown.
    wire::Message request(const wire::Message& m);

private:
    int fd_ = -1;
    std::string endpoint_;
    ClientOptions options_;
};

/// SubmitJob, then QueryStatus until finished, then FetchResult. wall_time is
/// the full client-observed round trip.
[[nodiscard]] JobResult client_submit(const std::string& endpoint, const Circuit& circuit,
                                      std::uint64_t shots, Seed seed,
                                      const ClientOptions& options = {});

/// Liveness check; true when the server answers Pong.
[[nodiscard]] bool ping(const std::string& endpoint, const ClientOptions& options = {});

/// Device backend that forwards each job to a resource manager.
class RemoteBackend final : public Backend {
public:
    RemoteBackend(std::string endpoint, ClientOptions options = {})
        : endpoint_(std::move(endpoint)), options_(options) {}
    Histogram execute(const Circuit& circuit, std::uint64_t shots, Seed seed) override;

private:
    std::string endpoint_;
    ClientOptions options_;
};

/// Registers a Remote device that talks to `endpoint`.
void register_remote(DeviceRegistry& registry, const std::string& name, const std::string& endpoint,
                     std::size_t capacity = kDefaultMaxQubits,
                     std::chrono::milliseconds latency = std::chrono::milliseconds{0});

}  // namespace qoffload
