#include "qoffload/resman.hpp"

#include "qoffload/emit.hpp"

#include <cerrno>
#include <charconv>
#include <cstring>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

namespace qoffload {

namespace {

constexpr int kPollMillis = 50;
constexpr const char* kBackendDevice = "backend";

std::string errno_text() { return std::strerror(errno); }

struct AddrInfo {
    addrinfo* head = nullptr;
    ~AddrInfo() {
        if (head) ::freeaddrinfo(head);
    }
};

void resolve(const Endpoint& ep, bool passive, AddrInfo& out, Errc on_error) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    if (passive) hints.ai_flags = AI_PASSIVE;
    const std::string port = std::to_string(ep.port);
    const int rc = ::getaddrinfo(ep.host.empty() ? nullptr : ep.host.c_str(), port.c_str(), &hints, &out.head);
    if (rc != 0) {
        throw Error(on_error, "cannot resolve " + ep.str() + ": " + ::gai_strerror(rc));
    }
}

}  // namespace

Endpoint Endpoint::parse(std::string_view text) {
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos) {
        throw Error(Errc::InvalidArgument, "endpoint '" + std::string(text) + "' must be host:port");
    }
    Endpoint ep;
    ep.host = std::string(text.substr(0, colon));
    const std::string_view port = text.substr(colon + 1);
    unsigned value = 0;
    auto [p, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
    if (ec != std::errc{} || p != port.data() + port.size() || port.empty() || value > 65535) {
        throw Error(Errc::InvalidArgument, "endpoint '" + std::string(text) + "' has an invalid port");
    }
    ep.port = static_cast<std::uint16_t>(value);
    return ep;
}

Server::Server(ServerConfig config, std::unique_ptr<Backend> backend)
    : config_(std::move(config)), pass_([](Circuit c) { return c; }) {
    if (!backend) backend = std::make_unique<SimulatorBackend>(config_.capacity);
    registry_.register_device(DeviceInfo{kBackendDevice, DeviceKind::LocalSimulator, config_.capacity, {}, {}},
                              std::move(backend));
}

Server::~Server() { stop(); }

void Server::set_pass(Pass pass) { pass_ = std::move(pass); }

std::string Server::endpoint() const { return Endpoint::parse(config_.bind).host + ":" + std::to_string(port_); }

void Server::start() {
    const Endpoint ep = Endpoint::parse(config_.bind);
    AddrInfo ai;
    resolve(ep, true, ai, Errc::Bind);
    std::string last_error = "no usable address";
    for (addrinfo* a = ai.head; a; a = a->ai_next) {
        const int fd = ::socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol);
        if (fd < 0) {
            last_error = errno_text();
            continue;
        }
        const int one = 1;
        ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        if (::bind(fd, a->ai_addr, a->ai_addrlen) == 0 && ::listen(fd, 64) == 0) {
            sockaddr_storage bound{};
            socklen_t len = sizeof bound;
            ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
            port_ = ntohs(bound.ss_family == AF_INET6
                              ? reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port
                              : reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
            listen_fd_ = fd;
            break;
        }
        last_error = errno_text();
        ::close(fd);
    }
    if (listen_fd_ < 0) throw Error(Errc::Bind, "cannot bind " + config_.bind + ": " + last_error);
    acceptor_ = std::thread([this] { accept_loop(); });
}

void Server::stop() {
    if (stopping_.exchange(true)) return;
    if (acceptor_.joinable()) acceptor_.join();
    if (listen_fd_ >= 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    std::list<Connection> conns;
    {
        std::lock_guard lock(conn_mutex_);
        conns.swap(connections_);
    }
    for (auto& c : conns) c.thread.join();
    registry_.shutdown();
}

std::size_t Server::retained_jobs() const {
    std::lock_guard lock(jobs_mutex_);
    return jobs_.size();
}

void Server::accept_loop() {
    while (!stopping_) {
        pollfd p{listen_fd_, POLLIN, 0};
        const int rc = ::poll(&p, 1, kPollMillis);
        {
            std::lock_guard lock(conn_mutex_);
            connections_.remove_if([](Connection& c) {
                if (!*c.finished) return false;
                c.thread.join();
                return true;
            });
        }
        if (rc <= 0 || !(p.revents & POLLIN)) continue;
        const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
        if (fd < 0) continue;
        const int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        auto finished = std::make_shared<std::atomic<bool>>(false);
        std::lock_guard lock(conn_mutex_);
        connections_.push_back(Connection{std::thread([this, fd, finished] {
                                              serve_connection(fd);
                                              ::close(fd);
                                              *finished = true;
                                          }),
                                          finished});
    }
}

void Server::delay() const {
    if (config_.latency.count() > 0) std::this_thread::sleep_for(config_.latency);
}

void Server::serve_connection(int fd) {
    while (!stopping_) {
        pollfd p{fd, POLLIN, 0};
        const int rc = ::poll(&p, 1, kPollMillis);
        if (rc == 0) continue;
        if (rc < 0) {
            if (errno == EINTR) continue;
            return;
        }
        wire::Message reply;
        bool keep_open = true;
        try {
            std::optional<wire::Message> request = wire::read_frame(fd);
            if (!request) return;
            delay();
            reply = handle(*request);
        } catch (const Error& e) {
            // A bad body leaves the stream aligned; a bad header does not.
            keep_open = e.code() == Errc::MalformedMessage || e.code() == Errc::UnknownKind;
            if (e.code() == Errc::Connection) return;
            reply = wire::ErrorReply{"BAD_REQUEST", e.what()};
        }
        delay();
        try {
            wire::write_frame(fd, reply);
        } catch (const Error&) {
            return;
        }
        if (!keep_open) return;
    }
}

wire::Message Server::handle(const wire::Message& request) {
    evict_expired();
    try {
        if (std::holds_alternative<wire::Ping>(request)) return wire::Pong{};
        if (auto* s = std::get_if<wire::SubmitJob>(&request)) return submit(*s);
        if (auto* q = std::get_if<wire::QueryStatus>(&request)) return status(*q);
        if (auto* f = std::get_if<wire::FetchResult>(&request)) return fetch(*f);
        return wire::ErrorReply{"BAD_REQUEST", "'" + std::string(wire::kind_name(request)) +
                                                   "' is not a request kind"};
    } catch (const std::exception& e) {
        return wire::ErrorReply{"INTERNAL", e.what()};
    }
}

wire::Message Server::submit(const wire::SubmitJob& req) {
    if (req.shots < 1) return wire::ErrorReply{"BAD_REQUEST", "shots must be at least 1"};
    std::optional<Circuit> circuit;
    try {
        circuit = parse_qasm(req.qasm, config_.capacity);
    } catch (const ParseError& e) {
        const char* code = e.code() == Errc::UnsupportedConstruct ? "UNSUPPORTED"
                           : e.code() == Errc::SizeOutOfRange         ? "CAPACITY"
                                                                      : "PARSE";
        return wire::ErrorReply{code, e.what()};
    }
    Job job = Job::make(pass_(std::move(*circuit)), req.shots, req.seed);
    std::lock_guard lock(jobs_mutex_);
    JobHandle h = registry_.submit_async(kBackendDevice, std::move(job));
    const std::uint64_t id = h.id();
    jobs_.emplace(id, Record{std::move(h), std::nullopt});
    return wire::Accepted{id};
}

wire::Message Server::status(const wire::QueryStatus& req) {
    std::lock_guard lock(jobs_mutex_);
    auto it = jobs_.find(req.job_id);
    if (it == jobs_.end()) return wire::ErrorReply{"UNKNOWN_JOB", "no job " + std::to_string(req.job_id)};
    return wire::Status{req.job_id, it->second.handle.status()};
}

wire::Message Server::fetch(const wire::FetchResult& req) {
    std::unique_lock lock(jobs_mutex_);
    auto it = jobs_.find(req.job_id);
    if (it == jobs_.end()) return wire::ErrorReply{"UNKNOWN_JOB", "no job " + std::to_string(req.job_id)};
    Record& rec = it->second;
    switch (rec.handle.status()) {
        case JobStatus::Queued:
        case JobStatus::Running:
            return wire::ErrorReply{"NOT_READY", "job " + std::to_string(req.job_id) + " has not finished"};
        case JobStatus::Failed:
        case JobStatus::Done: break;
    }
    if (!rec.fetched_at) rec.fetched_at = Clock::now();
    try {
        JobResult r = rec.handle.wait();
        return wire::Result{req.job_id, std::move(r.histogram),
                            static_cast<std::uint64_t>(
                                std::chrono::duration_cast<std::chrono::microseconds>(r.wall_time).count())};
    } catch (const Error& e) {
        return wire::ErrorReply{"JOB_FAILED", e.what()};
    }
}

void Server::evict_expired() {
    const auto now = Clock::now();
    std::lock_guard lock(jobs_mutex_);
    std::erase_if(jobs_, [&](const auto& kv) {
        return kv.second.fetched_at && now - *kv.second.fetched_at >= config_.result_ttl;
    });
}

std::unique_ptr<Server> serve(const ServerConfig& config, std::unique_ptr<Backend> backend) {
    auto server = std::make_unique<Server>(config, std::move(backend));
    server->start();
    return server;
}

ClientConnection::ClientConnection(const std::string& endpoint, ClientOptions options)
    : endpoint_(endpoint), options_(options) {
    const Endpoint ep = Endpoint::parse(endpoint);
    AddrInfo ai;
    resolve(ep, false, ai, Errc::Connection);
    std::string last_error = "no usable address";
    for (addrinfo* a = ai.head; a; a = a->ai_next) {
        const int fd = ::socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol);
        if (fd < 0) {
            last_error = errno_text();
            continue;
        }
        if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) {
            const int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            fd_ = fd;
            return;
        }
        last_error = errno_text();
        ::close(fd);
    }
    throw Error(Errc::Connection, "cannot connect to " + endpoint + ": " + last_error);
}

ClientConnection::~ClientConnection() {
    if (fd_ >= 0) ::close(fd_);
}

wire::Message ClientConnection::request(const wire::Message& m) {
    if (options_.latency.count() > 0) std::this_thread::sleep_for(options_.latency);
    wire::write_frame(fd_, m);
    std::optional<wire::Message> reply = wire::read_frame(fd_);
    if (!reply) throw Error(Errc::Connection, "connection to " + endpoint_ + " closed by server");
    if (options_.latency.count() > 0) std::this_thread::sleep_for(options_.latency);
    return std::move(*reply);
}

namespace {

template <class T>
T expect_reply(wire::Message reply) {
    if (auto* e = std::get_if<wire::ErrorReply>(&reply)) throw wire::RemoteError(e->code, e->message);
    if (auto* t = std::get_if<T>(&reply)) return std::move(*t);
    throw Error(Errc::MalformedMessage, "unexpected '" + std::string(wire::kind_name(reply)) + "' reply");
}

}  // namespace

JobResult client_submit(const std::string& endpoint, const Circuit& circuit, std::uint64_t shots, Seed seed,
                        const ClientOptions& options) {
    const auto start = Clock::now();
    const std::string qasm = emit_qasm(circuit);
    ClientConnection conn(endpoint, options);
    const auto accepted = expect_reply<wire::Accepted>(conn.request(wire::SubmitJob{qasm, shots, seed}));
    for (;;) {
        const auto st = expect_reply<wire::Status>(conn.request(wire::QueryStatus{accepted.job_id}));
        if (st.status == JobStatus::Done || st.status == JobStatus::Failed) break;
        if (Clock::now() - start > options.timeout) {
            throw Error(Errc::DeviceFailure, "timed out waiting for job " + std::to_string(accepted.job_id));
        }
        std::this_thread::sleep_for(options.poll_interval);
    }
    auto result = expect_reply<wire::Result>(conn.request(wire::FetchResult{accepted.job_id}));
    const auto finished = Clock::now();
    return JobResult{std::move(result.histogram), finished - start, endpoint, start, finished};
}

bool ping(const std::string& endpoint, const ClientOptions& options) {
    ClientConnection conn(endpoint, options);
    return std::holds_alternative<wire::Pong>(conn.request(wire::Ping{}));
}

Histogram RemoteBackend::execute(const Circuit& circuit, std::uint64_t shots, Seed seed) {
    return client_submit(endpoint_, circuit, shots, seed, options_).histogram;
}

void register_remote(DeviceRegistry& registry, const std::string& name, const std::string& endpoint,
                     std::size_t capacity, std::chrono::milliseconds latency) {
    ClientOptions opts;
    opts.latency = latency;
    registry.register_device(DeviceInfo{name, DeviceKind::Remote, capacity, endpoint, latency},
                             std::make_unique<RemoteBackend>(endpoint, opts));
}

}  // namespace qoffload
