#include "qoffload/wire.hpp"

#include "json.hpp"

#include <cerrno>
#include <cstring>
#include <sys/socket.h>
#include <unistd.h>

namespace qoffload::wire {

using nlohmann::json;

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

[[noreturn]] void malformed(const std::string& what) {
    throw Error(Errc::MalformedMessage, "malformed message: " + what);
}

const json& field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) malformed(std::string("missing field '") + name + "'");
    return *it;
}

std::uint64_t u64(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_number_unsigned()) malformed(std::string("field '") + name + "' must be an unsigned integer");
    return v.get<std::uint64_t>();
}

std::string str(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_string()) malformed(std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
}

json histogram_json(const Histogram& h) {
    return json{{"num_qubits", h.num_qubits()}, {"shots", h.shots()}, {"counts", h.counts()}};
}

Histogram histogram_from(const json& j) {
    if (!j.is_object()) malformed("histogram must be an object");
    const std::uint64_t n = u64(j, "num_qubits");
    const json& counts = field(j, "counts");
    if (!counts.is_array()) malformed("counts must be an array");
    std::vector<std::uint64_t> c;
    c.reserve(counts.size());
    for (const json& v : counts) {
        if (!v.is_number_unsigned()) malformed("counts must be unsigned integers");
        c.push_back(v.get<std::uint64_t>());
    }
    if (n < 1 || n > 40 || c.size() != (std::size_t{1} << n)) malformed("counts length must be 2^num_qubits");
    Histogram h(static_cast<std::size_t>(n), std::move(c));
    if (h.shots() != u64(j, "shots")) malformed("shots does not equal the sum of counts");
    return h;
}

}  // namespace

std::string_view kind_name(const Message& m) noexcept {
    return std::visit(overloaded{
                          [](const Ping&) { return std::string_view("Ping"); },
                          [](const Pong&) { return std::string_view("Pong"); },
                          [](const SubmitJob&) { return std::string_view("SubmitJob"); },
                          [](const QueryStatus&) { return std::string_view("QueryStatus"); },
                          [](const FetchResult&) { return std::string_view("FetchResult"); },
                          [](const Accepted&) { return std::string_view("Accepted"); },
                          [](const Status&) { return std::string_view("Status"); },
                          [](const Result&) { return std::string_view("Result"); },
                          [](const ErrorReply&) { return std::string_view("Error"); },
                      },
                      m);
}

std::string encode_body(const Message& m) {
    json j = std::visit(
        overloaded{
            [](const Ping&) { return json::object(); },
            [](const Pong&) { return json::object(); },
            [](const SubmitJob& s) {
                return json{{"qasm", s.qasm}, {"shots", s.shots}, {"seed", s.seed}};
            },
            [](const QueryStatus& q) { return json{{"job_id", q.job_id}}; },
            [](const FetchResult& f) { return json{{"job_id", f.job_id}}; },
            [](const Accepted& a) { return json{{"job_id", a.job_id}}; },
            [](const Status& s) {
                return json{{"job_id", s.job_id}, {"status", std::string(to_string(s.status))}};
            },
            [](const Result& r) {
                return json{{"job_id", r.job_id},
                            {"histogram", histogram_json(r.histogram)},
                            {"server_wall_time_us", r.server_wall_time_us}};
            },
            [](const ErrorReply& e) { return json{{"code", e.code}, {"message", e.message}}; },
        },
        m);
    j["kind"] = std::string(kind_name(m));
    try {
        return j.dump();
    } catch (const json::exception& e) {
        throw Error(Errc::MalformedMessage, std::string("cannot encode message: ") + e.what());
    }
}

Message decode_body(std::string_view body) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        malformed(e.what());
    }
    if (!j.is_object()) malformed("body must be a JSON object");
    const std::string kind = str(j, "kind");
    if (kind == "Ping") return Ping{};
    if (kind == "Pong") return Pong{};
    if (kind == "SubmitJob") return SubmitJob{str(j, "qasm"), u64(j, "shots"), u64(j, "seed")};
    if (kind == "QueryStatus") return QueryStatus{u64(j, "job_id")};
    if (kind == "FetchResult") return FetchResult{u64(j, "job_id")};
    if (kind == "Accepted") return Accepted{u64(j, "job_id")};
    if (kind == "Status") {
        auto st = job_status_from_string(str(j, "status"));
        if (!st) malformed("unknown job status");
        return Status{u64(j, "job_id"), *st};
    }
    if (kind == "Result") {
        try {
            return Result{u64(j, "job_id"), histogram_from(field(j, "histogram")),
                          u64(j, "server_wall_time_us")};
        } catch (const Error& e) {
            if (e.code() == Errc::MalformedMessage) throw;
            malformed(e.what());
        }
    }
    if (kind == "Error") return ErrorReply{str(j, "code"), str(j, "message")};
    throw Error(Errc::UnknownKind, "unknown message kind '" + kind + "'");
}

std::vector<std::uint8_t> encode_frame(const Message& m) {
    const std::string body = encode_body(m);
    if (body.size() > kMaxFrameBody) {
        throw Error(Errc::OversizedFrame, "frame body of " + std::to_string(body.size()) + " bytes exceeds limit");
    }
    const auto n = static_cast<std::uint32_t>(body.size());
    std::vector<std::uint8_t> out{static_cast<std::uint8_t>(n >> 24), static_cast<std::uint8_t>(n >> 16),
                                  static_cast<std::uint8_t>(n >> 8), static_cast<std::uint8_t>(n)};
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

namespace {

std::uint32_t read_length(std::span<const std::uint8_t, 4> h) {
    return (std::uint32_t{h[0]} << 24) | (std::uint32_t{h[1]} << 16) | (std::uint32_t{h[2]} << 8) | h[3];
}

}  // namespace

Message decode_frame(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4) throw Error(Errc::TruncatedFrame, "truncated frame: header needs 4 bytes");
    const std::uint32_t n = read_length(bytes.first<4>());
    if (n > kMaxFrameBody) {
        throw Error(Errc::OversizedFrame, "frame body length " + std::to_string(n) + " exceeds 16 MiB");
    }
    if (bytes.size() - 4 < n) {
        throw Error(Errc::TruncatedFrame, "truncated frame: expected " + std::to_string(n) +
                                              " body bytes, have " + std::to_string(bytes.size() - 4));
    }
    if (bytes.size() - 4 > n) malformed("trailing bytes after frame");
    const auto body = bytes.subspan(4);
    return decode_body(std::string_view(reinterpret_cast<const char*>(body.data()), body.size()));
}

namespace {

// Returns bytes read; less than `len` only on end of stream.
std::size_t read_fully(int fd, std::uint8_t* buf, std::size_t len) {
    std::size_t got = 0;
    while (got < len) {
        const ssize_t r = ::recv(fd, buf + got, len - got, 0);
        if (r == 0) break;
        if (r < 0) {
            if (errno == EINTR) continue;
            throw Error(Errc::Connection, std::string("recv failed: ") + std::strerror(errno));
        }
        got += static_cast<std::size_t>(r);
    }
    return got;
}

}  // namespace

void write_frame(int fd, const Message& m) {
    const std::vector<std::uint8_t> frame = encode_frame(m);
    std::size_t sent = 0;
    while (sent < frame.size()) {
        const ssize_t w = ::send(fd, frame.data() + sent, frame.size() - sent, MSG_NOSIGNAL);
        if (w < 0) {
            if (errno == EINTR) continue;
            throw Error(Errc::Connection, std::string("send failed: ") + std::strerror(errno));
        }
        sent += static_cast<std::size_t>(w);
    }
}

std::optional<Message> read_frame(int fd) {
    std::array<std::uint8_t, 4> header{};
    const std::size_t h = read_fully(fd, header.data(), header.size());
    if (h == 0) return std::nullopt;
    if (h < header.size()) throw Error(Errc::TruncatedFrame, "connection closed inside a frame header");
    const std::uint32_t n = read_length(header);
    if (n > kMaxFrameBody) {
        throw Error(Errc::OversizedFrame, "frame body length " + std::to_string(n) + " exceeds 16 MiB");
    }
    std::string body(n, '\0');
    if (read_fully(fd, reinterpret_cast<std::uint8_t*>(body.data()), n) < n) {
        throw Error(Errc::TruncatedFrame, "connection closed inside a frame body");
    }
    return decode_body(body);
}

}  // namespace qoffload::wire
