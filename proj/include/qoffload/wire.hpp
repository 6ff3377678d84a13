#pragma once

#include "qoffload/circuit.hpp"
#include "qoffload/error.hpp"
#include "qoffload/runtime.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace qoffload::wire {

/// Frames larger than this are rejected on both ends.
inline constexpr std::size_t kMaxFrameBody = 16u << 20;

struct Ping {
    friend bool operator==(const Ping&, const Ping&) = default;
};
struct Pong {
    friend bool operator==(const Pong&, const Pong&) = default;
};
struct SubmitJob {
    std::string qasm;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    friend bool operator==(const SubmitJob&, const SubmitJob&) = default;
};
struct QueryStatus {
    std::uint64_t job_id = 0;
    friend bool operator==(const QueryStatus&, const QueryStatus&) = default;
};
struct FetchResult {
    std::uint64_t job_id = 0;
    friend bool operator==(const FetchResult&, const FetchResult&) = default;
};
struct Accepted {
    std::uint64_t job_id = 0;
    friend bool operator==(const Accepted&, const Accepted&) = default;
};
struct Status {
    std::uint64_t job_id = 0;
    JobStatus status = JobStatus::Queued;
    friend bool operator==(const Status&, const Status&) = default;
};
struct Result {
    std::uint64_t job_id = 0;
    Histogram histogram;
    std::uint64_t server_wall_time_us = 0;
    friend bool operator==(const Result&, const Result&) = default;
};
struct ErrorReply {
    std::string code;  // PARSE, UNSUPPORTED, UNKNOWN_JOB, NOT_READY, JOB_FAILED, CAPACITY, BAD_REQUEST, INTERNAL
    std::string message;
    friend bool operator==(const ErrorReply&, const ErrorReply&) = default;
};

using Message =
    std::variant<Ping, SubmitJob, QueryStatus, FetchResult, Accepted, Status, Result, ErrorReply, Pong>;

/// Value of the "kind" discriminator ("Ping", "SubmitJob", ..., "Error").
[[nodiscard]] std::string_view kind_name(const Message& m) noexcept;

/// Compact JSON body; keys are emitted in sorted order.
[[nodiscard]] std::string encode_body(const Message& m);
[[nodiscard]] Message decode_body(std::string_view body);

/// 4-byte big-endian body length followed by the JSON body.
[[nodiscard]] std::vector<std::uint8_t> encode_frame(const Message& m);
/// Decodes exactly one frame. Throws Error with TruncatedFrame, OversizedFrame,
/// UnknownKind or MalformedMessage.
[[nodiscard]] Message decode_frame(std::span<const std::uint8_t> bytes);

/// Server-side error reply surfaced to a client.
class RemoteError : public Error {
public:
    RemoteError(std::string remote_code, const std::string& message)
        : Error(Errc::Remote, remote_code + ": " + message), remote_code_(std::move(remote_code)) {}
    [[nodiscard]] const std::string& remote_code() const noexcept { return remote_code_; }

private:
    std::string remote_code_;
};

/// Blocking frame I/O on a connected stream socket. read_frame returns nullopt
/// on a clean end of stream before any header byte.
void write_frame(int fd, const Message& m);
[[nodiscard]] std::optional<Message> read_frame(int fd);

}  // namespace qoffload::wire
