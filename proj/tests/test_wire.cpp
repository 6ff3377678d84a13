#include "doctest.h"
#include "qoffload/wire.hpp"
#include "random_messages.hpp"

using namespace qoffload;
using namespace qoffload::wire;
using wiregen::random_message;
using wiregen::random_text;

namespace {

const std::string kBellQasm =
    "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\nh q[0];\ncx q[0],q[1];\nmeasure q -> c;\n";

std::vector<std::uint8_t> frame_of(const std::string& body, std::uint32_t declared) {
    std::vector<std::uint8_t> f{static_cast<std::uint8_t>(declared >> 24), static_cast<std::uint8_t>(declared >> 16),
                                static_cast<std::uint8_t>(declared >> 8), static_cast<std::uint8_t>(declared)};
    f.insert(f.end(), body.begin(), body.end());
    return f;
}

std::vector<std::uint8_t> frame_of(const std::string& body) {
    return frame_of(body, static_cast<std::uint32_t>(body.size()));
}

Errc decode_error(const std::vector<std::uint8_t>& bytes) {
    try {
        (void)decode_frame(bytes);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("frame decoded unexpectedly");
    return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("Ping frame layout") {
    const auto f = encode_frame(Ping{});
    const std::string body = R"({"kind":"Ping"})";
    REQUIRE(body.size() == 15);
    REQUIRE(f.size() == 19);
    CHECK(f[0] == 0x00);
    CHECK(f[1] == 0x00);
    CHECK(f[2] == 0x00);
    CHECK(f[3] == 0x0F);
    CHECK(std::string(f.begin() + 4, f.end()) == body);
    CHECK(std::holds_alternative<Ping>(decode_frame(f)));
}

TEST_CASE("documented bodies") {
    CHECK(encode_body(Pong{}) == R"({"kind":"Pong"})");
    CHECK(encode_body(SubmitJob{"x", 10, 7}) == R"({"kind":"SubmitJob","qasm":"x","seed":7,"shots":10})");
    CHECK(encode_body(QueryStatus{3}) == R"({"job_id":3,"kind":"QueryStatus"})");
    CHECK(encode_body(FetchResult{3}) == R"({"job_id":3,"kind":"FetchResult"})");
    CHECK(encode_body(Accepted{3}) == R"({"job_id":3,"kind":"Accepted"})");
    CHECK(encode_body(Status{3, JobStatus::Running}) == R"({"job_id":3,"kind":"Status","status":"Running"})");
    CHECK(encode_body(Result{3, Histogram(1, {2, 1}), 55}) ==
          R"({"histogram":{"counts":[2,1],"num_qubits":1,"shots":3},"job_id":3,"kind":"Result","server_wall_time_us":55})");
    CHECK(encode_body(ErrorReply{"PARSE", "line 1"}) == R"({"code":"PARSE","kind":"Error","message":"line 1"})");
}

TEST_CASE("SubmitJob round trip") {
    const Message m = SubmitJob{kBellQasm, 1000, 7};
    CHECK(decode_frame(encode_frame(m)) == m);
}

TEST_CASE("500 random messages round trip exactly") {
    std::mt19937_64 rng(500);
    for (int i = 0; i < 500; ++i) {
        const Message m = random_message(rng);
        const auto f = encode_frame(m);
        CHECK(decode_frame(f) == m);
        CHECK(encode_frame(decode_frame(f)) == f);
    }
}

TEST_CASE("oversized frames") {
    std::vector<std::uint8_t> f{0x02, 0x00, 0x00, 0x00};  // 2^25
    CHECK(decode_error(f) == Errc::OversizedFrame);
    CHECK(decode_error(frame_of("{}", kMaxFrameBody + 1)) == Errc::OversizedFrame);
}

TEST_CASE("truncated frames at every prefix length") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
        const auto f = encode_frame(random_message(rng));
        for (std::size_t cut = 0; cut < f.size(); ++cut) {
            const std::vector<std::uint8_t> prefix(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(cut));
            CHECK(decode_error(prefix) == Errc::TruncatedFrame);
        }
    }
}

TEST_CASE("typed decode errors") {
    CHECK(decode_error(frame_of(R"({"kind":"Launch"})")) == Errc::UnknownKind);
    CHECK(decode_error(frame_of(R"({"kind":"Ping")")) == Errc::MalformedMessage);
    CHECK(decode_error(frame_of(R"([1,2])")) == Errc::MalformedMessage);
    CHECK(decode_error(frame_of(R"({"type":"Ping"})")) == Errc::MalformedMessage);
    CHECK(decode_error(frame_of(R"({"kind":"SubmitJob","qasm":"x","shots":10})")) == Errc::MalformedMessage);
    CHECK(decode_error(frame_of(R"({"kind":"SubmitJob","qasm":"x","shots":-1,"seed":1})")) ==
          Errc::MalformedMessage);
    CHECK(decode_error(frame_of(R"({"kind":"QueryStatus","job_id":"7"})")) == Errc::MalformedMessage);
    CHECK(decode_error(frame_of(R"({"kind":"Status","job_id":7,"status":"Lost"})")) == Errc::MalformedMessage);
    CHECK(decode_error(frame_of(
              R"({"kind":"Result","job_id":1,"histogram":{"num_qubits":1,"shots":5,"counts":[1,1]},"server_wall_time_us":0})")) ==
          Errc::MalformedMessage);
    CHECK(decode_error(frame_of(
              R"({"kind":"Result","job_id":1,"histogram":{"num_qubits":2,"shots":2,"counts":[1,1]},"server_wall_time_us":0})")) ==
          Errc::MalformedMessage);
    auto trailing = encode_frame(Ping{});
    trailing.push_back('x');
    CHECK(decode_error(trailing) == Errc::MalformedMessage);
}

TEST_CASE("random byte strings never crash the decoder") {
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<int> byte(0, 255), len(0, 64);
    for (int i = 0; i < 2000; ++i) {
        std::vector<std::uint8_t> f(static_cast<std::size_t>(len(rng)));
        for (auto& b : f) b = static_cast<std::uint8_t>(byte(rng));
        if (f.size() >= 4 && i % 2 == 0) {
            const auto n = static_cast<std::uint32_t>(f.size() - 4);
            f[0] = 0;
            f[1] = 0;
            f[2] = static_cast<std::uint8_t>(n >> 8);
            f[3] = static_cast<std::uint8_t>(n);
        }
        try {
            (void)decode_frame(f);
        } catch (const Error&) {
        }
    }
}
