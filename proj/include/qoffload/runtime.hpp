#pragma once

#include "qoffload/circuit.hpp"
#include "qoffload/error.hpp"
#include "qoffload/statevector.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace qoffload {

using Clock = std::chrono::steady_clock;

enum class DeviceKind { LocalSimulator, Remote };
enum class JobStatus { Queued, Running, Done, Failed };

[[nodiscard]] std::string_view to_string(DeviceKind k) noexcept;
[[nodiscard]] std::string_view to_string(JobStatus s) noexcept;
[[nodiscard]] std::optional<JobStatus> job_status_from_string(std::string_view s) noexcept;

/// A measured circuit plus the sampling request.
struct Job {
    Circuit circuit;
    std::uint64_t shots;
    Seed seed;
    Clock::time_point submitted_at;

    /// Validates measured circuit and shots >= 1; stamps submitted_at.
    static Job make(Circuit circuit, std::uint64_t shots, Seed seed);
};

struct JobResult {
    Histogram histogram;
    /// Queue wait plus execution, measured on the monotonic clock.
    std::chrono::nanoseconds wall_time{0};
    std::string device;
    Clock::time_point started_at{};
    Clock::time_point finished_at{};
};

/// What a device actually runs; one call per job, never concurrently on one device.
class Backend {
public:
    virtual ~Backend() = default;
    virtual Histogram execute(const Circuit& circuit, std::uint64_t shots, Seed seed) = 0;
};

class SimulatorBackend final : public Backend {
public:
    explicit SimulatorBackend(std::size_t max_qubits = kDefaultMaxQubits) : max_qubits_(max_qubits) {}
    Histogram execute(const Circuit& circuit, std::uint64_t shots, Seed seed) override;

private:
    std::size_t max_qubits_;
};

struct DeviceInfo {
    std::string name;
    DeviceKind kind = DeviceKind::LocalSimulator;
    std::size_t capacity = kDefaultMaxQubits;
    std::string endpoint;                          // Remote only
    std::chrono::milliseconds injected_latency{0};  // Remote only, per message leg
};

namespace detail {
struct JobState;
class Device;
}  // namespace detail

/// Token for a submitted job. Copyable, and usable from any thread.
class JobHandle {
public:
    [[nodiscard]] std::uint64_t id() const noexcept;
    [[nodiscard]] const std::string& device() const noexcept;
    /// Non-blocking status check.
    [[nodiscard]] JobStatus status() const;
    /// Blocks until the job finishes. Repeated calls return the same result;
    /// a failed job throws Error(JobFailed) carrying the device's reason.
    [[nodiscard]] JobResult wait() const;

private:
    friend class detail::Device;
    explicit JobHandle(std::shared_ptr<detail::JobState> state) : state_(std::move(state)) {}
    std::shared_ptr<detail::JobState> state_;
};

/// Named devices, each with one worker thread draining a FIFO queue.
class DeviceRegistry {
public:
    DeviceRegistry();
    ~DeviceRegistry();
    DeviceRegistry(const DeviceRegistry&) = delete;
    DeviceRegistry& operator=(const DeviceRegistry&) = delete;

    void register_device(DeviceInfo info, std::unique_ptr<Backend> backend);
    /// Shorthand for a LocalSimulator device backed by SimulatorBackend.
    void register_simulator(const std::string& name, std::size_t capacity = kDefaultMaxQubits);

    [[nodiscard]] bool contains(const std::string& name) const;
    [[nodiscard]] DeviceInfo info(const std::string& name) const;
    [[nodiscard]] std::size_t size() const;

    /// Blocks the caller until the job completes; errors are DeviceFailure.
    JobResult submit_sync(const std::string& device, Job job);
    /// Queues the job and returns immediately. Unknown device and capacity
    /// violations throw here, before anything is queued.
    JobHandle submit_async(const std::string& device, Job job);

    /// Finishes the running job on every device, fails whatever is still queued,
    /// and joins the workers. Further submissions fail.
    void shutdown();

private:
    detail::Device& find(const std::string& name) const;

    mutable std::shared_mutex mutex_;
    std::map<std::string, std::unique_ptr<detail::Device>> devices_;
    std::atomic<std::uint64_t> next_id_{1};
};

[[nodiscard]] JobResult wait(const JobHandle& handle);
[[nodiscard]] JobStatus poll(const JobHandle& handle);

}  // namespace qoffload
