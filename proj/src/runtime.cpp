#include "qoffload/runtime.hpp"

#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

namespace qoffload {

std::string_view to_string(DeviceKind k) noexcept {
    return k == DeviceKind::LocalSimulator ? "LocalSimulator" : "Remote";
}

std::string_view to_string(JobStatus s) noexcept {
    switch (s) {
        case JobStatus::Queued: return "Queued";
        case JobStatus::Running: return "Running";
        case JobStatus::Done: return "Done";
        case JobStatus::Failed: return "Failed";
    }
    return "Failed";
}

std::optional<JobStatus> job_status_from_string(std::string_view s) noexcept {
    for (JobStatus st : {JobStatus::Queued, JobStatus::Running, JobStatus::Done, JobStatus::Failed}) {
        if (to_string(st) == s) return st;
    }
    return std::nullopt;
}

Job Job::make(Circuit circuit, std::uint64_t shots, Seed seed) {
    if (!circuit.measured()) {
        throw Error(Errc::NotFinalized, "a job needs a measured circuit");
    }
    if (shots < 1) throw Error(Errc::InvalidArgument, "shots must be at least 1");
    return Job{std::move(circuit), shots, seed, Clock::now()};
}

Histogram SimulatorBackend::execute(const Circuit& circuit, std::uint64_t shots, Seed seed) {
    return sample(run_statevector(circuit, max_qubits_), shots, seed);
}

namespace detail {

struct JobState {
    std::uint64_t id;
    std::string device;
    Job job;

    mutable std::mutex mutex;
    std::condition_variable done;
    JobStatus status = JobStatus::Queued;
    std::optional<JobResult> result;
    std::string failure;
};

class Device {
public:
    Device(DeviceInfo info, std::unique_ptr<Backend> backend)
        : info_(std::move(info)), backend_(std::move(backend)), worker_([this] { run(); }) {}

    ~Device() { shutdown(); }

    const DeviceInfo& info() const noexcept { return info_; }

    JobHandle enqueue(std::uint64_t id, Job job) {
        auto state = std::make_shared<JobState>(id, info_.name, std::move(job));
        {
            std::lock_guard lock(mutex_);
            if (stopping_) {
                throw Error(Errc::DeviceFailure, "device '" + info_.name + "' is shut down");
            }
            queue_.push_back(state);
        }
        wake_.notify_one();
        return JobHandle(state);
    }

    void shutdown() {
        {
            std::lock_guard lock(mutex_);
            if (stopping_ && !worker_.joinable()) return;
            stopping_ = true;
        }
        wake_.notify_all();
        if (worker_.joinable()) worker_.join();
    }

private:
    static void finish(JobState& s, std::optional<JobResult> result, std::string failure) {
        {
            std::lock_guard lock(s.mutex);
            s.status = result ? JobStatus::Done : JobStatus::Failed;
            s.result = std::move(result);
            s.failure = std::move(failure);
        }
        s.done.notify_all();
    }

    void run() {
        for (;;) {
            std::shared_ptr<JobState> next;
            {
                std::unique_lock lock(mutex_);
                wake_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
                if (stopping_) {
                    for (auto& s : queue_) finish(*s, std::nullopt, "device shut down before the job ran");
                    queue_.clear();
                    return;
                }
                next = std::move(queue_.front());
                queue_.pop_front();
            }
            const auto started = Clock::now();
            {
                std::lock_guard lock(next->mutex);
                next->status = JobStatus::Running;
            }
            try {
                Histogram h = backend_->execute(next->job.circuit, next->job.shots, next->job.seed);
                const auto finished = Clock::now();
                finish(*next,
                       JobResult{std::move(h), finished - next->job.submitted_at, info_.name,
                                 started, finished},
                       {});
            } catch (const std::exception& e) {
                finish(*next, std::nullopt, e.what());
            }
        }
    }

    DeviceInfo info_;
    std::unique_ptr<Backend> backend_;
    std::mutex mutex_;
    std::condition_variable wake_;
    std::deque<std::shared_ptr<JobState>> queue_;
    bool stopping_ = false;
    std::thread worker_;
};

}  // namespace detail

std::uint64_t JobHandle::id() const noexcept { return state_->id; }
const std::string& JobHandle::device() const noexcept { return state_->device; }

JobStatus JobHandle::status() const {
    std::lock_guard lock(state_->mutex);
    return state_->status;
}

JobResult JobHandle::wait() const {
    std::unique_lock lock(state_->mutex);
    state_->done.wait(lock, [&] {
        return state_->status == JobStatus::Done || state_->status == JobStatus::Failed;
    });
    if (state_->status == JobStatus::Failed) {
        throw Error(Errc::JobFailed, "job " + std::to_string(state_->id) + " on device '" +
                                         state_->device + "' failed: " + state_->failure);
    }
    return *state_->result;
}

JobResult wait(const JobHandle& handle) { return handle.wait(); }
JobStatus poll(const JobHandle& handle) { return handle.status(); }

DeviceRegistry::DeviceRegistry() = default;

DeviceRegistry::~DeviceRegistry() { shutdown(); }

void DeviceRegistry::register_device(DeviceInfo info, std::unique_ptr<Backend> backend) {
    if (info.capacity < 1) throw Error(Errc::InvalidArgument, "device capacity must be >= 1");
    if (!backend) throw Error(Errc::InvalidArgument, "device needs a backend");
    std::unique_lock lock(mutex_);
    if (devices_.contains(info.name)) {
        throw Error(Errc::DuplicateDevice, "device '" + info.name + "' is already registered");
    }
    const std::string name = info.name;
    devices_.emplace(name, std::make_unique<detail::Device>(std::move(info), std::move(backend)));
}

void DeviceRegistry::register_simulator(const std::string& name, std::size_t capacity) {
    register_device(DeviceInfo{name, DeviceKind::LocalSimulator, capacity, {}, {}},
                    std::make_unique<SimulatorBackend>(capacity));
}

bool DeviceRegistry::contains(const std::string& name) const {
    std::shared_lock lock(mutex_);
    return devices_.contains(name);
}

DeviceInfo DeviceRegistry::info(const std::string& name) const { return find(name).info(); }

std::size_t DeviceRegistry::size() const {
    std::shared_lock lock(mutex_);
    return devices_.size();
}

detail::Device& DeviceRegistry::find(const std::string& name) const {
    std::shared_lock lock(mutex_);
    auto it = devices_.find(name);
    if (it == devices_.end()) throw Error(Errc::UnknownDevice, "unknown device '" + name + "'");
    return *it->second;
}

JobHandle DeviceRegistry::submit_async(const std::string& device, Job job) {
    detail::Device& d = find(device);
    if (job.circuit.num_qubits() > d.info().capacity) {
        throw Error(Errc::CapacityExceeded,
                    std::to_string(job.circuit.num_qubits()) + "-qubit job exceeds capacity " +
                        std::to_string(d.info().capacity) + " of device '" + device + "'");
    }
    return d.enqueue(next_id_.fetch_add(1), std::move(job));
}

JobResult DeviceRegistry::submit_sync(const std::string& device, Job job) {
    JobHandle h = submit_async(device, std::move(job));
    try {
        return h.wait();
    } catch (const Error& e) {
        throw Error(Errc::DeviceFailure, e.what());
    }
}

void DeviceRegistry::shutdown() {
    std::shared_lock lock(mutex_);
    for (auto& [name, dev] : devices_) dev->shutdown();
}

}  // namespace qoffload
