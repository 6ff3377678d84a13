#include "qoffload/circuit.hpp"

#include "qoffload/error.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace qoffload {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::SizeOutOfRange: return "size-out-of-range";
        case Errc::IndexOutOfRange: return "index-out-of-range";
        case Errc::DuplicateTargets: return "duplicate-targets";
        case Errc::GateAfterMeasure: return "gate-after-measure";
        case Errc::DoubleMeasure: return "double-measure";
        case Errc::BadParameter: return "bad-parameter";
        case Errc::NotFinalized: return "not-finalized";
        case Errc::NotNormalized: return "not-normalized";
        case Errc::Parse: return "parse";
        case Errc::UnsupportedConstruct: return "unsupported-construct";
        case Errc::UnknownDevice: return "unknown-device";
        case Errc::DuplicateDevice: return "duplicate-name";
        case Errc::CapacityExceeded: return "capacity-exceeded";
        case Errc::DeviceFailure: return "device-failure";
        case Errc::JobFailed: return "job-failed";
        case Errc::Connection: return "connection";
        case Errc::TruncatedFrame: return "truncated-frame";
        case Errc::OversizedFrame: return "oversized-frame";
        case Errc::UnknownKind: return "unknown-kind";
        case Errc::MalformedMessage: return "malformed-message";
        case Errc::Remote: return "remote";
        case Errc::Bind: return "bind";
        case Errc::InvalidArgument: return "invalid-argument";
    }
    return "unknown";
}

namespace {

constexpr std::array<std::string_view, 14> kMnemonics = {
    "h", "x", "y", "z", "s", "sdg", "t", "tdg", "rx", "ry", "rz", "cx", "cz", "swap"};

}  // namespace

std::string_view mnemonic(GateKind k) noexcept {
    return kMnemonics[static_cast<std::size_t>(k)];
}

std::optional<GateKind> kind_from_mnemonic(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kMnemonics.size(); ++i) {
        if (kMnemonics[i] == name) return static_cast<GateKind>(i);
    }
    return std::nullopt;
}

Gate Gate::make(GateKind kind, std::span<const std::size_t> targets,
                std::optional<double> param) {
    if (targets.size() != arity(kind)) {
        throw Error(Errc::InvalidArgument,
                    std::string(mnemonic(kind)) + " takes " + std::to_string(arity(kind)) +
                        " target(s), got " + std::to_string(targets.size()));
    }
    if (is_rotation(kind) != param.has_value()) {
        throw Error(Errc::BadParameter, std::string(mnemonic(kind)) +
                                            (param ? " takes no parameter"
                                                   : " requires an angle parameter"));
    }
    if (param && !std::isfinite(*param)) {
        throw Error(Errc::BadParameter, "gate parameter must be finite");
    }
    std::array<std::size_t, 2> t{targets[0], targets.size() > 1 ? targets[1] : 0};
    if (targets.size() == 2 && t[0] == t[1]) {
        throw Error(Errc::DuplicateTargets, std::string(mnemonic(kind)) +
                                                " applied twice to qubit " +
                                                std::to_string(t[0]));
    }
    return Gate(kind, t, param);
}

Gate Gate::single(GateKind kind, std::size_t q) {
    const std::array<std::size_t, 1> t{q};
    return make(kind, t);
}

Gate Gate::rotation(GateKind kind, std::size_t q, double theta) {
    const std::array<std::size_t, 1> t{q};
    return make(kind, t, theta);
}

Gate Gate::pair(GateKind kind, std::size_t a, std::size_t b) {
    const std::array<std::size_t, 2> t{a, b};
    return make(kind, t);
}

Circuit::Circuit(std::size_t num_qubits, std::size_t max_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > max_qubits) {
        throw Error(Errc::SizeOutOfRange, "register size " + std::to_string(num_qubits) +
                                              " outside [1, " + std::to_string(max_qubits) +
                                              "]");
    }
}

Circuit& Circuit::apply(const Gate& gate) {
    if (measured_) {
        throw Error(Errc::GateAfterMeasure, "cannot append a gate after measurement");
    }
    for (std::size_t q : gate.targets()) {
        if (q >= num_qubits_) {
            throw Error(Errc::IndexOutOfRange, "qubit " + std::to_string(q) +
                                                   " out of range for " +
                                                   std::to_string(num_qubits_) + "-qubit register");
        }
    }
    gates_.push_back(gate);
    return *this;
}

Circuit& Circuit::measure() {
    if (measured_) throw Error(Errc::DoubleMeasure, "circuit is already measured");
    measured_ = true;
    return *this;
}

Circuit create_circuit(std::size_t num_qubits, std::size_t max_qubits) {
    return Circuit(num_qubits, max_qubits);
}

Circuit apply_gate(Circuit c, const Gate& g) {
    c.apply(g);
    return c;
}

Circuit finalize_measure(Circuit c) {
    c.measure();
    return c;
}

Circuit bell_circuit() {
    Circuit c(2);
    c.apply(Gate::h(0)).apply(Gate::cx(0, 1)).measure();
    return c;
}

Circuit ghz3_circuit() {
    Circuit c(3);
    c.apply(Gate::h(0)).apply(Gate::cx(0, 1)).apply(Gate::cx(1, 2)).measure();
    return c;
}

Histogram::Histogram(std::size_t num_qubits, std::vector<std::uint64_t> counts)
    : num_qubits_(num_qubits), counts_(std::move(counts)) {
    if (num_qubits < 1 || num_qubits >= 64 || counts_.size() != (std::size_t{1} << num_qubits)) {
        throw Error(Errc::SizeOutOfRange, "histogram length does not match 2^num_qubits");
    }
    shots_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
    if (shots_ == 0) throw Error(Errc::InvalidArgument, "histogram must hold at least one shot");
}

}  // namespace qoffload
