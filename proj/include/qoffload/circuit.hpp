#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace qoffload {

/// Simulator memory bound; a register of this size needs 2^24 complex doubles (256 MiB).
inline constexpr std::size_t kDefaultMaxQubits = 24;

enum class GateKind : std::uint8_t { H, X, Y, Z, S, SDG, T, TDG, RX, RY, RZ, CX, CZ, SWAP };

inline constexpr std::array<GateKind, 14> kAllGateKinds = {
    GateKind::H,  GateKind::X,  GateKind::Y,  GateKind::Z,  GateKind::S,
    GateKind::SDG, GateKind::T, GateKind::TDG, GateKind::RX, GateKind::RY,
    GateKind::RZ, GateKind::CX, GateKind::CZ, GateKind::SWAP};

[[nodiscard]] constexpr bool is_rotation(GateKind k) noexcept {
    return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ;
}

[[nodiscard]] constexpr std::size_t arity(GateKind k) noexcept {
    return (k == GateKind::CX || k == GateKind::CZ || k == GateKind::SWAP) ? 2 : 1;
}

/// Lower-case qelib1 mnemonic ("h", "cx", "rz", ...).
[[nodiscard]] std::string_view mnemonic(GateKind k) noexcept;
[[nodiscard]] std::optional<GateKind> kind_from_mnemonic(std::string_view name) noexcept;

/// One gate application. For CX the first target is the control.
class Gate {
public:
    /// Validates arity, distinct targets and parameter presence/finiteness.
    static Gate make(GateKind kind, std::span<const std::size_t> targets,
                     std::optional<double> param = std::nullopt);

    static Gate h(std::size_t q) { return single(GateKind::H, q); }
    static Gate x(std::size_t q) { return single(GateKind::X, q); }
    static Gate y(std::size_t q) { return single(GateKind::Y, q); }
    static Gate z(std::size_t q) { return single(GateKind::Z, q); }
    static Gate s(std::size_t q) { return single(GateKind::S, q); }
    static Gate sdg(std::size_t q) { return single(GateKind::SDG, q); }
    static Gate t(std::size_t q) { return single(GateKind::T, q); }
    static Gate tdg(std::size_t q) { return single(GateKind::TDG, q); }
    static Gate rx(std::size_t q, double theta) { return rotation(GateKind::RX, q, theta); }
    static Gate ry(std::size_t q, double theta) { return rotation(GateKind::RY, q, theta); }
    static Gate rz(std::size_t q, double theta) { return rotation(GateKind::RZ, q, theta); }
    static Gate cx(std::size_t control, std::size_t target) { return pair(GateKind::CX, control, target); }
    static Gate cz(std::size_t a, std::size_t b) { return pair(GateKind::CZ, a, b); }
    static Gate swap(std::size_t a, std::size_t b) { return pair(GateKind::SWAP, a, b); }

    [[nodiscard]] GateKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::span<const std::size_t> targets() const noexcept {
        return {targets_.data(), arity(kind_)};
    }
    [[nodiscard]] std::size_t target(std::size_t i) const noexcept { return targets_[i]; }
    [[nodiscard]] std::optional<double> param() const noexcept { return param_; }

    friend bool operator==(const Gate&, const Gate&) = default;

private:
    Gate(GateKind kind, std::array<std::size_t, 2> targets, std::optional<double> param)
        : kind_(kind), targets_(targets), param_(param) {}

    static Gate single(GateKind kind, std::size_t q);
    static Gate rotation(GateKind kind, std::size_t q, double theta);
    static Gate pair(GateKind kind, std::size_t a, std::size_t b);

    GateKind kind_;
    std::array<std::size_t, 2> targets_;
    std::optional<double> param_;
};

/// Gate list over a single register, closed by one terminal full-register measurement.
class Circuit {
public:
    explicit Circuit(std::size_t num_qubits, std::size_t max_qubits = kDefaultMaxQubits);

    /// Appends a gate; throws on out-of-range targets or after measurement.
    Circuit& apply(const Gate& gate);
    Circuit& measure();

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] const std::vector<Gate>& gates() const noexcept { return gates_; }
    [[nodiscard]] bool measured() const noexcept { return measured_; }

    friend bool operator==(const Circuit&, const Circuit&) = default;

private:
    std::size_t num_qubits_;
    std::vector<Gate> gates_;
    bool measured_ = false;
};

[[nodiscard]] Circuit create_circuit(std::size_t num_qubits,
                                     std::size_t max_qubits = kDefaultMaxQubits);
[[nodiscard]] Circuit apply_gate(Circuit c, const Gate& g);
[[nodiscard]] Circuit finalize_measure(Circuit c);

/// The Bell-pair program: H(0), CX(0,1), measure.
[[nodiscard]] Circuit bell_circuit();
/// Three-qubit GHZ program.
[[nodiscard]] Circuit ghz3_circuit();

/// Shot counts per outcome. Index k has qubit i's bit at 2^i.
class Histogram {
public:
    Histogram(std::size_t num_qubits, std::vector<std::uint64_t> counts);

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::uint64_t shots() const noexcept { return shots_; }
    [[nodiscard]] const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
    [[nodiscard]] std::uint64_t operator[](std::size_t k) const { return counts_.at(k); }

    friend bool operator==(const Histogram&, const Histogram&) = default;

private:
    std::size_t num_qubits_;
    std::uint64_t shots_;
    std::vector<std::uint64_t> counts_;
};

}  // namespace qoffload
