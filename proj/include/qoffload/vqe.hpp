#pragma once

#include "qoffload/circuit.hpp"
#include "qoffload/error.hpp"
#include "qoffload/nelder_mead.hpp"
#include "qoffload/runtime.hpp"

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qoffload {

/// coefficient * P_{n-1} (x) ... (x) P_0. Character j of `ops` acts on qubit n-1-j,
/// so the string reads most-significant qubit first like a histogram bitstring.
struct PauliTerm {
    double coefficient = 0.0;
    std::string ops;

    [[nodiscard]] std::size_t num_qubits() const noexcept { return ops.size(); }
    [[nodiscard]] bool is_identity() const noexcept;
    /// Pauli letter acting on qubit q.
    [[nodiscard]] char on_qubit(std::size_t q) const { return ops.at(ops.size() - 1 - q); }

    friend bool operator==(const PauliTerm&, const PauliTerm&) = default;
};

class Hamiltonian {
public:
    /// Validates letters and lengths; merges duplicate operator strings by summing
    /// coefficients, keeping first-appearance order.
    explicit Hamiltonian(std::vector<PauliTerm> terms);

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] const std::vector<PauliTerm>& terms() const noexcept { return terms_; }

private:
    std::size_t num_qubits_ = 0;
    std::vector<PauliTerm> terms_;
};

/// One `coefficient operator-string` per line; `#` starts a comment.
[[nodiscard]] Hamiltonian parse_hamiltonian(std::string_view text);
[[nodiscard]] Hamiltonian load_hamiltonian(const std::string& path);

/// Hardware-efficient ansatz: each layer is RY(theta) on every qubit followed by
/// a CX ring CX(0,1), CX(1,2), ..., CX(n-1,0). The ring is omitted for n = 1 and
/// is a single CX(0,1), CX(1,0) pair for n = 2.
struct AnsatzSpec {
    std::size_t num_qubits = 1;
    std::size_t layers = 1;

    [[nodiscard]] std::size_t num_parameters() const noexcept { return num_qubits * layers; }
};

/// Unmeasured ansatz circuit; theta[layer * n + q] drives qubit q.
[[nodiscard]] Circuit ansatz_body(const AnsatzSpec& spec, std::span<const double> theta);
/// Measured ansatz circuit.
[[nodiscard]] Circuit build_ansatz(const AnsatzSpec& spec, std::span<const double> theta);

/// Rotates `body` so a computational-basis measurement reads out `term`:
/// H on X positions, SDG then H on Y positions. Returns the measured circuit.
[[nodiscard]] Circuit basis_change(Circuit body, const PauliTerm& term);

/// (-1)^(number of set bits of `outcome` on the term's non-identity qubits).
[[nodiscard]] int parity_sign(const PauliTerm& term, std::uint64_t outcome) noexcept;

/// Shots value selecting exact expectation from the statevector.
inline constexpr std::uint64_t kExactShots = 0;

/// Seed of the job for term `term_index` of evaluation `evaluation`; splitmix64 mixing.
[[nodiscard]] Seed derive_seed(Seed base, std::uint64_t evaluation, std::uint64_t term_index) noexcept;

struct ExpectationRequest {
    std::uint64_t shots = kExactShots;
    std::string device = "sim";
    Seed seed = 0;
    /// Submit all term jobs before waiting on any.
    bool concurrent_terms = true;
};

/// Sum over terms of coefficient * <term>. Identity terms add their coefficient
/// without a job. With shots = 0 the expectation comes from exact probabilities;
/// this requires a LocalSimulator device. Otherwise one job per non-identity term
/// is sent to the device with seed derive_seed(seed, 0, term index).
[[nodiscard]] double estimate_expectation(const Hamiltonian& h, const AnsatzSpec& spec,
                                          std::span<const double> theta, DeviceRegistry& registry,
                                          const ExpectationRequest& request);

struct VqeConfig {
    std::vector<double> initial_theta;  // empty means all zeros
    std::size_t max_iterations = 500;
    double tolerance = 1e-10;
    std::uint64_t shots = kExactShots;
    std::string device = "sim";
    Seed seed = 0;
    double initial_step = 0.5;
    bool concurrent_terms = true;
};

struct VqeReport {
    /// Lowest objective value seen by the optimizer.
    double best_energy = 0.0;
    std::vector<double> best_theta;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
    /// Best energy after each iteration.
    std::vector<double> energy_trace;
    std::chrono::nanoseconds total_wall_time{0};
    /// Wall time spent in objective evaluations during each iteration.
    std::vector<std::chrono::nanoseconds> iteration_round_trips;
    NelderMeadOptions optimizer;
    std::uint64_t shots = 0;
    std::string device;
    Seed seed = 0;

    /// Equality ignoring the timing fields.
    [[nodiscard]] bool same_outcome(const VqeReport& other) const;
};

/// Raised when a device error interrupts optimize(); carries the trace so far.
class VqeAborted : public Error {
public:
    VqeAborted(const std::string& what, VqeReport partial)
        : Error(Errc::DeviceFailure, what), partial_(std::move(partial)) {}
    [[nodiscard]] const VqeReport& partial() const noexcept { return partial_; }

private:
    VqeReport partial_;
};

/// Nelder-Mead over theta minimizing estimate_expectation. Evaluation e uses
/// seeds derive_seed(config.seed, e, term index).
[[nodiscard]] VqeReport optimize(const Hamiltonian& h, const AnsatzSpec& spec, DeviceRegistry& registry,
                                 const VqeConfig& config);

}  // namespace qoffload
