#pragma once

#include "qoffload/circuit.hpp"
#include "qoffload/gates.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qoffload {

using Seed = std::uint64_t;

/// 2^n amplitudes; amplitude k is the coefficient of the basis state whose
/// qubit i is bit i of k.
class StateVector {
public:
    /// |0...0> on `num_qubits` qubits.
    explicit StateVector(std::size_t num_qubits, std::size_t max_qubits = kDefaultMaxQubits);
    /// Adopts raw amplitudes; the length must be a power of two (at least 2).
    explicit StateVector(std::vector<cplx> amplitudes);

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::span<const cplx> amplitudes() const noexcept { return amps_; }
    [[nodiscard]] cplx operator[](std::size_t k) const { return amps_[k]; }
    [[nodiscard]] double norm_squared() const noexcept;

    /// In-place application, O(2^n) per gate.
    void apply(const Gate& gate);

private:
    void apply_single(const GateMatrix& u, std::size_t q);
    void apply_pair(const GateMatrix& u, std::size_t q0, std::size_t q1);
    void apply_cx(std::size_t control, std::size_t target);
    void apply_cz(std::size_t a, std::size_t b);
    void apply_swap(std::size_t a, std::size_t b);

    std::size_t num_qubits_;
    std::vector<cplx> amps_;
};

/// Evolves |0...0> through every gate of `c`; the measurement marker is ignored.
[[nodiscard]] StateVector run_statevector(const Circuit& c,
                                          std::size_t max_qubits = kDefaultMaxQubits);

/// p_k = |a_k|^2.
[[nodiscard]] std::vector<double> exact_probabilities(const StateVector& sv);

/// Draws `shots` outcomes from |a_k|^2.
///
/// The generator is std::mt19937_64 seeded with `seed`; each draw takes the top
/// 53 bits of one output as u in [0, 1) and inverts the cumulative distribution.
/// Outcomes with p_k < 1e-15 are excluded. Results are therefore identical on
/// every conforming platform for the same (state, shots, seed).
[[nodiscard]] Histogram sample(const StateVector& sv, std::uint64_t shots, Seed seed);

}  // namespace qoffload
