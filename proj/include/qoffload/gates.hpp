#pragma once

#include "qoffload/circuit.hpp"

#include <array>
#include <complex>
#include <cstddef>
#include <optional>

namespace qoffload {

using cplx = std::complex<double>;

/// Row-major 2x2 or 4x4 unitary. For two-qubit kinds the row index is
/// 2*bit(first target) + bit(second target), so CX reads as the textbook matrix.
struct GateMatrix {
    std::size_t dim = 2;
    std::array<cplx, 16> m{};

    [[nodiscard]] cplx operator()(std::size_t r, std::size_t c) const noexcept { return m[r * dim + c]; }
    cplx& operator()(std::size_t r, std::size_t c) noexcept { return m[r * dim + c]; }
};

/// Throws BadParameter when `param` is supplied for a fixed gate or missing for a rotation.
[[nodiscard]] GateMatrix gate_matrix(GateKind kind, std::optional<double> param = std::nullopt);

}  // namespace qoffload
