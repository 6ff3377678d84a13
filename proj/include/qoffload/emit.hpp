#pragma once

#include "qoffload/circuit.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qoffload {

/// OpenQASM 2.0 text for a measured circuit. Angles use the shortest decimal
/// that round-trips to the same double.
[[nodiscard]] std::string emit_qasm(const Circuit& c);

/// Parses the OpenQASM 2.0 subset that emit_qasm produces, plus constant
/// angle expressions over `pi`. Throws ParseError with the 1-based position of
/// the offending token.
[[nodiscard]] Circuit parse_qasm(std::string_view text,
                                 std::size_t max_qubits = kDefaultMaxQubits);

/// Base-profile style QIR text with a single `@main` entry point. Qubit k is
/// addressed as `%Qubit* null` (k = 0) or `inttoptr (i64 k to %Qubit*)`.
[[nodiscard]] std::string emit_qir(const Circuit& c);

/// QIR intrinsic name for a gate kind ("h", "cnot", "rx", ...).
[[nodiscard]] std::string_view qir_name(GateKind k) noexcept;

struct QirCall {
    std::string name;               // intrinsic, e.g. "cnot" or "mz"
    std::vector<double> angles;     // `double` operands
    std::vector<std::size_t> qubits;
    std::vector<std::size_t> results;
};

struct QirShape {
    std::vector<QirCall> gate_calls;
    std::vector<QirCall> measure_calls;
};

/// Structural checker for emit_qir output: exactly one `define void @main() #0 {`,
/// an `entry:` label, `__quantum__qis__*__body` calls with re-parsed operand
/// lists, then `ret void` and `}`. Throws ParseError on any deviation.
[[nodiscard]] QirShape check_qir_shape(std::string_view text);

/// Shortest round-trip decimal ("0.5", "1.5707963267948966", "1e-20").
[[nodiscard]] std::string format_shortest(double x);
/// Shortest round-trip in lowercase scientific form with a bare exponent ("2.5e-1", "1.0e0").
[[nodiscard]] std::string format_scientific(double x);

}  // namespace qoffload
