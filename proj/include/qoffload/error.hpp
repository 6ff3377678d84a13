#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qoffload {

/// Every failure raised by the library carries one of these codes.
enum class Errc {
    SizeOutOfRange,
    IndexOutOfRange,
    DuplicateTargets,
    GateAfterMeasure,
    DoubleMeasure,
    BadParameter,
    NotFinalized,
    NotNormalized,
    Parse,
    UnsupportedConstruct,
    UnknownDevice,
    DuplicateDevice,
    CapacityExceeded,
    DeviceFailure,
    JobFailed,
    Connection,
    TruncatedFrame,
    OversizedFrame,
    UnknownKind,
    MalformedMessage,
    Remote,
    Bind,
    InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Lexical or syntactic error in QASM or Hamiltonian text; positions are 1-based.
class ParseError : public Error {
public:
    ParseError(Errc code, std::size_t line, std::size_t column, const std::string& what)
        : Error(code, "line " + std::to_string(line) + ", column " + std::to_string(column) +
                          ": " + what),
          line_(line), column_(column) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace qoffload
