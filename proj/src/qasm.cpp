#include "qoffload/emit.hpp"

#include "qoffload/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <system_error>

namespace qoffload {

std::string format_shortest(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

std::string format_scientific(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
    std::string s(buf, end);
    const auto e = s.find('e');
    std::string mantissa = s.substr(0, e);
    if (mantissa.find('.') == std::string::npos) mantissa += ".0";
    std::string exponent = s.substr(e + 1);
    bool negative = false;
    if (!exponent.empty() && (exponent[0] == '+' || exponent[0] == '-')) {
        negative = exponent[0] == '-';
        exponent.erase(0, 1);
    }
    const auto nz = exponent.find_first_not_of('0');
    exponent = nz == std::string::npos ? "0" : exponent.substr(nz);
    return mantissa + "e" + (negative ? "-" : "") + exponent;
}

std::string emit_qasm(const Circuit& c) {
    if (!c.measured()) throw Error(Errc::NotFinalized, "emit_qasm requires a measured circuit");
    const std::string n = std::to_string(c.num_qubits());
    std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    out += "qreg q[" + n + "];\ncreg c[" + n + "];\n";
    for (const Gate& g : c.gates()) {
        out += mnemonic(g.kind());
        if (g.param()) out += "(" + format_shortest(*g.param()) + ")";
        out += ' ';
        bool first = true;
        for (std::size_t q : g.targets()) {
            if (!first) out += ',';
            out += "q[" + std::to_string(q) + "]";
            first = false;
        }
        out += ";\n";
    }
    out += "measure q -> c;\n";
    return out;
}

namespace {

enum class Tok { Ident, Number, String, Symbol, Arrow, End };

struct Token {
    Tok type;
    std::string text;
    std::size_t line;
    std::size_t column;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_space_and_comments();
        const std::size_t line = line_, col = col_;
        if (pos_ >= src_.size()) return {Tok::End, "", line, col};
        const char ch = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::string text;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                          src_[pos_] == '_')) {
                text += advance();
            }
            return {Tok::Ident, text, line, col};
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) ||
            (ch == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            return {Tok::Number, lex_number(line, col), line, col};
        }
        if (ch == '"') {
            advance();
            std::string text;
            while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') text += advance();
            if (pos_ >= src_.size() || src_[pos_] != '"') {
                throw ParseError(Errc::Parse, line, col, "unterminated string literal");
            }
            advance();
            return {Tok::String, text, line, col};
        }
        if (ch == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
            advance();
            advance();
            return {Tok::Arrow, "->", line, col};
        }
        static constexpr std::string_view kSymbols = ";,[]()+-*/{}^=<>";
        if (kSymbols.find(ch) != std::string_view::npos) {
            return {Tok::Symbol, std::string(1, advance()), line, col};
        }
        throw ParseError(Errc::Parse, line, col,
                         std::string("unexpected character '") + ch + "'");
    }

private:
    char advance() {
        const char ch = src_[pos_++];
        if (ch == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return ch;
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            const char ch = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(ch))) {
                advance();
            } else if (ch == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string lex_number(std::size_t line, std::size_t col) {
        std::string text;
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                text += advance();
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            text += advance();
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            text += advance();
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) text += advance();
            const std::size_t before = text.size();
            digits();
            if (text.size() == before) {
                throw ParseError(Errc::Parse, line, col, "malformed exponent in '" + text + "'");
            }
        }
        return text;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

struct Register {
    std::string name;
    std::size_t size = 0;
    Token decl;
};

class Parser {
public:
    Parser(std::string_view text, std::size_t max_qubits) : lexer_(text), max_qubits_(max_qubits) {
        cur_ = lexer_.next();
    }

    Circuit parse() {
        header();
        std::optional<Circuit> circuit;
        std::optional<Register> qreg, creg;
        bool measured = false;
        while (cur_.type != Tok::End) {
            const Token stmt = cur_;
            if (measured) fail(stmt, "statement after terminal measurement");
            if (stmt.type != Tok::Ident) fail(stmt, "expected a statement, found '" + stmt.text + "'");
            if (stmt.text == "qreg" || stmt.text == "creg") {
                auto& slot = stmt.text == "qreg" ? qreg : creg;
                if (slot) unsupported(stmt, "multiple " + stmt.text + " declarations");
                slot = declaration();
                if (stmt.text == "qreg") {
                    if (slot->size < 1 || slot->size > max_qubits_) {
                        throw ParseError(Errc::SizeOutOfRange, stmt.line, stmt.column,
                                         "register size " + std::to_string(slot->size) +
                                             " outside [1, " + std::to_string(max_qubits_) + "]");
                    }
                    circuit.emplace(slot->size, max_qubits_);
                }
                if (qreg && creg && qreg->size != creg->size) {
                    throw ParseError(Errc::Parse, stmt.line, stmt.column,
                                     "qreg size " + std::to_string(qreg->size) +
                                         " does not match creg size " +
                                         std::to_string(creg->size));
                }
            } else if (stmt.text == "measure") {
                if (!qreg || !creg) fail(stmt, "measure before register declarations");
                measurement(*qreg, *creg);
                circuit->measure();
                measured = true;
            } else if (is_unsupported_keyword(stmt.text)) {
                unsupported(stmt, "'" + stmt.text + "'");
            } else if (auto kind = kind_from_mnemonic(stmt.text)) {
                if (!qreg) fail(stmt, "gate before qreg declaration");
                gate(*kind, *qreg, *circuit);
            } else {
                fail(stmt, "unknown gate '" + stmt.text + "'");
            }
        }
        if (!qreg) fail(cur_, "missing qreg declaration");
        if (!creg) fail(cur_, "missing creg declaration");
        if (!measured) fail(cur_, "missing terminal 'measure' statement");
        return std::move(*circuit);
    }

private:
    static bool is_unsupported_keyword(const std::string& w) {
        return w == "gate" || w == "opaque" || w == "if" || w == "barrier" || w == "reset" ||
               w == "U" || w == "CX" || w == "include" || w == "OPENQASM";
    }

    [[noreturn]] static void fail(const Token& at, const std::string& what) {
        throw ParseError(Errc::Parse, at.line, at.column, what);
    }

    [[noreturn]] static void unsupported(const Token& at, const std::string& what) {
        throw ParseError(Errc::UnsupportedConstruct, at.line, at.column,
                         "unsupported construct: " + what);
    }

    Token take() {
        Token t = cur_;
        cur_ = lexer_.next();
        return t;
    }

    static std::string describe(const Token& t) {
        return t.type == Tok::End ? "end of input" : "'" + t.text + "'";
    }

    Token expect(Tok type, std::string_view text, std::string_view what) {
        if (cur_.type != type || (!text.empty() && cur_.text != text)) {
            fail(cur_, "expected " + std::string(what) + ", found " + describe(cur_));
        }
        return take();
    }

    void expect_symbol(char ch) {
        expect(Tok::Symbol, std::string_view(&ch, 1), std::string("'") + ch + "'");
    }

    void header() {
        expect(Tok::Ident, "OPENQASM", "'OPENQASM'");
        const Token version = expect(Tok::Number, "", "version number");
        if (version.text != "2.0") {
            unsupported(version, "OpenQASM version " + version.text);
        }
        expect_symbol(';');
        expect(Tok::Ident, "include", "'include'");
        const Token file = expect(Tok::String, "", "include file name");
        if (file.text != "qelib1.inc") unsupported(file, "include of \"" + file.text + "\"");
        expect_symbol(';');
    }

    std::size_t integer(const Token& t) {
        std::size_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{} || p != t.text.data() + t.text.size()) {
            fail(t, "expected an integer, found '" + t.text + "'");
        }
        return v;
    }

    Register declaration() {
        const Token kw = take();
        const Token name = expect(Tok::Ident, "", "register name");
        expect_symbol('[');
        const Token size = expect(Tok::Number, "", "register size");
        Register r{name.text, integer(size), kw};
        expect_symbol(']');
        expect_symbol(';');
        return r;
    }

    std::size_t qubit_operand(const Register& qreg) {
        const Token name = expect(Tok::Ident, "", "qubit operand");
        if (name.text != qreg.name) fail(name, "unknown register '" + name.text + "'");
        if (cur_.type != Tok::Symbol || cur_.text != "[") {
            unsupported(cur_, "register-wide gate application");
        }
        take();
        const Token idx = expect(Tok::Number, "", "qubit index");
        const std::size_t q = integer(idx);
        if (q >= qreg.size) {
            throw ParseError(Errc::IndexOutOfRange, idx.line, idx.column,
                             "qubit index " + std::to_string(q) + " outside " + qreg.name + "[" +
                                 std::to_string(qreg.size) + "]");
        }
        expect_symbol(']');
        return q;
    }

    void gate(GateKind kind, const Register& qreg, Circuit& circuit) {
        const Token head = take();
        std::optional<double> param;
        if (is_rotation(kind)) {
            expect_symbol('(');
            param = expression();
            expect_symbol(')');
        } else if (cur_.type == Tok::Symbol && cur_.text == "(") {
            fail(cur_, "gate '" + head.text + "' takes no parameter");
        }
        std::vector<std::size_t> targets{qubit_operand(qreg)};
        while (targets.size() < arity(kind)) {
            expect_symbol(',');
            targets.push_back(qubit_operand(qreg));
        }
        if (cur_.type == Tok::Symbol && cur_.text == ",") {
            fail(cur_, "gate '" + head.text + "' takes " + std::to_string(arity(kind)) + " operand(s)");
        }
        expect_symbol(';');
        try {
            circuit.apply(Gate::make(kind, targets, param));
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(e.code(), head.line, head.column, e.what());
        }
    }

    void measurement(const Register& qreg, const Register& creg) {
        take();
        const Token src = expect(Tok::Ident, "", "quantum register");
        if (src.text != qreg.name) fail(src, "unknown register '" + src.text + "'");
        if (cur_.type == Tok::Symbol && cur_.text == "[") unsupported(cur_, "per-qubit measurement");
        expect(Tok::Arrow, "", "'->'");
        const Token dst = expect(Tok::Ident, "", "classical register");
        if (dst.text != creg.name) fail(dst, "unknown register '" + dst.text + "'");
        if (cur_.type == Tok::Symbol && cur_.text == "[") unsupported(cur_, "per-qubit measurement");
        expect_symbol(';');
    }

    double expression() {
        double v = term();
        while (cur_.type == Tok::Symbol && (cur_.text == "+" || cur_.text == "-")) {
            const bool plus = take().text == "+";
            const double rhs = term();
            v = plus ? v + rhs : v - rhs;
        }
        return v;
    }

    double term() {
        double v = unary();
        while (cur_.type == Tok::Symbol && (cur_.text == "*" || cur_.text == "/")) {
            const Token op = take();
            const double rhs = unary();
            if (op.text == "/" && rhs == 0.0) fail(op, "division by zero in angle expression");
            v = op.text == "*" ? v * rhs : v / rhs;
        }
        return v;
    }

    double unary() {
        if (cur_.type == Tok::Symbol && (cur_.text == "-" || cur_.text == "+")) {
            const bool neg = take().text == "-";
            const double v = unary();
            return neg ? -v : v;
        }
        return primary();
    }

    double primary() {
        if (cur_.type == Tok::Number) {
            const Token t = take();
            double v = 0.0;
            auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (ec != std::errc{} || p != t.text.data() + t.text.size()) {
                fail(t, "malformed number '" + t.text + "'");
            }
            return v;
        }
        if (cur_.type == Tok::Ident && cur_.text == "pi") {
            take();
            return std::numbers::pi;
        }
        if (cur_.type == Tok::Symbol && cur_.text == "(") {
            take();
            const double v = expression();
            expect_symbol(')');
            return v;
        }
        if (cur_.type == Tok::Ident) unsupported(cur_, "identifier '" + cur_.text + "' in expression");
        fail(cur_, "expected an angle expression, found " + describe(cur_));
    }

    Lexer lexer_;
    std::size_t max_qubits_;
    Token cur_{Tok::End, "", 1, 1};
};

}  // namespace

Circuit parse_qasm(std::string_view text, std::size_t max_qubits) {
    return Parser(text, max_qubits).parse();
}

}  // namespace qoffload
