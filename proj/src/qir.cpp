#include "qoffload/emit.hpp"

#include "qoffload/error.hpp"

#include <charconv>
#include <set>
#include <sstream>
#include <system_error>

namespace qoffload {

std::string_view qir_name(GateKind k) noexcept {
    switch (k) {
        case GateKind::H: return "h";
        case GateKind::X: return "x";
        case GateKind::Y: return "y";
        case GateKind::Z: return "z";
        case GateKind::S: return "s";
        case GateKind::SDG: return "sdg";
        case GateKind::T: return "t";
        case GateKind::TDG: return "tdg";
        case GateKind::RX: return "rx";
        case GateKind::RY: return "ry";
        case GateKind::RZ: return "rz";
        case GateKind::CX: return "cnot";
        case GateKind::CZ: return "cz";
        case GateKind::SWAP: return "swap";
    }
    return "";
}

namespace {

std::string pointer(std::string_view type, std::size_t k) {
    const std::string t = "%" + std::string(type) + "*";
    if (k == 0) return t + " null";
    return t + " inttoptr (i64 " + std::to_string(k) + " to " + t + ")";
}

std::string signature(GateKind k) {
    std::string s = is_rotation(k) ? "double, " : "";
    s += arity(k) == 2 ? "%Qubit*, %Qubit*" : "%Qubit*";
    return s;
}

}  // namespace

std::string emit_qir(const Circuit& c) {
    if (!c.measured()) throw Error(Errc::NotFinalized, "emit_qir requires a measured circuit");
    std::ostringstream body;
    std::set<GateKind> used;
    for (const Gate& g : c.gates()) {
        used.insert(g.kind());
        body << "  call void @__quantum__qis__" << qir_name(g.kind()) << "__body(";
        if (g.param()) body << "double " << format_scientific(*g.param()) << ", ";
        bool first = true;
        for (std::size_t q : g.targets()) {
            if (!first) body << ", ";
            body << pointer("Qubit", q);
            first = false;
        }
        body << ")\n";
    }
    for (std::size_t q = 0; q < c.num_qubits(); ++q) {
        body << "  call void @__quantum__qis__mz__body(" << pointer("Qubit", q) << ", "
             << pointer("Result", q) << ")\n";
    }

    std::ostringstream out;
    out << "%Qubit = type opaque\n"
        << "%Result = type opaque\n\n"
        << "define void @main() #0 {\n"
        << "entry:\n"
        << body.str() << "  ret void\n"
        << "}\n\n";
    for (GateKind k : used) {
        out << "declare void @__quantum__qis__" << qir_name(k) << "__body(" << signature(k) << ")\n";
    }
    out << "declare void @__quantum__qis__mz__body(%Qubit*, %Result*)\n\n"
        << "attributes #0 = { \"entry_point\" }\n";
    return out.str();
}

namespace {

struct Line {
    std::string_view text;
    std::size_t number;
};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const Line& l, std::size_t col, const std::string& what) {
    throw ParseError(Errc::Parse, l.number, col, what);
}

bool consume(std::string_view& s, std::string_view prefix) {
    if (s.substr(0, prefix.size()) != prefix) return false;
    s.remove_prefix(prefix.size());
    return true;
}

std::size_t parse_index(const Line& l, std::string_view s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) bad(l, 1, "bad index '" + std::string(s) + "'");
    return v;
}

// Parses `%T* null` or `%T* inttoptr (i64 K to %T*)`; returns K or nullopt if not of type T.
std::optional<std::size_t> pointer_operand(const Line& l, std::string_view op, std::string_view type) {
    const std::string t = "%" + std::string(type) + "*";
    if (!consume(op, t)) return std::nullopt;
    op = trim(op);
    if (op == "null") return 0;
    if (!consume(op, "inttoptr (i64 ")) bad(l, 1, "malformed pointer operand");
    const auto sp = op.find(' ');
    if (sp == std::string_view::npos) bad(l, 1, "malformed inttoptr operand");
    const std::size_t k = parse_index(l, op.substr(0, sp));
    op.remove_prefix(sp);
    if (op != " to " + t + ")") bad(l, 1, "malformed inttoptr cast");
    if (k == 0) bad(l, 1, "index 0 must be rendered as null");
    return k;
}

std::vector<std::string_view> split_operands(std::string_view s) {
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == ',' && depth == 0) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    if (!trim(s.substr(start)).empty() || !out.empty()) out.push_back(trim(s.substr(start)));
    return out;
}

QirCall parse_call(const Line& l) {
    std::string_view s = trim(l.text);
    if (!consume(s, "call void @__quantum__qis__")) bad(l, 1, "expected an intrinsic call");
    const auto body = s.find("__body(");
    if (body == std::string_view::npos) bad(l, 1, "expected '__body(' in call");
    QirCall call;
    call.name = std::string(s.substr(0, body));
    s.remove_prefix(body + 7);
    if (s.empty() || s.back() != ')') bad(l, l.text.size(), "unterminated operand list");
    s.remove_suffix(1);
    for (std::string_view op : split_operands(s)) {
        if (consume(op, "double ")) {
            double v = 0.0;
            auto [p, ec] = std::from_chars(op.data(), op.data() + op.size(), v);
            if (ec != std::errc{} || p != op.data() + op.size()) bad(l, 1, "bad double operand");
            call.angles.push_back(v);
        } else if (auto q = pointer_operand(l, op, "Qubit")) {
            call.qubits.push_back(*q);
        } else if (auto r = pointer_operand(l, op, "Result")) {
            call.results.push_back(*r);
        } else {
            bad(l, 1, "unrecognized operand '" + std::string(op) + "'");
        }
    }
    return call;
}

}  // namespace

QirShape check_qir_shape(std::string_view text) {
    std::vector<Line> lines;
    std::size_t n = 1;
    for (std::size_t pos = 0; pos <= text.size();) {
        const auto nl = text.find('\n', pos);
        const auto end = nl == std::string_view::npos ? text.size() : nl;
        lines.push_back({text.substr(pos, end - pos), n++});
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }

    std::size_t entry_line = 0;
    std::size_t defines = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i].text).starts_with("define ")) {
            ++defines;
            if (trim(lines[i].text) != "define void @main() #0 {") {
                bad(lines[i], 1, "unexpected function definition");
            }
            entry_line = i;
        }
    }
    if (defines != 1) throw ParseError(Errc::Parse, 1, 1, "expected exactly one @main definition");
    std::size_t i = entry_line + 1;
    if (i >= lines.size() || trim(lines[i].text) != "entry:") {
        throw ParseError(Errc::Parse, entry_line + 2, 1, "expected 'entry:' label");
    }
    QirShape shape;
    bool measuring = false;
    for (++i; i < lines.size(); ++i) {
        const std::string_view t = trim(lines[i].text);
        if (t == "ret void") break;
        QirCall call = parse_call(lines[i]);
        if (call.name == "mz") {
            if (call.qubits.size() != 1 || call.results.size() != 1 || !call.angles.empty()) {
                bad(lines[i], 1, "mz takes one qubit and one result");
            }
            measuring = true;
            shape.measure_calls.push_back(std::move(call));
        } else {
            if (measuring) bad(lines[i], 1, "gate call after measurement");
            if (!call.results.empty() || call.qubits.empty() || call.qubits.size() > 2) {
                bad(lines[i], 1, "malformed gate operands");
            }
            shape.gate_calls.push_back(std::move(call));
        }
    }
    if (i >= lines.size()) throw ParseError(Errc::Parse, lines.back().number, 1, "missing 'ret void'");
    if (i + 1 >= lines.size() || trim(lines[i + 1].text) != "}") {
        throw ParseError(Errc::Parse, lines[i].number + 1, 1, "expected '}' after 'ret void'");
    }
    return shape;
}

}  // namespace qoffload
