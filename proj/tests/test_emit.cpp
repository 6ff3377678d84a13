#include "doctest.h"
#include "oracles.hpp"
#include "qoffload/emit.hpp"
#include "qoffload/error.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

using namespace qoffload;

namespace {

std::string golden(const std::string& name) {
    std::ifstream in(std::string(QOFFLOAD_GOLDEN_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kBellQasm =
    "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\nh q[0];\ncx q[0],q[1];\nmeasure q -> c;\n";

bool same_circuit(const Circuit& a, const Circuit& b, double tol) {
    if (a.num_qubits() != b.num_qubits() || a.measured() != b.measured()) return false;
    if (a.gates().size() != b.gates().size()) return false;
    for (std::size_t i = 0; i < a.gates().size(); ++i) {
        const Gate &x = a.gates()[i], &y = b.gates()[i];
        if (x.kind() != y.kind() || !std::equal(x.targets().begin(), x.targets().end(), y.targets().begin()))
            return false;
        if (x.param().has_value() != y.param().has_value()) return false;
        if (x.param() && std::abs(*x.param() - *y.param()) > tol) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("emit_qasm Bell program is byte-exact") {
    CHECK(emit_qasm(bell_circuit()) == kBellQasm);
    CHECK(emit_qasm(bell_circuit()) == golden("bell.qasm"));
}

TEST_CASE("emit_qasm edge cases") {
    CHECK(emit_qasm(finalize_measure(create_circuit(1))) ==
          "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\ncreg c[1];\nmeasure q -> c;\n");

    Circuit c(3);
    c.apply(Gate::rz(1, 0.5)).measure();
    const std::string text = emit_qasm(c);
    CHECK(text.find("\nrz(0.5) q[1];\n") != std::string::npos);
    CHECK(parse_qasm(text) == c);

    CHECK_THROWS_AS((void)emit_qasm(create_circuit(2)), Error);
}

TEST_CASE("emit_qasm uses every qelib1 mnemonic") {
    Circuit c(3);
    c.apply(Gate::h(0)).apply(Gate::x(1)).apply(Gate::y(2)).apply(Gate::z(0)).apply(Gate::s(1));
    c.apply(Gate::sdg(2)).apply(Gate::t(0)).apply(Gate::tdg(1)).apply(Gate::rx(2, -0.25));
    c.apply(Gate::ry(0, 1e-20)).apply(Gate::rz(1, 3.0)).apply(Gate::cx(2, 0)).apply(Gate::cz(0, 1));
    c.apply(Gate::swap(1, 2)).measure();
    const std::string expected =
        "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\ncreg c[3];\n"
        "h q[0];\nx q[1];\ny q[2];\nz q[0];\ns q[1];\nsdg q[2];\nt q[0];\ntdg q[1];\nrx(-0.25) q[2];\n"
        "ry(1e-20) q[0];\nrz(3) q[1];\ncx q[2],q[0];\ncz q[0],q[1];\nswap q[1],q[2];\nmeasure q -> c;\n";
    CHECK(emit_qasm(c) == expected);
    CHECK(parse_qasm(expected) == c);
}

TEST_CASE("parse_qasm") {
    const Circuit bell = parse_qasm(kBellQasm);
    CHECK(bell.num_qubits() == 2);
    CHECK(bell.measured());
    REQUIRE(bell.gates().size() == 2);
    CHECK(bell.gates()[0] == Gate::h(0));
    CHECK(bell.gates()[1] == Gate::cx(0, 1));

    const Circuit empty =
        parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\ncreg c[1];\nmeasure q -> c;\n");
    CHECK(empty == finalize_measure(create_circuit(1)));

    const Circuit rx = parse_qasm(
        "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\ncreg c[1];\nrx(pi/2) q[0];\nmeasure q -> c;\n");
    REQUIRE(rx.gates().size() == 1);
    CHECK(rx.gates()[0].kind() == GateKind::RX);
    CHECK(std::abs(*rx.gates()[0].param() - std::acos(-1.0) / 2) < 1e-15);
}

TEST_CASE("parse_qasm angle expressions") {
    auto angle = [](const std::string& expr) {
        const Circuit c = parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\ncreg c[1];\nrz(" + expr +
                                     ") q[0];\nmeasure q -> c;\n");
        return *c.gates().at(0).param();
    };
    const double pi = std::acos(-1.0);
    CHECK(angle("pi") == pi);
    CHECK(angle("2*pi") == 2 * pi);
    CHECK(angle("-pi/4") == -pi / 4);
    CHECK(angle("(pi+1)/2") == (pi + 1) / 2);
    CHECK(angle("1e-3") == 1e-3);
    CHECK(angle("1.5E+2") == 150.0);
    CHECK(angle(".5") == 0.5);
}

TEST_CASE("parse_qasm accepts other register names and comments") {
    const Circuit c = parse_qasm(
        "// Bell\nOPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg a[2]; creg out[2];\n"
        "h a[0]; // superpose\ncx a[0], a[1];\nmeasure a -> out;\n");
    CHECK(c == bell_circuit());
    CHECK(emit_qasm(c) == kBellQasm);
}

TEST_CASE("parse_qasm errors are typed and positioned") {
    auto code_at = [](const std::string& text, Errc code, std::size_t line, std::size_t col) {
        try {
            (void)parse_qasm(text);
            FAIL("expected ParseError for: " << text);
        } catch (const ParseError& e) {
            CHECK_MESSAGE(e.code() == code, e.what());
            CHECK_MESSAGE(e.line() == line, e.what());
            CHECK_MESSAGE(e.column() == col, e.what());
        }
    };
    const std::string head = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    code_at(head + "qreg q[2];\ncreg c[2];\nh q[0] @;\n", Errc::Parse, 5, 8);
    code_at(head + "qreg q[2];\ncreg c[2];\nbarrier q;\nmeasure q -> c;\n", Errc::UnsupportedConstruct, 5, 1);
    code_at(head + "gate foo a { h a; }\n", Errc::UnsupportedConstruct, 3, 1);
    code_at(head + "qreg q[2];\ncreg c[2];\nif (c==1) x q[0];\n", Errc::UnsupportedConstruct, 5, 1);
    code_at(head + "qreg q[2];\ncreg c[2];\nopaque g a;\n", Errc::UnsupportedConstruct, 5, 1);
    code_at(head + "qreg q[2];\nqreg r[2];\n", Errc::UnsupportedConstruct, 4, 1);
    code_at(head + "qreg q[2];\ncreg c[2];\nmeasure q[0] -> c[0];\n", Errc::UnsupportedConstruct, 5, 10);
    code_at(head + "qreg q[2];\ncreg c[2];\nh q;\nmeasure q -> c;\n", Errc::UnsupportedConstruct, 5, 4);
    code_at(head + "qreg q[2];\ncreg c[3];\n", Errc::Parse, 4, 1);
    code_at(head + "qreg q[2];\ncreg c[2];\nx q[2];\n", Errc::IndexOutOfRange, 5, 5);
    code_at(head + "qreg q[2];\ncreg c[2];\ncx q[1],q[1];\n", Errc::DuplicateTargets, 5, 1);
    code_at(head + "qreg q[2];\ncreg c[2];\nfoo q[1];\n", Errc::Parse, 5, 1);
    code_at(head + "qreg q[2];\ncreg c[2];\nh q[0];\n", Errc::Parse, 6, 1);
    code_at(head + "qreg q[2];\ncreg c[2];\nmeasure q -> c;\nh q[0];\n", Errc::Parse, 6, 1);
    code_at(head + "qreg q[30];\n", Errc::SizeOutOfRange, 3, 1);
    code_at("OPENQASM 3.0;\n", Errc::UnsupportedConstruct, 1, 10);
    code_at("OPENQASM 2.0;\ninclude \"stdgates.inc\";\n", Errc::UnsupportedConstruct, 2, 9);
    code_at("OPENQASM 2.0;\ninclude \"qelib1.inc;\n", Errc::Parse, 2, 9);
    code_at(head + "qreg q[1];\ncreg c[1];\nrx(theta) q[0];\n", Errc::UnsupportedConstruct, 5, 4);
    code_at(head + "qreg q[1];\ncreg c[1];\nrx(1/0) q[0];\n", Errc::Parse, 5, 5);
    code_at(head + "qreg q[1];\ncreg c[1];\nrx q[0];\n", Errc::Parse, 5, 4);
    code_at(head + "qreg q[1];\ncreg c[1];\nh(0.5) q[0];\n", Errc::Parse, 5, 2);
}

TEST_CASE("parse_qasm rejects every single-token deletion of the Bell program") {
    const auto spans = oracle::qasm_token_spans(kBellQasm);
    CHECK(spans.size() == 40);
    for (const auto& [pos, len] : spans) {
        std::string mutated = kBellQasm;
        mutated.erase(pos, len);
        try {
            (void)parse_qasm(mutated);
            FAIL("mutation parsed: " << mutated);
        } catch (const ParseError& e) {
            CHECK(e.line() >= 1);
            CHECK(e.column() >= 1);
        }
    }
}

TEST_CASE("parse_qasm(emit_qasm(c)) == c for 200 random circuits") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 200; ++trial) {
        const Circuit c = oracle::random_circuit(rng, 6, 25);
        const Circuit back = parse_qasm(emit_qasm(c));
        CHECK(same_circuit(c, back, 1e-12));
        CHECK(back == c);  // shortest round-trip formatting is exact
        CHECK(emit_qasm(back) == emit_qasm(c));
    }
}

TEST_CASE("format helpers") {
    CHECK(format_shortest(0.5) == "0.5");
    CHECK(format_shortest(3.0) == "3");
    CHECK(format_shortest(1e-20) == "1e-20");
    CHECK(format_scientific(0.25) == "2.5e-1");
    CHECK(format_scientific(1.0) == "1.0e0");
    CHECK(format_scientific(-1.5e-7) == "-1.5e-7");
    CHECK(format_scientific(12345.0) == "1.2345e4");
    CHECK(format_scientific(0.0) == "0.0e0");
}

TEST_CASE("emit_qir Bell program follows the entry-point layout") {
    const std::string qir = emit_qir(bell_circuit());
    CHECK(qir == golden("bell.ll"));
    const std::vector<std::string> prefixes = {"define void @main() #0 {",
                                               "entry:",
                                               "call void @__quantum__qis__h__body(",
                                               "call void @__quantum__qis__cnot__body(",
                                               "call void @__quantum__qis__mz__body(",
                                               "ret void"};
    std::istringstream lines(qir);
    std::string line;
    std::size_t next = 0;
    while (std::getline(lines, line) && next < prefixes.size()) {
        const auto b = line.find_first_not_of(' ');
        if (b != std::string::npos && line.compare(b, prefixes[next].size(), prefixes[next]) == 0) ++next;
    }
    CHECK(next == prefixes.size());
    CHECK(qir.find("attributes #0 = { \"entry_point\" }") != std::string::npos);
}

TEST_CASE("emit_qir operands") {
    const QirShape empty = check_qir_shape(emit_qir(finalize_measure(create_circuit(1))));
    CHECK(empty.gate_calls.empty());
    CHECK(empty.measure_calls.size() == 1);

    Circuit c(2);
    c.apply(Gate::rx(1, 0.25)).measure();
    const std::string qir = emit_qir(c);
    CHECK(qir.find("call void @__quantum__qis__rx__body(double 2.5e-1, %Qubit* inttoptr (i64 1 to %Qubit*))") !=
          std::string::npos);
    const QirShape shape = check_qir_shape(qir);
    REQUIRE(shape.gate_calls.size() == 1);
    CHECK(shape.gate_calls[0].name == "rx");
    CHECK(shape.gate_calls[0].angles == std::vector<double>{0.25});
    CHECK(shape.gate_calls[0].qubits == std::vector<std::size_t>{1});
    CHECK_THROWS_AS((void)emit_qir(create_circuit(1)), Error);
}

TEST_CASE("QIR call counts and operands match the circuit for random circuits") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const Circuit c = oracle::random_circuit(rng, 5, 20);
        const QirShape shape = check_qir_shape(emit_qir(c));
        REQUIRE(shape.gate_calls.size() == c.gates().size());
        REQUIRE(shape.measure_calls.size() == c.num_qubits());
        for (std::size_t i = 0; i < c.gates().size(); ++i) {
            const Gate& g = c.gates()[i];
            CHECK(shape.gate_calls[i].name == qir_name(g.kind()));
            CHECK(std::equal(g.targets().begin(), g.targets().end(), shape.gate_calls[i].qubits.begin(),
                             shape.gate_calls[i].qubits.end()));
            if (g.param()) CHECK(shape.gate_calls[i].angles == std::vector<double>{*g.param()});
        }
        for (std::size_t q = 0; q < c.num_qubits(); ++q) {
            CHECK(shape.measure_calls[q].qubits == std::vector<std::size_t>{q});
            CHECK(shape.measure_calls[q].results == std::vector<std::size_t>{q});
        }
    }
}

TEST_CASE("check_qir_shape rejects malformed programs") {
    const std::string good = emit_qir(bell_circuit());
    auto replaced = [&](const std::string& from, const std::string& to) {
        std::string s = good;
        s.replace(s.find(from), from.size(), to);
        return s;
    };
    CHECK_THROWS_AS((void)check_qir_shape(replaced("  ret void\n", "")), ParseError);
    CHECK_THROWS_AS((void)check_qir_shape(replaced("entry:", "start:")), ParseError);
    CHECK_THROWS_AS((void)check_qir_shape(good + "define void @main() #0 {\n}\n"), ParseError);
    CHECK_THROWS_AS((void)check_qir_shape(replaced("%Qubit* null)", "%Qubit* inttoptr (i64 0 to %Qubit*))")),
                    ParseError);
    CHECK_THROWS_AS((void)check_qir_shape(replaced("(i64 1 to %Qubit*))\n", "(i64 1 to %Qubit*)\n")), ParseError);
    CHECK_THROWS_AS((void)check_qir_shape(replaced("__h__body", "__h__adj")), ParseError);
}
