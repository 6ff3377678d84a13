// Independent reference computations used only by tests. Nothing here calls
// into the simulator's stride kernels or the library's gate tables.
#pragma once

#include "qoffload/circuit.hpp"

#include <Eigen/Dense>

#include <cctype>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Taylor series of exp(A); converges for the small-norm generators used here.
inline Mat expm(const Mat& a, int terms = 60) {
    Mat result = Mat::Identity(a.rows(), a.cols());
    Mat term = Mat::Identity(a.rows(), a.cols());
    for (int k = 1; k < terms; ++k) {
        term = term * a / static_cast<double>(k);
        result += term;
    }
    return result;
}

inline Mat pauli(char p) {
    const cplx i{0, 1};
    Mat m(2, 2);
    switch (p) {
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, -i, i, 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: m << 1, 0, 0, 1; break;
    }
    return m;
}

/// Textbook single-qubit matrices written out from their definitions; rotations
/// built as exponentials of Pauli generators.
inline Mat single_qubit(qoffload::GateKind k, double theta = 0.0) {
    using qoffload::GateKind;
    const cplx i{0, 1};
    Mat m(2, 2);
    switch (k) {
        case GateKind::H: m << 1, 1, 1, -1; return m / std::sqrt(2.0);
        case GateKind::X: return pauli('X');
        case GateKind::Y: return pauli('Y');
        case GateKind::Z: return pauli('Z');
        case GateKind::S: m << 1, 0, 0, i; return m;
        case GateKind::SDG: m << 1, 0, 0, -i; return m;
        case GateKind::T: m << 1, 0, 0, std::exp(i * std::numbers::pi / 4.0); return m;
        case GateKind::TDG: m << 1, 0, 0, std::exp(-i * std::numbers::pi / 4.0); return m;
        case GateKind::RX: return expm(-i * theta / 2.0 * pauli('X'));
        case GateKind::RY: return expm(-i * theta / 2.0 * pauli('Y'));
        case GateKind::RZ: return expm(-i * theta / 2.0 * pauli('Z'));
        default: break;
    }
    throw std::logic_error("not a single-qubit kind");
}

/// Operator on the full register: qubit q is bit q of the basis index, so the
/// Kronecker chain runs from qubit n-1 (leftmost) down to qubit 0.
inline Mat embed_single(const Mat& u, std::size_t q, std::size_t n) {
    Mat out = Mat::Identity(1, 1);
    for (std::size_t k = n; k-- > 0;) out = kron(out, k == q ? u : Mat(Mat::Identity(2, 2)));
    return out;
}

/// Projector-sum construction for controlled and swap gates.
inline Mat two_qubit(qoffload::GateKind k, std::size_t a, std::size_t b, std::size_t n) {
    using qoffload::GateKind;
    Mat p0(2, 2), p1(2, 2), i2 = Mat::Identity(2, 2);
    p0 << 1, 0, 0, 0;
    p1 << 0, 0, 0, 1;
    auto on = [&](const Mat& ua, const Mat& ub) {
        Mat out = Mat::Identity(1, 1);
        for (std::size_t q = n; q-- > 0;) out = kron(out, q == a ? ua : q == b ? ub : i2);
        return out;
    };
    switch (k) {
        case GateKind::CX: return on(p0, i2) + on(p1, pauli('X'));
        case GateKind::CZ: return on(p0, i2) + on(p1, pauli('Z'));
        case GateKind::SWAP:
            return 0.5 * (on(i2, i2) + on(pauli('X'), pauli('X')) + on(pauli('Y'), pauli('Y')) +
                          on(pauli('Z'), pauli('Z')));
        default: break;
    }
    throw std::logic_error("not a two-qubit kind");
}

inline Mat full_unitary(const qoffload::Gate& g, std::size_t n) {
    if (g.targets().size() == 1) return embed_single(single_qubit(g.kind(), g.param().value_or(0.0)), g.target(0), n);
    return two_qubit(g.kind(), g.target(0), g.target(1), n);
}

/// Final state by multiplying full 2^n x 2^n gate matrices into |0...0>.
inline Vec dense_run(const qoffload::Circuit& c) {
    const auto dim = static_cast<Eigen::Index>(1) << c.num_qubits();
    Vec psi = Vec::Zero(dim);
    psi(0) = 1.0;
    for (const auto& g : c.gates()) psi = full_unitary(g, c.num_qubits()) * psi;
    return psi;
}

/// Hamiltonian matrix; character j of ops acts on qubit n-1-j.
inline Mat pauli_string(const std::string& ops) {
    Mat out = Mat::Identity(1, 1);
    for (char p : ops) out = kron(out, pauli(p));
    return out;
}

inline Mat hamiltonian(const std::vector<std::pair<double, std::string>>& terms) {
    Mat h = Mat::Zero(std::size_t{1} << terms.front().second.size(), std::size_t{1} << terms.front().second.size());
    for (const auto& [c, ops] : terms) h += c * pauli_string(ops);
    return h;
}

inline double ground_energy(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    return es.eigenvalues().minCoeff();
}

/// Random circuit on exactly `n` qubits with exactly `count` gates of any kind.
inline qoffload::Circuit random_circuit_fixed(std::mt19937_64& rng, std::size_t n, std::size_t count,
                                              bool measured = true) {
    using namespace qoffload;
    std::uniform_int_distribution<std::size_t> kind(0, kAllGateKinds.size() - 1);
    std::uniform_real_distribution<double> angle(-8.0, 8.0);
    std::uniform_int_distribution<std::size_t> qubit(0, n - 1);
    Circuit c(n);
    while (c.gates().size() < count) {
        const GateKind k = kAllGateKinds[kind(rng)];
        if (arity(k) == 2) {
            if (n < 2) continue;
            std::size_t a = qubit(rng), b = qubit(rng);
            while (b == a) b = qubit(rng);
            const std::size_t t[2] = {a, b};
            c.apply(Gate::make(k, t));
        } else {
            const std::size_t t[1] = {qubit(rng)};
            c.apply(Gate::make(k, t, is_rotation(k) ? std::optional<double>(angle(rng)) : std::nullopt));
        }
    }
    if (measured) c.measure();
    return c;
}

/// Random circuit: n in [1, max_qubits], gate count in [0, max_gates].
inline qoffload::Circuit random_circuit(std::mt19937_64& rng, std::size_t max_qubits, std::size_t max_gates,
                                        bool measured = true) {
    std::uniform_int_distribution<std::size_t> nq(1, max_qubits), ng(0, max_gates);
    const std::size_t n = nq(rng);
    return random_circuit_fixed(rng, n, ng(rng), measured);
}

/// (offset, length) of every lexical token in OpenQASM text.
inline std::vector<std::pair<std::size_t, std::size_t>> qasm_token_spans(const std::string& s) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < s.size();) {
        if (std::isspace(static_cast<unsigned char>(s[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        if (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '.') {
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '.')) ++j;
        } else if (s[i] == '"') {
            while (j < s.size() && s[j] != '"') ++j;
            ++j;
        } else if (s[i] == '-' && j < s.size() && s[j] == '>') {
            ++j;
        }
        out.emplace_back(i, j - i);
        i = j;
    }
    return out;
}

}  // namespace oracle
