#include "qoffload/statevector.hpp"

#include "qoffload/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>
#include <utility>

namespace qoffload {

namespace {

constexpr double kZeroProbability = 1e-15;
constexpr double kSampleNormTolerance = 1e-6;

// Inserts a zero bit at position `bit` of `k`.
constexpr std::size_t insert_zero(std::size_t k, std::size_t bit) noexcept {
    const std::size_t low = k & ((std::size_t{1} << bit) - 1);
    return ((k >> bit) << (bit + 1)) | low;
}

}  // namespace

StateVector::StateVector(std::size_t num_qubits, std::size_t max_qubits)
    : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > max_qubits) {
        throw Error(Errc::SizeOutOfRange, "state of " + std::to_string(num_qubits) +
                                              " qubits exceeds limit " +
                                              std::to_string(max_qubits));
    }
    amps_.assign(std::size_t{1} << num_qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector::StateVector(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() < 2 || !std::has_single_bit(amps_.size())) {
        throw Error(Errc::SizeOutOfRange, "amplitude count must be a power of two >= 2");
    }
    num_qubits_ = static_cast<std::size_t>(std::countr_zero(amps_.size()));
}

double StateVector::norm_squared() const noexcept {
    double s = 0.0;
    for (const cplx& a : amps_) s += std::norm(a);
    return s;
}

void StateVector::apply(const Gate& gate) {
    for (std::size_t q : gate.targets()) {
        if (q >= num_qubits_) {
            throw Error(Errc::IndexOutOfRange, "qubit " + std::to_string(q) + " out of range");
        }
    }
    switch (gate.kind()) {
        case GateKind::CX: apply_cx(gate.target(0), gate.target(1)); return;
        case GateKind::CZ: apply_cz(gate.target(0), gate.target(1)); return;
        case GateKind::SWAP: apply_swap(gate.target(0), gate.target(1)); return;
        default: break;
    }
    const GateMatrix u = gate_matrix(gate.kind(), gate.param());
    if (u.dim == 2) {
        apply_single(u, gate.target(0));
    } else {
        apply_pair(u, gate.target(0), gate.target(1));
    }
}

void StateVector::apply_single(const GateMatrix& u, std::size_t q) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t half = amps_.size() / 2;
    const cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    for (std::size_t k = 0; k < half; ++k) {
        const std::size_t i0 = insert_zero(k, q);
        const std::size_t i1 = i0 | stride;
        const cplx a0 = amps_[i0], a1 = amps_[i1];
        amps_[i0] = u00 * a0 + u01 * a1;
        amps_[i1] = u10 * a0 + u11 * a1;
    }
}

void StateVector::apply_pair(const GateMatrix& u, std::size_t q0, std::size_t q1) {
    const std::size_t lo = std::min(q0, q1), hi = std::max(q0, q1);
    const std::size_t b0 = std::size_t{1} << q0, b1 = std::size_t{1} << q1;
    const std::size_t quarter = amps_.size() / 4;
    for (std::size_t k = 0; k < quarter; ++k) {
        const std::size_t base = insert_zero(insert_zero(k, lo), hi);
        // Local index 2*bit(q0) + bit(q1).
        const std::array<std::size_t, 4> idx{base, base | b1, base | b0, base | b0 | b1};
        std::array<cplx, 4> in{};
        for (std::size_t r = 0; r < 4; ++r) in[r] = amps_[idx[r]];
        for (std::size_t r = 0; r < 4; ++r) {
            cplx acc{0.0, 0.0};
            for (std::size_t c = 0; c < 4; ++c) acc += u(r, c) * in[c];
            amps_[idx[r]] = acc;
        }
    }
}

void StateVector::apply_cx(std::size_t control, std::size_t target) {
    const std::size_t lo = std::min(control, target), hi = std::max(control, target);
    const std::size_t cb = std::size_t{1} << control, tb = std::size_t{1} << target;
    const std::size_t quarter = amps_.size() / 4;
    for (std::size_t k = 0; k < quarter; ++k) {
        const std::size_t base = insert_zero(insert_zero(k, lo), hi) | cb;
        std::swap(amps_[base], amps_[base | tb]);
    }
}

void StateVector::apply_cz(std::size_t a, std::size_t b) {
    const std::size_t lo = std::min(a, b), hi = std::max(a, b);
    const std::size_t both = (std::size_t{1} << a) | (std::size_t{1} << b);
    const std::size_t quarter = amps_.size() / 4;
    for (std::size_t k = 0; k < quarter; ++k) {
        const std::size_t i = insert_zero(insert_zero(k, lo), hi) | both;
        amps_[i] = -amps_[i];
    }
}

void StateVector::apply_swap(std::size_t a, std::size_t b) {
    const std::size_t lo = std::min(a, b), hi = std::max(a, b);
    const std::size_t ab = std::size_t{1} << a, bb = std::size_t{1} << b;
    const std::size_t quarter = amps_.size() / 4;
    for (std::size_t k = 0; k < quarter; ++k) {
        const std::size_t base = insert_zero(insert_zero(k, lo), hi);
        std::swap(amps_[base | ab], amps_[base | bb]);
    }
}

StateVector run_statevector(const Circuit& c, std::size_t max_qubits) {
    StateVector sv(c.num_qubits(), max_qubits);
    for (const Gate& g : c.gates()) sv.apply(g);
    return sv;
}

std::vector<double> exact_probabilities(const StateVector& sv) {
    std::vector<double> p;
    p.reserve(sv.amplitudes().size());
    for (const cplx& a : sv.amplitudes()) p.push_back(std::norm(a));
    return p;
}

Histogram sample(const StateVector& sv, std::uint64_t shots, Seed seed) {
    if (shots < 1) throw Error(Errc::InvalidArgument, "shots must be at least 1");
    const double norm = sv.norm_squared();
    if (std::abs(norm - 1.0) > kSampleNormTolerance) {
        throw Error(Errc::NotNormalized,
                    "state norm^2 " + std::to_string(norm) + " deviates from 1");
    }
    const std::vector<double> p = exact_probabilities(sv);
    std::vector<double> cdf(p.size());
    double running = 0.0;
    std::size_t last_live = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] >= kZeroProbability) {
            running += p[k];
            last_live = k;
        }
        cdf[k] = running;
    }
    std::vector<std::uint64_t> counts(p.size(), 0);
    std::mt19937_64 rng(seed);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * running;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t k =
            it == cdf.end() ? last_live : static_cast<std::size_t>(it - cdf.begin());
        ++counts[k];
    }
    return Histogram(sv.num_qubits(), std::move(counts));
}

}  // namespace qoffload
