#include "qoffload/vqe.hpp"

#include "qoffload/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace qoffload {

bool PauliTerm::is_identity() const noexcept { return ops.find_first_not_of('I') == std::string::npos; }

Hamiltonian::Hamiltonian(std::vector<PauliTerm> terms) {
    if (terms.empty()) throw Error(Errc::InvalidArgument, "a Hamiltonian needs at least one term");
    num_qubits_ = terms.front().ops.size();
    if (num_qubits_ == 0) throw Error(Errc::InvalidArgument, "empty Pauli string");
    for (PauliTerm& t : terms) {
        if (t.ops.size() != num_qubits_) {
            throw Error(Errc::SizeOutOfRange, "Pauli string '" + t.ops + "' has length " +
                                                  std::to_string(t.ops.size()) + ", expected " +
                                                  std::to_string(num_qubits_));
        }
        if (t.ops.find_first_not_of("IXYZ") != std::string::npos) {
            throw Error(Errc::InvalidArgument, "Pauli string '" + t.ops + "' may only contain I, X, Y, Z");
        }
        if (!std::isfinite(t.coefficient)) throw Error(Errc::BadParameter, "coefficient must be finite");
        auto same = std::find_if(terms_.begin(), terms_.end(), [&](const PauliTerm& u) { return u.ops == t.ops; });
        if (same != terms_.end()) {
            same->coefficient += t.coefficient;
        } else {
            terms_.push_back(std::move(t));
        }
    }
}

Hamiltonian parse_hamiltonian(std::string_view text) {
    std::vector<PauliTerm> terms;
    std::size_t line_no = 0;
    std::size_t width = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        std::vector<std::pair<std::string_view, std::size_t>> fields;
        for (std::size_t i = 0; i < line.size();) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            const std::size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            if (i > start) fields.emplace_back(line.substr(start, i - start), start + 1);
        }
        if (fields.empty()) continue;
        if (fields.size() != 2) {
            throw ParseError(Errc::Parse, line_no, fields.front().second,
                             "expected 'coefficient operator-string'");
        }
        const auto [coef_text, coef_col] = fields[0];
        double coef = 0.0;
        auto [p, ec] = std::from_chars(coef_text.data(), coef_text.data() + coef_text.size(), coef);
        if (ec != std::errc{} || p != coef_text.data() + coef_text.size() || !std::isfinite(coef)) {
            throw ParseError(Errc::Parse, line_no, coef_col, "invalid coefficient '" + std::string(coef_text) + "'");
        }
        const auto [ops, ops_col] = fields[1];
        if (const auto bad = ops.find_first_not_of("IXYZ"); bad != std::string_view::npos) {
            throw ParseError(Errc::Parse, line_no, ops_col + bad,
                             std::string("invalid Pauli letter '") + ops[bad] + "'");
        }
        if (width != 0 && ops.size() != width) {
            throw ParseError(Errc::Parse, line_no, ops_col,
                             "operator string length " + std::to_string(ops.size()) + " differs from " +
                                 std::to_string(width));
        }
        width = ops.size();
        terms.push_back({coef, std::string(ops)});
    }
    if (terms.empty()) throw ParseError(Errc::Parse, line_no, 1, "no Hamiltonian terms");
    return Hamiltonian(std::move(terms));
}

Hamiltonian load_hamiltonian(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::InvalidArgument, "cannot open Hamiltonian file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_hamiltonian(ss.str());
}

Circuit ansatz_body(const AnsatzSpec& spec, std::span<const double> theta) {
    if (spec.layers < 1) throw Error(Errc::InvalidArgument, "ansatz needs at least one layer");
    if (theta.size() != spec.num_parameters()) {
        throw Error(Errc::SizeOutOfRange, "ansatz expects " + std::to_string(spec.num_parameters()) +
                                              " parameters, got " + std::to_string(theta.size()));
    }
    Circuit c(spec.num_qubits);
    const std::size_t n = spec.num_qubits;
    for (std::size_t layer = 0; layer < spec.layers; ++layer) {
        for (std::size_t q = 0; q < n; ++q) c.apply(Gate::ry(q, theta[layer * n + q]));
        if (n > 1) {
            for (std::size_t q = 0; q < n; ++q) c.apply(Gate::cx(q, (q + 1) % n));
        }
    }
    return c;
}

Circuit build_ansatz(const AnsatzSpec& spec, std::span<const double> theta) {
    Circuit c = ansatz_body(spec, theta);
    c.measure();
    return c;
}

Circuit basis_change(Circuit body, const PauliTerm& term) {
    if (term.num_qubits() != body.num_qubits()) {
        throw Error(Errc::SizeOutOfRange, "Pauli string '" + term.ops + "' does not match a " +
                                              std::to_string(body.num_qubits()) + "-qubit register");
    }
    for (std::size_t q = 0; q < body.num_qubits(); ++q) {
        switch (term.on_qubit(q)) {
            case 'X': body.apply(Gate::h(q)); break;
            case 'Y': body.apply(Gate::sdg(q)).apply(Gate::h(q)); break;
            default: break;
        }
    }
    body.measure();
    return body;
}

int parity_sign(const PauliTerm& term, std::uint64_t outcome) noexcept {
    std::uint64_t mask = 0;
    for (std::size_t q = 0; q < term.num_qubits(); ++q) {
        if (term.on_qubit(q) != 'I') mask |= std::uint64_t{1} << q;
    }
    return (std::popcount(outcome & mask) & 1) ? -1 : 1;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double expectation_from(const PauliTerm& term, std::span<const double> probabilities) {
    double e = 0.0;
    for (std::size_t k = 0; k < probabilities.size(); ++k) e += parity_sign(term, k) * probabilities[k];
    return e;
}

double expectation_from(const PauliTerm& term, const Histogram& h) {
    double e = 0.0;
    for (std::size_t k = 0; k < h.counts().size(); ++k) {
        e += parity_sign(term, k) * static_cast<double>(h.counts()[k]);
    }
    return e / static_cast<double>(h.shots());
}

double expectation_at(const Hamiltonian& h, const AnsatzSpec& spec, std::span<const double> theta,
                      DeviceRegistry& registry, const ExpectationRequest& req, std::uint64_t evaluation) {
    if (h.num_qubits() != spec.num_qubits) {
        throw Error(Errc::SizeOutOfRange, "Hamiltonian acts on " + std::to_string(h.num_qubits()) +
                                              " qubits but the ansatz has " + std::to_string(spec.num_qubits));
    }
    const Circuit body = ansatz_body(spec, theta);
    double energy = 0.0;
    if (req.shots == kExactShots) {
        const DeviceInfo info = registry.info(req.device);
        if (info.kind != DeviceKind::LocalSimulator) {
            throw Error(Errc::InvalidArgument, "exact mode needs a local simulator, '" + req.device + "' is remote");
        }
        if (body.num_qubits() > info.capacity) {
            throw Error(Errc::CapacityExceeded, "ansatz exceeds capacity of device '" + req.device + "'");
        }
        for (const PauliTerm& t : h.terms()) {
            if (t.is_identity()) {
                energy += t.coefficient;
                continue;
            }
            const StateVector sv = run_statevector(basis_change(body, t));
            energy += t.coefficient * expectation_from(t, exact_probabilities(sv));
        }
        return energy;
    }

    std::vector<std::pair<const PauliTerm*, JobHandle>> pending;
    auto collect = [&](const PauliTerm& t, const JobHandle& handle) {
        try {
            energy += t.coefficient * expectation_from(t, handle.wait().histogram);
        } catch (const Error& e) {
            throw Error(Errc::DeviceFailure, e.what());
        }
    };
    for (std::size_t i = 0; i < h.terms().size(); ++i) {
        const PauliTerm& t = h.terms()[i];
        if (t.is_identity()) {
            energy += t.coefficient;
            continue;
        }
        JobHandle handle = registry.submit_async(
            req.device, Job::make(basis_change(body, t), req.shots, derive_seed(req.seed, evaluation, i)));
        if (req.concurrent_terms) {
            pending.emplace_back(&t, std::move(handle));
        } else {
            collect(t, handle);
        }
    }
    for (auto& [t, handle] : pending) collect(*t, handle);
    return energy;
}

}  // namespace

Seed derive_seed(Seed base, std::uint64_t evaluation, std::uint64_t term_index) noexcept {
    return splitmix64(splitmix64(base ^ splitmix64(evaluation)) ^ term_index);
}

double estimate_expectation(const Hamiltonian& h, const AnsatzSpec& spec, std::span<const double> theta,
                            DeviceRegistry& registry, const ExpectationRequest& request) {
    return expectation_at(h, spec, theta, registry, request, 0);
}

bool VqeReport::same_outcome(const VqeReport& o) const {
    return best_energy == o.best_energy && best_theta == o.best_theta && iterations == o.iterations &&
           evaluations == o.evaluations && converged == o.converged && energy_trace == o.energy_trace &&
           shots == o.shots && device == o.device && seed == o.seed;
}

VqeReport optimize(const Hamiltonian& h, const AnsatzSpec& spec, DeviceRegistry& registry, const VqeConfig& config) {
    std::vector<double> theta0 = config.initial_theta;
    if (theta0.empty()) theta0.assign(spec.num_parameters(), 0.0);
    if (theta0.size() != spec.num_parameters()) {
        throw Error(Errc::SizeOutOfRange, "initial theta has " + std::to_string(theta0.size()) +
                                              " entries, ansatz needs " + std::to_string(spec.num_parameters()));
    }
    if (h.num_qubits() != spec.num_qubits) {
        throw Error(Errc::SizeOutOfRange, "Hamiltonian and ansatz register sizes differ");
    }

    VqeReport report;
    report.optimizer.initial_step = config.initial_step;
    report.optimizer.max_iterations = config.max_iterations;
    report.optimizer.tolerance = config.tolerance;
    report.shots = config.shots;
    report.device = config.device;
    report.seed = config.seed;

    const ExpectationRequest req{config.shots, config.device, config.seed, config.concurrent_terms};
    std::uint64_t evaluation = 0;
    std::chrono::nanoseconds in_iteration{0};
    const auto start = Clock::now();

    auto objective = [&](std::span<const double> theta) {
        const auto t0 = Clock::now();
        const double e = expectation_at(h, spec, theta, registry, req, evaluation++);
        in_iteration += Clock::now() - t0;
        return e;
    };
    auto on_iteration = [&](const NelderMeadIteration& it) {
        report.energy_trace.push_back(it.best_value);
        report.iteration_round_trips.push_back(in_iteration);
        report.best_energy = it.best_value;
        report.best_theta.assign(it.best_point.begin(), it.best_point.end());
        report.iterations = it.iteration;
        in_iteration = std::chrono::nanoseconds{0};
    };

    try {
        const NelderMeadResult r = nelder_mead(objective, theta0, report.optimizer, on_iteration);
        report.best_energy = r.value;
        report.best_theta = r.x;
        report.iterations = r.iterations;
        report.evaluations = r.evaluations;
        report.converged = r.converged;
    } catch (const Error& e) {
        report.evaluations = evaluation;
        report.total_wall_time = Clock::now() - start;
        throw VqeAborted(std::string("VQE aborted: ") + e.what(), std::move(report));
    }
    report.total_wall_time = Clock::now() - start;
    return report;
}

}  // namespace qoffload
