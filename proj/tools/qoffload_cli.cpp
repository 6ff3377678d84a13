// qoffload command-line entry point.
//
// Exit codes: 0 success, 2 device or connection failure, 3 parse or input
// error, 4 server lifecycle failure.

#include "CLI11.hpp"
#include "qoffload/emit.hpp"
#include "qoffload/report_json.hpp"
#include "qoffload/resman.hpp"
#include "qoffload/runtime.hpp"
#include "qoffload/vqe.hpp"

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <sstream>

namespace {

using namespace qoffload;

constexpr int kExitDevice = 2;
constexpr int kExitInput = 3;
constexpr int kExitServer = 4;

struct DeviceOptions {
    std::string device = "sim";
    std::string endpoint;
    int latency_ms = 0;
};

void add_device_options(CLI::App* cmd, DeviceOptions& d) {
    cmd->add_option("--device", d.device, "sim (in-process simulator) or qpu (remote resource manager)")
        ->check(CLI::IsMember({"sim", "qpu"}));
    cmd->add_option("--endpoint", d.endpoint, "resource manager host:port for --device qpu")
        ->envname("QOFFLOAD_ENDPOINT");
    cmd->add_option("--latency-ms", d.latency_ms, "client-side delay per message leg (qpu only)")
        ->check(CLI::NonNegativeNumber);
}

void register_selected(DeviceRegistry& reg, const DeviceOptions& d) {
    if (d.device == "sim") {
        reg.register_simulator("sim");
        return;
    }
    if (d.endpoint.empty()) throw Error(Errc::InvalidArgument, "--device qpu requires --endpoint or QOFFLOAD_ENDPOINT");
    (void)Endpoint::parse(d.endpoint);
    register_remote(reg, "qpu", d.endpoint, kDefaultMaxQubits, std::chrono::milliseconds(d.latency_ms));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::InvalidArgument, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Circuit builtin(const std::string& name) {
    if (name == "bell") return bell_circuit();
    if (name == "ghz3") return ghz3_circuit();
    throw Error(Errc::InvalidArgument, "unknown builtin circuit '" + name + "' (bell, ghz3)");
}

std::string bitstring(std::size_t k, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t q = 0; q < n; ++q)
        if (k >> q & 1) s[n - 1 - q] = '1';
    return s;
}

void print_histogram(const JobResult& r, Seed seed, bool as_json) {
    if (as_json) {
        std::cout << job_result_to_json(r, seed) << "\n";
        return;
    }
    const Histogram& h = r.histogram;
    std::cout << h.num_qubits() << " qubits, " << h.shots() << " shots, seed " << seed << ", device " << r.device
              << "\n";
    for (std::size_t k = 0; k < h.counts().size(); ++k) {
        std::cout << "|" << bitstring(k, h.num_qubits()) << ">  " << h.counts()[k] << "\n";
    }
}

int run_job(const Circuit& c, std::uint64_t shots, Seed seed, const DeviceOptions& d, bool as_json) {
    DeviceRegistry reg;
    register_selected(reg, d);
    const JobResult r = reg.submit_sync(d.device, Job::make(c, shots, seed));
    print_histogram(r, seed, as_json);
    return 0;
}

int run_transpile(const std::string& input, const std::string& name, const std::string& target,
                  const std::string& output, bool check) {
    const Circuit c = name.empty() ? parse_qasm(read_file(input)) : builtin(name);
    std::string text;
    if (target == "qasm") {
        text = emit_qasm(c);
        if (check && !(parse_qasm(text) == c)) {
            std::cerr << "error: re-parsed QASM differs from the source circuit\n";
            return kExitInput;
        }
    } else {
        text = emit_qir(c);
        if (check) {
            const QirShape shape = check_qir_shape(text);
            if (shape.gate_calls.size() != c.gates().size() || shape.measure_calls.size() != c.num_qubits()) {
                std::cerr << "error: QIR call counts do not match the circuit\n";
                return kExitInput;
            }
        }
    }
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!(out << text)) throw Error(Errc::InvalidArgument, "cannot write '" + output + "'");
    }
    return 0;
}

int run_serve(ServerConfig cfg) {
    // Block termination signals before any thread starts so only sigwait sees them.
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);

    Server server(cfg);
    try {
        server.start();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitServer;
    }
    std::cout << "listening on " << server.endpoint() << " (latency " << cfg.latency.count() << " ms)" << std::endl;
    int sig = 0;
    sigwait(&set, &sig);
    std::cerr << "shutting down\n";
    server.stop();
    return 0;
}

void print_vqe(const VqeReport& r, bool as_json) {
    if (as_json) {
        std::cout << vqe_report_to_json(r) << "\n";
        return;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "energy: %.10f\n", r.best_energy);
    std::cout << buf << "iterations: " << r.iterations << "\nevaluations: " << r.evaluations
              << "\nconverged: " << (r.converged ? "yes" : "no") << "\ntheta:";
    for (double t : r.best_theta) {
        std::snprintf(buf, sizeof buf, " %.8f", t);
        std::cout << buf;
    }
    std::cout << "\n\niter  best_energy\n";
    for (std::size_t i = 0; i < r.energy_trace.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%4zu  %.10f\n", i + 1, r.energy_trace[i]);
        std::cout << buf;
    }
    // Timing goes to stderr so stdout stays byte-identical for a fixed seed.
    std::snprintf(buf, sizeof buf, "wall time: %.3f ms\n",
                  std::chrono::duration<double, std::milli>(r.total_wall_time).count());
    std::cerr << buf;
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case Errc::Connection:
        case Errc::DeviceFailure:
        case Errc::JobFailed:
        case Errc::UnknownDevice:
        case Errc::CapacityExceeded:
        case Errc::Remote:
        case Errc::TruncatedFrame:
        case Errc::OversizedFrame:
        case Errc::UnknownKind:
        case Errc::MalformedMessage: return kExitDevice;
        case Errc::Bind: return kExitServer;
        default: return kExitInput;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum task offloading runtime: simulate, transpile, serve and run VQE"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "qoffload 0.1.0");

    std::uint64_t shots = 1000;
    Seed seed = 1;
    bool as_json = false;
    DeviceOptions dev;

    auto* bell = app.add_subcommand("bell", "Prepare and measure the Bell pair on a device");
    bell->add_option("--shots", shots, "number of shots")->check(CLI::PositiveNumber);
    bell->add_option("--seed", seed, "sampling seed")->envname("QOFFLOAD_SEED");
    bell->add_flag("--json", as_json, "emit a JSON document");
    add_device_options(bell, dev);

    std::string run_input, run_builtin;
    auto* run = app.add_subcommand("run", "Execute a QASM file or builtin circuit on a device");
    run->add_option("input", run_input, "OpenQASM 2.0 file");
    run->add_option("--builtin", run_builtin, "builtin circuit: bell, ghz3");
    run->add_option("--shots", shots, "number of shots")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "sampling seed")->envname("QOFFLOAD_SEED");
    run->add_flag("--json", as_json, "emit a JSON document");
    add_device_options(run, dev);

    std::string tr_input, tr_builtin, tr_target = "qasm", tr_output;
    bool tr_check = false;
    auto* transpile = app.add_subcommand("transpile", "Emit OpenQASM 2.0 or QIR text");
    transpile->add_option("input", tr_input, "OpenQASM 2.0 file");
    transpile->add_option("--builtin", tr_builtin, "builtin circuit: bell, ghz3");
    transpile->add_option("--to", tr_target, "output format")->check(CLI::IsMember({"qasm", "qir"}));
    transpile->add_option("-o,--output", tr_output, "write to a file instead of stdout");
    transpile->add_flag("--check", tr_check, "re-parse the output and verify it matches");

    ServerConfig scfg;
    int serve_latency = 0;
    long serve_ttl = 600;
    std::size_t serve_capacity = kDefaultMaxQubits;
    auto* serve_cmd = app.add_subcommand("serve", "Run the resource manager service");
    serve_cmd->add_option("--bind", scfg.bind, "listen address host:port")->envname("QOFFLOAD_BIND");
    serve_cmd->add_option("--latency-ms", serve_latency, "delay per message leg")
        ->envname("QOFFLOAD_LATENCY_MS")
        ->check(CLI::NonNegativeNumber);
    serve_cmd->add_option("--capacity", serve_capacity, "backend qubit capacity")
        ->envname("QOFFLOAD_CAPACITY")
        ->check(CLI::Range(std::size_t{1}, kDefaultMaxQubits));
    serve_cmd->add_option("--ttl-s", serve_ttl, "seconds a fetched result is kept")
        ->envname("QOFFLOAD_TTL_S")
        ->check(CLI::NonNegativeNumber);

    std::string ham_path;
    VqeConfig vcfg;
    std::size_t layers = 1;
    std::uint64_t vqe_shots = 0;
    auto* vqe = app.add_subcommand("vqe", "Minimize a Pauli Hamiltonian with VQE");
    vqe->add_option("hamiltonian", ham_path, "Hamiltonian file")->required();
    vqe->add_option("--layers", layers, "ansatz layers")->check(CLI::PositiveNumber);
    vqe->add_option("--shots", vqe_shots, "shots per term; 0 selects exact expectation");
    vqe->add_option("--seed", vcfg.seed, "base seed")->envname("QOFFLOAD_SEED");
    vqe->add_option("--max-iters", vcfg.max_iterations, "Nelder-Mead iteration budget");
    vqe->add_option("--tol", vcfg.tolerance, "simplex energy-spread tolerance")->check(CLI::NonNegativeNumber);
    vqe->add_option("--theta0", vcfg.initial_theta, "initial parameters");
    vqe->add_flag("--json", as_json, "emit the report as JSON");
    add_device_options(vqe, dev);

    auto* ping_cmd = app.add_subcommand("ping", "Check that a resource manager answers");
    ping_cmd->add_option("--endpoint", dev.endpoint, "resource manager host:port")->envname("QOFFLOAD_ENDPOINT");
    ping_cmd->add_option("--latency-ms", dev.latency_ms, "client-side delay per message leg")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    try {
        if (*bell) return run_job(bell_circuit(), shots, seed, dev, as_json);
        if (*run) {
            if (run_input.empty() == run_builtin.empty()) {
                std::cerr << "error: give exactly one of a QASM file or --builtin\n";
                return kExitInput;
            }
            const Circuit c = run_builtin.empty() ? parse_qasm(read_file(run_input)) : builtin(run_builtin);
            return run_job(c, shots, seed, dev, as_json);
        }
        if (*transpile) {
            if (tr_input.empty() == tr_builtin.empty()) {
                std::cerr << "error: give exactly one of a QASM file or --builtin\n";
                return kExitInput;
            }
            return run_transpile(tr_input, tr_builtin, tr_target, tr_output, tr_check);
        }
        if (*serve_cmd) {
            scfg.latency = std::chrono::milliseconds(serve_latency);
            scfg.capacity = serve_capacity;
            scfg.result_ttl = std::chrono::seconds(serve_ttl);
            return run_serve(scfg);
        }
        if (*vqe) {
            const Hamiltonian h = load_hamiltonian(ham_path);
            DeviceRegistry reg;
            register_selected(reg, dev);
            vcfg.shots = vqe_shots;
            vcfg.device = dev.device;
            const AnsatzSpec spec{h.num_qubits(), layers};
            print_vqe(optimize(h, spec, reg, vcfg), as_json);
            return 0;
        }
        if (*ping_cmd) {
            if (dev.endpoint.empty()) throw Error(Errc::InvalidArgument, "ping requires --endpoint");
            ClientOptions opts;
            opts.latency = std::chrono::milliseconds(dev.latency_ms);
            std::cout << (ping(dev.endpoint, opts) ? "pong" : "unexpected reply") << "\n";
            return 0;
        }
    } catch (const ParseError& e) {
        const std::string where = !tr_input.empty() ? tr_input : !run_input.empty() ? run_input : ham_path;
        std::cerr << "error: " << (where.empty() ? "" : where + ": ") << e.what() << "\n";
        return kExitInput;
    } catch (const VqeAborted& e) {
        std::cerr << "error: " << e.what() << " (after " << e.partial().iterations << " iterations)\n";
        return kExitDevice;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 0;
}
