#include "qoffload/emit.hpp"
#include "qoffload/resman.hpp"
#include "qoffload/runtime.hpp"
#include "qoffload/statevector.hpp"
#include "qoffload/vqe.hpp"

#include <pybind11/chrono.h>
#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qoffload;

namespace {

std::chrono::milliseconds ms(double v) { return std::chrono::milliseconds(static_cast<long long>(v)); }

}  // namespace

PYBIND11_MODULE(_qoffload, m) {
    m.doc() = "Quantum task offloading runtime: circuits, simulation, transpilation, devices, VQE.";

    static py::object error = py::exception<Error>(m, "QOffloadError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ParseError& e) {
            py::object exc = error(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            exc.attr("line") = e.line();
            exc.attr("column") = e.column();
            PyErr_SetObject(error.ptr(), exc.ptr());
        } catch (const wire::RemoteError& e) {
            py::object exc = error(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            exc.attr("remote_code") = e.remote_code();
            PyErr_SetObject(error.ptr(), exc.ptr());
        } catch (const Error& e) {
            py::object exc = error(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    py::enum_<GateKind> kind(m, "GateKind");
    for (GateKind k : kAllGateKinds) kind.value(std::string(mnemonic(k)).c_str(), k);

    py::class_<Gate>(m, "Gate")
        .def_static("make", [](GateKind k, std::vector<std::size_t> targets, std::optional<double> param) {
            return Gate::make(k, targets, param);
        }, py::arg("kind"), py::arg("targets"), py::arg("param") = py::none())
        .def_property_readonly("kind", &Gate::kind)
        .def_property_readonly("targets", [](const Gate& g) {
            return std::vector<std::size_t>(g.targets().begin(), g.targets().end());
        })
        .def_property_readonly("param", &Gate::param)
        .def("__eq__", [](const Gate& a, const Gate& b) { return a == b; })
        .def("__repr__", [](const Gate& g) {
            std::string s = "Gate(" + std::string(mnemonic(g.kind()));
            if (g.param()) s += ", " + format_shortest(*g.param());
            for (auto q : g.targets()) s += ", " + std::to_string(q);
            return s + ")";
        });

    py::class_<Circuit>(m, "Circuit")
        .def(py::init<std::size_t, std::size_t>(), py::arg("num_qubits"), py::arg("max_qubits") = kDefaultMaxQubits)
        .def("apply", [](Circuit& c, const Gate& g) -> Circuit& { return c.apply(g); },
             py::return_value_policy::reference_internal)
        .def("measure", [](Circuit& c) -> Circuit& { return c.measure(); }, py::return_value_policy::reference_internal)
        .def_property_readonly("num_qubits", &Circuit::num_qubits)
        .def_property_readonly("measured", &Circuit::measured)
        .def_property_readonly("gates", [](const Circuit& c) { return c.gates(); })
        .def("__eq__", [](const Circuit& a, const Circuit& b) { return a == b; });

    m.def("bell_circuit", &bell_circuit);
    m.def("ghz3_circuit", &ghz3_circuit);

    py::class_<Histogram>(m, "Histogram")
        .def(py::init<std::size_t, std::vector<std::uint64_t>>(), py::arg("num_qubits"), py::arg("counts"))
        .def_property_readonly("num_qubits", &Histogram::num_qubits)
        .def_property_readonly("shots", &Histogram::shots)
        .def_property_readonly("counts", &Histogram::counts)
        .def("__getitem__", [](const Histogram& h, std::uint64_t k) { return h[k]; })
        .def("__eq__", [](const Histogram& a, const Histogram& b) { return a == b; });

    m.def("statevector", [](const Circuit& c) {
        const StateVector sv = run_statevector(c);
        return std::vector<cplx>(sv.amplitudes().begin(), sv.amplitudes().end());
    }, py::arg("circuit"),
          "Final amplitudes; index bit i is qubit i.");
    m.def("probabilities", [](const Circuit& c) { return exact_probabilities(run_statevector(c)); },
          py::arg("circuit"));
    m.def("simulate", [](const Circuit& c, std::uint64_t shots, Seed seed) {
        py::gil_scoped_release release;
        return sample(run_statevector(c), shots, seed);
    }, py::arg("circuit"), py::arg("shots"), py::arg("seed"));

    m.def("emit_qasm", &emit_qasm, py::arg("circuit"));
    m.def("parse_qasm", [](const std::string& text, std::size_t max) { return parse_qasm(text, max); },
          py::arg("text"), py::arg("max_qubits") = kDefaultMaxQubits);
    m.def("emit_qir", &emit_qir, py::arg("circuit"));

    py::class_<JobResult>(m, "JobResult")
        .def_readonly("histogram", &JobResult::histogram)
        .def_readonly("device", &JobResult::device)
        .def_property_readonly("wall_time_s", [](const JobResult& r) {
            return std::chrono::duration<double>(r.wall_time).count();
        });

    py::class_<JobHandle>(m, "JobHandle")
        .def_property_readonly("id", &JobHandle::id)
        .def_property_readonly("device", &JobHandle::device)
        .def_property_readonly("status", [](const JobHandle& h) { return std::string(to_string(h.status())); })
        .def("wait", [](const JobHandle& h) {
            py::gil_scoped_release release;
            return h.wait();
        });

    py::class_<DeviceRegistry>(m, "DeviceRegistry")
        .def(py::init<>())
        .def("register_simulator", &DeviceRegistry::register_simulator, py::arg("name"),
             py::arg("capacity") = kDefaultMaxQubits)
        .def("register_remote", [](DeviceRegistry& reg, const std::string& name, const std::string& endpoint,
                                   std::size_t capacity, double latency_ms) {
            register_remote(reg, name, endpoint, capacity, ms(latency_ms));
        }, py::arg("name"), py::arg("endpoint"), py::arg("capacity") = kDefaultMaxQubits, py::arg("latency_ms") = 0.0)
        .def("__contains__", &DeviceRegistry::contains)
        .def("__len__", &DeviceRegistry::size)
        .def("submit_sync", [](DeviceRegistry& reg, const std::string& device, const Circuit& c, std::uint64_t shots,
                               Seed seed) {
            Job job = Job::make(c, shots, seed);
            py::gil_scoped_release release;
            return reg.submit_sync(device, std::move(job));
        }, py::arg("device"), py::arg("circuit"), py::arg("shots"), py::arg("seed"))
        .def("submit_async", [](DeviceRegistry& reg, const std::string& device, const Circuit& c,
                                std::uint64_t shots, Seed seed) {
            return reg.submit_async(device, Job::make(c, shots, seed));
        }, py::arg("device"), py::arg("circuit"), py::arg("shots"), py::arg("seed"))
        .def("shutdown", [](DeviceRegistry& reg) {
            py::gil_scoped_release release;
            reg.shutdown();
        });

    py::class_<Server>(m, "Server")
        .def_property_readonly("endpoint", &Server::endpoint)
        .def_property_readonly("port", &Server::port)
        .def("stop", [](Server& s) {
            py::gil_scoped_release release;
            s.stop();
        });
    m.def("serve", [](const std::string& bind, double latency_ms, std::size_t capacity) {
        ServerConfig cfg;
        cfg.bind = bind;
        cfg.latency = ms(latency_ms);
        cfg.capacity = capacity;
        return serve(cfg);
    }, py::arg("bind") = "127.0.0.1:0", py::arg("latency_ms") = 0.0, py::arg("capacity") = kDefaultMaxQubits);
    m.def("ping", [](const std::string& endpoint) {
        py::gil_scoped_release release;
        return ping(endpoint);
    }, py::arg("endpoint"));
    m.def("client_submit", [](const std::string& endpoint, const Circuit& c, std::uint64_t shots, Seed seed,
                              double latency_ms) {
        ClientOptions opts;
        opts.latency = ms(latency_ms);
        py::gil_scoped_release release;
        return client_submit(endpoint, c, shots, seed, opts);
    }, py::arg("endpoint"), py::arg("circuit"), py::arg("shots"), py::arg("seed"), py::arg("latency_ms") = 0.0);

    py::class_<Hamiltonian>(m, "Hamiltonian")
        .def_property_readonly("num_qubits", &Hamiltonian::num_qubits)
        .def_property_readonly("terms", [](const Hamiltonian& h) {
            std::vector<std::pair<double, std::string>> out;
            for (const auto& t : h.terms()) out.emplace_back(t.coefficient, t.ops);
            return out;
        });
    m.def("parse_hamiltonian", [](const std::string& text) { return parse_hamiltonian(text); }, py::arg("text"));
    m.def("load_hamiltonian", &load_hamiltonian, py::arg("path"));

    m.def("expectation", [](const Hamiltonian& h, std::vector<double> theta, std::size_t layers, DeviceRegistry& reg,
                            std::uint64_t shots, const std::string& device, Seed seed) {
        ExpectationRequest req{shots, device, seed};
        py::gil_scoped_release release;
        return estimate_expectation(h, {h.num_qubits(), layers}, theta, reg, req);
    }, py::arg("hamiltonian"), py::arg("theta"), py::arg("layers"), py::arg("registry"), py::arg("shots") = 0,
       py::arg("device") = "sim", py::arg("seed") = 0);

    py::class_<VqeReport>(m, "VqeReport")
        .def_readonly("best_energy", &VqeReport::best_energy)
        .def_readonly("best_theta", &VqeReport::best_theta)
        .def_readonly("iterations", &VqeReport::iterations)
        .def_readonly("evaluations", &VqeReport::evaluations)
        .def_readonly("converged", &VqeReport::converged)
        .def_readonly("energy_trace", &VqeReport::energy_trace)
        .def_property_readonly("total_wall_time_s", [](const VqeReport& r) {
            return std::chrono::duration<double>(r.total_wall_time).count();
        });
    m.def("optimize", [](const Hamiltonian& h, DeviceRegistry& reg, std::size_t layers, std::uint64_t shots,
                         const std::string& device, Seed seed, std::size_t max_iterations, double tolerance,
                         std::vector<double> initial_theta) {
        VqeConfig cfg;
        cfg.shots = shots;
        cfg.device = device;
        cfg.seed = seed;
        cfg.max_iterations = max_iterations;
        cfg.tolerance = tolerance;
        cfg.initial_theta = std::move(initial_theta);
        py::gil_scoped_release release;
        return optimize(h, {h.num_qubits(), layers}, reg, cfg);
    }, py::arg("hamiltonian"), py::arg("registry"), py::arg("layers") = 1, py::arg("shots") = 0,
       py::arg("device") = "sim", py::arg("seed") = 0, py::arg("max_iterations") = 500, py::arg("tolerance") = 1e-10,
       py::arg("initial_theta") = std::vector<double>{});
}
