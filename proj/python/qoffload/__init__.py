"""Quantum task offloading runtime.

Build circuits, simulate them, transpile to OpenQASM 2.0 or QIR, offload jobs
to local or remote devices, and run a variational quantum eigensolver.
"""

from ._qoffload import (
    Circuit,
    DeviceRegistry,
    Gate,
    GateKind,
    Hamiltonian,
    Histogram,
    JobHandle,
    JobResult,
    QOffloadError,
    Server,
    VqeReport,
    bell_circuit,
    client_submit,
    emit_qasm,
    emit_qir,
    expectation,
    ghz3_circuit,
    load_hamiltonian,
    optimize,
    parse_hamiltonian,
    parse_qasm,
    ping,
    probabilities,
    serve,
    simulate,
    statevector,
)

__all__ = [
    "Circuit",
    "DeviceRegistry",
    "Gate",
    "GateKind",
    "Hamiltonian",
    "Histogram",
    "JobHandle",
    "JobResult",
    "QOffloadError",
    "Server",
    "VqeReport",
    "bell_circuit",
    "client_submit",
    "emit_qasm",
    "emit_qir",
    "expectation",
    "ghz3_circuit",
    "load_hamiltonian",
    "optimize",
    "parse_hamiltonian",
    "parse_qasm",
    "ping",
    "probabilities",
    "serve",
    "simulate",
    "statevector",
]
