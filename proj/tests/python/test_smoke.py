import math
import os
import pathlib

import pytest

import qoffload as q

GOLDEN = pathlib.Path(os.environ.get("QOFFLOAD_GOLDEN_DIR", pathlib.Path(__file__).parent.parent / "golden"))


def test_bell_histogram():
    h = q.simulate(q.bell_circuit(), 1000, 7)
    assert h.shots == 1000
    assert h[1] == 0 and h[2] == 0
    assert h[0] + h[3] == 1000
    assert q.simulate(q.bell_circuit(), 1000, 7) == h


def test_circuit_building_and_statevector():
    c = q.Circuit(2)
    c.apply(q.Gate.make(q.GateKind.h, [0])).apply(q.Gate.make(q.GateKind.cx, [0, 1]))
    amps = q.statevector(c)
    assert abs(amps[0] - 1 / math.sqrt(2)) < 1e-12
    assert abs(amps[3] - 1 / math.sqrt(2)) < 1e-12
    assert q.probabilities(c)[1] == 0.0
    c.measure()
    assert c == q.bell_circuit()
    assert c.measured


def test_transpile():
    assert q.emit_qasm(q.bell_circuit()) == (GOLDEN / "bell.qasm").read_text()
    assert q.emit_qir(q.bell_circuit()) == (GOLDEN / "bell.ll").read_text()
    assert q.parse_qasm(q.emit_qasm(q.ghz3_circuit())) == q.ghz3_circuit()


def test_parse_error_is_positioned():
    with pytest.raises(q.QOffloadError) as info:
        q.parse_qasm((GOLDEN / "bad.qasm").read_text())
    assert info.value.code == "parse"
    assert (info.value.line, info.value.column) == (6, 9)


def test_gate_validation():
    with pytest.raises(q.QOffloadError):
        q.Gate.make(q.GateKind.cx, [1, 1])
    with pytest.raises(q.QOffloadError):
        q.Circuit(2).apply(q.Gate.make(q.GateKind.x, [2]))


def test_registry_sync_and_async():
    reg = q.DeviceRegistry()
    reg.register_simulator("sim")
    assert "sim" in reg
    sync = reg.submit_sync("sim", q.bell_circuit(), 500, 3)
    handle = reg.submit_async("sim", q.bell_circuit(), 500, 3)
    assert handle.wait().histogram == sync.histogram
    assert handle.status == "Done"
    with pytest.raises(q.QOffloadError):
        reg.submit_sync("nope", q.bell_circuit(), 10, 1)


def test_remote_round_trip():
    server = q.serve()
    try:
        assert q.ping(server.endpoint)
        remote = q.client_submit(server.endpoint, q.bell_circuit(), 1000, 7)
        assert remote.histogram == q.simulate(q.bell_circuit(), 1000, 7)
        reg = q.DeviceRegistry()
        reg.register_remote("qpu", server.endpoint)
        assert reg.submit_sync("qpu", q.bell_circuit(), 1000, 7).histogram == remote.histogram
    finally:
        server.stop()


def test_vqe_exact():
    h = q.load_hamiltonian(str(GOLDEN / "h2min.txt"))
    assert h.terms == [(-1.0, "ZZ"), (0.5, "XI"), (0.5, "IX")]
    reg = q.DeviceRegistry()
    reg.register_simulator("sim")
    report = q.optimize(h, reg, layers=2, initial_theta=[0.1, -0.2, 0.3, 0.1])
    assert abs(report.best_energy + math.sqrt(2)) < 1e-4
    assert report.iterations == len(report.energy_trace)
    assert abs(q.expectation(h, report.best_theta, 2, reg) - report.best_energy) < 1e-9
