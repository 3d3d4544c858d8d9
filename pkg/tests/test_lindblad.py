import numpy as np
import pytest

from qfridge import lindblad as lb
from qfridge.baths import Bath, effective_temperature
from qfridge.models import Design, FridgeSpec, build_working_material, solve_fridge
from qfridge.optimize import make_baths

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SPECS = [
    FridgeSpec(Design.THREE_LEVEL, 6.0, 50.0),
    FridgeSpec(Design.TWO_QUBIT, 6.0, 50.0),
    FridgeSpec(Design.THREE_QUBIT, 6.0, 50.0, 0.7),
]


def qubit_liouvillian(omega, bath):
    return lb.assemble_liouvillian(np.diag([0.0, omega]), {bath.label: SX}, {bath.label: bath})


def test_vec_convention():
    rng = np.random.default_rng(1)
    a, rho, b = (rng.normal(size=(3, 3)) for _ in range(3))
    assert np.allclose(lb.sandwich(a, b) @ lb.vec(rho), lb.vec(a @ rho @ b))
    assert np.allclose(lb.unvec(lb.vec(rho), 3), rho)


def test_qubit_eigenoperators():
    pieces = dict(lb.eigenoperator_decomposition(np.diag([0.0, 2.0]), SX))
    assert sorted(pieces) == [-2.0, 2.0]
    assert np.allclose(pieces[2.0], [[0, 1], [0, 0]])
    assert np.allclose(pieces[-2.0], [[0, 0], [1, 0]])


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.design.value)
def test_eigenoperator_properties(spec):
    h, couplings = build_working_material(spec)
    for coupling in couplings.values():
        pieces = lb.eigenoperator_decomposition(h, coupling)
        assert np.allclose(sum(a for _, a in pieces), coupling, atol=1e-13)
        by_freq = dict(pieces)
        for w, a in pieces:
            assert np.max(np.abs(h @ a - a @ h + w * a)) < 1e-10 * max(1.0, abs(w))
            partner = next(b for v, b in by_freq.items() if abs(v + w) <= 1e-9 * max(abs(w), 1))
            assert np.allclose(partner, a.conj().T)


def test_three_qubit_cold_frequencies():
    wc, wh, g = 1.0, 3.0, 0.1
    h, couplings = build_working_material(FridgeSpec(Design.THREE_QUBIT, wc, wh, g))
    energies, vecs = np.linalg.eigh(h)
    m = vecs.conj().T @ couplings["cold"] @ vecs
    # brute force over all eigenvector pairs
    gaps = {
        round(energies[j] - energies[i], 9)
        for i in range(8)
        for j in range(8)
        if abs(m[i, j]) > 1e-12 and energies[j] > energies[i]
    }
    pieces = lb.eigenoperator_decomposition(h, couplings["cold"])
    found = sorted(round(w, 9) for w, _ in pieces if w > 0)
    assert found == sorted(gaps) == [wc - g, wc, wc + g]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.design.value)
def test_gibbs_fixed_point_and_trace(spec):
    baths = make_baths(170.0, 80.0, 30.0, 3, 1e-3)
    liouv = lb.build_liouvillian(spec, baths)
    n = liouv.dim
    assert lb.trace_preservation_error(liouv.total, n) < 1e-10
    for label, block in liouv.blocks.items():
        gibbs = lb.gibbs_state(liouv.h_wm, baths[label].temperature)
        assert np.max(np.abs(block @ lb.vec(gibbs))) < 1e-9 * np.max(np.abs(block))


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.design.value)
def test_equilibrium(spec):
    baths = make_baths(30.0, 30.0, 30.0, 2, 1e-3)
    sol = solve_fridge(spec, baths)
    gibbs = lb.gibbs_state(sol.liouvillian.h_wm, 30.0)
    assert np.allclose(sol.rho, gibbs, atol=1e-12)
    for q in sol.currents.values():
        assert abs(q) < 1e-10
    assert abs(lb.entropy_production(sol.currents, {k: 30.0 for k in sol.currents})) < 1e-10


def test_thermal_qubit_steady_state():
    bath = Bath("hot", 2.0, 3, 1e-2)
    rho = lb.steady_state(qubit_liouvillian(1.5, bath))
    p = np.array([1.0, np.exp(-1.5 / 2.0)])
    assert np.allclose(np.diag(rho).real, p / p.sum(), atol=1e-13)


@pytest.mark.parametrize("r", [0.3, 1.0, 2.0])
def test_squeezed_qubit_effective_temperature(r):
    bath = Bath("work", 5.0, 3, 1e-3, r)
    omega = 4.0
    rho = lb.steady_state(qubit_liouvillian(omega, bath))
    t_eff = effective_temperature(omega, bath)
    p = np.array([1.0, np.exp(-omega / t_eff)])
    assert np.allclose(rho, np.diag(p / p.sum()), atol=1e-9)


def test_unsqueezed_work_block_is_thermal():
    h, couplings = build_working_material(SPECS[0])
    b = Bath("work", 170.0, 3, 1e-3)
    thermal = lb.dissipator(lb.bath_channels(h, couplings["work"], b), 3)
    chans = lb.bath_channels(h, couplings["work"], b)
    squeezed = sum(lb.squeezing_superoperator(c.op, 0.0) for c in chans) + thermal
    assert np.max(np.abs(squeezed - thermal)) == 0.0
    tiny = lb.dissipator(lb.bath_channels(h, couplings["work"], b.with_squeezing(1e-14)), 3)
    assert np.max(np.abs(tiny - thermal)) <= 1e-12 * np.max(np.abs(thermal))


@pytest.mark.parametrize("r", [0.0, 0.5, 2.0])
@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.design.value)
def test_complete_positivity(spec, r):
    baths = make_baths(170.0, 80.0, 30.0, 3, 1e-3, squeezing=r)
    liouv = lb.build_liouvillian(spec, baths)
    assert lb.kossakowski_positive(liouv.channels)
    for block in liouv.blocks.values():
        assert lb.conditionally_completely_positive(block, liouv.dim)


def test_positivity_probe_detects_violation():
    h, couplings = build_working_material(SPECS[0])
    b = Bath("work", 170.0, 3, 1e-3, 1.0)
    chans = lb.bath_channels(h, couplings["work"], b)
    # blow up the cross rate past the square root of the rate product
    bad = [lb.JumpChannel(c.bath, c.omega, c.op, c.rate, 10 * c.cross_rate) for c in chans]
    assert not lb.kossakowski_positive(bad)
    assert not lb.conditionally_completely_positive(lb.dissipator(bad, 3), 3)


def test_three_level_chiller_and_laws(fig4_baths):
    sol = solve_fridge(SPECS[0], fig4_baths)
    q = sol.currents
    assert q["cold"] > 0 and q["work"] > 0 and q["hot"] < 0
    assert abs(sum(q.values())) <= 1e-9 * max(abs(v) for v in q.values())
    temps = {"work": 170.0, "hot": 80.0, "cold": 30.0}
    assert lb.entropy_production(q, temps) > 0


def test_entropy_production_vanishes_at_edge(fig4_baths):
    temps = {"work": 170.0, "hot": 80.0, "cold": 30.0}
    wcmax = 2700 / 11200 * 50
    sigmas = []
    for delta in (1e-1, 1e-2, 1e-3):
        sol = solve_fridge(FridgeSpec(Design.THREE_LEVEL, wcmax * (1 - delta), 50.0), fig4_baths)
        sigmas.append(lb.entropy_production(sol.currents, temps))
    assert sigmas[0] > sigmas[1] > sigmas[2] > 0
    assert sigmas[2] < 1e-3 * sigmas[0]


def test_degenerate_kernel_detected():
    # two decoupled qubits: each sees only one bath, so the kernel is 2-d
    h = np.diag([0.0, 1.0, 2.0, 3.0])
    c = np.zeros((4, 4), complex)
    c[0, 1] = c[1, 0] = 1.0
    liouv = lb.assemble_liouvillian(h, {"hot": c}, {"hot": Bath("hot", 1.0)})
    with pytest.raises(lb.DegenerateKernel):
        lb.steady_state(liouv)


def test_heat_current_requires_steady_state(fig4_baths):
    liouv = lb.build_liouvillian(SPECS[0], fig4_baths)
    with pytest.raises(lb.NotSteady):
        lb.heat_current(liouv, "cold", np.eye(3) / 3)


def test_pauli_route_matches_dense(fig4_baths):
    rates = np.zeros((3, 3))
    liouv = lb.build_liouvillian(SPECS[0], fig4_baths)
    rho = lb.steady_state(liouv)
    # populations-only generator pulled out of the dense one
    idx = [0, 4, 8]
    for j, a in enumerate(idx):
        for i, b in enumerate(idx):
            if i != j:
                rates[j, i] = liouv.total[a, b].real
    assert np.allclose(lb.pauli_steady_state(rates), np.diag(rho).real, atol=1e-13)
