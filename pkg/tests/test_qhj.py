import numpy as np
import pytest

from susylab.errors import DegenerateInputError, PairingError
from susylab.eigensolve import Eigenpair, Spectrum, refine_richardson, solve_spectrum
from susylab.grids import Grid, SampledFn, normalize, sample
from susylab.potentials import Oscillator, partner_potentials
from susylab.qhj import (
    DegeneratePair,
    QmfSample,
    apply_intertwiner,
    gozzi_check,
    intertwining_check,
    pair_spectra,
    partner_relation_residual,
    product_identity_residual,
    qmf_from_wavefunction,
    riccati_residual,
)


def hermite_state(n: int, grid: Grid) -> SampledFn:
    """Closed-form oscillator bound state H_n(x) exp(-x^2/2), unit norm."""
    from susylab.polynomials import hermite

    return normalize(SampledFn(grid, hermite(n)(grid.x) * np.exp(-grid.x**2 / 2)))


@pytest.fixture(scope="module")
def oscillator_pairing():
    """Solved oscillator pair battery inputs on the refined grid."""
    s = Oscillator(2.0)
    g = Grid.full_line(-12.0, 12.0, 2001)
    spec_m = refine_richardson(lambda gr: partner_potentials(s, gr).v_minus, g, 4,
                               potential_id="V-")
    spec_p = refine_richardson(lambda gr: partner_potentials(s, gr).v_plus, g, 3,
                               potential_id="V+")
    pair = partner_potentials(s, spec_m.grid)
    return spec_m, spec_p, pair


def test_qmf_of_gaussian_is_minus_x():
    g = Grid.full_line(-6.0, 6.0, 8001)
    q = qmf_from_wavefunction(sample(g, lambda x: np.exp(-(x**2) / 2)))
    assert np.abs(q.q[q.mask] - (-g.x[q.mask])).max() <= 1e-4


def test_qmf_of_first_excited_state():
    g = Grid.full_line(-6.0, 6.0, 4001)
    q = qmf_from_wavefunction(sample(g, lambda x: x * np.exp(-(x**2) / 2)))
    center = g.n_points // 2  # node at x = 0
    assert not q.mask[center - 1] and not q.mask[center + 1]
    sel = q.mask & (np.abs(g.x) > 0.2) & (np.abs(g.x) < 4.0)
    exact = 1.0 / g.x[sel] - g.x[sel]
    assert np.abs(q.q[sel] - exact).max() <= 1e-3


def test_qmf_of_constant_is_zero():
    g = Grid.full_line(0.0, 1.0, 101)
    q = qmf_from_wavefunction(sample(g, lambda x: np.ones_like(x)))
    assert q.mask.all()
    assert np.abs(q.q).max() == 0.0


def test_qmf_rejects_zero_and_too_narrow_signals():
    g = Grid.full_line(0.0, 1.0, 101)
    with pytest.raises(DegenerateInputError):
        qmf_from_wavefunction(SampledFn(g, np.zeros(101)))
    wide = Grid.full_line(-60.0, 60.0, 4001)
    with pytest.raises(DegenerateInputError):
        qmf_from_wavefunction(sample(wide, lambda x: np.exp(-(x**2) / 2)))


def test_riccati_residual_analytic_gaussian():
    # q = -x solves q^2 + q' + E - V = 0 for V = x^2 at E = 1.
    g = Grid.full_line(-5.0, 5.0, 2001)
    q = QmfSample(grid=g, q=-g.x, mask=np.ones(g.n_points, dtype=bool))
    v = sample(g, lambda x: x**2)
    assert riccati_residual(q, 1.0, v) <= 1e-6


def test_riccati_residual_zero_configuration():
    g = Grid.full_line(0.0, 1.0, 101)
    q = QmfSample(grid=g, q=np.zeros(101), mask=np.ones(101, dtype=bool))
    assert riccati_residual(q, 0.0, sample(g, np.zeros_like)) == 0.0


def test_riccati_residual_solved_ground_state():
    g = Grid.full_line(-12.0, 12.0, 4001)
    pair = partner_potentials(Oscillator(2.0), g)
    spec = solve_spectrum(pair.v_minus, 1)
    q = qmf_from_wavefunction(spec.eigenpairs[0].wavefunction)
    assert riccati_residual(q, spec.energies[0], pair.v_minus) <= 1e-3


def test_intertwiner_annihilates_ground_state():
    g = Grid.full_line(-10.0, 10.0, 4001)
    pair = partner_potentials(Oscillator(2.0), g)
    psi0 = normalize(sample(g, lambda x: np.exp(-(x**2) / 2)))
    out = apply_intertwiner(pair.w, psi0, "A")
    assert np.abs(out.values).max() <= 1e-4


def test_intertwiner_composition_is_hamiltonian():
    # A_dagger(A f) must reproduce -f'' + V- f at second order in h.
    s = Oscillator(2.0)

    def composition_error(n, first, then, v):
        g = Grid.full_line(-9.0, 9.0, n)
        pair = partner_potentials(s, g)
        f = sample(g, lambda x: (x + 0.3) * np.exp(-(x**2) / 2))
        lhs = apply_intertwiner(pair.w, apply_intertwiner(pair.w, f, first), then)
        # f = (x+a) e^(-x^2/2) has f'' = (x^3 + a x^2 - 3x - a) e^(-x^2/2).
        fpp = (g.x**3 + 0.3 * g.x**2 - 3.0 * g.x - 0.3) * np.exp(-(g.x**2) / 2)
        rhs = -fpp + v(pair).values * f.values
        return np.abs(lhs.values[2:-2] - rhs[2:-2]).max()

    for first, then, v in (
        ("A", "A_dagger", lambda p: p.v_minus),
        ("A_dagger", "A", lambda p: p.v_plus),
    ):
        e1 = composition_error(1001, first, then, v)
        e2 = composition_error(2001, first, then, v)
        assert e1 / e2 == pytest.approx(4.0, rel=0.25)


def test_intertwiner_with_zero_superpotential_is_derivative():
    g = Grid.full_line(-2.0, 2.0, 401)
    w = sample(g, np.zeros_like)
    f = sample(g, lambda x: np.sin(x))
    from susylab.grids import derivative

    assert np.array_equal(apply_intertwiner(w, f, "A").values, derivative(f).values)


def test_intertwining_check_solver_pair(oscillator_pairing):
    spec_m, spec_p, pair = oscillator_pairing
    res = intertwining_check(pair.w, spec_m.eigenpairs[1], spec_p.eigenpairs[0])
    assert res["CDE"] == pytest.approx(1.0, abs=1e-3)
    assert res["cos_similarity_A"] >= 1.0 - 1e-6
    assert res["cos_similarity_Adag"] >= 1.0 - 1e-6


def test_intertwining_check_analytic_states_fine_grid():
    # Closed-form pair on a 10x-refined grid: C*D*E = 1 to 1e-8.
    g = Grid.full_line(-7.0, 7.0, 140001)
    pair = partner_potentials(Oscillator(2.0), g)
    psi = Eigenpair(1, 2.0, hermite_state(1, g), 1, 0.0)
    chi = Eigenpair(0, 2.0, hermite_state(0, g), 0, 0.0)
    res = intertwining_check(pair.w, psi, chi)
    assert res["CDE"] == pytest.approx(1.0, abs=1e-8)


def test_intertwining_check_flags_mismatched_pair(oscillator_pairing):
    spec_m, spec_p, pair = oscillator_pairing
    res = intertwining_check(pair.w, spec_m.eigenpairs[1], spec_p.eigenpairs[1])
    assert res["cos_similarity_A"] < 0.99


def test_intertwining_check_rejects_zero_energy(oscillator_pairing):
    spec_m, spec_p, pair = oscillator_pairing
    with pytest.raises(PairingError):
        intertwining_check(pair.w, spec_m.eigenpairs[0], spec_p.eigenpairs[0])


def test_partner_relation_solver_pair(oscillator_pairing):
    spec_m, spec_p, pair = oscillator_pairing
    q = qmf_from_wavefunction(spec_m.eigenpairs[1].wavefunction)
    k = qmf_from_wavefunction(spec_p.eigenpairs[0].wavefunction)
    assert partner_relation_residual(q, k, pair.w, pair.w_prime) <= 1e-3


def test_partner_relation_closed_form():
    # q = 1/x - x, k = -x, W = x at E = 2: the relation collapses exactly.
    g = Grid.full_line(-7.0, 7.0, 20001)
    x = g.x
    with np.errstate(divide="ignore"):
        qv = 1.0 / x - x
        qp = -1.0 / x**2 - 1.0
    mask = np.abs(x) > 0.05
    q = QmfSample(grid=g, q=np.where(mask, qv, 0.0), mask=mask,
                  q_prime=np.where(mask, qp, 0.0))
    k = QmfSample(grid=g, q=-x, mask=np.ones_like(mask), q_prime=-np.ones_like(x))
    w = SampledFn(g, x)
    wp = SampledFn(g, np.ones_like(x))
    assert partner_relation_residual(q, k, w, wp) <= 1e-10


def test_partner_relation_forced_zero():
    g = Grid.full_line(0.0, 1.0, 101)
    ones = np.ones(101, dtype=bool)
    q = QmfSample(grid=g, q=np.zeros(101), mask=ones)
    k = QmfSample(grid=g, q=np.zeros(101), mask=ones)
    w = SampledFn(g, np.ones(101))
    assert partner_relation_residual(q, k, w) == 0.0


def test_product_identity_closed_form():
    g = Grid.full_line(-7.0, 7.0, 20001)
    x = g.x
    with np.errstate(divide="ignore"):
        qv = 1.0 / x - x
    mask = np.abs(x) > 0.05
    q = QmfSample(grid=g, q=np.where(mask, qv, 0.0), mask=mask, q_prime=np.zeros_like(x))
    k = QmfSample(grid=g, q=-x, mask=np.ones_like(mask), q_prime=np.zeros_like(x))
    w = SampledFn(g, x)
    assert product_identity_residual(q, k, w, 2.0) <= 1e-12


def test_product_identity_solver_pair(oscillator_pairing):
    spec_m, spec_p, pair = oscillator_pairing
    q = qmf_from_wavefunction(spec_m.eigenpairs[2].wavefunction)
    k = qmf_from_wavefunction(spec_p.eigenpairs[1].wavefunction)
    e = spec_m.eigenpairs[2].energy
    assert product_identity_residual(q, k, pair.w, e) <= 5e-3 * max(1.0, e)


def _fake_spectrum(energies, nodes, potential_id):
    g = Grid.full_line(0.0, 1.0, 5)
    wf = SampledFn(g, np.array([0.0, 0.5, 1.0, 0.5, 0.0]))
    pairs = tuple(
        Eigenpair(index=i, energy=float(e), wavefunction=wf, node_count=nodes[i],
                  residual=0.0)
        for i, e in enumerate(energies)
    )
    return Spectrum(eigenpairs=pairs, grid=g, potential_id=potential_id)


def test_pair_spectra_unbroken_offset_matching():
    sm = _fake_spectrum([0.0, 2.0, 4.0, 6.0, 8.0], [0, 1, 2, 3, 4], "V-")
    sp = _fake_spectrum([2.0, 4.0, 6.0, 8.0], [0, 1, 2, 3], "V+")
    pairs = pair_spectra(sm, sp, "unbroken", 1e-4)
    assert len(pairs) == 4
    assert [(p.n_minus, p.n_plus) for p in pairs] == [(1, 0), (2, 1), (3, 2), (4, 3)]
    assert all(abs(p.delta_e) <= 1e-4 for p in pairs)
    assert all(p.node_diff == 1 for p in pairs)


def test_pair_spectra_broken_aligned_matching():
    sm = _fake_spectrum([8.0, 12.0], [0, 1], "V1")
    sp = _fake_spectrum([8.0, 12.0], [0, 1], "V2")
    pairs = pair_spectra(sm, sp, "broken", 1e-3)
    assert [(p.n_minus, p.n_plus) for p in pairs] == [(0, 0), (1, 1)]
    assert all(p.node_diff == 0 for p in pairs)


def test_pair_spectra_rejects_nonzero_ground_state_in_unbroken_phase():
    sm = _fake_spectrum([0.5, 2.0], [0, 1], "V-")
    sp = _fake_spectrum([2.0], [0], "V+")
    with pytest.raises(PairingError):
        pair_spectra(sm, sp, "unbroken", 1e-4)


def test_pair_spectra_reports_offending_levels():
    sm = _fake_spectrum([0.0, 2.0], [0, 1], "V-")
    sp = _fake_spectrum([2.7], [0], "V+")
    with pytest.raises(PairingError, match="0.7"):
        pair_spectra(sm, sp, "unbroken", 1e-4)


def test_gozzi_check_verdicts():
    def mk(node_minus, node_plus):
        return DegeneratePair(1, 0, 2.0, 2.0, 0.0, node_minus, node_plus,
                              node_minus - node_plus)

    good = gozzi_check([mk(1, 0), mk(2, 1)], "unbroken")
    assert good.verdict and good.expected_node_diff == 1
    broken = gozzi_check([mk(2, 2)], "broken")
    assert broken.verdict and broken.expected_node_diff == 0
    bad = gozzi_check([mk(2, 0)], "unbroken")
    assert not bad.verdict
    assert bad.diagnostics["node_diffs"] == [2]
