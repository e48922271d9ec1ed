"""Quench engine: ramp protocol bookkeeping, the Magnus integrator checked
against an independent scipy ODE solve, the slow-ramp Landau-Zener limit,
grid construction, and full-sweep invariants."""

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from lrkitaev import dynamics, model
from lrkitaev.dynamics import GridSpec, RampProtocol, evolve_mode, momentum_grid, run_quench
from lrkitaev.model import ChainParams

INF = math.inf


def params(alpha=INF, beta=INF):
    return ChainParams(hopping_exponent=alpha, pairing_exponent=beta)


# ---------------------------------------------------------------------------
# Ramp protocol
# ---------------------------------------------------------------------------


def test_full_ramp_endpoints():
    r = RampProtocol.full_ramp(mu_c=2.0, delta=0.1)
    assert r.mu_start == pytest.approx(4.0)
    assert r.mu_end == pytest.approx(0.0)
    assert r.mu_at(0.0) == pytest.approx(2.0)  # critical point at t = 0


def test_to_final_mu_endpoints():
    r = RampProtocol.to_final_mu(2.0, 0.05, 3.0)
    assert r.mu_start == pytest.approx(4.0)
    assert r.mu_end == pytest.approx(3.0)
    r = RampProtocol.to_final_mu(2.0, 0.05, 0.0, mu_start=10.0)
    assert r.mu_start == pytest.approx(10.0)
    assert r.mu_end == pytest.approx(0.0)


def test_ramp_validation():
    with pytest.raises(ValueError):
        RampProtocol(mu_c=2.0, delta=-0.1, t_start=0.0, t_end=1.0)
    with pytest.raises(ValueError):
        RampProtocol(mu_c=2.0, delta=0.1, t_start=1.0, t_end=1.0)
    with pytest.raises(ValueError):
        RampProtocol.to_final_mu(2.0, 0.1, 4.0)  # mu_end above mu_start


# ---------------------------------------------------------------------------
# Integrator vs an independent ODE oracle
# ---------------------------------------------------------------------------


def _ode_oracle(p, ramp, k, rtol=1e-10):
    """scipy solve_ivp on i d/dt (u,v) = (1/2)(eps sz + gap sx)(u,v)."""
    j = model.hopping_fourier(p, k)
    gap = model.pairing_fourier(p, k)

    def rhs(t, y):
        u = y[0] + 1j * y[1]
        v = y[2] + 1j * y[3]
        eps = ramp.mu_at(t) / 2.0 - j
        du = -1j * 0.5 * (eps * u + gap * v)
        dv = -1j * 0.5 * (gap * u - eps * v)
        return [du.real, du.imag, dv.real, dv.imag]

    eq = model.mode_equilibrium(p.with_mu(ramp.mu_start), k)
    y0 = [eq.u, 0.0, eq.v, 0.0]
    sol = solve_ivp(
        rhs, (ramp.t_start, ramp.t_end), y0, rtol=rtol, atol=1e-12, method="DOP853"
    )
    y = sol.y[:, -1]
    return complex(y[0], y[1]), complex(y[2], y[3])


@pytest.mark.parametrize(
    "alpha, beta, k, delta",
    [(INF, INF, 0.3, 0.05), (1.5, 2.5, 0.8, 0.2), (3.0, 1.25, 0.15, 0.1)],
)
def test_magnus_matches_scipy_oracle(alpha, beta, k, delta):
    p = params(alpha, beta)
    ramp = RampProtocol.full_ramp(2.0, delta)
    state = evolve_mode(p, ramp, k, tol=1e-11)
    u_ref, v_ref = _ode_oracle(p, ramp, k)
    # Compare the physical excitation probabilities, which are phase-free.
    end = p.with_mu(0.0)
    p_num = dynamics.excitation_probability(state, end)
    eq = model.mode_equilibrium(end, k)
    p_ref = 1.0 - abs(eq.u * np.conj(u_ref) + eq.v * np.conj(v_ref)) ** 2
    assert p_num == pytest.approx(p_ref, abs=5e-9)
    assert state.norm_error < 1e-12


def test_slow_ramp_reaches_landau_zener_limit():
    p = params()
    delta = 0.02
    k = 0.12  # transition region: p_lz ~ 0.1, endpoint corrections negligible
    ramp = RampProtocol.full_ramp(2.0, delta)
    state = evolve_mode(p, ramp, k, tol=1e-10)
    p_num = dynamics.excitation_probability(state, p.with_mu(0.0))
    p_lz = math.exp(-math.pi * math.sin(k) ** 2 / delta)
    assert p_num == pytest.approx(p_lz, rel=5e-2)


def test_adiabatic_mode_stays_near_ground_state():
    # A large-gap mode at slow ramp keeps only the O(delta^2) residual left
    # by the sudden ramp endpoints; integrator error sits far below that.
    p = params()
    ramp = RampProtocol.full_ramp(2.0, 0.01)
    state = evolve_mode(p, ramp, 1.5, tol=1e-10)
    assert dynamics.excitation_probability(state, p.with_mu(0.0)) < 1e-4


def test_tolerance_bounds_enforced():
    p = params()
    ramp = RampProtocol.full_ramp(2.0, 0.1)
    for tol in (1e-13, 1e-5):
        with pytest.raises(ValueError):
            evolve_mode(p, ramp, 0.3, tol=tol)


# ---------------------------------------------------------------------------
# Momentum grid
# ---------------------------------------------------------------------------


def test_momentum_grid_structure():
    p = params()
    ks, k_th = momentum_grid(p, 0.01)
    assert np.all(np.diff(ks) > 0)
    assert 0.0 < ks[0] < ks[-1] < math.pi
    # Threshold bisection agrees with the closed form for sin(k) pairing.
    assert k_th == pytest.approx(math.asin(math.sqrt(0.01 * math.log(2) / math.pi)), rel=1e-6)
    # The log section resolves the threshold well.
    assert int(np.sum(ks < k_th)) >= 20


def test_momentum_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(n_log=2)
    with pytest.raises(ValueError):
        GridSpec(split=4.0)


# ---------------------------------------------------------------------------
# Full quenches
# ---------------------------------------------------------------------------


def test_run_quench_basic_invariants():
    p = params()
    ramp = RampProtocol.full_ramp(2.0, 0.05)
    res = run_quench(p, ramp, tol=1e-8)
    assert res.delta == 0.05
    assert np.all((res.p >= 0.0) & (res.p <= 1.0))
    assert 0.0 < res.n_exc < 1.0
    assert res.max_norm_drift < 1e-10
    # Defect density equals the closed trapezoid quadrature of its own curve.
    area = np.trapezoid(res.p, res.k) + res.p[0] * res.k[0] + res.p[-1] * (math.pi - res.k[-1])
    assert res.n_exc == pytest.approx(area / math.pi, rel=1e-12)
    assert len(res.modes) == len(res.k)


def test_run_quench_workers_reproduce_serial():
    p = params(1.5, INF)
    ramp = RampProtocol.full_ramp(2.0, 0.1)
    serial = run_quench(p, ramp, tol=1e-8, workers=1)
    parallel = run_quench(p, ramp, tol=1e-8, workers=3)
    assert np.array_equal(serial.k, parallel.k)
    # Chunks adapt their step sequences independently, so agreement is at
    # the integration tolerance, not machine precision.
    assert np.allclose(serial.p, parallel.p, rtol=0, atol=1e-7)
    assert parallel.n_exc == pytest.approx(serial.n_exc, rel=1e-7)


def test_run_quench_defect_density_tracks_lz_quadrature():
    p = params()
    ramp = RampProtocol.full_ramp(2.0, 0.01)
    res = run_quench(p, ramp, tol=1e-8)
    gaps = np.sin(res.k)
    plz = np.exp(-math.pi * gaps**2 / 0.01)
    plz[res.k > math.pi / 2] = 0.0  # modes that never cross stay adiabatic
    ref = (np.trapezoid(plz, res.k) + plz[0] * res.k[0]) / math.pi
    assert res.n_exc == pytest.approx(ref, rel=5e-2)


def test_run_quench_under_resolved_warning():
    p = params()
    ramp = RampProtocol.full_ramp(2.0, 0.05)
    sparse = GridSpec(n_log=6, n_uniform=6)
    with pytest.warns(UserWarning, match="under-resolved"):
        res = run_quench(p, ramp, sparse, tol=1e-8)
    assert res.warnings
