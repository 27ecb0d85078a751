"""Smoke tests for the Python bindings."""

import math

import numpy as np
import pytest

import zsq

TAU = 0.9 * math.pi
REF = None


def make_ref():
    return zsq.ProtocolParams(tau_bar=TAU, g_bar=1.0, dp_bar=0.4)


def test_reference_point_scalars():
    sc = zsq.compute_scalars(make_ref())
    assert abs(sc.M * sc.M * sc.beta - 1.0) < 1e-12
    assert abs(sc.G * sc.beta - sc.c**2) < 1e-12


def test_branch_and_target():
    br = zsq.resolve_branch(make_ref())
    assert abs(abs(br.zeta) - 0.542004309996338) < 1e-12
    assert abs(br.Lambda) < 1.0
    target = zsq.target_state(make_ref())
    assert math.isclose(math.tanh(target.r), abs(br.zeta), rel_tol=1e-12)
    assert math.isclose(
        target.mean_quanta, math.sinh(target.r) ** 2, rel_tol=1e-12
    )


def test_no_distillation_raises():
    with pytest.raises(zsq.NoDistillation):
        zsq.resolve_branch(zsq.ProtocolParams(math.pi, 1.0, 1.0))
    with pytest.raises(zsq.NoDistillation):
        zsq.distillation_rate(zsq.ProtocolParams(1.3, 0.0, 0.7))


def test_invalid_params_raise():
    with pytest.raises(ValueError):
        zsq.ProtocolParams(-1.0, 1.0, 1.0)


def test_spectrum_is_geometric():
    gammas = zsq.spectrum(make_ref(), 5)
    br = zsq.resolve_branch(make_ref())
    for lo, hi in zip(gammas, gammas[1:]):
        assert abs(hi / lo - br.Lambda) < 1e-12
        assert abs(hi) < abs(lo) < 1.0


def test_projected_operator_matrix():
    v = zsq.build_projected_operator(make_ref(), 40)
    assert isinstance(v, np.ndarray)
    assert v.shape == (40, 40)
    assert v.dtype == np.complex128
    ev = np.linalg.eigvals(v)
    lead = ev[np.argmax(np.abs(ev))]
    assert abs(lead - zsq.spectrum(make_ref(), 0)[0]) < 1e-6


def test_states_and_fidelity():
    dim = 48
    target = zsq.target_state(make_ref())
    xi = zsq.squeezed_vacuum(target, dim)
    assert abs(np.linalg.norm(xi.amplitudes) - 1.0) < 1e-10
    vac = zsq.projector(zsq.coherent_state(0.0, dim))
    assert math.isclose(
        zsq.fidelity(vac, xi), 1.0 / math.cosh(target.r), rel_tol=1e-9
    )


def test_run_trace():
    dim = 48
    rho0 = zsq.projector(zsq.coherent_state(1.0, dim))
    trace = zsq.run(make_ref(), rho0, 10, dim)
    assert len(trace.rows) == 11
    cum = 1.0
    for row in trace.rows[1:]:
        cum *= row.step_prob
        assert math.isclose(row.cum_prob, cum, rel_tol=1e-12)
    assert trace.rows[-1].fidelity is not None
    assert trace.rows[-1].fidelity > 0.95


def test_quadrature_route_matches():
    v = zsq.build_projected_operator(make_ref(), 40)
    quad = zsq.momentum_quadrature_operator(make_ref(), 40, 200)
    assert np.abs(quad.v - v).max() < 1e-8


def test_verify_quick_passes():
    report = zsq.verify("quick")
    assert report["passed"] is True
    names = {c["name"] for c in report["checks"]}
    assert "quadrature_vs_closed_form" in names
