import numpy as np
import pytest
from functools import partial
from numpy.testing import assert_allclose

from nkgspline.basis import BasisConfig, nodal_constants, reconstruct
from nkgspline.problems import ProblemSpec, traveling_wave, solitary_wave
from nkgspline.timestepper import (initialize, step, run,
                                   n_steps, SolverError)
from nkgspline.diagnostics import linf_error, nodal_values, LinfObserver


def standing_u(x, t):
    return np.cos(x) * np.cos(np.sqrt(2) * t)


def standing_ut(x, t):
    return -np.sqrt(2) * np.cos(x) * np.sin(np.sqrt(2) * t)


def standing_wave():
    "Linear problem u_tt - u_xx + u = 0 on [0, pi] with u = cos x cos(sqrt(2) t)."
    return ProblemSpec('standing_wave', -1.0, 0.0, (0.0, np.pi), 1.0,
                       exact_u=standing_u, exact_ut=standing_ut)


def constant(c, x):
    return np.full_like(np.asarray(x, dtype=float), c)


def test_initialize_interpolates():
    for lam in [-1, 0, 0.5]:
        spec = solitary_wave()
        cfg = BasisConfig.from_spacing(lam, -10, 15, 0.05)
        state = initialize(spec, cfg)
        U, _, V = nodal_values(state)
        x = cfg.nodes
        assert np.abs(U - spec.exact_u(x, 0)).max() < 1e-12
        assert np.abs(V - spec.exact_ut(x, 0)).max() < 1e-12
        assert state.check_boundary()
        assert linf_error(state, spec) < 1e-12
        # Neumann ends of the interpolant
        slope = reconstruct(cfg, state.delta, [cfg.a, cfg.b], order=1)
        assert np.abs(slope).max() < 1e-9


def test_initialize_constant():
    cfg = BasisConfig(0.4, 0.0, 1.0, 11)
    spec = ProblemSpec('const', 1.0, 0.0, (0, 1), 1.0, initial_u=partial(constant, 3.0))
    state = initialize(spec, cfg)
    assert_allclose(state.delta, 3.0, rtol=1e-13)
    assert np.all(state.phi == 0)


def test_kink_center():
    spec = traveling_wave()
    cfg = BasisConfig.from_spacing(0.0, -30, 30, 0.2)
    state = initialize(spec, cfg)
    U, _, _ = nodal_values(state)
    assert abs(U[150]) < 1e-12       # node x = 0


def test_zero_is_a_fixed_point():
    cfg = BasisConfig(0.0, 0.0, 1.0, 21)
    spec = ProblemSpec('zero', 1.0, -1.0, (0, 1), 1.0, initial_u=partial(constant, 0.0))
    state = initialize(spec, cfg)
    for _ in range(100):
        state = step(state, 0.01, spec)
    assert np.all(state.delta == 0) and np.all(state.phi == 0)
    assert state.step == 100 and abs(state.time - 1.0) < 1e-12


def test_constant_data_one_step():
    # u_tt = u with constant data; one Crank-Nicolson step of the first order system
    c, dt = 2.0, 0.1
    cfg = BasisConfig(0.3, 0.0, 1.0, 11)
    spec = ProblemSpec('const', 1.0, 0.0, (0, 1), 1.0, initial_u=partial(constant, c))
    state = step(initialize(spec, cfg), dt, spec)
    U, _, V = nodal_values(state)
    r = dt**2 / 4
    assert_allclose(U, c * (1 + r) / (1 - r), rtol=1e-12)
    assert_allclose(V, dt / 2 * (U + c), rtol=1e-12)
    assert abs(U[5] - c * np.cosh(dt)) < 10 * c * dt**3


def test_boundary_relations_hold():
    spec = solitary_wave()
    cfg = BasisConfig.from_spacing(0.1, -10, 15, 0.25)
    state = initialize(spec, cfg)
    for _ in range(10):
        state = step(state, 0.05, spec)
        assert state.check_boundary()


def test_pivot_free_matches():
    spec = traveling_wave()
    cfg = BasisConfig.from_spacing(0.0, -30, 30, 0.5)
    a = run(spec, cfg, 0.1, 2.0, observers=[LinfObserver()])
    b = run(spec, cfg, 0.1, 2.0, observers=[LinfObserver()], pivoting=False)
    assert_allclose(a.final_state.delta, b.final_state.delta, rtol=1e-9, atol=1e-12)


def test_run_counts_steps():
    spec = traveling_wave()
    cfg = BasisConfig.from_spacing(0.0, -30, 30, 1.0)
    report = run(spec, cfg, 0.05, 10.0)
    assert report.final_state.step == 200
    assert abs(report.linf_history[-1][0] - 10) < 1e-9

    spec = solitary_wave()
    cfg = BasisConfig.from_spacing(0.0, -10, 15, 0.25)
    report = run(spec, cfg, 0.05, 3.0, sample_times=[1, 2, 3])
    assert_allclose([t for t, _ in report.linf_history], [1, 2, 3], rtol=1e-12)
    assert report.E0 is not None and report.P0 is not None


def test_run_argument_errors():
    spec = solitary_wave()
    cfg = BasisConfig.from_spacing(0.0, -10, 15, 0.25)
    with pytest.raises(ValueError):
        run(spec, cfg, 0.07, 3.0)
    with pytest.raises(ValueError):
        run(spec, cfg, 0.05, 3.0, sample_times=[1.01])
    with pytest.raises(ValueError):
        run(spec, cfg, 0.05, 1.0, sample_times=[2.0])
    with pytest.raises(ValueError):
        step(initialize(spec, cfg), 0.0, spec)
    assert n_steps(10, 0.05) == 200
    assert n_steps(3, 0.001) == 3000


def test_singular_step_reports_time():
    # eps1 tuned so that the delta_0 entry of the first row vanishes
    cfg = BasisConfig(0.0, 0.0, 4.0, 5)           # h = 1
    c = nodal_constants(cfg)
    eps1 = -c.gamma2 / c.alpha2                   # w3 = -eps1 a2 - gamma2 = 0
    spec = ProblemSpec('tuned', eps1, 0.0, (0, 4), 1.0, initial_u=np.cos)
    state = initialize(spec, cfg)
    with pytest.raises(SolverError) as e:
        step(state, 1.0, spec, pivoting=False)
    assert e.value.step == 1 and e.value.time == 1.0


def test_linear_convergence_in_time():
    spec = standing_wave()
    cfg = BasisConfig(0.0, 0.0, np.pi, 401)
    errs = []
    for dt in [0.2, 0.1, 0.05, 0.025]:
        errs.append(run(spec, cfg, dt, 1.0).final_linf)
    ratios = np.array(errs[:-1]) / np.array(errs[1:])
    assert np.all((3.3 <= ratios) & (ratios <= 4.7)), (errs, ratios)
    print('[temporal order]', ratios)


if __name__ == '__main__':
    test_initialize_interpolates()
    test_initialize_constant()
    test_kink_center()
    test_zero_is_a_fixed_point()
    test_constant_data_one_step()
    test_boundary_relations_hold()
    test_pivot_free_matches()
    test_run_counts_steps()
    test_run_argument_errors()
    test_singular_step_reports_time()
    test_linear_convergence_in_time()
