"""
Initial coefficients and Crank-Nicolson time stepping of the collocation
system.

The second order equation is integrated as the first order system
`u_t = v`, `v_t = u_xx + eps1 u + eps2 u^3`, with `U = sum delta_i H_i` and
`V = sum phi_i H_i`.  The cubic term is linearized around the previous time
level, so every step costs exactly one banded solve.
"""
import numpy as np
import scipy.linalg as la

from nkgspline.basis import nodal_constants, nodal_reconstruct
from nkgspline.assembly import assemble_system
from nkgspline.linalg import factorize, SingularMatrixError
from nkgspline.diagnostics import DiagnosticsReport, default_observers
from nkgspline.iterview import iterview


class ConfigurationError(ValueError):
    pass


class SolverError(RuntimeError):
    def __init__(self, msg, time=None, step=None):
        super(SolverError, self).__init__(msg)
        self.time = time
        self.step = step


class CoefficientState(object):
    """Spline coefficients `delta` (for U) and `phi` (for V), indexed
    `-1..N+1` (array position `i + 1`), at time level `step`.

    The ghost coefficients satisfy `delta_{-1} = delta_1`,
    `delta_{N+1} = delta_{N-1}`, and the same for `phi`.

    """

    def __init__(self, delta, phi, time, cfg, step=0):
        self.delta = np.asarray(delta, dtype=float)
        self.phi = np.asarray(phi, dtype=float)
        if self.delta.shape != (cfg.N + 3,) or self.phi.shape != (cfg.N + 3,):
            raise ValueError(f'expected {cfg.N + 3} coefficients, got '
                             f'{self.delta.shape} and {self.phi.shape}')
        self.time = float(time)
        self.cfg = cfg
        self.step = int(step)

    @classmethod
    def from_interior(cls, delta, phi, time, cfg, step=0):
        "Attach the ghost coefficients to interior coefficients `0..N`."
        return cls(with_ghosts(delta), with_ghosts(phi), time, cfg, step)

    def check_boundary(self):
        d, p = self.delta, self.phi
        return (d[0] == d[2] and d[-1] == d[-3] and p[0] == p[2] and p[-1] == p[-3])

    def nodal(self):
        "U, U_x and V at the nodes."
        consts = nodal_constants(self.cfg)
        U, Ux, _ = nodal_reconstruct(consts, self.delta)
        V, _, _ = nodal_reconstruct(consts, self.phi)
        return U, Ux, V

    def copy(self):
        return CoefficientState(self.delta.copy(), self.phi.copy(), self.time, self.cfg, self.step)

    def __repr__(self):
        return f'CoefficientState(t={self.time:g}, step={self.step}, N={self.cfg.N})'


def with_ghosts(c):
    c = np.asarray(c, dtype=float)
    return np.concatenate([[c[1]], c, [c[-2]]])


def interpolate(cfg, values):
    """Coefficients (indexed -1..N+1) of the spline that interpolates `values`
    at the nodes and has zero slope at both ends."""
    consts = nodal_constants(cfg)
    a1, a2 = consts.alpha1, consts.alpha2
    n = cfg.n_nodes
    ab = np.empty((3, n))
    ab[0, :] = a1          # super-diagonal (ab[0, 0] unused)
    ab[1, :] = a2
    ab[2, :] = a1          # sub-diagonal (ab[2, -1] unused)
    ab[0, 1] = 2 * a1      # delta_{-1} = delta_1 folded into row 0
    ab[2, n - 2] = 2 * a1  # delta_{N+1} = delta_{N-1} folded into row N
    try:
        c = la.solve_banded((1, 1), ab, np.asarray(values, dtype=float))
    except la.LinAlgError as e:
        raise ConfigurationError(f'singular interpolation system for lambda={cfg.lam}') from e
    if not np.all(np.isfinite(c)):
        raise ConfigurationError(f'singular interpolation system for lambda={cfg.lam}')
    return with_ghosts(c)


def initialize(spec, cfg):
    "Coefficients at t = 0 interpolating the initial data of `spec`."
    x = cfg.nodes
    f = np.broadcast_to(spec.initial_u(x), x.shape)
    g = np.broadcast_to(spec.initial_v(x), x.shape)
    return CoefficientState(interpolate(cfg, f), interpolate(cfg, g), 0.0, cfg)


def _advance(state, dt, spec, consts, pivoting):
    A, rhs = assemble_system(consts, state, dt, spec.epsilon1, spec.epsilon2)
    step = state.step + 1
    try:
        x = factorize(A, pivoting=pivoting).solve(rhs)
    except SingularMatrixError as e:
        raise SolverError(f'{spec.name}: singular system at step {step} '
                          f'(t={step * dt:g}, row {e.row})', time=step * dt, step=step) from e
    new = CoefficientState.from_interior(x[0::2], x[1::2], step * dt, state.cfg, step)
    assert new.check_boundary()
    return new


def step(state, dt, spec, cfg=None, pivoting=True):
    "Advance `state` by one time step `dt`."
    if not dt > 0:
        raise ValueError(f'time step must be positive, got dt={dt}')
    cfg = state.cfg if cfg is None else cfg
    return _advance(state, dt, spec, nodal_constants(cfg), pivoting)


def n_steps(t, dt, what='t_end'):
    "Number of steps of size `dt` to reach `t`; `t` must lie on the step grid."
    if not dt > 0:
        raise ValueError(f'time step must be positive, got dt={dt}')
    n = int(round(t / dt))
    if n < 0 or abs(n * dt - t) > 1e-9 * max(abs(t), dt):
        raise ValueError(f'{what}={t} is not an integer multiple of dt={dt}')
    return n


def run(spec, cfg, dt, t_end=None, observers=None, sample_times=None,
        pivoting=True, progress=False):
    """Integrate `spec` from t = 0 to `t_end` and collect diagnostics.

    `observers` are called as `observer(report, state, spec)` at every sample
    time (default: only `t_end`).  Energy and momentum at t = 0 are recorded
    before the first step.

    """
    t_end = spec.t_end if t_end is None else t_end
    total = n_steps(t_end, dt)
    if sample_times is None:
        sample_times = [t_end]
    samples = sorted({n_steps(t, dt, 'sample time') for t in sample_times})
    if samples and samples[-1] > total:
        raise ValueError(f'sample time {samples[-1] * dt:g} beyond t_end={t_end}')
    if observers is None:
        observers = default_observers(spec)

    report = DiagnosticsReport(
        problem = spec.name,
        h = cfg.h,
        dt = dt,
        lam = cfg.lam,
        t_end = t_end,
        pivoting = pivoting,
        **spec.params
    )

    consts = nodal_constants(cfg)
    state = initialize(spec, cfg)
    report.start(state, spec)
    pending = list(samples)

    def observe(state):
        while pending and pending[0] == state.step:
            pending.pop(0)
            for obs in observers:
                obs(report, state, spec)

    observe(state)
    for _ in iterview(range(total), msg=spec.name, show=progress):
        state = _advance(state, dt, spec, consts, pivoting)
        observe(state)

    report.final_state = state
    return report
