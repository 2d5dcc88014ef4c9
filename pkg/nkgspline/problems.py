"""
Initial boundary value problems for the nonlinear Klein-Gordon equation

    u_tt - u_xx - eps1 u - eps2 u^3 = 0,   a <= x <= b,

with homogeneous Neumann conditions at both ends.

The exact solutions are module-level functions bound with `functools.partial`
so that problem specifications can be shipped to worker processes.
"""
import numpy as np
from functools import partial


SQRT2 = np.sqrt(2.0)


class ProblemSpec(object):
    """Coefficients, domain and data of one problem.

    `exact_u(x, t)` and `exact_ut(x, t)` are optional; without them only the
    conserved quantities can be monitored.  `initial_u(x)` and `initial_v(x)`
    default to the exact solution and its time derivative at `t = 0`.

    """

    def __init__(self, name, epsilon1, epsilon2, domain, t_end,
                 exact_u=None, exact_ut=None, initial_u=None, initial_v=None,
                 feature=None, exact_energy=None, exact_momentum=None, params=None):
        a, b = map(float, domain)
        if not a < b:
            raise ValueError(f'empty domain [{a}, {b}]')
        if not t_end > 0:
            raise ValueError(f't_end must be positive, got {t_end}')
        if (exact_u is None) != (exact_ut is None):
            raise ValueError('exact_u and exact_ut must be given together')
        if initial_u is None:
            if exact_u is None:
                raise ValueError(f'{name}: no initial data and no exact solution')
            initial_u = partial(_at_time_zero, exact_u)
        if initial_v is None:
            initial_v = _zero if exact_ut is None else partial(_at_time_zero, exact_ut)
        if feature not in (None, 'peak', 'front'):
            raise ValueError(f'unknown feature {feature!r}')
        self.name = name
        self.epsilon1 = float(epsilon1)
        self.epsilon2 = float(epsilon2)
        self.domain = (a, b)
        self.t_end = float(t_end)
        self.exact_u = exact_u
        self.exact_ut = exact_ut
        self.initial_u = initial_u
        self.initial_v = initial_v
        self.feature = feature
        self.exact_energy = exact_energy
        self.exact_momentum = exact_momentum
        self.params = dict(params or {})

    @property
    def has_exact(self):
        return self.exact_u is not None

    def __repr__(self):
        return (f'ProblemSpec({self.name!r}, eps1={self.epsilon1}, eps2={self.epsilon2}, '
                f'domain={self.domain}, t_end={self.t_end})')


def _at_time_zero(f, x):
    return f(x, 0.0)


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float))


#_______________________________________________________________________________
# Kink (tanh front) moving with velocity nu; eps1 = 1, eps2 = -1.

def _kink_k(nu):
    return 1 / np.sqrt(2 * (1 - nu**2))


def kink_u(x, t, nu):
    return np.tanh(_kink_k(nu) * (np.asarray(x) - nu * t))


def kink_ut(x, t, nu):
    k = _kink_k(nu)
    return -nu * k / np.cosh(k * (np.asarray(x) - nu * t))**2


def kink_invariants(nu, a, b):
    """Energy and momentum of the kink at t = 0 with the integrals cut to
    `[a, b]`."""
    k = _kink_k(nu)
    G = lambda x: np.tanh(k*x) - np.tanh(k*x)**3 / 3     # k * antiderivative of sech^4(kx)
    dG = G(b) - G(a)
    E = (k**2 * (1 + nu**2) + 0.5) / (2 * k) * dG - (b - a) / 4
    P = -nu * k * dG
    return float(E), float(P)


def traveling_wave(nu=0.5, domain=(-30.0, 30.0), t_end=10.0):
    "Kink `tanh((x - nu t) / sqrt(2 (1 - nu^2)))` for eps1 = 1, eps2 = -1."
    nu = float(nu)
    if not abs(nu) < 1:
        raise ValueError(f'wave speed must satisfy |nu| < 1, got nu={nu}')
    E0, P0 = kink_invariants(nu, *domain)
    return ProblemSpec(
        'traveling_wave', 1.0, -1.0, domain, t_end,
        exact_u = partial(kink_u, nu=nu),
        exact_ut = partial(kink_ut, nu=nu),
        feature = 'front',
        exact_energy = E0,
        exact_momentum = P0,
        params = {'nu': nu},
    )


#_______________________________________________________________________________
# Solitary wave of amplitude 2; eps1 = 2, eps2 = -1.

def soliton_u(x, t):
    return 2 / np.cosh(SQRT2 * (np.sinh(1) * np.asarray(x) - np.cosh(1) * t))


def soliton_ut(x, t):
    z = SQRT2 * (np.sinh(1) * np.asarray(x) - np.cosh(1) * t)
    return 2 * SQRT2 * np.cosh(1) * np.tanh(z) / np.cosh(z)


def solitary_wave(domain=(-10.0, 15.0), t_end=3.0):
    "Solitary wave `2 sech(sqrt(2) (sinh(1) x - cosh(1) t))` for eps1 = 2, eps2 = -1."
    c = 8 * SQRT2 / 3
    return ProblemSpec(
        'solitary_wave', 2.0, -1.0, domain, t_end,
        exact_u = soliton_u,
        exact_ut = soliton_ut,
        feature = 'peak',
        exact_energy = float(c * np.sinh(1)),
        exact_momentum = float(-c * np.cosh(1)),
    )


#_______________________________________________________________________________
# Custom problems

def _interp(x, xs, ys):
    return np.interp(x, xs, ys)


def tabulated(name, epsilon1, epsilon2, domain, t_end, x, u0, v0=None):
    "Problem with tabulated initial data (piecewise linear in between samples)."
    x = np.asarray(x, dtype=float)
    u0 = np.asarray(u0, dtype=float)
    if x.shape != u0.shape or x.ndim != 1 or len(x) < 2:
        raise ValueError('initial data must be two 1-d arrays of equal length')
    if np.any(np.diff(x) <= 0):
        raise ValueError('tabulated x must be strictly increasing')
    a, b = domain
    if x[0] > a or x[-1] < b:
        raise ValueError(f'tabulated data [{x[0]}, {x[-1]}] does not cover the domain [{a}, {b}]')
    initial_v = None
    if v0 is not None:
        v0 = np.asarray(v0, dtype=float)
        if v0.shape != x.shape:
            raise ValueError('v0 must have the same length as x')
        initial_v = partial(_interp, xs=x, ys=v0)
    return ProblemSpec(name, epsilon1, epsilon2, domain, t_end,
                       initial_u=partial(_interp, xs=x, ys=u0),
                       initial_v=initial_v)


def from_table(filename, name=None, epsilon1=1.0, epsilon2=-1.0, domain=None, t_end=1.0):
    "Read tabulated initial data from a CSV file with columns `x`, `u` and optionally `v`."
    import pandas as pd
    df = pd.read_csv(filename, comment='#')
    missing = {'x', 'u'} - set(df.columns)
    if missing:
        raise ValueError(f'{filename}: missing columns {sorted(missing)}')
    x = df['x'].to_numpy(dtype=float)
    if domain is None:
        domain = (x[0], x[-1])
    return tabulated(name or str(filename), epsilon1, epsilon2, domain, t_end,
                     x, df['u'].to_numpy(dtype=float),
                     df['v'].to_numpy(dtype=float) if 'v' in df.columns else None)


PROBLEMS = {
    'traveling_wave': traveling_wave,
    'solitary_wave': solitary_wave,
}


def list_problems():
    return sorted(PROBLEMS)


def get_problem(name, **params):
    "Look up a built-in problem by name; `params` go to its constructor."
    try:
        make = PROBLEMS[name]
    except KeyError:
        raise ValueError(f'unknown problem {name!r}; choose from {", ".join(list_problems())}')
    return make(**params)


def _second_difference(f, s):
    "Fourth order central second difference; `f(k)` samples at offset `k * s`."
    return (-f(2) + 16*f(1) - 30*f(0) + 16*f(-1) - f(-2)) / (12 * s**2)


def residual(spec, u_fn, x, t, step=1e-4):
    """Residual `u_tt - u_xx - eps1 u - eps2 u^3` of `u_fn(x, t)` by central
    differences."""
    x = np.asarray(x, dtype=float)
    u = u_fn(x, t)
    u_tt = _second_difference(lambda k: u_fn(x, t + k*step), step)
    u_xx = _second_difference(lambda k: u_fn(x + k*step, t), step)
    return u_tt - u_xx - spec.epsilon1 * u - spec.epsilon2 * u**3
