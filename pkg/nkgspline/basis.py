"""
Extended cubic B-splines on a uniform partition.

The spline `H_i` is a piecewise quartic supported on `[x_{i-2}, x_{i+2}]`
which depends on a real extension parameter `lam`; `lam = 0` gives back the
classical cubic B-spline.  Nodes are numbered `x_0 = a, ..., x_N = b` and the
spline indices run over `-1, ..., N+1`.

>>> cfg = BasisConfig(0.0, 0.0, 4.0, 5)
>>> c = nodal_constants(cfg)
>>> round(c.alpha1, 12), round(c.alpha2, 12), c.gamma1, c.gamma2, c.deriv_weight
(0.166666666667, 0.666666666667, 1.0, -2.0, 0.5)

"""
import numpy as np
from collections import namedtuple
from numpy.polynomial import polynomial as P


DEFAULT_BOUNDS = (-1.0, 1.0)


NodalConstants = namedtuple('NodalConstants', 'alpha1 alpha2 gamma1 gamma2 deriv_weight')


class BasisConfig(object):
    """Uniform partition of `[a, b]` with `n_nodes` nodes and extension
    parameter `lam`.

    `bounds` is the admissible range for `lam`; it is a configurable sanity
    check rather than a mathematical constraint.

    """

    def __init__(self, lam, a, b, n_nodes, bounds=DEFAULT_BOUNDS):
        a = float(a); b = float(b); lam = float(lam)
        n_nodes = int(n_nodes)
        if not a < b:
            raise ValueError(f'empty domain [{a}, {b}]')
        if n_nodes < 5:
            raise ValueError(f'need at least 5 nodes, got {n_nodes}')
        lo, hi = bounds
        if not lo <= lam <= hi:
            raise ValueError(f'lambda={lam} outside of the admissible range [{lo}, {hi}]')
        self.lam = lam
        self.a = a
        self.b = b
        self.n_nodes = n_nodes
        self.bounds = (float(lo), float(hi))
        self.h = (b - a) / (n_nodes - 1)

    @classmethod
    def from_spacing(cls, lam, a, b, h, bounds=DEFAULT_BOUNDS):
        "Build the partition with spacing `h`, which must divide `b - a`."
        if h <= 0:
            raise ValueError(f'mesh spacing must be positive, got h={h}')
        n = (b - a) / h
        N = int(round(n))
        if N < 1 or abs(N - n) > 1e-9 * n:
            raise ValueError(f'h={h} does not divide [{a}, {b}] into an integer number of intervals')
        return cls(lam, a, b, N + 1, bounds=bounds)

    def with_lambda(self, lam, bounds=None):
        return BasisConfig(lam, self.a, self.b, self.n_nodes,
                           bounds=self.bounds if bounds is None else bounds)

    @property
    def N(self):
        "Number of intervals."
        return self.n_nodes - 1

    @property
    def nodes(self):
        return np.linspace(self.a, self.b, self.n_nodes)

    def knot(self, k):
        "Position of knot `x_k`; `k` may lie outside of `0..N`."
        return self.a + k * self.h

    def __eq__(self, other):
        return (isinstance(other, BasisConfig)
                and (self.lam, self.a, self.b, self.n_nodes, self.bounds)
                == (other.lam, other.a, other.b, other.n_nodes, other.bounds))

    def __hash__(self):
        return hash((self.lam, self.a, self.b, self.n_nodes, self.bounds))

    def __repr__(self):
        return (f'BasisConfig(lam={self.lam!r}, a={self.a!r}, b={self.b!r}, '
                f'n_nodes={self.n_nodes}, h={self.h!r})')


def nodal_constants(cfg):
    "Weights of the value, first and second derivative of a spline sum at a node."
    lam = cfg.lam
    h = cfg.h
    return NodalConstants(
        alpha1 = (4 - lam) / 24,
        alpha2 = (8 + lam) / 12,
        gamma1 = (2 + lam) / (2 * h**2),
        gamma2 = -(4 + 2*lam) / (2 * h**2),
        deriv_weight = 1 / (2 * h),
    )


def pieces(lam):
    """Coefficients (ascending powers of the local coordinate `r`, in units of
    `h`) of the four polynomial pieces of `H_i`, and the offset of the knot
    each local coordinate is measured from, relative to `i`.

    Pieces one and two measure `r` from the left end of their interval, pieces
    three and four from the right end, so that all of them are written
    around `x_{i-2}, x_{i-1}, x_{i+1}, x_{i+2}` respectively.

    """
    return [
        (np.array([0, 0, 0, 4*(1 - lam), 3*lam]) / 24, -2),
        (np.array([4 - lam, 12, 6*(2 + lam), -12, -3*lam]) / 24, -1),
        (np.array([4 - lam, -12, 6*(2 + lam), 12, -3*lam]) / 24, +1),
        (np.array([0, 0, 0, 4*(lam - 1), 3*lam]) / 24, +2),
    ]


def evaluate(cfg, i, x, order=0):
    """Value (`order=0`) or derivative (`order=1, 2`) of `H_i` at `x`.

    Intervals are closed on the left, `[x_k, x_{k+1})`, which settles which
    piece is used at a knot.  Accepts scalars or arrays for `x`.

    """
    if order not in (0, 1, 2):
        raise ValueError(f'order must be 0, 1 or 2, got {order!r}')
    if int(i) != i or not -1 <= i <= cfg.N + 1:
        raise ValueError(f'spline index {i} outside of -1..{cfg.N + 1}')
    i = int(i)

    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    s = (x - cfg.a) / cfg.h            # position in units of h, knot k at s = k
    k = np.floor(s)
    which = k - (i - 2)                # 0..3 inside the support

    out = np.zeros_like(s)
    for p, (coef, offset) in enumerate(pieces(cfg.lam)):
        mask = (which == p)
        if not mask.any():
            continue
        if order:
            coef = P.polyder(coef, order)
        r = s[mask] - (i + offset)
        out[mask] = P.polyval(r, coef)

    if order:
        out /= cfg.h**order
    return float(out[0]) if scalar else out


def basis_matrix(cfg, x, order=0):
    "Matrix `M[p, i+1] = H_i^{(order)}(x[p])` over all spline indices `-1..N+1`."
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return np.column_stack([evaluate(cfg, i, x, order) for i in range(-1, cfg.N + 2)])


def reconstruct(cfg, coef, x, order=0):
    "Evaluate the spline sum with coefficients `coef` (indexed -1..N+1) at `x`."
    coef = np.asarray(coef, dtype=float)
    if coef.shape != (cfg.N + 3,):
        raise ValueError(f'expected {cfg.N + 3} coefficients, got shape {coef.shape}')
    return basis_matrix(cfg, x, order) @ coef


def nodal_reconstruct(consts, coef):
    """Values, first and second derivatives of the spline sum at the nodes,
    from the nodal constants (three-point stencils on `coef`)."""
    c = np.asarray(coef, dtype=float)
    left, mid, right = c[:-2], c[1:-1], c[2:]
    W = consts.alpha1 * left + consts.alpha2 * mid + consts.alpha1 * right
    dW = consts.deriv_weight * (right - left)
    ddW = consts.gamma1 * left + consts.gamma2 * mid + consts.gamma1 * right
    return W, dW, ddW


if __name__ == '__main__':
    import doctest
    doctest.testmod()
