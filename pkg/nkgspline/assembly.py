"""
Collocation system of one Crank-Nicolson step, `A x^{n+1} = B x^n`.

Unknowns are interleaved, `x = (delta_0, phi_0, delta_1, phi_1, ..., delta_N,
phi_N)`, so that both matrices have three sub- and three super-diagonals.  The
ghost coefficients `delta_{-1}, phi_{-1}, delta_{N+1}, phi_{N+1}` are
eliminated with the Neumann relations `delta_{-1} = delta_1`,
`delta_{N+1} = delta_{N-1}` (same for phi) by folding their columns onto the
columns of indices 1 and N-1.
"""
import numpy as np
from collections import namedtuple


StepCoefficients = namedtuple('StepCoefficients', 'w1 w2 w3 w4 w5 w6 w7 w8 K')


class BandedMatrix(object):
    """Square matrix with `kl` sub- and `ku` super-diagonals.

    Storage follows the LAPACK/`scipy.linalg.solve_banded` convention:
    `ab[ku + i - j, j] = A[i, j]`.

    """

    def __init__(self, n, kl=3, ku=3, ab=None):
        self.n = int(n)
        self.kl = int(kl)
        self.ku = int(ku)
        if ab is None:
            ab = np.zeros((self.kl + self.ku + 1, self.n))
        else:
            ab = np.asarray(ab, dtype=float)
            assert ab.shape == (self.kl + self.ku + 1, self.n), ab.shape
        self.ab = ab

    @property
    def shape(self):
        return (self.n, self.n)

    def in_band(self, i, j):
        return -self.kl <= j - i <= self.ku

    def __getitem__(self, ij):
        i, j = ij
        if not self.in_band(i, j):
            return 0.0
        return self.ab[self.ku + i - j, j]

    def __setitem__(self, ij, value):
        i, j = ij
        if not self.in_band(i, j):
            raise IndexError(f'entry ({i}, {j}) is outside of the band ({self.kl}, {self.ku})')
        self.ab[self.ku + i - j, j] = value

    def add(self, rows, cols, values):
        "Accumulate `values` into entries `(rows, cols)`; repeated entries are summed."
        rows = np.asarray(rows); cols = np.asarray(cols)
        d = cols - rows
        if np.any(d < -self.kl) or np.any(d > self.ku):
            raise IndexError('entries outside of the band')
        np.add.at(self.ab, (self.ku + rows - cols, cols), values)

    def matvec(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f'vector of length {x.shape} does not match dimension {self.n}')
        y = np.zeros(self.n)
        n = self.n
        for k in range(self.kl + self.ku + 1):
            off = self.ku - k            # column minus row of this diagonal
            if off >= 0:
                y[:n-off] += self.ab[k, off:] * x[off:]
            else:
                y[-off:] += self.ab[k, :n+off] * x[:n+off]
        return y

    def todense(self):
        A = np.zeros((self.n, self.n))
        for k in range(self.kl + self.ku + 1):
            off = self.ku - k
            j = np.arange(max(off, 0), min(self.n, self.n + off))
            A[j - off, j] = self.ab[k, j]
        return A

    @classmethod
    def from_dense(cls, A, kl, ku):
        A = np.asarray(A, dtype=float)
        n, m = A.shape
        assert n == m, A.shape
        M = cls(n, kl, ku)
        i, j = np.nonzero(A)
        if np.any(j - i < -kl) or np.any(j - i > ku):
            raise ValueError(f'matrix has entries outside of the band ({kl}, {ku})')
        M.ab[ku + i - j, j] = A[i, j]
        return M

    def copy(self):
        return BandedMatrix(self.n, self.kl, self.ku, self.ab.copy())

    def __repr__(self):
        return f'BandedMatrix(n={self.n}, kl={self.kl}, ku={self.ku})'


def compute_row_coefficients(consts, delta_prev, dt, eps1, eps2):
    """Coefficients `w1..w8` of the collocation rows at the nodes whose previous
    coefficients are `delta_prev = (delta_{m-1}, delta_m, delta_{m+1})`.

    Each member of the triplet may be a scalar or an array over the rows.

    """
    if not dt > 0:
        raise ValueError(f'time step must be positive, got dt={dt}')
    a1, a2, g1, g2 = consts.alpha1, consts.alpha2, consts.gamma1, consts.gamma2
    left, mid, right = (np.asarray(d, dtype=float) for d in delta_prev)
    K = a1 * left + a2 * mid + a1 * right
    KK = K * K
    implicit = -3 * eps2 * KK - eps1
    explicit = eps1 - eps2 * KK
    return StepCoefficients(
        w1 = implicit * a1 - g1,
        w2 = (2 / dt) * a1,
        w3 = implicit * a2 - g2,
        w4 = (2 / dt) * a2,
        w5 = explicit * a1 + g1,
        w6 = explicit * a2 + g2,
        w7 = -a1,
        w8 = -a2,
        K = K,
    )


def _fold(j, N):
    "Column index of spline `j` after eliminating the ghosts."
    j = np.where(j == -1, 1, j)
    return np.where(j == N + 1, N - 1, j)


def _stencil(coefs, lhs):
    """Six (column offset, delta/phi, weight) entries of the even and odd rows
    of the left (`lhs=True`) or right hand side matrix."""
    c = coefs
    if lhs:
        even = {(-1, 0): c.w1, (-1, 1): c.w2, (0, 0): c.w3, (0, 1): c.w4, (1, 0): c.w1, (1, 1): c.w2}
        odd = {(-1, 0): c.w2, (-1, 1): c.w7, (0, 0): c.w4, (0, 1): c.w8, (1, 0): c.w2, (1, 1): c.w7}
    else:
        even = {(-1, 0): c.w5, (-1, 1): c.w2, (0, 0): c.w6, (0, 1): c.w4, (1, 0): c.w5, (1, 1): c.w2}
        odd = {(-1, 0): c.w2, (-1, 1): -c.w7, (0, 0): c.w4, (0, 1): -c.w8, (1, 0): c.w2, (1, 1): -c.w7}
    return even, odd


def _fill(coefs, N, lhs):
    n = 2 * (N + 1)
    M = BandedMatrix(n, 3, 3)
    m = np.arange(N + 1)
    even, odd = _stencil(coefs, lhs)
    for parity, entries in ((0, even), (1, odd)):
        rows = 2 * m + parity
        for (dj, var), w in entries.items():
            cols = 2 * _fold(m + dj, N) + var
            M.add(rows, cols, np.broadcast_to(w, m.shape))
    return M


def _padded(state):
    delta = np.asarray(state.delta, dtype=float)
    phi = np.asarray(state.phi, dtype=float)
    if delta.ndim != 1 or delta.shape != phi.shape:
        raise ValueError(f'delta and phi must be 1-d of equal length, got {delta.shape} and {phi.shape}')
    if len(delta) < 6:
        raise ValueError(f'need coefficients for at least 4 nodes plus ghosts, got {len(delta)}')
    return delta, phi


def assemble_matrices(consts, state_prev, dt, eps1, eps2):
    "Both sides `A`, `B` of the step, ghosts eliminated."
    delta, _ = _padded(state_prev)
    N = len(delta) - 3
    coefs = compute_row_coefficients(consts, (delta[:-2], delta[1:-1], delta[2:]), dt, eps1, eps2)
    return _fill(coefs, N, lhs=True), _fill(coefs, N, lhs=False)


def interleave(delta, phi):
    "Interior coefficients (indices 0..N) in the solver's ordering."
    x = np.empty(2 * (len(delta) - 2))
    x[0::2] = delta[1:-1]
    x[1::2] = phi[1:-1]
    return x


def assemble_system(consts, state_prev, dt, eps1, eps2):
    "Matrix `A` and right hand side `B x^n` of the step from `state_prev`."
    delta, phi = _padded(state_prev)
    A, B = assemble_matrices(consts, state_prev, dt, eps1, eps2)
    return A, B.matvec(interleave(delta, phi))
