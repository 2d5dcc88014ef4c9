"""
Direct solution of banded systems.

The default factorization is LAPACK's banded LU with partial pivoting
(`?gbtrf` / `?gbtrs`).  Row interchanges can push the upper bandwidth of `U`
to `kl + ku`, so the factors live in `2 kl + ku + 1` rows of band storage.

`pivoting=False` runs a plain banded Doolittle elimination instead, i.e., the
pivot-free Thomas-type sweep for six-banded systems.  It fails on a zero pivot
rather than silently producing garbage.
"""
import numpy as np
import scipy.linalg as la
from scipy.linalg.lapack import dgbtrf, dgbtrs

from nkgspline.assembly import BandedMatrix


PIVOT_TOL = 1e-14


class SingularMatrixError(la.LinAlgError):
    def __init__(self, row, pivot=0.0):
        self.row = row
        self.pivot = pivot
        super(SingularMatrixError, self).__init__(
            f'singular matrix: pivot {pivot:g} in row {row}')


class BandedFactorization(object):
    """LU factors of a `BandedMatrix`.

    The factorization is immutable once built; `solve` never touches the
    caller's right hand side, so one factorization can serve several solves.

    """

    def __init__(self, A, pivoting=True):
        if not isinstance(A, BandedMatrix):
            raise TypeError(f'expected a BandedMatrix, got {type(A).__name__}')
        self.n = A.n
        self.kl = A.kl
        self.ku = A.ku
        self.pivoting = pivoting
        scale = np.abs(A.ab).max() if A.ab.size else 0.0
        self.tol = PIVOT_TOL * scale
        if scale == 0:
            raise SingularMatrixError(0, 0.0)
        if pivoting:
            self._factor_lapack(A)
        else:
            self._factor_nopivot(A)

    def _factor_lapack(self, A):
        kl, ku, n = self.kl, self.ku, self.n
        ab = np.zeros((2*kl + ku + 1, n))
        ab[kl:, :] = A.ab
        lu, piv, info = dgbtrf(ab, kl, ku)
        if info < 0:
            raise ValueError(f'illegal argument {-info} to dgbtrf')
        diag = lu[kl + ku, :]
        if info > 0:
            raise SingularMatrixError(info - 1, 0.0)
        small = np.flatnonzero(np.abs(diag) < self.tol)
        if len(small):
            raise SingularMatrixError(int(small[0]), float(diag[small[0]]))
        self.lu = lu
        self.piv = piv

    def _factor_nopivot(self, A):
        # In-place elimination on the band; no fill since rows never swap.
        kl, ku, n = self.kl, self.ku, self.n
        ab = A.ab.copy()
        for k in range(n):
            pivot = ab[ku, k]
            if abs(pivot) < self.tol:
                raise SingularMatrixError(k, float(pivot))
            imax = min(k + kl, n - 1)
            jmax = min(k + ku, n - 1)
            cols = np.arange(k + 1, jmax + 1)
            for i in range(k + 1, imax + 1):
                l = ab[ku + i - k, k] / pivot
                ab[ku + i - k, k] = l
                ab[ku + i - cols, cols] -= l * ab[ku + k - cols, cols]
        self.lu = ab

    def solve(self, rhs):
        rhs = np.asarray(rhs, dtype=float)
        if rhs.shape != (self.n,):
            raise ValueError(f'right hand side of shape {rhs.shape} does not match dimension {self.n}')
        if self.pivoting:
            x, info = dgbtrs(self.lu, self.kl, self.ku, rhs, self.piv)
            if info != 0:
                raise ValueError(f'illegal argument {-info} to dgbtrs')
            return x
        return self._solve_nopivot(rhs)

    def _solve_nopivot(self, rhs):
        kl, ku, n, ab = self.kl, self.ku, self.n, self.lu
        y = rhs.copy()
        for i in range(1, n):
            j = np.arange(max(0, i - kl), i)
            y[i] -= ab[ku + i - j, j] @ y[j]
        x = y
        for i in range(n - 1, -1, -1):
            j = np.arange(i + 1, min(n, i + ku + 1))
            x[i] = (x[i] - ab[ku + i - j, j] @ x[j]) / ab[ku, i]
        return x

    def __repr__(self):
        return f'BandedFactorization(n={self.n}, kl={self.kl}, ku={self.ku}, pivoting={self.pivoting})'


def factorize(A, pivoting=True):
    return BandedFactorization(A, pivoting=pivoting)


def solve(f, rhs):
    return f.solve(rhs)


def dense_solve(A, rhs):
    "Oracle: dense LU with partial pivoting."
    if isinstance(A, BandedMatrix):
        A = A.todense()
    return la.lu_solve(la.lu_factor(A), rhs)
