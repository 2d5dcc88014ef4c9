"""
Search for the extension parameter that minimizes the final-time maximum
error.

The default search evaluates a coarse grid over `[lambda_min, lambda_max]`
and then a fine grid around the coarse minimizer; `exhaustive=True` sweeps
the whole interval at the fine step.  `lambda = 0` is always on the grid so
the classical cubic B-spline result is reported alongside the optimum.
"""
import numpy as np
import pandas as pd
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor

from nkgspline.linalg import SingularMatrixError
from nkgspline.timestepper import run, SolverError, ConfigurationError
from nkgspline.diagnostics import LinfObserver
from nkgspline.iterview import iterview


class ScanError(RuntimeError):
    pass


ScanPoint = namedtuple('ScanPoint', 'lam linf status')


class ScanConfig(object):

    def __init__(self, lambda_min=-1.0, lambda_max=1.0, coarse_step=0.001,
                 refine_step=0.0001, refine_radius=0.01, exhaustive=False, workers=1):
        if not lambda_min < lambda_max:
            raise ValueError(f'empty lambda range [{lambda_min}, {lambda_max}]')
        if not 0 < refine_step <= coarse_step:
            raise ValueError(f'need 0 < refine_step <= coarse_step, got '
                             f'refine_step={refine_step}, coarse_step={coarse_step}')
        if refine_radius < 0:
            raise ValueError(f'refine_radius must be nonnegative, got {refine_radius}')
        if int(workers) < 1:
            raise ValueError(f'workers must be at least 1, got {workers}')
        self.lambda_min = float(lambda_min)
        self.lambda_max = float(lambda_max)
        self.coarse_step = float(coarse_step)
        self.refine_step = float(refine_step)
        self.refine_radius = float(refine_radius)
        self.exhaustive = bool(exhaustive)
        self.workers = int(workers)

    def __repr__(self):
        return (f'ScanConfig([{self.lambda_min}, {self.lambda_max}], coarse={self.coarse_step}, '
                f'refine={self.refine_step}+-{self.refine_radius}, exhaustive={self.exhaustive})')


class ScanResult(object):

    def __init__(self, best_lambda, best_linf, curve):
        self.best_lambda = best_lambda
        self.best_linf = best_linf
        self.curve = curve

    def __iter__(self):
        return iter((self.best_lambda, self.best_linf, self.curve))

    def linf_at(self, lam):
        for p in self.curve:
            if p.lam == lam:
                return p.linf
        raise KeyError(lam)

    def to_frame(self):
        return pd.DataFrame(self.curve, columns=['lambda', 'linf', 'status'])

    def to_csv(self, header=''):
        return header + self.to_frame().to_csv(index=False, float_format='%.5e')

    def __repr__(self):
        return f'ScanResult(best_lambda={self.best_lambda:g}, best_linf={self.best_linf:g}, points={len(self.curve)})'


def lambda_grid(lo, hi, step, include=(0.0,)):
    """Multiples of `step` in `[lo, hi]`, plus the points of `include` that lie
    in range.  Values are rounded to 12 decimals so that grids of different
    spacing share their common points exactly.

    >>> lambda_grid(-0.25, 0.2, 0.1)
    [-0.2, -0.1, 0.0, 0.1, 0.2]

    """
    if not step > 0:
        raise ValueError(f'grid step must be positive, got {step}')
    kmin = int(np.ceil(lo / step - 1e-9))
    kmax = int(np.floor(hi / step + 1e-9))
    grid = {float(np.round(k * step, 12)) for k in range(kmin, kmax + 1)}
    grid.update(float(x) for x in include if lo <= x <= hi)
    return sorted(x + 0.0 for x in grid)


def run_lambda(spec, cfg_template, dt, t_end, lam, pivoting=True):
    "Final-time L-infinity error of one run at extension parameter `lam`."
    cfg = cfg_template.with_lambda(lam)
    try:
        report = run(spec, cfg, dt, t_end, observers=[LinfObserver()], pivoting=pivoting)
    except (SolverError, SingularMatrixError, ConfigurationError):
        return ScanPoint(lam, float('nan'), 'singular')
    linf = report.final_linf
    if not np.isfinite(linf):
        return ScanPoint(lam, float('nan'), 'diverged')
    return ScanPoint(lam, linf, 'ok')


def _evaluate(args):
    return run_lambda(*args)


def _best(points):
    ok = [p for p in points if p.status == 'ok']
    if not ok:
        return None
    return min(ok, key=lambda p: (p.linf, abs(p.lam)))


class Scanner(object):
    "Evaluates lambdas once each, serially or on a process pool."

    def __init__(self, spec, cfg_template, dt, t_end, scan_cfg, pivoting=True, progress=False):
        if not spec.has_exact:
            raise ValueError(f'{spec.name}: a lambda scan needs an exact solution')
        self.spec = spec
        self.cfg_template = cfg_template
        self.dt = dt
        self.t_end = t_end
        self.scan_cfg = scan_cfg
        self.pivoting = pivoting
        self.progress = progress
        self.cache = {}

    def evaluate(self, lams, msg='scan'):
        todo = [lam for lam in lams if lam not in self.cache]
        jobs = [(self.spec, self.cfg_template, self.dt, self.t_end, lam, self.pivoting) for lam in todo]
        if self.scan_cfg.workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=self.scan_cfg.workers) as pool:
                results = pool.map(_evaluate, jobs, chunksize=max(1, len(jobs) // (4 * self.scan_cfg.workers)))
                for p in iterview(results, msg=msg, length=len(jobs), show=self.progress):
                    self.cache[p.lam] = p
        else:
            for job in iterview(jobs, msg=msg, show=self.progress):
                p = _evaluate(job)
                self.cache[p.lam] = p
        return [self.cache[lam] for lam in lams]

    def curve(self):
        return [self.cache[lam] for lam in sorted(self.cache)]


def scan(spec, cfg_template, dt, t_end=None, scan_cfg=None, pivoting=True, progress=False):
    """Find the lambda minimizing the final-time L-infinity error.

    Returns a `ScanResult`; ties go to the lambda of smallest magnitude.
    Runs that fail are kept in the curve with their status and skipped by the
    minimization.

    """
    scan_cfg = ScanConfig() if scan_cfg is None else scan_cfg
    t_end = spec.t_end if t_end is None else t_end
    lo, hi = scan_cfg.lambda_min, scan_cfg.lambda_max
    s = Scanner(spec, cfg_template, dt, t_end, scan_cfg, pivoting=pivoting, progress=progress)

    if scan_cfg.exhaustive:
        s.evaluate(lambda_grid(lo, hi, scan_cfg.refine_step), msg='sweep')
    else:
        coarse = _best(s.evaluate(lambda_grid(lo, hi, scan_cfg.coarse_step), msg='coarse'))
        if coarse is not None:
            r = scan_cfg.refine_radius
            fine = lambda_grid(max(lo, coarse.lam - r), min(hi, coarse.lam + r),
                               scan_cfg.refine_step, include=(0.0, coarse.lam))
            s.evaluate(fine, msg='refine')

    curve = s.curve()
    best = _best(curve)
    if best is None:
        raise ScanError(f'{spec.name}: every run of the lambda scan failed '
                        f'({len(curve)} values in [{lo}, {hi}])')
    return ScanResult(best.lam, best.linf, curve)
