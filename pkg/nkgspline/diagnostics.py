"""
Error norms, conserved quantities and wave-feature tracking.

With `U`, `U_x`, `V` reconstructed at the nodes, the energy and momentum are

    E = 1/2 int V^2 + U_x^2 - eps1 U^2 - eps2 U^4 / 2 dx,
    P = int U_x V dx,

integrated over the problem interval with composite Simpson weights.
"""
import json
import numpy as np
import pandas as pd

from nkgspline.basis import nodal_constants, nodal_reconstruct
from nkgspline.fsutils import manifest_header, write_text


class MissingExactSolution(NotImplementedError):
    pass


def nodal_values(state):
    "U, U_x and V at the nodes of `state`."
    consts = nodal_constants(state.cfg)
    U, Ux, _ = nodal_reconstruct(consts, state.delta)
    V, _, _ = nodal_reconstruct(consts, state.phi)
    return U, Ux, V


def simpson_weights(n, h):
    """Composite Simpson weights for `n` equally spaced samples; an odd number of
    intervals closes with one trapezoid panel.

    >>> simpson_weights(5, 3.0)
    array([1., 4., 2., 4., 1.])
    >>> simpson_weights(4, 2.0)
    array([0.66666667, 2.66666667, 1.66666667, 1.        ])

    """
    if n < 2:
        raise ValueError(f'need at least two samples, got {n}')
    w = np.zeros(n)
    m = n - 1 if (n - 1) % 2 else n       # samples covered by Simpson panels
    if m >= 3:
        w[0:m-2:2] += 1
        w[1:m-1:2] += 4
        w[2:m:2] += 1
        w *= h / 3
    if m != n:
        w[-2] += h / 2
        w[-1] += h / 2
    return w


def simpson(values, h):
    values = np.asarray(values, dtype=float)
    return float(simpson_weights(len(values), h) @ values)


def linf_error(state, spec):
    "Maximum nodal error against the exact solution."
    if not spec.has_exact:
        raise MissingExactSolution(f'{spec.name} has no exact solution')
    U, _, _ = nodal_values(state)
    return float(np.max(np.abs(spec.exact_u(state.cfg.nodes, state.time) - U)))


def energy(state, spec, cfg=None):
    cfg = state.cfg if cfg is None else cfg
    U, Ux, V = nodal_values(state)
    U2 = U * U
    integrand = 0.5 * (V*V + Ux*Ux - spec.epsilon1 * U2 - 0.5 * spec.epsilon2 * U2*U2)
    return simpson(integrand, cfg.h)


def momentum(state, spec, cfg=None):
    cfg = state.cfg if cfg is None else cfg
    _, Ux, V = nodal_values(state)
    return simpson(Ux * V, cfg.h)


def relative_change(current, initial):
    """Absolute relative change `|current - initial| / |initial|`.

    >>> relative_change(5.0, 5.0)
    0.0
    >>> relative_change(-9.0, -10.0)
    0.1

    """
    if initial == 0:
        raise ZeroDivisionError('relative change from an initial value of zero')
    return abs(current - initial) / abs(initial)


def feature_position(state, spec):
    """Position of the wave feature of `spec`: the peak of a solitary wave
    (vertex of the parabola through the discrete maximum and its neighbours)
    or the zero crossing of a kink front."""
    U, _, _ = nodal_values(state)
    x = state.cfg.nodes
    h = state.cfg.h
    if spec.feature == 'peak':
        i = int(np.argmax(U))
        if 0 < i < len(U) - 1:
            denom = U[i-1] - 2*U[i] + U[i+1]
            if denom != 0:
                return float(x[i] + 0.5 * h * (U[i-1] - U[i+1]) / denom)
        return float(x[i])
    if spec.feature == 'front':
        s = np.sign(U)
        [idx] = np.nonzero(s[:-1] * s[1:] <= 0)
        if not len(idx):
            return float('nan')
        i = int(idx[0])
        if U[i] == U[i+1]:
            return float(x[i])
        return float(x[i] - U[i] * h / (U[i+1] - U[i]))
    raise ValueError(f'{spec.name} has no trackable feature')


def average_speed(position_history):
    "Least-squares slope of feature position against time."
    if len(position_history) < 2:
        raise ValueError('need at least two positions to estimate a speed')
    t, x = np.array(position_history, dtype=float).T
    return float(np.polyfit(t, x, 1)[0])


def snapshot(state, spec):
    "Per-node table of the numerical and exact solution at `state.time`."
    U, _, V = nodal_values(state)
    x = state.cfg.nodes
    if spec.has_exact:
        exact = spec.exact_u(x, state.time)
        err = np.abs(exact - U)
    else:
        exact = err = np.full_like(x, np.nan)
    return pd.DataFrame({'x': x, 'U': U, 'V': V, 'exact': exact, 'error': err})


class DiagnosticsReport(object):
    """Histories of `(time, value)` pairs collected during a run.

    Every history is strictly increasing in time; recording a time twice keeps
    the first value.

    """

    def __init__(self, **metadata):
        self.metadata = metadata
        self.linf_history = []
        self.energy_history = []
        self.momentum_history = []
        self.position_history = []
        self.snapshots = {}
        self.E0 = None
        self.P0 = None
        self.final_state = None

    def start(self, state, spec):
        "Record the initial energy and momentum."
        self.E0 = energy(state, spec)
        self.P0 = momentum(state, spec)

    def record(self, what, time, value):
        hist = getattr(self, f'{what}_history')
        if hist:
            last = hist[-1][0]
            if time == last:
                return
            if time < last:
                raise ValueError(f'{what} history must increase in time: {time} after {last}')
        hist.append((float(time), float(value)))

    def _change(self, value, initial):
        try:
            return relative_change(value, initial), False
        except ZeroDivisionError:
            return abs(value - initial), True

    @property
    def relative_changes(self):
        "`(C(E), C(P))` at the last recorded time."
        if not self.energy_history or not self.momentum_history:
            return (float('nan'), float('nan'))
        CE, _ = self._change(self.energy_history[-1][1], self.E0)
        CP, _ = self._change(self.momentum_history[-1][1], self.P0)
        return (CE, CP)

    @property
    def absolute_fallback(self):
        "Whether C(E), C(P) are absolute changes because E0 or P0 vanished."
        return {'E': self.E0 == 0, 'P': self.P0 == 0}

    @property
    def final_linf(self):
        return self.linf_history[-1][1] if self.linf_history else float('nan')

    def value_at(self, what, time):
        for t, v in getattr(self, f'{what}_history'):
            if abs(t - time) <= 1e-9 * max(1.0, abs(time)):
                return v
        return float('nan')

    def to_frame(self):
        "One row per sample time: t, linf, E, P, CE, CP (and position if tracked)."
        columns = {}
        for what, col in (('linf', 'linf'), ('energy', 'E'), ('momentum', 'P'), ('position', 'position')):
            hist = getattr(self, f'{what}_history')
            if hist or col in ('linf', 'E', 'P'):
                columns[col] = pd.Series(dict(hist), dtype=float)
        df = pd.DataFrame(columns)
        df.index.name = 't'
        df = df.sort_index().reset_index()
        df['CE'] = [self._change(e, self.E0)[0] if self.E0 is not None else np.nan for e in df['E']]
        df['CP'] = [self._change(p, self.P0)[0] if self.P0 is not None else np.nan for p in df['P']]
        cols = ['t', 'linf', 'E', 'P', 'CE', 'CP'] + (['position'] if 'position' in df else [])
        return df[cols]

    def to_csv(self, filename=None):
        "CSV text (written to `filename` if given), led by the run manifest."
        text = manifest_header(self.metadata) + self.to_frame().to_csv(index=False, float_format='%.5e')
        if filename is not None:
            write_text(filename, text)
        return text

    def as_dict(self):
        CE, CP = self.relative_changes
        return {
            'metadata': self.metadata,
            'E0': self.E0,
            'P0': self.P0,
            'linf': self.linf_history,
            'energy': self.energy_history,
            'momentum': self.momentum_history,
            'position': self.position_history,
            'CE': CE,
            'CP': CP,
            'absolute_fallback': self.absolute_fallback,
        }

    def to_json(self, filename=None):
        text = json.dumps(self.as_dict(), indent=2, sort_keys=True) + '\n'
        if filename is not None:
            write_text(filename, text)
        return text

    def __repr__(self):
        return (f'DiagnosticsReport({self.metadata.get("problem")}, '
                f'linf={self.final_linf:g}, samples={len(self.linf_history)})')


#_______________________________________________________________________________
# Observers, called as `observer(report, state, spec)` at sample times.

class LinfObserver(object):
    def __call__(self, report, state, spec):
        report.record('linf', state.time, linf_error(state, spec))


class ConservationObserver(object):
    def __call__(self, report, state, spec):
        report.record('energy', state.time, energy(state, spec))
        report.record('momentum', state.time, momentum(state, spec))


class PositionObserver(object):
    def __call__(self, report, state, spec):
        report.record('position', state.time, feature_position(state, spec))


class SnapshotObserver(object):
    def __call__(self, report, state, spec):
        report.snapshots.setdefault(state.time, snapshot(state, spec))


def default_observers(spec, snapshots=False):
    "Observers applicable to `spec`."
    obs = []
    if spec.has_exact:
        obs.append(LinfObserver())
    obs.append(ConservationObserver())
    if spec.feature is not None:
        obs.append(PositionObserver())
    if snapshots:
        obs.append(SnapshotObserver())
    return obs


if __name__ == '__main__':
    import doctest
    doctest.testmod()
