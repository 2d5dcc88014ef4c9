import numpy as np
from sys import stderr
from time import perf_counter
from contextlib import contextmanager


def htime(s, show_seconds=True):
    """Given a number of seconds, returns a string attempting to represent
    it as shortly as possible.

    >>> htime(100000)
    '1d3h46m40s'
    >>> htime(75)
    '1m15s'
    >>> htime(0.2)
    '0s'

    """
    s = int(s)
    d, s = divmod(s, 86400)
    h, s = divmod(s, 3600)
    m, s = divmod(s, 60)
    x = [f'{v}{u}' for v, u in ((d, 'd'), (h, 'h'), (m, 'm')) if v]
    if show_seconds and s:
        x.append(f'{s}s')
    if not x:
        x = ['0s' if show_seconds else '0m']
    return ''.join(x)


def fmt_seconds(sec):
    return '%.4f sec' % sec if sec < 60 else htime(sec)


class Timer(object):
    """Accumulates the wall time of repeated `with` blocks.

    >>> t = Timer('solve')
    >>> for _ in range(3):
    ...     with t:
    ...         pass
    >>> len(t.times)
    3

    """

    def __init__(self, name=None):
        self.name = name
        self.times = []
        self._b4 = None

    def __enter__(self):
        self._b4 = perf_counter()
        return self

    def __exit__(self, *_):
        self.times.append(perf_counter() - self._b4)

    @property
    def total(self):
        return float(sum(self.times))

    @property
    def mean(self):
        return float(np.mean(self.times)) if self.times else float('nan')

    @property
    def median(self):
        return float(np.median(self.times)) if self.times else float('nan')

    def __str__(self):
        return f'Timer(name={self.name}, n={len(self.times)}, total={fmt_seconds(self.total)})'


@contextmanager
def timeit(name, fmt='{name} ({htime})', show=True):
    """Context manager which prints the time it took to run the block."""
    b4 = perf_counter()
    yield
    sec = perf_counter() - b4
    if show:
        print(fmt.format(name=name, htime=fmt_seconds(sec), sec=sec), file=stderr)


if __name__ == '__main__':
    import doctest
    doctest.testmod()
