"""
File system helpers for run artifacts.
"""
import os, tempfile
from contextlib import contextmanager
from path import Path


def mkdir(d, verbose=False):
    "Ensure directory `d` exists."
    d = Path(d)
    if not d.exists():
        d.makedirs_p()
        if verbose:
            print('[mkdir] created', d)
    return d


@contextmanager
def atomicwrite(filename, mode='w', verbose=False):
    """
    Write to `filename` atomically: if an error occurs inside the context the
    previous contents of the file are kept.
    """
    filename = Path(filename)
    mkdir(filename.parent or '.')
    fd, tmp = tempfile.mkstemp(prefix=filename.name, dir=filename.parent or '.')
    if verbose:
        print('[atomicwrite] using temporary file:', tmp)
    try:
        with os.fdopen(fd, mode, newline='' if 'b' not in mode else None) as f:
            yield f
        os.chmod(tmp, 0o644)
        os.replace(tmp, filename)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def write_text(filename, text):
    with atomicwrite(filename) as f:
        f.write(text)
    return Path(filename)


def format_value(v):
    """Canonical text form of a manifest value.

    >>> format_value(0.1), format_value(True), format_value([1.0, 2.5]), format_value('x')
    ('0.1', 'true', '1.0, 2.5', 'x')

    """
    if isinstance(v, bool):
        return 'true' if v else 'false'
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ', '.join(format_value(x) for x in v)
    return str(v)


def manifest_header(meta):
    "`# key = value` lines (sorted by key, `None` values skipped)."
    return ''.join(f'# {k} = {format_value(v)}\n' for k, v in sorted(meta.items()) if v is not None)


def time_tag(t):
    "File name fragment for sample time `t`: 1.0 -> '1', 0.25 -> '0.25'."
    return f'{t:g}'
