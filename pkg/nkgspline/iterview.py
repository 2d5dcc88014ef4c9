import sys
from time import time

__all__ = ['iterview']


def progress(n, length):
    "Percentage and count, e.g. ` 50.0% (100/200)`."
    if length == 0:
        return '%5.1f%% (%d/%d)' % (float('nan'), n, length)
    return ('%5.1f%% (%*d/%d)'
            % ((float(n) / length) * 100, len(str(length)), n, length))


def progress_bar(max_width, n, length):
    width = int((float(n) / length) * max_width + 0.5)
    if max_width - width:
        spacing = '>' + (' ' * (max_width - width))[1:]
    else:
        spacing = ''
    return '[%s%s]' % ('=' * width, spacing)


def hms(seconds):
    minutes, seconds = divmod(int(seconds), 60)
    hours, minutes = divmod(minutes, 60)
    return '%02d:%02d:%02d' % (hours, minutes, seconds)


def time_remaining(elapsed, n, length):
    "ETA while running, total elapsed time once complete."
    if n == 0:
        return '--:--:--'
    if n == length:
        return hms(elapsed)
    return hms((elapsed / n) * (length - n))


def fmt(start, n, length, width, done=False):
    string = progress(n, length) + ' '
    elapsed = time() - start
    if done or n == length:
        end = ' ' + hms(elapsed)
    else:
        end = ' ETA ' + time_remaining(elapsed, n, length)
    string += progress_bar(max(width - len(string) - len(end), 1), n, length)
    return string + end


def iterview(x, msg=None, every=None, mintime=0.25, length=None, width=78,
             show=True, stream=None):
    """Yield from `x` while drawing a progress bar with ETA on stderr.

    Arguments:

      - `length`: required when `x` has no `len()`.

      - `every`: redraw at most every `every` items; `mintime`: at most
        every `mintime` seconds.

      - `show`: pass items through silently when False.

    """
    if not show:
        yield from x
        return

    stream = sys.stderr if stream is None else stream
    if length is None:
        try:
            length = len(x)
        except TypeError:
            raise ValueError(f'iterable {x!r} has no len(); pass `length`')
    length = int(length)
    if length == 0:
        return

    if msg:
        msg = msg[:width // 2] + ' '
    else:
        msg = ''
    width = width - len(msg)

    start = time()
    last_update = 0
    n = -1
    try:
        for n, y in enumerate(x):
            if every is None or n % every == 0:
                if not mintime or time() - last_update >= mintime:
                    stream.write('\r%s%s' % (msg, fmt(start, n, length, width)))
                    last_update = time()
            yield y
    finally:
        stream.write('\r%s%s\n' % (msg, fmt(start, n + 1, length, width, done=True)))
