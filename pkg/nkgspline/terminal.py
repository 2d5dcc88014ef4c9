"""
Coloured status lines on stderr.

>>> colors.green % 'ok' == '\\x1b[0;32mok\\x1b[0m'
True

"""
import os
import sys


def ansi(color=None, light=None, bg=3):
    return '\x1b[%s;%s%sm' % (light, bg, color)

_reset = '\x1b[0m'

def colorstring(s, c):
    return c + s + _reset


class colors:
    black, red, green, yellow, blue, magenta, cyan, white = \
        [colorstring('%s', ansi(c, 0)) for c in range(8)]


def _use_color(stream):
    if os.environ.get('NO_COLOR'):
        return False
    return hasattr(stream, 'isatty') and stream.isatty()


def status(tag, msg, color=None, stream=None):
    "Write `[tag] msg` to stderr, colouring the tag on a terminal."
    stream = sys.stderr if stream is None else stream
    tag = f'[{tag}]'
    if color is not None and _use_color(stream):
        tag = color % tag
    print(tag, msg, file=stream)


def info(msg, tag='nkgspline', stream=None):
    status(tag, msg, colors.green, stream)


def warn(msg, tag='warn', stream=None):
    status(tag, msg, colors.yellow, stream)


def error(msg, tag='error', stream=None):
    status(tag, msg, colors.red, stream)


if __name__ == '__main__':
    import doctest
    doctest.testmod()
