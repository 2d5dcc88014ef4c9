import io
import pytest

from nkgspline.terminal import colors, info, warn, error
from nkgspline.iterview import iterview, progress, hms
from nkgspline.timer import Timer, htime, fmt_seconds, timeit
from nkgspline.fsutils import atomicwrite, write_text, manifest_header, format_value, mkdir, time_tag


def test_status_lines(monkeypatch):
    monkeypatch.delenv('NO_COLOR', raising=False)
    out = io.StringIO()
    info('done', stream=out)
    warn('careful', stream=out)
    error('broken', stream=out)
    # no colour when the stream is not a terminal
    assert out.getvalue() == '[nkgspline] done\n[warn] careful\n[error] broken\n'
    assert colors.red % 'x' == '\x1b[0;31mx\x1b[0m'


def test_iterview():
    out = io.StringIO()
    assert list(iterview(range(5), msg='steps', stream=out, mintime=0)) == [0, 1, 2, 3, 4]
    text = out.getvalue()
    assert text.startswith('\rsteps ') and '100.0% (5/5)' in text
    assert list(iterview(iter([1, 2]), show=False)) == [1, 2]
    with pytest.raises(ValueError):
        list(iterview(iter([1, 2]), stream=out))
    assert list(iterview(iter([1, 2]), length=2, stream=out)) == [1, 2]
    assert progress(1, 4) == ' 25.0% (1/4)'
    assert hms(3725) == '01:02:05'


def test_timer(capfd):
    t = Timer('x')
    for _ in range(3):
        with t:
            pass
    assert len(t.times) == 3 and t.total >= 0 and t.mean <= t.total
    assert htime(3600) == '1h' and fmt_seconds(0.5) == '0.5000 sec'
    assert fmt_seconds(90) == '1m30s'
    with timeit('block'):
        pass
    assert capfd.readouterr().err.startswith("block (")


def test_files(tmp_path):
    f = tmp_path / 'a' / 'b.txt'
    write_text(f, 'one\n')
    assert f.read_text() == 'one\n'
    with pytest.raises(RuntimeError):
        with atomicwrite(f) as w:
            w.write('two\n')
            raise RuntimeError
    assert f.read_text() == 'one\n'
    assert sorted(p.name for p in f.parent.iterdir()) == ['b.txt']
    assert mkdir(tmp_path / 'a').isdir()

    assert manifest_header({'h': 0.1, 'scan': True, 'b': None, 'ts': [1.0, 2.0]}) == \
        '# h = 0.1\n# scan = true\n# ts = 1.0, 2.0\n'
    assert format_value(-0.0101) == '-0.0101'
    assert time_tag(1.0) == '1' and time_tag(0.25) == '0.25'


if __name__ == '__main__':
    test_iterview()
