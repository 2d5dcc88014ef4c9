import json
import numpy as np
import pandas as pd
import pytest
from tempfile import mkdtemp
from path import Path

from nkgspline import __version__
from nkgspline.cli import main, run_table, find_table, table_row, TABLE_COLUMNS, TABLE_DIR
from nkgspline.config import RunConfig, ConfigError, WORKERS_ENV
from nkgspline.timestepper import SolverError
from nkgspline.scan import ScanPoint


SMALL = ['--problem', 'traveling_wave', '--h', '1', '--dt', '0.5', '--t-end', '1']

SCAN = ['--lambda-min', '-0.02', '--lambda-max', '0.02', '--coarse-step', '0.01',
        '--refine-step', '0.005', '--refine-radius', '0.01']

MINI = """
title = mini
problem = traveling_wave
t_end = 1
sample_times = 0.5, 1

[row]
h = 1
dt = 0.5

[row]
h = 0.7
dt = 0.5

[row]
h = 1
dt = 0.25
scan = true
lambda_min = -0.02
lambda_max = 0.02
coarse_step = 0.01
refine_step = 0.005
"""


@pytest.fixture(autouse=True)
def serial(monkeypatch):
    monkeypatch.delenv(WORKERS_ENV, raising=False)


def test_list_problems(capsys):
    assert main(['list-problems']) == 0
    assert capsys.readouterr().out.split() == ['solitary_wave', 'traveling_wave']


def test_run_writes_artifacts(tmp_path):
    out = tmp_path / 'run'
    assert main(['run'] + SMALL + ['--sample', '0.5, 1', '--output', str(out)]) == 0
    for name in ['report.csv', 'report.json', 'manifest.json', 'snapshot_t0.5.csv', 'snapshot_t1.csv']:
        assert (out / name).exists(), name

    text = (out / 'report.csv').read_text()
    assert '# problem = traveling_wave\n' in text and '# nu = 0.5\n' in text
    df = pd.read_csv(out / 'report.csv', comment='#')
    assert list(df.columns) == ['t', 'linf', 'E', 'P', 'CE', 'CP', 'position']
    assert list(df['t']) == [0.5, 1.0]
    assert (df['linf'] > 0).all()

    manifest = json.loads((out / 'manifest.json').read_text())
    assert manifest['version'] == __version__
    assert manifest['parameters']['h'] == 1.0 and manifest['parameters']['lam'] == 0.0
    assert manifest['wall_time'] >= 0

    snap = pd.read_csv(out / 'snapshot_t1.csv', comment='#')
    assert list(snap.columns) == ['x', 'U', 'V', 'exact', 'error'] and len(snap) == 61


def test_run_formats_and_config_file(tmp_path):
    cfg = tmp_path / 'run.cfg'
    cfg.write_text('problem = traveling_wave\nh = 1\ndt = 0.5\nt_end = 1\nformat = json\n')
    out = tmp_path / 'run'
    assert main(['run', '--config', str(cfg), '--output', str(out), '--pivot-free', '--lambda', '0.01']) == 0
    assert (out / 'report.json').exists() and not (out / 'report.csv').exists()
    report = json.loads((out / 'report.json').read_text())
    assert report['metadata']['lam'] == 0.01
    assert report['metadata']['pivoting'] is False


def test_scan_command(tmp_path):
    out = tmp_path / 'scan'
    assert main(['scan'] + SMALL + SCAN + ['--output', str(out)]) == 0
    df = pd.read_csv(out / 'scan.csv', comment='#')
    assert list(df.columns) == ['lambda', 'linf', 'status']
    assert 0.0 in set(df['lambda'])
    manifest = json.loads((out / 'manifest.json').read_text())
    assert abs(manifest['best_linf'] - df['linf'].min()) <= 1e-5 * df['linf'].min()
    assert manifest['parameters']['scan'] is True


def test_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(['run', '--h', '1', '--dt', '0.5'])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(['run', '--problem', 'sine_gordon'])
    assert e.value.code == 2
    # h does not divide the domain
    bad = ['run', '--problem', 'traveling_wave', '--h', '0.7', '--dt', '0.5', '--output', str(tmp_path)]
    assert main(bad) == 2
    assert main(['table', 'no_such_table', '--output', str(tmp_path)]) == 2


def test_table_rows(tmp_path):
    f = tmp_path / 'mini.cfg'
    f.write_text(MINI)
    df = run_table(str(f), output=str(tmp_path / 'out'))
    assert list(df.columns) == TABLE_COLUMNS

    ok = df[df['h'] == 1.0]
    plain = ok[ok['dt'] == 0.5]
    assert list(plain['t']) == [0.5, 1.0] and (plain['status'] == 'ok').all()
    assert plain['best_lambda'].isna().all()

    invalid = df[df['h'] == 0.7]
    assert len(invalid) == 1 and invalid['status'].iloc[0].startswith('invalid:')

    scanned = ok[ok['dt'] == 0.25]
    assert (scanned['status'] == 'ok').all()
    assert 0.0 in set(scanned['lambda'])
    best = scanned['best_lambda'].iloc[0]
    assert set(scanned['lambda']) == {0.0, best}
    assert len(scanned) == (2 if best == 0 else 4)

    text = (tmp_path / 'out' / 'mini.csv').read_text()
    assert text.startswith('# desk_scale = false\n# source = mini.cfg\n# title = mini\n')


def test_table_is_deterministic(tmp_path):
    f = tmp_path / 'mini.cfg'
    f.write_text(MINI)
    run_table(str(f), output=str(tmp_path / 'a'))
    run_table(str(f), output=str(tmp_path / 'b'))
    assert (tmp_path / 'a' / 'mini.csv').read_bytes() == (tmp_path / 'b' / 'mini.csv').read_bytes()


def test_empty_table(tmp_path):
    f = tmp_path / 'empty.cfg'
    f.write_text('problem = traveling_wave\n')
    df = run_table(str(f), output=str(tmp_path))
    assert len(df) == 0
    lines = (tmp_path / 'empty.csv').read_text().splitlines()
    assert lines[-1] == ','.join(TABLE_COLUMNS)
    assert all(line.startswith('#') for line in lines[:-1])


def test_table_row_failures(monkeypatch):
    import nkgspline.cli as cli
    import nkgspline.scan as scan_module

    def singular(*args, **kw):
        raise SolverError('traveling_wave: singular system at step 1', time=0.5, step=1)

    monkeypatch.setattr(cli, 'run', singular)
    row = RunConfig(problem='traveling_wave', h=1.0, dt=0.5, t_end=1.0)
    [line] = table_row(row)
    assert line['status'].startswith('singular:') and line['h'] == 1.0
    monkeypatch.setattr(scan_module, 'run_lambda', lambda *args: ScanPoint(args[4], float('nan'), 'singular'))
    [line] = table_row(row.updated(scan=True, lambda_min=-0.01, lambda_max=0.01,
                                   coarse_step=0.01, refine_step=0.01))
    assert line['status'].startswith('scan failed:')


def test_find_table(tmp_path):
    assert find_table('table4') == TABLE_DIR / 'table4.cfg'
    f = tmp_path / 'x.cfg'
    f.write_text('')
    assert find_table(str(f)) == str(f)
    with pytest.raises(ConfigError) as e:
        find_table('table9')
    assert 'table2' in str(e.value)



def test_scan_row_without_exact_solution(tmp_path):
    data = tmp_path / 'init.csv'
    x = [0.1 * i for i in range(21)]
    data.write_text('x,u\n' + ''.join(f'{xi},{0.1 * xi}\n' for xi in x))
    f = tmp_path / 'mixed.cfg'
    f.write_text(MINI.split('[row]')[0] + '[row]\nh = 1\ndt = 0.5\n\n'
                 f'[row]\ninitial_data = {data}\nh = 0.5\ndt = 0.5\nscan = true\n')
    df = run_table(str(f), output=str(tmp_path / 'out'))
    good = df[df['h'] == 1.0]
    assert list(good['t']) == [0.5, 1.0] and (good['status'] == 'ok').all()
    [bad] = df[df['h'] == 0.5]['status']
    assert bad.startswith('invalid:') and 'exact solution' in bad
    assert (tmp_path / 'out' / 'mini.csv').exists()

    cfg = tmp_path / 'scan.cfg'
    cfg.write_text(f'initial_data = {data}\nh = 0.5\ndt = 0.5\nt_end = 1\n')
    assert main(['scan', '--config', str(cfg), '--output', str(tmp_path / 's')]) == 2


def test_table_row_diverged(monkeypatch):
    import nkgspline.cli as cli
    from nkgspline.diagnostics import DiagnosticsReport

    def blown_up(*args, **kw):
        report = DiagnosticsReport(lam=0.0, t_end=1.0)
        report.E0, report.P0 = 1.0, 1.0
        report.record('linf', 1.0, float('nan'))
        report.record('energy', 1.0, 1.0)
        report.record('momentum', 1.0, 1.0)
        return report

    monkeypatch.setattr(cli, 'run', blown_up)
    [line] = table_row(RunConfig(problem='traveling_wave', h=1.0, dt=0.5, t_end=1.0))
    assert line['status'] == 'diverged' and np.isnan(line['linf'])


if __name__ == '__main__':
    test_list_problems()
    test_find_table(Path(mkdtemp()))
