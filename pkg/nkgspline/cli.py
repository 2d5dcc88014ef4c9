"""
Command line interface.

    nkgspline run --problem traveling_wave --h 0.1 --dt 0.02 --lambda 0
    nkgspline scan --problem traveling_wave --h 0.2 --dt 0.05 --workers 4
    nkgspline table table2 --desk-scale
    nkgspline list-problems

Exit status is 0 on success, 1 when a run fails and 2 for usage or
configuration errors.
"""
import sys
import json
import numpy as np
import pandas as pd
from argparse import ArgumentParser
from concurrent.futures import ProcessPoolExecutor
from path import Path

from nkgspline import __version__
from nkgspline.config import (RunConfig, ConfigError, make_problem, validate,
                              default_workers, load_table_set)
from nkgspline.timestepper import run, SolverError, ConfigurationError
from nkgspline.diagnostics import default_observers, MissingExactSolution
from nkgspline.scan import scan, ScanConfig, ScanError
from nkgspline.problems import list_problems
from nkgspline.fsutils import mkdir, write_text, manifest_header, time_tag
from nkgspline.terminal import info, warn, error
from nkgspline.timer import Timer, fmt_seconds
from nkgspline.iterview import iterview


TABLE_DIR = Path(__file__).parent / 'tables'

TABLE_COLUMNS = ['h', 'dt', 'lambda', 't', 'linf', 'CE', 'CP', 'best_lambda', 'status']

FLOAT_FORMAT = '%.5e'


def _scan_config(config, workers=1):
    return ScanConfig(config.lambda_min, config.lambda_max, config.coarse_step,
                      config.refine_step, config.refine_radius,
                      exhaustive=config.exhaustive, workers=workers)


def write_manifest(out, config, wall_time, **extra):
    d = {
        'parameters': config.manifest(),
        'wall_time': wall_time,
        'version': __version__,
    }
    d.update(extra)
    return write_text(out / 'manifest.json', json.dumps(d, indent=2, sort_keys=True) + '\n')


#_______________________________________________________________________________
# Commands

def run_single(config):
    "Run one configuration and write its report, snapshots and manifest."
    spec = make_problem(config)
    cfg = validate(config, spec)
    t_end = spec.t_end if config.t_end is None else config.t_end
    sample_times = config.sample_times or [t_end]
    out = mkdir(config.output)

    timer = Timer('run')
    with timer:
        report = run(spec, cfg, config.dt, t_end,
                     observers=default_observers(spec, snapshots=True),
                     sample_times=sample_times,
                     pivoting=not config.pivot_free,
                     progress=config.progress)

    report.metadata.update(config.manifest())
    header = manifest_header(report.metadata)
    if 'csv' in config.formats:
        report.to_csv(out / 'report.csv')
        for t, df in sorted(report.snapshots.items()):
            write_text(out / f'snapshot_t{time_tag(t)}.csv',
                       header + f'# t = {t!r}\n' + df.to_csv(index=False, float_format=FLOAT_FORMAT))
    if 'json' in config.formats:
        report.to_json(out / 'report.json')
    write_manifest(out, config, timer.total)

    CE, CP = report.relative_changes
    info(f'{spec.name} h={config.h:g} dt={config.dt:g} lambda={cfg.lam:g}: '
         f'linf({t_end:g})={report.final_linf:.4e} C(E)={CE:.4e} C(P)={CP:.4e} -> {out}')
    return report


def run_scan(config):
    "Lambda scan of one configuration; writes `scan.csv` and the manifest."
    spec = make_problem(config)
    cfg = validate(config, spec)
    t_end = spec.t_end if config.t_end is None else config.t_end
    out = mkdir(config.output)
    timer = Timer('scan')
    with timer:
        result = scan(spec, cfg, config.dt, t_end, _scan_config(config, default_workers(config.workers)),
                      pivoting=not config.pivot_free, progress=config.progress)
    write_text(out / 'scan.csv', result.to_csv(manifest_header(config.manifest())))
    write_manifest(out, config, timer.total, best_lambda=result.best_lambda, best_linf=result.best_linf)
    info(f'{spec.name} h={config.h:g} dt={config.dt:g}: best lambda={result.best_lambda:g} '
         f'linf({t_end:g})={result.best_linf:.4e} -> {out / "scan.csv"}')
    return result


def _at(df, t):
    "Row of `df` sampled at time `t` (times are multiples of dt), or None."
    [idx] = np.nonzero(np.abs(df['t'].to_numpy() - t) <= 1e-9 * max(1.0, abs(t)))
    return df.iloc[idx[0]] if len(idx) else None


def _lines(config, report, best_lambda=np.nan, status='ok'):
    df = report.to_frame()
    lines = []
    for t in config.sample_times or [report.metadata['t_end']]:
        row = _at(df, t)
        lines.append({
            'h': config.h,
            'dt': config.dt,
            'lambda': report.metadata['lam'],
            't': t,
            'linf': np.nan if row is None else row['linf'],
            'CE': np.nan if row is None else row['CE'],
            'CP': np.nan if row is None else row['CP'],
            'best_lambda': best_lambda,
            'status': status,
        })
    return lines


def _failed(config, status):
    return [{'h': config.h, 'dt': config.dt, 'lambda': config.lam, 't': np.nan, 'linf': np.nan,
             'CE': np.nan, 'CP': np.nan, 'best_lambda': np.nan, 'status': status}]


def table_row(config):
    """Result lines of one table row: one per sample time, for lambda and, when
    scanning, again for the optimum."""
    try:
        spec = make_problem(config)
        cfg = validate(config, spec)
    except ValueError as e:
        return _failed(config, f'invalid: {e}')
    t_end = spec.t_end if config.t_end is None else config.t_end
    sample_times = config.sample_times or [t_end]
    pivoting = not config.pivot_free

    def one(lam, best_lambda=np.nan):
        report = run(spec, cfg.with_lambda(lam), config.dt, t_end,
                     sample_times=sample_times, pivoting=pivoting)
        diverged = spec.has_exact and not np.isfinite(report.final_linf)
        status = 'diverged' if diverged else 'ok'
        return _lines(config, report, best_lambda, status)

    try:
        if not config.scan:
            return one(config.lam)
        result = scan(spec, cfg, config.dt, t_end, _scan_config(config), pivoting=pivoting)
        lines = one(0.0, result.best_lambda)
        if result.best_lambda != 0.0:
            lines += one(result.best_lambda, result.best_lambda)
        return lines
    except (SolverError, ConfigurationError) as e:
        return _failed(config, f'singular: {e}')
    except ScanError as e:
        return _failed(config, f'scan failed: {e}')
    except (ValueError, MissingExactSolution) as e:
        return _failed(config, f'failed: {e}')


def find_table(name):
    "Path of a table configuration: an existing file or a bundled name."
    p = Path(name)
    if p.isfile():
        return p
    bundled = TABLE_DIR / f'{name}.cfg'
    if bundled.exists():
        return bundled
    choices = ', '.join(sorted(f.stem for f in TABLE_DIR.files('*.cfg')))
    raise ConfigError(f'no table configuration {name!r}; bundled tables: {choices}')


def run_table(filename, output='out', desk_scale=False, workers=1, progress=False, pivot_free=False):
    "Run every row of a table set and write one consolidated CSV."
    source = find_table(filename)
    tables = load_table_set(source, desk_scale=desk_scale)
    title = tables.title or source.stem
    rows = [r.updated(pivot_free=pivot_free or None) for r in tables.rows]

    out = mkdir(output)
    timer = Timer('table')
    with timer:
        if workers > 1 and len(rows) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(iterview(pool.map(table_row, rows), msg=title, length=len(rows), show=progress))
        else:
            results = [table_row(r) for r in iterview(rows, msg=title, show=progress)]

    lines = [line for result in results for line in result]
    df = pd.DataFrame(lines, columns=TABLE_COLUMNS)
    for line in lines:
        if line['status'] != 'ok':
            warn(f'{title} h={line["h"]} dt={line["dt"]}: {line["status"]}')
    header = manifest_header({'title': title, 'source': source.name, 'desk_scale': desk_scale,
                              'version': __version__})
    filename = out / f'{title}.csv'
    write_text(filename, header + df.to_csv(index=False, float_format=FLOAT_FORMAT))
    info(f'{title}: {len(rows)} rows, {len(df)} lines in {fmt_seconds(timer.total)} -> {filename}')
    return df


#_______________________________________________________________________________
# Argument parsing

def _add_run_arguments(p):
    p.add_argument('--config', help='key = value file; flags override its values')
    p.add_argument('--problem', choices=list_problems())
    p.add_argument('--initial-data', help='CSV with columns x, u[, v] instead of a built-in problem')
    p.add_argument('--epsilon1', type=float)
    p.add_argument('--epsilon2', type=float)
    p.add_argument('--nu', type=float, help='kink velocity')
    p.add_argument('--h', type=float)
    p.add_argument('--dt', type=float)
    p.add_argument('--t-end', type=float)
    p.add_argument('--sample', help='comma separated sample times (default: t_end)')
    p.add_argument('--output', help='output directory')
    p.add_argument('--format', help='csv, json or both (comma separated)')
    p.add_argument('--pivot-free', action='store_true', default=None,
                   help='pivot-free banded elimination instead of partial pivoting')
    p.add_argument('--progress', action='store_true', default=None)


def _add_scan_arguments(p):
    p.add_argument('--lambda-min', type=float)
    p.add_argument('--lambda-max', type=float)
    p.add_argument('--coarse-step', type=float)
    p.add_argument('--refine-step', type=float)
    p.add_argument('--refine-radius', type=float)
    p.add_argument('--exhaustive', action='store_true', default=None,
                   help='sweep the whole range at the refine step')
    p.add_argument('--workers', type=int)


def make_parser():
    parser = ArgumentParser(prog='nkgspline',
                            description='Extended cubic B-spline collocation for the nonlinear Klein-Gordon equation.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command')

    p = sub.add_parser('run', help='single run with diagnostics')
    _add_run_arguments(p)
    p.add_argument('--lambda', dest='lam', type=float)

    p = sub.add_parser('scan', help='search the extension parameter')
    _add_run_arguments(p)
    _add_scan_arguments(p)

    p = sub.add_parser('table', help='batch reproduction of a table set')
    p.add_argument('table', help='table configuration file or bundled name (table2 .. table5)')
    p.add_argument('--output', default='out')
    p.add_argument('--desk-scale', action='store_true')
    p.add_argument('--workers', type=int)
    p.add_argument('--pivot-free', action='store_true')
    p.add_argument('--progress', action='store_true')

    sub.add_parser('list-problems', help='names of the built-in problems')
    return parser


def config_from_args(args):
    "RunConfig from `--config` (if any) with the flags on top."
    config = RunConfig.load(args.config) if args.config else RunConfig()
    overrides = {
        'problem': args.problem,
        'initial_data': args.initial_data,
        'epsilon1': args.epsilon1,
        'epsilon2': args.epsilon2,
        'nu': args.nu,
        'h': args.h,
        'dt': args.dt,
        't_end': args.t_end,
        'sample_times': args.sample,
        'output': args.output,
        'formats': args.format,
        'pivot_free': args.pivot_free,
        'progress': args.progress,
    }
    for name in ('lam', 'lambda_min', 'lambda_max', 'coarse_step', 'refine_step',
                 'refine_radius', 'exhaustive', 'workers'):
        overrides[name] = getattr(args, name, None)
    if args.command == 'scan':
        overrides['scan'] = True
    typed = RunConfig.from_mapping({k: v for k, v in overrides.items() if v is not None}, '<command line>')
    return config.updated(**{k: getattr(typed, k) for k, v in overrides.items() if v is not None})


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.error('a command is required')

    if args.command == 'list-problems':
        for name in list_problems():
            print(name)
        return 0

    try:
        if args.command == 'table':
            run_table(args.table, output=args.output, desk_scale=args.desk_scale,
                      workers=default_workers(args.workers), progress=args.progress,
                      pivot_free=args.pivot_free)
            return 0

        config = config_from_args(args)
        if config.problem is None and config.initial_data is None:
            parser.error('a problem is required (--problem, --initial-data or `problem` in --config)')
        if args.command == 'run':
            run_single(config)
        else:
            run_scan(config)
        return 0

    except (SolverError, ScanError) as e:
        error(str(e))
        return 1
    except OSError as e:
        error(f'{e.__class__.__name__}: {e}')
        return 1
    except ValueError as e:
        error(str(e))
        return 2


if __name__ == '__main__':
    sys.exit(main())
