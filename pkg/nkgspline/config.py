"""
Flat `key = value` run configurations.

Blank lines and `#` comments are ignored, keys are case-insensitive and `-`
is read as `_`.  A table set is a block of global keys followed by repeated
`[row]` blocks; every row inherits the globals.  Keys prefixed `desk_`
replace their unprefixed counterpart when the set is read at desk scale.

>>> c = RunConfig.from_text('problem = solitary_wave\\nh = 0.05\\ndt = 0.01\\nsample-times = 1, 2, 3')
>>> c.sample_times
[1.0, 2.0, 3.0]
>>> RunConfig.from_text(c.to_text()) == c
True

"""
import os
import re

from nkgspline.basis import BasisConfig
from nkgspline.problems import get_problem, from_table
from nkgspline.timestepper import n_steps
from nkgspline.fsutils import format_value


WORKERS_ENV = 'NKGSPLINE_WORKERS'


class ConfigError(ValueError):
    pass


def _bool(s):
    if isinstance(s, bool):
        return s
    v = str(s).strip().lower()
    if v in ('1', 'true', 'yes', 'on'):
        return True
    if v in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError(f'not a boolean: {s!r}')


def _floats(s):
    if isinstance(s, (list, tuple)):
        return [float(x) for x in s]
    return [float(x) for x in re.split(r'[,\s]+', str(s).strip()) if x]


def _words(s):
    if isinstance(s, (list, tuple)):
        return [str(x) for x in s]
    return [x for x in re.split(r'[,\s]+', str(s).strip()) if x]


# name -> (parser, default)
FIELDS = {
    'problem':       (str, None),
    'initial_data':  (str, None),
    'epsilon1':      (float, None),
    'epsilon2':      (float, None),
    'nu':            (float, None),
    'h':             (float, None),
    'dt':            (float, None),
    't_end':         (float, None),
    'lam':           (float, 0.0),
    'scan':          (_bool, False),
    'lambda_min':    (float, -1.0),
    'lambda_max':    (float, 1.0),
    'coarse_step':   (float, 0.001),
    'refine_step':   (float, 0.0001),
    'refine_radius': (float, 0.01),
    'exhaustive':    (_bool, False),
    'sample_times':  (_floats, None),
    'output':        (str, 'out'),
    'formats':       (_words, ['csv', 'json']),
    'pivot_free':    (_bool, False),
    'workers':       (int, None),
    'progress':      (_bool, False),
}

ALIASES = {'lambda': 'lam', 'sample': 'sample_times', 'samples': 'sample_times',
           'format': 'formats', 'out': 'output'}

FORMATS = ('csv', 'json')


def normalize_key(key):
    k = key.strip().lower().replace('-', '_')
    return ALIASES.get(k, k)


def parse(text, source='<string>'):
    "Key-value pairs of a flat config text, in file order."
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f'{source}:{lineno}: expected `key = value`, got {line!r}')
        key, value = line.split('=', 1)
        key = key.strip()
        if not re.match(r'^[A-Za-z_][A-Za-z0-9_-]*$', key):
            raise ConfigError(f'{source}:{lineno}: bad key {key!r}')
        out[key.lower().replace('-', '_')] = value.strip()
    return out


class RunConfig(object):
    "Parameters of one run (or one lambda scan)."

    def __init__(self, **kw):
        for name, (_, default) in FIELDS.items():
            setattr(self, name, list(default) if isinstance(default, list) else default)
        for k, v in kw.items():
            setattr(self, k, v)

    @classmethod
    def from_mapping(cls, mapping, source='<mapping>'):
        values = {}
        for key, raw in mapping.items():
            name = normalize_key(key)
            if name not in FIELDS:
                raise ConfigError(f'{source}: unknown key {key!r}')
            if raw is None:
                continue
            conv, _ = FIELDS[name]
            try:
                values[name] = conv(raw)
            except (TypeError, ValueError) as e:
                raise ConfigError(f'{source}: bad value for {key}: {raw!r} ({e})') from e
        bad = set(values.get('formats', [])) - set(FORMATS)
        if bad:
            raise ConfigError(f'{source}: unknown output format(s) {sorted(bad)}; choose from {FORMATS}')
        return cls(**values)

    @classmethod
    def from_text(cls, text, source='<string>'):
        return cls.from_mapping(parse(text, source), source)

    @classmethod
    def load(cls, filename):
        with open(filename) as f:
            return cls.from_text(f.read(), str(filename))

    def updated(self, **overrides):
        "Copy with `overrides` applied; `None` leaves a value unchanged."
        d = self.as_dict()
        d.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig(**d)

    def as_dict(self):
        return {name: getattr(self, name) for name in FIELDS}

    def to_text(self):
        lines = []
        for name in sorted(FIELDS):
            v = getattr(self, name)
            if v is None:
                continue
            key = 'lambda' if name == 'lam' else name
            lines.append(f'{key} = {format_value(v)}')
        return '\n'.join(lines) + '\n'

    def manifest(self):
        "Parameters that determine the results of a run."
        d = self.as_dict()
        for k in ('output', 'formats', 'progress', 'workers'):
            d.pop(k)
        return {k: v for k, v in d.items() if v is not None}

    def __eq__(self, other):
        return isinstance(other, RunConfig) and self.as_dict() == other.as_dict()

    def __repr__(self):
        return 'RunConfig(%s)' % ', '.join(f'{k}={v!r}' for k, v in self.as_dict().items() if v is not None)


def default_workers(workers=None):
    "Worker count: explicit value, else $NKGSPLINE_WORKERS, else 1."
    if workers is not None:
        return int(workers)
    env = os.environ.get(WORKERS_ENV)
    if not env:
        return 1
    try:
        n = int(env)
    except ValueError:
        raise ConfigError(f'{WORKERS_ENV}={env!r} is not an integer')
    if n < 1:
        raise ConfigError(f'{WORKERS_ENV} must be at least 1, got {n}')
    return n


def make_problem(config):
    "Problem specification named by `config`."
    if config.initial_data is not None:
        if config.t_end is None:
            raise ConfigError('t_end is required for tabulated initial data')
        try:
            return from_table(config.initial_data,
                              epsilon1=1.0 if config.epsilon1 is None else config.epsilon1,
                              epsilon2=-1.0 if config.epsilon2 is None else config.epsilon2,
                              t_end=config.t_end)
        except (OSError, ValueError) as e:
            raise ConfigError(f'initial data {config.initial_data}: {e}') from e
    if config.problem is None:
        raise ConfigError('no problem given')
    params = {}
    if config.nu is not None:
        params['nu'] = config.nu
    if config.t_end is not None:
        params['t_end'] = config.t_end
    try:
        return get_problem(config.problem, **params)
    except TypeError:
        raise ConfigError(f'problem {config.problem!r} does not accept {sorted(params)}')
    except ValueError as e:
        raise ConfigError(str(e)) from e


def validate(config, spec):
    """Check `config` against `spec`; returns the `BasisConfig` of the run.

    `h` must divide the domain, `dt` must be positive and both `t_end` and all
    sample times must lie on the time-step grid.

    """
    if config.h is None or config.dt is None:
        raise ConfigError('both h and dt are required')
    if not config.dt > 0:
        raise ConfigError(f'dt must be positive, got {config.dt}')
    a, b = spec.domain
    try:
        cfg = BasisConfig.from_spacing(config.lam, a, b, config.h)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    t_end = spec.t_end if config.t_end is None else config.t_end
    try:
        n_steps(t_end, config.dt)
        for t in config.sample_times or ():
            n_steps(t, config.dt, 'sample time')
    except ValueError as e:
        raise ConfigError(str(e)) from e
    late = [t for t in config.sample_times or () if t > t_end]
    if late:
        raise ConfigError(f'sample times {late} lie beyond t_end={t_end}')
    if config.scan:
        if not spec.has_exact:
            raise ConfigError(f'{spec.name}: a lambda scan needs an exact solution')
        from nkgspline.scan import ScanConfig
        try:
            ScanConfig(config.lambda_min, config.lambda_max, config.coarse_step,
                       config.refine_step, config.refine_radius)
        except ValueError as e:
            raise ConfigError(str(e)) from e
    return cfg


#_______________________________________________________________________________
# Table sets

class TableSet(object):

    def __init__(self, title, rows):
        self.title = title
        self.rows = rows

    def __len__(self):
        return len(self.rows)

    def __repr__(self):
        return f'TableSet({self.title!r}, rows={len(self.rows)})'


def _resolve_desk(d, desk_scale):
    out = {k: v for k, v in d.items() if not k.startswith('desk_')}
    if desk_scale:
        out.update({k[len('desk_'):]: v for k, v in d.items() if k.startswith('desk_')})
    return out


def parse_table_set(text, desk_scale=False, source='<string>'):
    "Global keys and `[row]` blocks of a table configuration."
    blocks = [[]]
    for line in text.splitlines():
        stripped = line.split('#', 1)[0].strip()
        if stripped.lower() == '[row]':
            blocks.append([])
        elif stripped.startswith('['):
            raise ConfigError(f'{source}: unknown section {stripped!r}')
        else:
            blocks[-1].append(line)
    head = parse('\n'.join(blocks[0]), source)
    title = head.pop('title', None)
    rows = []
    for i, block in enumerate(blocks[1:], 1):
        d = dict(head)
        d.update(parse('\n'.join(block), f'{source} row {i}'))
        rows.append(RunConfig.from_mapping(_resolve_desk(d, desk_scale), f'{source} row {i}'))
    return TableSet(title, rows)


def load_table_set(filename, desk_scale=False):
    with open(filename) as f:
        return parse_table_set(f.read(), desk_scale, str(filename))


if __name__ == '__main__':
    import doctest
    doctest.testmod()
