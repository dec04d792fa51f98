"""Command line interface: ``ordshrink {fit,compare,simulate,economy}``."""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from typing import Iterable, List, Optional, Sequence

from .adapt import (ANNIHILATOR_PENALTIES, DEFAULT_ALPHAS, DEFAULT_PENALTIES, FAMILIES, FitConfig,
                    FitResult, compare, fit, prepare_basis)
from .basis import economy_profile
from .layout import DegenerateLayoutError, MalformedInputError, read_csv
from .oracle import GENERATOR, SCENARIOS, simulate_experiment
from .penalty import parse_selector

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_MALFORMED = 3
EXIT_DEGENERATE = 4
EXIT_INVALID = 5
EXIT_IO = 6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x) -> str:
    """17 significant digits, enough to round-trip any double."""
    if x is None:
        return ''
    if isinstance(x, float) and math.isinf(x):
        return 'inf' if x > 0 else '-inf'
    return format(float(x), '.17g')


def _json_value(x) -> str:
    if x is None:
        return 'null'
    if isinstance(x, str):
        return '"' + x.replace('\\', '\\\\').replace('"', '\\"') + '"'
    if isinstance(x, bool):
        return 'true' if x else 'false'
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return fmt(x) if math.isfinite(x) else 'null'
    if isinstance(x, dict):
        return '{' + ', '.join(f'{_json_value(k)}: {_json_value(v)}' for k, v in x.items()) + '}'
    return '[' + ', '.join(_json_value(v) for v in x) + ']'


def _family_list(arg: str) -> tuple:
    if arg == 'all':
        return FAMILIES
    return tuple(a.strip().upper() for a in arg.split(','))


def _config(args) -> FitConfig:
    if args.penalty == 'auto':
        penalties = ANNIHILATOR_PENALTIES if args.annihilator else DEFAULT_PENALTIES
    else:
        penalties = tuple(s.strip() for s in args.penalty.split(','))
        for sel in penalties:
            parse_selector(sel)
    if args.alpha == 'auto':
        alphas = DEFAULT_ALPHAS
    else:
        alphas = tuple(float(a) for a in args.alpha.split(','))
    return FitConfig(penalty_set=penalties, alpha_set=alphas, families=_family_list(args.family),
                     q_fraction=args.q_frac, seed=args.seed)


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument('--family', default='all',
                   help='ls, pls, ms, st, hs, a comma list of these, or all (default)')
    p.add_argument('--penalty', default='auto',
                   help='d1..d6, a1..a6, a comma list, or auto (default: d1..d6)')
    p.add_argument('--alpha', default='auto',
                   help='split fraction(s) for HS, or auto (default: 0, 0.05, ..., 1)')
    p.add_argument('--q-frac', type=float, default=None,
                   help='high-component variance uses q = floor(q_frac * p)')
    p.add_argument('--seed', type=int, default=None)
    p.add_argument('--annihilator', action='store_true',
                   help='auto penalty set a1..a6 instead of d1..d6')
    p.add_argument('--json', action='store_true', help='emit a single JSON document')


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='ordshrink', description=__doc__, allow_abbrev=False)
    sub = parser.add_subparsers(dest='verb', required=True, parser_class=_Parser)

    for verb, text in (('fit', 'fit the best estimator by estimated risk'),
                       ('compare', 'estimated risk of every family')):
        p = sub.add_parser(verb, help=text, allow_abbrev=False)
        p.add_argument('input_path')
        _add_config_flags(p)

    p = sub.add_parser('simulate', help='artificial-data experiment with known means',
                       allow_abbrev=False)
    p.add_argument('--scenario', choices=sorted(SCENARIOS), default='smooth')
    p.add_argument('--p', type=int, default=200)
    p.add_argument('--sigma', type=float, default=0.5)
    _add_config_flags(p)

    p = sub.add_parser('economy', help='signed square roots of the canonical coefficients',
                       allow_abbrev=False)
    p.add_argument('input_path')
    p.add_argument('--penalty', default='d4')
    p.add_argument('--q-frac', type=float, default=None)
    return parser


def fit_document(res: FitResult) -> dict:
    return {
        'family': res.family,
        'penalty': res.penalty,
        'alpha': res.alpha,
        'estimated_risk': float(res.estimated_risk),
        'sigma2': float(res.sigma2.sigma2),
        'q': res.sigma2.q,
        'mu_hat': [float(v) for v in res.mu_hat],
        'residuals': [float(v) for v in res.residuals],
    }


def _fit_text(res: FitResult, levels) -> List[str]:
    lines = [
        f'family\t{res.family}',
        f'penalty\t{res.penalty}',
        f'alpha\t{fmt(res.alpha)}',
        f'estimated_risk\t{fmt(res.estimated_risk)}',
        f'sigma2\t{fmt(res.sigma2.sigma2)}\t({res.sigma2.method}'
        + (f', q={res.sigma2.q})' if res.sigma2.q is not None else ')'),
        '',
        'level\tmu_hat',
    ]
    lines += [f'{fmt(s)}\t{fmt(m)}' for s, m in zip(levels, res.mu_hat)]
    return lines


def _compare_rows(report) -> List[dict]:
    return [{'family': r.family, 'penalty': r.penalty, 'alpha': r.alpha,
             'estimated_risk': float(r.estimated_risk)} for r in report]


def _csv(rows: Iterable[dict], columns: Sequence[str]) -> List[str]:
    out = [','.join(columns)]
    for row in rows:
        out.append(','.join(row[c] if isinstance(row[c], str) else fmt(row[c]) for c in columns))
    return out


def _run(args) -> List[str]:
    if args.verb == 'economy':
        layout = read_csv(args.input_path)
        cfg = FitConfig(penalty_set=(args.penalty,), q_fraction=args.q_frac)
        basis = prepare_basis(layout, args.penalty, cfg)
        return [f'{i}\t{fmt(v)}' for i, v in economy_profile(basis)]

    config = _config(args)
    if args.verb == 'simulate':
        if args.p < 3:
            raise ValueError('--p must be at least 3')
        mean = SCENARIOS[args.scenario](args.p)
        seed = 0 if args.seed is None else args.seed
        rows = [vars(r) for r in simulate_experiment(mean, args.sigma, seed, config)]
        if args.json:
            return [_json_value({'generator': GENERATOR, 'seed': seed, 'scenario': args.scenario,
                                 'p': args.p, 'sigma': args.sigma, 'rows': rows})]
        header = f'# generator={GENERATOR} seed={seed} scenario={args.scenario} p={args.p} sigma={fmt(args.sigma)}'
        return [header] + _csv(rows, ('family', 'penalty', 'alpha', 'estimated_risk', 'loss'))

    layout = read_csv(args.input_path)
    if args.verb == 'compare':
        rows = _compare_rows(compare(layout, config))
        if args.json:
            return [_json_value(rows)]
        return _csv(rows, ('family', 'penalty', 'alpha', 'estimated_risk'))

    res = fit(layout, config)
    if args.json:
        return [_json_value(fit_document(res))]
    return _fit_text(res, layout.levels)


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    """Execute one command; returns the process exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        with warnings.catch_warnings():
            warnings.simplefilter('ignore')
            lines = _run(args)
    except UsageError as exc:
        print(f'ordshrink: usage error: {exc}', file=stderr)
        return EXIT_USAGE
    except MalformedInputError as exc:
        print(f'ordshrink: {exc}', file=stderr)
        return EXIT_MALFORMED
    except DegenerateLayoutError as exc:
        print(f'ordshrink: {exc}', file=stderr)
        return EXIT_DEGENERATE
    except OSError as exc:
        print(f'ordshrink: cannot read input: {exc.strerror or exc}', file=stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f'ordshrink: {exc}', file=stderr)
        return EXIT_INVALID
    stdout.write('\n'.join(lines) + '\n')
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == '__main__':
    main()
