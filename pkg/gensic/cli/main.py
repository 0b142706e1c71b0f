# Command line front end.
#
# Exit codes:
#   0  success, audits consistent
#   1  statistical soft failure (simulation outside 3 standard errors)
#   2  usage error (bad flags, unsupported dimension, unreadable files)
#   3  invalid input (invalid POVM, failed construction, not IC, ...)
#   4  theorem consistency violated
import sys
import json
import logging
import argparse

import numpy as np

from gensic import config, lie, measurements, sim, tomo
from gensic.exceptions import (ConfigError, ConstructionError,
                               DimensionMismatch, FormatError, InvalidDimension,
                               InvalidPovm, InvalidState, NotInformationallyComplete,
                               NotMinimal, RankDeficientBasis, SmallProbability,
                               UsageError)
from gensic.opspace import purity

EXIT_OK = 0
EXIT_SOFT_FAIL = 1
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_INCONSISTENT = 4

USAGE_ERRORS = (UsageError, InvalidDimension, FormatError, ConfigError,
                DimensionMismatch)
INPUT_ERRORS = (InvalidPovm, InvalidState, ConstructionError,
                NotInformationallyComplete, NotMinimal, SmallProbability,
                RankDeficientBasis)

log = logging.getLogger('gensic')


def _emit(data, as_json):
    if as_json:
        print(json.dumps(data, indent=2))
        return
    for key, value in data.items():
        if isinstance(value, dict):
            print(f'{key}:')
            for k, v in value.items():
                print(f'  {k:<28} {v}')
        elif isinstance(value, list):
            continue
        else:
            print(f'{key:<30} {value}')


def _grid(text):
    try:
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'Expected comma separated numbers, '
                                         f'got {text!r}.')


def _state(args, d):
    if args.state == 'mixed':
        return np.eye(d, dtype=complex) / d
    if args.state == 'file':
        if not args.state_file:
            raise UsageError('--state file requires --state-file FILE.')
        rho = measurements.load_state(args.state_file)
        if rho.shape != (d, d):
            raise DimensionMismatch(f'State file holds a d={rho.shape[0]} '
                                    f'state, measurement has d={d}.')
        return rho
    return sim.haar_state(d, args.seed)


def cmd_construct(args):
    fiducial = None
    if args.fiducial:
        fid_dim, fiducial = measurements.load_fiducial(args.fiducial)
        if fid_dim != args.dim:
            raise UsageError(f'Fiducial file is for d={fid_dim}, not '
                             f'd={args.dim}.')
    params = {'dim': args.dim, 'x': args.x, 'seed': args.seed,
              'fiducial': fiducial}
    povm = measurements.construct(args.family, params)
    measurements.save_povm(povm, args.out)
    report = measurements.purity_report(povm)
    print(f'Wrote {povm.n} outcomes ({povm.label}) to {args.out}')
    print(f'purity: {report.average:.12g}')
    print(f'outcome purity range: {min(report.per_outcome):.12g} .. '
          f'{max(report.per_outcome):.12g}')
    return EXIT_OK


def cmd_classify(args):
    povm = measurements.load_povm(args.infile)
    diag = tomo.classify(povm)
    data = diag.to_dict()
    if args.json:
        _emit(data, True)
        return EXIT_OK
    print(f'{povm.label or args.infile}: d={povm.dim}, {povm.n} outcomes, '
          f'average purity {diag.average_purity:.12g}')
    for name, verdict in diag.verdicts().items():
        print(f'  {name:<18} {str(verdict).lower()}')
    if diag.is_tight_ic:
        print(f'  {"alpha, beta":<18} {diag.tight_alpha:.12g}, '
              f'{diag.tight_beta:.12g}')
    if diag.quasi_balanced_method:
        print(f'  {"quasi-balance by":<18} {diag.quasi_balanced_method}')
    print('residuals:')
    for name, value in data['residuals'].items():
        print(f'  {name:<30} {value}')
    return EXIT_OK


def cmd_mse(args):
    povm = measurements.load_povm(args.infile)
    rho = _state(args, povm.dim)
    theta = tomo.canonical_reconstruction(povm)
    state_purity = purity(rho)
    data = {
        'state_purity': state_purity,
        'canonical_scaled_mse': tomo.scaled_mse(povm, theta, rho),
        'canonical_average_mse': tomo.average_scaled_mse(povm, theta,
                                                         state_purity),
        'frame_inverse_trace': tomo.frame_inverse_trace(povm),
        'tight_bound': tomo.tight_bound(
            povm.dim, measurements.average_purity(povm), state_purity),
    }
    try:
        data['optimal_scaled_mse'] = tomo.optimal_mse(povm, rho)
    except SmallProbability as e:
        data['optimal_scaled_mse'] = None
        log.warning(f'optimal MSE unavailable: {e}')
    _emit(data, args.json)
    return EXIT_OK


def cmd_simulate(args):
    povm = measurements.load_povm(args.infile)
    rho = _state(args, povm.dim)
    e = sim.Experiment(povm, rho, args.shots, args.reps, args.seed,
                       'optimal' if args.optimal else 'canonical')
    result = sim.run(e, args.workers)
    if args.csv:
        sim.write_csv([result.csv_row()], sys.stdout)
    elif args.json:
        _emit(result.to_dict(), True)
    else:
        print(f'analytic scaled MSE : {result.analytic_scaled_mse:.12g}')
        print(f'empirical scaled MSE: {result.empirical_scaled_mse:.12g} '
              f'+- {result.standard_error:.6g}')
        print(f'z-score             : {result.z_score:.3f}')
        print(result.bias_note)
    return EXIT_OK if result.within_tolerance else EXIT_SOFT_FAIL


def cmd_sweep(args):
    base = measurements.load_povm(args.infile)
    rho = _state(args, base.dim)
    rows = sim.sweep(base, args.grid, rho, args.shots, args.reps, args.seed,
                     mode=args.mode,
                     reconstruction='optimal' if args.optimal else 'canonical',
                     workers=args.workers)
    if args.out:
        with open(args.out, 'w', newline='') as f:
            sim.write_csv(rows, f)
        print(f'Wrote {len(rows)} rows to {args.out}')
    else:
        sim.write_csv(rows, sys.stdout)
    return EXIT_OK


def cmd_lie_check(args):
    povm = measurements.load_povm(args.infile)
    tensor = lie.structure_constants(povm.outcomes)
    report = lie.antisymmetry_violation(tensor)
    if args.out:
        with open(args.out, 'w') as f:
            json.dump(tensor.to_dict(), f)
    data = {'label': povm.label,
            'basis_size': tensor.n,
            'expansion_residual': tensor.expansion_residual,
            'max_real_part': tensor.max_real_part(),
            **report.to_dict()}
    _emit(data, args.json)
    return EXIT_OK


def cmd_audit(args):
    povm = measurements.load_povm(args.infile)
    if args.theorem == 1:
        record = tomo.theorem1_audit(povm, args.purity)
    elif args.theorem == 2:
        record = tomo.theorem2_audit(povm)
    elif args.theorem == 3:
        record = tomo.theorem3_audit(povm)
    else:
        record = lie.theorem4_audit(povm)
    _emit(record.to_dict(), True)
    return EXIT_OK if record.consistent else EXIT_INCONSISTENT


def build_parser():
    descrip = ('Construct informationally complete quantum measurements '
               '(SICs, generalized SICs, complete MUB sets, the qubit cube and '
               'random minimal IC measurements), classify them, evaluate '
               'tomographic mean squared errors, simulate tomography and audit '
               'the characterizations of generalized SICs.\n')
    parser = argparse.ArgumentParser(prog='gensic', description=descrip)
    parser.add_argument('-v',
                        '--verbose',
                        action='store_true',
                        help='Log construction and simulation progress.')
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config',
                        type=str,
                        help='YAML file overriding default tolerances. The '
                        'verdict threshold may also be set through the '
                        f'environment variable {config.TOLERANCE_ENVVAR}.')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('construct', parents=[common],
                       help='Build a measurement and write it to a file.')
    p.add_argument('--family', required=True, choices=measurements.FAMILIES)
    p.add_argument('--dim', required=True, type=int)
    p.add_argument('--x', type=float,
                   help='Depolarizing parameter of gen-sic-depol, in (0, 1].')
    p.add_argument('--seed', type=int,
                   help='Seed of gen-sic-simplex and random.')
    p.add_argument('--fiducial', type=str,
                   help='JSON fiducial file for sic and gen-sic-depol.')
    p.add_argument('--out', required=True, type=str)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser('classify', parents=[common],
                       help='Report IC, tight IC, balance and generalized SIC '
                       'verdicts.')
    p.add_argument('--in', dest='infile', required=True, type=str)
    p.add_argument('--json', action='store_true')
    p.set_defaults(func=cmd_classify)

    def add_state(p):
        p.add_argument('--state', choices=('pure', 'mixed', 'file'),
                       default='pure',
                       help='Haar random pure state (seeded), the completely '
                       'mixed state, or a state read from --state-file.')
        p.add_argument('--state-file', type=str)
        p.add_argument('--seed', type=int, default=0)

    p = sub.add_parser('mse', parents=[common],
                       help='Evaluate the scaled MSE formulas at a state.')
    p.add_argument('--in', dest='infile', required=True, type=str)
    add_state(p)
    p.add_argument('--json', action='store_true')
    p.set_defaults(func=cmd_mse)

    def add_simulation(p):
        p.add_argument('--in', dest='infile', required=True, type=str)
        add_state(p)
        p.add_argument('--shots', required=True, type=int)
        p.add_argument('--reps', required=True, type=int)
        p.add_argument('--optimal', action='store_true',
                       help='Use the optimal reconstruction at the true '
                       'state instead of the canonical one.')
        p.add_argument('--workers', type=int, default=1)

    p = sub.add_parser('simulate', parents=[common],
                       help='Monte Carlo tomography against the analytic '
                       'scaled MSE.')
    add_simulation(p)
    p.add_argument('--csv', action='store_true')
    p.add_argument('--json', action='store_true')
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser('sweep', parents=[common],
                       help='Simulate depolarized versions of a measurement '
                       'over a grid and write CSV.')
    add_simulation(p)
    p.add_argument('--mode', choices=('x', 'purity'), default='x')
    p.add_argument('--grid', required=True, type=_grid,
                   help='Comma separated depolarizing weights or purities.')
    p.add_argument('--out', type=str)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('lie-check', parents=[common],
                       help='Structure constants of the outcomes and their '
                       'antisymmetry.')
    p.add_argument('--in', dest='infile', required=True, type=str)
    p.add_argument('--out', type=str, help='Write the structure tensor here.')
    p.add_argument('--json', action='store_true')
    p.set_defaults(func=cmd_lie_check)

    p = sub.add_parser('audit', parents=[common],
                       help='Check a theorem on a measurement; exit 4 if the '
                       'verdicts disagree.')
    p.add_argument('--in', dest='infile', required=True, type=str)
    p.add_argument('--theorem', required=True, type=int, choices=(1, 2, 3, 4))
    p.add_argument('--purity', type=float, default=1.0,
                   help='State purity for the theorem 1 orbit average.')
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        config.configure(args.config)
        code = args.func(args)
    except USAGE_ERRORS as e:
        print(f'{parser.prog}: error: {e}', file=sys.stderr)
        code = EXIT_USAGE
    except INPUT_ERRORS as e:
        residual = getattr(e, 'residual', None)
        extra = f' (residual {residual:.3e})' if residual is not None else ''
        print(f'{parser.prog}: invalid input: {e}{extra}', file=sys.stderr)
        code = EXIT_INVALID
    sys.exit(code)
