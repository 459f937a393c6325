import logging
import sys
from typing import Callable, Dict, List, Optional

import configargparse
from dotenv import load_dotenv

from src import __version__
from src.classifier.dichotomy_classifier import ClassificationParams, DichotomyClassifier
from src.convex_opt.gauge_norm import GaugeNorm
from src.convex_opt.mazur_approximator import MazurApproximator
from src.convex_opt.ptak_game import CHAIN_MODES, PtakGame, SetFamily
from src.convex_opt.stability_probe import StabilityProbe
from src.core.eval_matrix import EvalMatrix, ThresholdPair, format_rational, to_rational
from src.core.exceptions import (
    CertificateError,
    InvalidWitnessError,
    MatrixParseError,
    MatrixValidationError,
    ParameterError,
    PivotLimitError,
    ReportIntegrityError,
    WitnessIndexError,
    WitnessShapeError,
)
from src.core.metrics import SearchMetrics
from src.core.settings import load_config, section, setup_logging
from src.core.witnesses import check_staircase
from src.definable_approx.type_approximator import TypeApproximator
from src.order_analysis.defect_profiler import DefectProfiler
from src.ramsey_extract.ramsey_extractor import PairColoring, RamseyExtractor
from src.ramsey_extract.rosenthal_dichotomy import Inconclusive, RosenthalDichotomy
from .generators import GENERATOR_KINDS, RANDOM_DISTRIBUTIONS, generate
from .matrix_io import matrix_to_csv_text, read_matrix_csv
from .report_writer import build_report, load_json, verify_report, write_json

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PARSE = 2
EXIT_INVALID_INPUT = 3
EXIT_INCONCLUSIVE = 4

logger = logging.getLogger(__name__)


def _field(payload: Dict, name: str, default=None, required: bool = True):
    if name in payload:
        return payload[name]
    if required and default is None:
        raise MatrixParseError(f"input JSON is missing the field {name!r}")
    return default


def _row_index(M: EvalMatrix, ref) -> int:
    """A row given by 0-based index or by label."""
    if isinstance(ref, str):
        if ref in M.row_labels:
            return M.row_labels.index(ref)
        raise ParameterError(f"unknown row label {ref!r}")
    return int(ref)


def _single_threshold(args) -> ThresholdPair:
    if not args.thresholds or len(args.thresholds) != 1:
        raise ParameterError("this command takes exactly one --thresholds s,r")
    return ThresholdPair.parse(args.thresholds[0])


def _with_budget(config: Dict, name: str, budget: Optional[int]) -> Dict:
    result = section(config, name)
    if budget is not None:
        result['node_budget'] = budget
    return result


def _versioned(payload: Dict) -> Dict:
    payload["version"] = __version__
    return payload


def cmd_gen(args, config: Dict, metrics: SearchMetrics) -> int:
    M = generate(args.kind, args.sizes, seed=args.seed, dist=args.dist, value=args.value)
    text = matrix_to_csv_text(M)
    if args.out:
        with open(args.out, "w", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_analyze(args, config: Dict, metrics: SearchMetrics) -> int:
    M = read_matrix_csv(args.input, args.bound)
    run_config = dict(config)
    run_config['order_analysis'] = _with_budget(config, 'order_analysis', args.budget)
    run_config['independence_analysis'] = _with_budget(config, 'independence_analysis', args.budget)
    run_config['classifier'] = section(config, 'classifier')
    if args.workers is not None:
        run_config['classifier']['workers'] = args.workers

    thresholds = tuple(ThresholdPair.parse(t) for t in args.thresholds) if args.thresholds else None
    params = ClassificationParams.from_config(
        run_config['classifier'],
        thresholds=thresholds,
        k_stable=args.k_stable,
        d_nip=args.d_nip,
        gap_min=to_rational(args.gap_min) if args.gap_min is not None else None,
        k_max=args.k_max,
        d_max=args.d_max,
    )
    report = DichotomyClassifier(run_config, metrics).classify(M, params)
    payload = build_report(report)
    verify_report(M, payload)
    write_json(payload, args.out)
    if args.metrics_out:
        metrics.write(args.metrics_out)
    return EXIT_INCONCLUSIVE if report.inconclusive else EXIT_OK


def cmd_defect(args, config: Dict, metrics: SearchMetrics) -> int:
    M = read_matrix_csv(args.input, args.bound)
    k_max = args.k_max or min(M.n_rows, M.n_cols)
    profile = DefectProfiler(_with_budget(config, 'order_analysis', args.budget), metrics).defect_profile(M, k_max)
    for entry in profile.entries:
        if entry.witness is not None and not check_staircase(M, entry.witness):
            raise ReportIntegrityError(f"defect witness for k={entry.k} fails re-verification")
    write_json(_versioned({"matrix": M.to_dict(), "profile": profile.to_dict()}), args.out)
    return EXIT_OK if profile.exhausted else EXIT_INCONCLUSIVE


def cmd_dichotomy(args, config: Dict, metrics: SearchMetrics) -> int:
    M = read_matrix_csv(args.input, args.bound)
    t = _single_threshold(args)
    engine = RosenthalDichotomy(section(config, 'independence_analysis'), metrics)
    result = engine.rosenthal_dichotomy(M, t, to_rational(args.epsilon), args.want_cauchy, args.want_indep,
                                        args.budget)
    payload = _versioned({"matrix": M.to_dict(), "thresholds": t.to_dict(), "result": result.to_dict()})
    write_json(payload, args.out)
    if isinstance(result, Inconclusive) and not result.exhausted:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_probe(args, config: Dict, metrics: SearchMetrics) -> int:
    M = read_matrix_csv(args.input, args.bound)
    t = _single_threshold(args)
    probe_config = section(config, 'convex_opt')
    probe_config['node_budget'] = args.budget or section(config, 'order_analysis').get('node_budget', 10_000_000)
    report = StabilityProbe(probe_config, metrics).conv_stability_probe(M, t, args.k, args.samples, args.seed)
    write_json(_versioned({"matrix": M.to_dict(), "thresholds": t.to_dict(), "probe": report.to_dict()}), args.out)
    exhausted = report.base.exhausted and report.extended.exhausted
    return EXIT_OK if exhausted else EXIT_INCONCLUSIVE


def cmd_ptak(args, config: Dict, metrics: SearchMetrics) -> int:
    payload = load_json(args.input)
    fam = SetFamily.of(_field(payload, "ground"), _field(payload, "members"))
    game = PtakGame(section(config, 'convex_opt'), metrics)
    solution = game.ptak_value(fam)
    result = {"family": fam.to_dict(), "game": solution.to_dict()}
    if args.epsilon is not None:
        epsilon = to_rational(args.epsilon)
        mean = game.admissible_mean(fam, epsilon)
        result["admissible_mean"] = mean.to_dict() if mean is not None else None
    if args.chain is not None:
        chain = game.ptak_chain_search(fam, args.chain, args.mode)
        result["chain"] = chain.to_dict() if chain is not None else None
    write_json(_versioned(result), args.out)
    return EXIT_OK


def cmd_mazur(args, config: Dict, metrics: SearchMetrics) -> int:
    M = read_matrix_csv(args.matrix, args.bound)
    payload = load_json(args.input)
    seq = [_row_index(M, ref) for ref in _field(payload, "sequence")]
    target = [to_rational(v) for v in _field(payload, "target")]
    tail = int(_field(payload, "tail", default=0, required=False))
    approximator = MazurApproximator(section(config, 'convex_opt'), metrics)
    result = approximator.mazur_approx(M, seq, target, tail)
    cesaro = approximator.cesaro_distance(M, seq, target, tail)
    write_json(_versioned({"mazur": result.to_dict(), "cesaro_distance": format_rational(cesaro)}), args.out)
    return EXIT_OK


def cmd_gauge(args, config: Dict, metrics: SearchMetrics) -> int:
    payload = load_json(args.input)
    result = GaugeNorm(section(config, 'convex_opt'), metrics).gauge_norm(
        _field(payload, "generators"), _field(payload, "target")
    )
    write_json(_versioned({"gauge": result.to_dict()}), args.out)
    return EXIT_OK


def cmd_approx(args, config: Dict, metrics: SearchMetrics) -> int:
    M = read_matrix_csv(args.matrix, args.bound)
    payload = load_json(args.input)
    rows = payload.get("rows")
    A_rows = [_row_index(M, ref) for ref in rows] if rows is not None else None
    cap = payload.get("cap")
    approx_config = section(config, 'definable_approx')
    result = TypeApproximator(approx_config, metrics).approximate(
        M, A_rows, _field(payload, "target"), to_rational(_field(payload, "epsilon")),
        int(cap) if cap is not None else None,
    )
    write_json(_versioned({"approximation": result.to_dict()}), args.out)
    return EXIT_OK


def cmd_ramsey(args, config: Dict, metrics: SearchMetrics) -> int:
    if args.input:
        payload = load_json(args.input)
        coloring = PairColoring.from_edges(int(_field(payload, "n")), _field(payload, "edges"))
    elif args.coloring == "pentagon":
        coloring = PairColoring.pentagon()
    elif args.coloring == "random":
        coloring = PairColoring.random(args.n, args.seed)
    else:
        coloring = PairColoring.constant(args.n)
    result = RamseyExtractor(section(config, 'ramsey_extract')).ramsey_pairs(coloring, args.m)
    write_json(_versioned({"n": coloring.n, "m": args.m, "result": result.to_dict()}), args.out)
    return EXIT_OK


def build_parser() -> configargparse.ArgParser:
    parser = configargparse.ArgParser(
        prog='dichotomy-lab',
        description='Finite-scale stability, NIP and Banach-space dichotomy analysis of evaluation matrices.',
    )
    parser.add_argument('--config-path', env_var='DICHOTOMY_LAB_CONFIG_PATH', default=None,
                        help='YAML configuration file')
    parser.add_argument('--log-level', env_var='DICHOTOMY_LAB_LOG_LEVEL', default=None)
    parser.add_argument('--version', action='version', version=f'dichotomy-lab {__version__}')

    common = configargparse.ArgParser(add_help=False)
    common.add_argument('--out', default=None, help='output path (stdout when omitted)')
    common.add_argument('--format', choices=['json'], default='json')
    common.add_argument('--budget', type=int, env_var='DICHOTOMY_LAB_BUDGET', default=None,
                        help='node budget for combinatorial searches')
    common.add_argument('--bound', default=None, help='declared sup bound C of the matrix')
    common.add_argument('--thresholds', action='append', default=None, metavar='S,R')
    common.add_argument('--seed', type=int, default=0)

    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True

    gen = subparsers.add_parser('gen', parents=[common], help='emit a synthetic matrix as CSV')
    gen.add_argument('kind', choices=GENERATOR_KINDS)
    gen.add_argument('sizes', type=int, nargs='+')
    gen.add_argument('--dist', choices=RANDOM_DISTRIBUTIONS, default='grid')
    gen.add_argument('--value', default='0', help='entry of the constant generator')
    gen.set_defaults(handler=cmd_gen)

    analyze = subparsers.add_parser('analyze', parents=[common], help='classify a matrix')
    analyze.add_argument('input')
    analyze.add_argument('--k-stable', type=int, default=None)
    analyze.add_argument('--d-nip', type=int, default=None)
    analyze.add_argument('--gap-min', default=None)
    analyze.add_argument('--k-max', type=int, default=None)
    analyze.add_argument('--d-max', type=int, default=None)
    analyze.add_argument('--workers', type=int, env_var='DICHOTOMY_LAB_WORKERS', default=None)
    analyze.add_argument('--metrics-out', default=None, help='Prometheus text file for search counters')
    analyze.set_defaults(handler=cmd_analyze)

    defect = subparsers.add_parser('defect', parents=[common], help='double-limit defect profile')
    defect.add_argument('input')
    defect.add_argument('--k-max', type=int, default=None)
    defect.set_defaults(handler=cmd_defect)

    dichotomy = subparsers.add_parser('dichotomy', parents=[common], help='finite Cauchy/independent dichotomy')
    dichotomy.add_argument('input')
    dichotomy.add_argument('--epsilon', required=True)
    dichotomy.add_argument('--want-cauchy', type=int, required=True)
    dichotomy.add_argument('--want-indep', type=int, required=True)
    dichotomy.set_defaults(handler=cmd_dichotomy)

    probe = subparsers.add_parser('probe', parents=[common], help='convex-hull stability probe')
    probe.add_argument('input')
    probe.add_argument('--k', type=int, required=True)
    probe.add_argument('--samples', type=int, default=100)
    probe.set_defaults(handler=cmd_probe)

    ptak = subparsers.add_parser('ptak', parents=[common], help='convex-mean game value of a set family')
    ptak.add_argument('--input', required=True)
    ptak.add_argument('--epsilon', default=None)
    ptak.add_argument('--chain', type=int, default=None)
    ptak.add_argument('--mode', choices=CHAIN_MODES, default='contained')
    ptak.set_defaults(handler=cmd_ptak)

    mazur = subparsers.add_parser('mazur', parents=[common], help='Chebyshev averaging over a row tail')
    mazur.add_argument('matrix')
    mazur.add_argument('--input', required=True)
    mazur.set_defaults(handler=cmd_mazur)

    gauge = subparsers.add_parser('gauge', parents=[common], help='Minkowski gauge over generators')
    gauge.add_argument('--input', required=True)
    gauge.set_defaults(handler=cmd_gauge)

    approx = subparsers.add_parser('approx', parents=[common], help='definable approximation of a target')
    approx.add_argument('matrix')
    approx.add_argument('--input', required=True)
    approx.set_defaults(handler=cmd_approx)

    ramsey = subparsers.add_parser('ramsey', parents=[common], help='monochromatic subset extraction')
    ramsey.add_argument('--n', type=int, default=6)
    ramsey.add_argument('--m', type=int, default=3)
    ramsey.add_argument('--coloring', choices=['constant', 'pentagon', 'random'], default='constant')
    ramsey.add_argument('--input', default=None)
    ramsey.set_defaults(handler=cmd_ramsey)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config_path)
    except FileNotFoundError as e:
        sys.stderr.write(f"{str(e)}\n")
        return EXIT_PARSE
    app = section(config, 'app')
    if args.log_level:
        app['log_level'] = args.log_level
    setup_logging(app)

    metrics = SearchMetrics()
    handler: Callable = args.handler
    try:
        return handler(args, config, metrics)
    except (MatrixParseError, FileNotFoundError, IsADirectoryError) as e:
        logger.error(f"{args.command} failed to read its input: {str(e)}")
        sys.stderr.write(f"parse error: {str(e)}\n")
        return EXIT_PARSE
    except (MatrixValidationError, ParameterError, WitnessShapeError, WitnessIndexError, InvalidWitnessError) as e:
        logger.error(f"{args.command} rejected its input: {str(e)}")
        sys.stderr.write(f"invalid input: {str(e)}\n")
        return EXIT_INVALID_INPUT
    except PivotLimitError as e:
        logger.error(f"{args.command} stopped at the pivot guard: {str(e)}")
        sys.stderr.write(f"inconclusive: {str(e)}\n")
        return EXIT_INCONCLUSIVE
    except (CertificateError, ReportIntegrityError) as e:
        logger.error(f"{args.command} failed an internal check: {str(e)}")
        sys.stderr.write(f"internal error: {str(e)}\n")
        return EXIT_INTERNAL


if __name__ == '__main__':
    sys.exit(main())
