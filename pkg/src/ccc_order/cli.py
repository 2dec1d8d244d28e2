"""Command-line front end: ``ccc-order {order,sweep,solve-congruence,verify-lattice,realize}``.

Reports go to stdout (or ``--out``) as JSON or header-first TSV; log records go to stderr.
Exit codes: 0 on success, 1 when two computations disagree, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, NamedTuple, Optional, Sequence

from ccc_order import __version__
from ccc_order.elliptic import TorsionPoint
from ccc_order.isogeny import H2Tensor, IsogenyClass, kunneth_tensor
from ccc_order.jacobian import (
    CurvePairSpec,
    OrderResult,
    PairKind,
    decide_order,
    realize_order,
    solve_tensor_congruence,
)
from ccc_order.kummer import build_kummer_lattice, format_weight_enumerator, pullback_index_check, weight_enumerator
from ccc_order.lattice import InconsistencyError, IntegerMatrix

logger = logging.getLogger(__name__)

THREADS_ENV = "CCC_THREADS"
LOG_FORMAT = "%(name)s [%(levelname)s] %(message)s"
FORMATS = ("json", "tsv")
EXPECTED_KUMMER = {"rank": 16, "discriminant": 64, "pullback_index": 2048, "glue_index": 32}

TENSOR_HELP = "4 comma-separated integers in the basis order v0⊗w0, v0⊗w1, v1⊗w0, v1⊗w1"


class CommandOutput(NamedTuple):
    exit_code: int
    report: str


def parse_range(text: str) -> tuple[int, ...]:
    """Inclusive ``a:b`` range, or a single integer."""
    try:
        if ":" in text:
            first, last = (int(part) for part in text.split(":"))
        else:
            first = last = int(text)
    except ValueError as exc:
        raise ValueError(f"A range must look like 'a:b'. Got: {text!r}") from exc
    if first > last:
        raise ValueError(f"Empty range {text!r}")
    return tuple(range(first, last + 1))


def parse_vector(text: str, size: int) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise ValueError(f"Expected {size} comma-separated integers. Got: {text!r}") from exc
    if len(values) != size:
        raise ValueError(f"Expected {size} comma-separated integers. Got: {text!r}")
    return values


def worker_count(environ: Mapping[str, str]) -> int:
    raw = environ.get(THREADS_ENV)
    if raw is None:
        return min(32, (os.cpu_count() or 1) + 4)
    try:
        threads = int(raw)
    except ValueError:
        threads = 0
    if threads < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer. Got: {raw!r}")
    return threads


@dataclass(frozen=True)
class RunConfig:
    command: str
    pair_kind: PairKind = PairKind.NON_ISOGENOUS
    m_values: tuple[int, ...] = ()
    d_values: tuple[int, ...] = ()
    n_values: tuple[int, ...] = ()
    point: Optional[TorsionPoint] = None
    generators: tuple[tuple[int, ...], ...] = ()
    gamma: tuple[int, ...] = (1, 0)
    target: Optional[H2Tensor] = None
    modulus: Optional[int] = None
    order: Optional[int] = None
    output_format: str = "json"
    out: Optional[Path] = None
    threads: int = 1

    @classmethod
    def from_namespace(cls, args: argparse.Namespace, environ: Mapping[str, str] = os.environ) -> RunConfig:
        command = args.command
        n_values: tuple[int, ...] = ()
        if getattr(args, "n", None) is not None:
            n_values = (args.n,)
        elif getattr(args, "n_range", None):
            n_values = parse_range(args.n_range)
        if command in ("order", "sweep") and not n_values:
            raise ValueError("An order computation needs --n or --n-range.")
        if any(n < 1 for n in n_values):
            raise ValueError(f"n must be a positive integer. Got: {min(n_values)}")

        pair_kind = PairKind(getattr(args, "pair", PairKind.NON_ISOGENOUS.value))
        m_values = parse_range(args.m_range) if getattr(args, "m_range", None) else _single(getattr(args, "m", None))
        d_values = parse_range(args.d_range) if getattr(args, "d_range", None) else _single(getattr(args, "d", None))
        if command in ("order", "sweep"):
            if pair_kind is PairKind.ISOGENOUS_CM and not (m_values and d_values):
                raise ValueError("A CM pair needs --m (or --m-range) and --d (or --d-range).")
            if pair_kind is not PairKind.ISOGENOUS_CM and (m_values or d_values):
                raise ValueError(f"--m and --d only apply to --pair cm. Got --pair {pair_kind.value}")
            if command == "order" and (len(m_values) > 1 or len(d_values) > 1 or len(n_values) > 1):
                raise ValueError("Ranges are only accepted by the sweep command.")

        point = TorsionPoint.parse(args.t) if getattr(args, "t", None) else None
        if point is not None and command != "order":
            raise ValueError("--t only applies to the order command.")

        generators = tuple(parse_vector(text, 4) for text in getattr(args, "gen", None) or ())
        target = None
        modulus = None
        gamma: tuple[int, ...] = (1, 0)
        if command == "solve-congruence":
            gamma = parse_vector(args.gamma, 2)
            target = H2Tensor.parse(args.target) if args.target else kunneth_tensor(IsogenyClass.identity())
            modulus = args.modulus
            if modulus < 1:
                raise ValueError(f"--modulus must be at least 1. Got: {modulus}")

        order = getattr(args, "order", None)
        if order is not None and order < 1:
            raise ValueError(f"--order must be a positive integer. Got: {order}")

        config = cls(
            command=command,
            pair_kind=pair_kind,
            m_values=m_values,
            d_values=d_values,
            n_values=n_values,
            point=point,
            generators=generators,
            gamma=gamma,
            target=target,
            modulus=modulus,
            order=order,
            output_format=args.format,
            out=Path(args.out) if args.out else None,
            threads=worker_count(environ) if command == "sweep" else 1,
        )
        if command in ("order", "sweep"):
            # Invalid generator sets fail here, before any cell runs
            for m, d in config.cm_cells():
                config.pair_for(m, d)
        return config

    def cm_cells(self) -> list[tuple[Optional[int], Optional[int]]]:
        if self.pair_kind is not PairKind.ISOGENOUS_CM:
            return [(None, None)]
        return [(m, d) for m in self.m_values for d in self.d_values]

    def pair_for(self, m: Optional[int] = None, d: Optional[int] = None) -> CurvePairSpec:
        isogenies = [IsogenyClass(IntegerMatrix(2, 2, g)) for g in self.generators]
        if self.pair_kind is PairKind.ISOGENOUS_CM:
            assert m is not None and d is not None
            return CurvePairSpec.isogenous_cm(m, d)
        if self.pair_kind is PairKind.ISOMORPHIC_CM:
            return CurvePairSpec.isomorphic_cm(isogenies or None)
        if self.pair_kind is PairKind.ISOGENOUS_NO_CM:
            if len(isogenies) != 1:
                raise ValueError(f"--pair no-cm needs exactly one --gen matrix. Got: {len(isogenies)}")
            return CurvePairSpec.isogenous_no_cm(isogenies[0])
        if isogenies:
            raise ValueError(f"--gen does not apply to --pair {self.pair_kind.value}")
        if self.pair_kind is PairKind.ISOMORPHIC_NO_CM:
            return CurvePairSpec.isomorphic_no_cm()
        return CurvePairSpec.non_isogenous()


def _single(value: Optional[int]) -> tuple[int, ...]:
    return () if value is None else (value,)


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return str(value).lower()
    return str(value)


def _tsv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    lines = ["\t".join(header)]
    lines.extend("\t".join(_cell(value) for value in row) for row in rows)
    return "\n".join(lines)


def _json(payload: Any) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False)


ORDER_HEADER = ("pair", "m", "d", "n", "order", "method", "d_of_n")


def _order_row(result: OrderResult) -> tuple[Any, ...]:
    pair = result.pair
    return pair.kind.value, pair.m, pair.d, result.n, result.order, result.method.value, result.d_of_n


def cmd_order(config: RunConfig) -> CommandOutput:
    (m, d), n = config.cm_cells()[0], config.n_values[0]
    result = decide_order(config.pair_for(m, d), n, config.point)
    logger.info("Order %d for n=%d (%s)", result.order, n, result.method.value)
    if config.output_format == "tsv":
        return CommandOutput(0, _tsv(ORDER_HEADER, [_order_row(result)]))
    return CommandOutput(0, _json(result.to_dict()))


def cmd_sweep(config: RunConfig) -> CommandOutput:
    cells = [(m, d, n) for m, d in config.cm_cells() for n in config.n_values]

    def run(cell: tuple[Optional[int], Optional[int], int]) -> OrderResult:
        m, d, n = cell
        return decide_order(config.pair_for(m, d), n)

    logger.info("Sweeping %d cells on %d workers", len(cells), config.threads)
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        results = list(pool.map(run, cells))

    if config.output_format == "tsv":
        return CommandOutput(0, _tsv(ORDER_HEADER, [_order_row(result) for result in results]))
    return CommandOutput(0, _json([result.to_dict() for result in results]))


def cmd_solve_congruence(config: RunConfig) -> CommandOutput:
    assert config.target is not None and config.modulus is not None
    generators = [H2Tensor(*g) for g in config.generators]
    solution = solve_tensor_congruence(config.gamma, config.target, generators, config.modulus)
    payload = {
        "modulus": config.modulus,
        "gamma": list(config.gamma),
        "target": list(config.target),
        "generators": [list(g) for g in generators],
        "solvable": solution is not None,
        "solution": list(solution) if solution is not None else None,
    }
    if config.output_format == "tsv":
        rendered = ",".join(str(x) for x in solution) if solution is not None else None
        row = (config.modulus, solution is not None, rendered)
        return CommandOutput(0, _tsv(("modulus", "solvable", "solution"), [row]))
    return CommandOutput(0, _json(payload))


def cmd_verify_lattice(config: RunConfig) -> CommandOutput:
    kummer = build_kummer_lattice()
    indices = pullback_index_check(kummer)
    values = {
        "rank": kummer.rank,
        "discriminant": kummer.discriminant,
        "pullback_index": indices.pullback_index,
        "glue_index": indices.glue_index,
    }
    ok = values == EXPECTED_KUMMER and kummer.is_even()
    if not ok:
        logger.error("Kummer lattice mismatch: %s, expected %s", values, EXPECTED_KUMMER)
    report: dict[str, Any] = {**values, "weight_enumerator": format_weight_enumerator(weight_enumerator(kummer.code))}
    report["ok"] = ok
    if config.output_format == "tsv":
        return CommandOutput(int(not ok), _tsv(("check", "value"), list(report.items())))
    return CommandOutput(int(not ok), _json(report))


def cmd_realize(config: RunConfig) -> CommandOutput:
    assert config.order is not None
    pair, n = realize_order(config.order)
    result = decide_order(pair, n)
    if result.order != config.order:
        raise InconsistencyError(f"Realized order {result.order} instead of {config.order}")
    if config.output_format == "tsv":
        return CommandOutput(0, _tsv(("k",) + ORDER_HEADER, [(config.order,) + _order_row(result)]))
    return CommandOutput(0, _json({"k": config.order, "n": n, "result": result.to_dict()}))


COMMANDS = {
    "order": cmd_order,
    "sweep": cmd_sweep,
    "solve-congruence": cmd_solve_congruence,
    "verify-lattice": cmd_verify_lattice,
    "realize": cmd_realize,
}


def _add_output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=FORMATS, default="json", help="Report format.")
    parser.add_argument("--out", help="Write the report to this path instead of stdout.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logs.")


def _add_pair_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--pair",
        choices=[kind.value for kind in PairKind],
        default=PairKind.NON_ISOGENOUS.value,
        help="Kind of the pair (E1, E2).",
    )
    parser.add_argument("--m", type=int, help="CM pairs: E1 = C/(Zm + Z sqrt(d)).")
    parser.add_argument("--d", type=int, help="CM pairs: negative integer d.")
    parser.add_argument(
        "--gen",
        action="append",
        help="Hom generator as a row-major 2x2 matrix 'a,b,c,d' (row i is the image of v_i). Repeatable.",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ccc-order",
        description="Orders of elliptic constant cycle curves on Kummer surfaces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    order = subparsers.add_parser("order", help="Order of the fibre over one torsion point.")
    _add_pair_arguments(order)
    order.add_argument("--n", type=int, required=True, help="Order of the torsion point.")
    order.add_argument("--t", help="Torsion point 'a/n,b/n' of order n (default 1/n,0).")
    _add_output_arguments(order)

    sweep = subparsers.add_parser("sweep", help="Orders over ranges of m, d and n.")
    _add_pair_arguments(sweep)
    sweep.add_argument("--n", type=int, help="Single torsion order.")
    sweep.add_argument("--n-range", help="Inclusive range a:b of torsion orders.")
    sweep.add_argument("--m-range", help="Inclusive range a:b of m values.")
    sweep.add_argument("--d-range", help="Inclusive range a:b of d values, e.g. --d-range=-16:-1.")
    _add_output_arguments(sweep)

    solve = subparsers.add_parser("solve-congruence", help="Solve a tensor membership system modulo M.")
    solve.add_argument("--gamma", default="1,0", help="Class in H1(E1) as 'a,b'.")
    solve.add_argument("--target", help=f"Target tensor, {TENSOR_HELP} (default: the class of id).")
    solve.add_argument("--gen", action="append", help=f"Generator tensor, {TENSOR_HELP}. Repeatable.")
    solve.add_argument("--modulus", type=int, required=True, help="The modulus M.")
    _add_output_arguments(solve)

    verify = subparsers.add_parser("verify-lattice", help="Check rank, discriminant and indices of the Kummer lattice.")
    _add_output_arguments(verify)

    realize = subparsers.add_parser("realize", help="A fibre realizing a prescribed order.")
    realize.add_argument("--order", type=int, required=True, help="The order k to realize.")
    _add_output_arguments(realize)
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    package_logger = logging.getLogger("ccc_order")
    package_logger.handlers[:] = [handler]
    package_logger.setLevel(level)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = RunConfig.from_namespace(args)
        output = COMMANDS[config.command](config)
    except InconsistencyError as exc:
        logger.error("%s", exc)
        return 1
    except ValueError as exc:
        logger.error("%s", exc)
        return 2

    if config.out is not None:
        try:
            config.out.write_text(output.report + "\n", encoding="utf-8")
        except OSError as exc:
            logger.error("Cannot write the report to %s: %s", config.out, exc.strerror or exc)
            return 2
    else:
        print(output.report)
    return output.exit_code
