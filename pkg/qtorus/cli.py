"""
Command Line

Front end for the diagnostics: builds objects from flags or JSON files,
runs one command and emits a CSV or JSON document.

    python run_cli.py mixing --n 8 --map cat:2,1,1,1 --a 1,0 --b -2,-1 --steps 10
    python run_cli.py kernel-plot --h 0.1 --figure-convention

Exit codes: 0 success, 1 numeric check above --tolerance (or a failed
computation), 2 usage error.
"""

import argparse
import math
import re
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from . import bargmann, dynamics, quantize, theta_rep
from .documents import (
    KERNEL_HEADER,
    complex_document,
    dump_csv,
    dump_json,
    load_object,
    render_report,
    render_sector_matrix,
    report_document,
    write_output,
)
from .errors import ArgumentError, QuantumTorusError, ToleranceError, UsageError
from .operation_logger import get_logger, setup_logger
from .settings import Settings, load_settings
from .symbols import TorusSymbol
from .theta_rep import ThetaPoint
from .weyl_algebra import AlgebraElement, PlanckParameter, WeylIndex, prune, weyl_monomial

COMMANDS = ("trace", "evolve", "ergodicity", "mixing", "sector", "dft-check", "kernel-plot", "basis-check", "egorov")

# flags followed by a value; "-2,-1" must not be mistaken for an option
_VALUE_FLAGS = {
    "--n", "--map", "--a", "--b", "--theta", "--steps", "--max-steps", "--output",
    "--tolerance", "--truncation", "--grid", "--in", "--out", "--h",
}

QUANTITY_HEADER = ("quantity", "value")
COMPLEX_HEADER = ("quantity", "re", "im")
ELEMENT_HEADER = ("m", "k", "re", "im")


@dataclass
class Invocation:
    """A parsed command with its normalized options (flag name without dashes -> value)."""
    command: str
    options: Dict[str, Any] = field(default_factory=dict)

    def get(self, name: str, default: Any = None) -> Any:
        value = self.options.get(name)
        return default if value is None else value


@dataclass
class Report:
    """Outcome of execute: exit code, rendered text and the underlying document."""
    exit_code: int
    text: str
    document: Dict
    failure: Optional[ToleranceError] = None


class _Result(NamedTuple):
    document: Dict
    header: Tuple[str, ...]
    rows: List[tuple]
    failure: Optional[ToleranceError] = None


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message: str):
        match = re.search(r"(--[\w-]+)", message)
        raise UsageError(message, flag=match.group(1) if match else None)


def _automorphism(text: str) -> dynamics.ToralAutomorphism:
    kind, _, params = text.partition(":")
    try:
        if kind == "cat":
            values = [int(v) for v in params.split(",")]
            if len(values) != 4:
                raise argparse.ArgumentTypeError(f"cat map needs four integers, got {params!r}")
            return dynamics.cat_map(*values)
        if kind == "kronecker":
            values = [float(v) for v in params.split(",")]
            if len(values) != 2:
                raise argparse.ArgumentTypeError(f"kronecker map needs two shifts, got {params!r}")
            return dynamics.kronecker_map(*values)
    except ArgumentError as e:
        raise argparse.ArgumentTypeError(str(e)) from e
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"malformed map parameters {params!r}: {e}") from e
    raise argparse.ArgumentTypeError(f"map must be cat:a,b,c,d or kronecker:t1,t2, got {text!r}")


def _weyl_index(text: str) -> WeylIndex:
    try:
        m, k = (int(v) for v in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a Weyl index 'm,k', got {text!r}") from e
    return WeylIndex(m, k)


def _theta(text: str) -> ThetaPoint:
    try:
        t1, t2 = (float(v) for v in text.split(","))
        return ThetaPoint(t1, t2)
    except (ValueError, ArgumentError) as e:
        raise argparse.ArgumentTypeError(f"expected θ as 't1,t2', got {text!r}") from e


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from e
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from e
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return value


def _build_parser() -> _Parser:
    parser = _Parser(prog="qtorus", description="Quantized torus diagnostics")
    commands = parser.add_subparsers(dest="command", parser_class=_Parser)
    commands.required = True

    def command(name: str, help_text: str, *flags: str) -> _Parser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("--output", choices=("csv", "json"))
        sub.add_argument("--out", metavar="FILE")
        sub.add_argument("--verbose", action="store_true", help="echo the log to stderr")
        adders: Dict[str, Callable[[], Any]] = {
            "n": lambda: sub.add_argument("--n", type=_positive_int, help="N with h = 1/N"),
            "map": lambda: sub.add_argument("--map", type=_automorphism, help="cat:a,b,c,d or kronecker:t1,t2"),
            "a": lambda: sub.add_argument("--a", type=_weyl_index, help="Weyl index m,k"),
            "b": lambda: sub.add_argument("--b", type=_weyl_index, help="Weyl index m,k"),
            "theta": lambda: sub.add_argument("--theta", type=_theta, help="sector label t1,t2"),
            "steps": lambda: sub.add_argument("--steps", type=int),
            "max-steps": lambda: sub.add_argument("--max-steps", type=_positive_int),
            "tolerance": lambda: sub.add_argument("--tolerance", type=_positive_float),
            "truncation": lambda: sub.add_argument("--truncation", type=_positive_int),
            "grid": lambda: sub.add_argument("--grid", type=_positive_int),
            "in": lambda: sub.add_argument("--in", dest="in_file", metavar="FILE"),
            "h": lambda: sub.add_argument("--h", type=_positive_float),
            "figure-convention": lambda: sub.add_argument(
                "--figure-convention", action="store_true",
                help="plot with ℏ := h as in the published figures (library convention: ℏ = h/2π)"
            ),
        }
        for flag in flags:
            adders[flag]()
        return sub

    command("trace", "τ_ℏ of an element and its θ-averaged sector trace", "n", "a", "in")
    command("evolve", "apply α_n to an element", "n", "map", "a", "in", "steps")
    command("ergodicity", "ergodicity defect for M = 1 .. max-steps", "n", "map", "a", "in", "max-steps")
    command("mixing", "mixing correlation τ(α_n(a)b) for n = 1 .. steps", "n", "map", "a", "b", "steps")
    command("sector", "sector matrix of an element", "n", "a", "in", "theta")
    command("dft-check", "δ-comb change of basis against the DFT", "n", "theta", "truncation", "tolerance")
    command("kernel-plot", "samples of the diffraction kernel |g|²", "h", "figure-convention")
    command("basis-check", "quadrature Gram matrix of the sector basis", "n", "theta", "grid", "tolerance")
    command("egorov", "Egorov defect of a symbol", "n", "map", "a", "in")
    return parser


def _join_values(argv: Sequence[str]) -> List[str]:
    joined: List[str] = []
    tokens = list(argv)
    i = 0
    while i < len(tokens):
        token = tokens[i]
        if token in _VALUE_FLAGS and i + 1 < len(tokens):
            joined.append(f"{token}={tokens[i + 1]}")
            i += 2
            continue
        joined.append(token)
        i += 1
    return joined


# command -> required option groups; one option of each group must be present
_REQUIRED: Dict[str, Tuple[Tuple[str, ...], ...]] = {
    "trace": (("in_file", "a"),),
    "evolve": (("map",), ("in_file", "a")),
    "ergodicity": (("map",), ("in_file", "a"), ("max_steps",)),
    "mixing": (("n",), ("map",), ("a",), ("b",), ("steps",)),
    "sector": (("in_file", "a"),),
    "dft-check": (("n",),),
    "kernel-plot": (("h",),),
    "basis-check": (("n",),),
    "egorov": (("n",), ("map",), ("in_file", "a")),
}


def _flag_name(option: str) -> str:
    return "--in" if option == "in_file" else "--" + option.replace("_", "-")


def parse(argv: Sequence[str]) -> Invocation:
    """
    Parse command line arguments into an Invocation.

    Raises:
        UsageError: For unknown commands or flags, malformed values or missing required flags
    """
    namespace = _build_parser().parse_args(_join_values(argv))
    options = {k: v for k, v in vars(namespace).items() if k != "command"}
    invocation = Invocation(namespace.command, options)
    for group in _REQUIRED[invocation.command]:
        if all(invocation.options.get(name) is None for name in group):
            flags = " or ".join(_flag_name(name) for name in group)
            raise UsageError(f"{invocation.command} requires {flags}", flag=_flag_name(group[0]))
    options = invocation.options
    if options.get("a") is not None and options.get("in_file") is None and "n" in options and options["n"] is None:
        raise UsageError(f"{invocation.command} with --a requires --n", flag="--n")
    return invocation


def _tolerance_failure(name: str, deviation: float, tolerance: float) -> Optional[ToleranceError]:
    if deviation <= tolerance:
        return None
    return ToleranceError(f"{name} {deviation:.3e} exceeds tolerance {tolerance:.3e}", deviation, tolerance)


class DiagnosticsRunner:
    """Executes invocations against the library modules."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or Settings()
        self.logger = get_logger()
        self.series = bargmann.ThetaSeriesParams(self.settings.theta_tolerance, self.settings.theta_max_terms)
        self._handlers: Dict[str, Callable[[Invocation], _Result]] = {}
        self._register_handlers()

    def _register_handlers(self) -> None:
        self._handlers = {
            "trace": self._trace,
            "evolve": self._evolve,
            "ergodicity": self._ergodicity,
            "mixing": self._mixing,
            "sector": self._sector,
            "dft-check": self._dft_check,
            "kernel-plot": self._kernel_plot,
            "basis-check": self._basis_check,
            "egorov": self._egorov,
        }

    def execute(self, inv: Invocation) -> Report:
        output = inv.get("output", self.settings.output)
        self.logger.info(f"Running {inv.command} with {self._describe_options(inv)}")
        result = self._handlers[inv.command](inv)
        # tolerance failures still render; main maps them to exit code 1
        if result.failure is not None:
            self.logger.warning(f"{inv.command}: {result.failure}")
        # Render based on result type
        if "report" in result.document:
            report = result.document["report"]
            text = render_report(report, output)
            document = report_document(report)
        elif "matrix" in result.document:
            text = render_sector_matrix(result.document["matrix"], output)
            document = result.document["matrix"].to_document()
        else:
            document = result.document
            text = dump_json(document) if output == "json" else dump_csv(result.header, result.rows)
        return Report(1 if result.failure else 0, text, document, result.failure)

    @staticmethod
    def _describe_options(inv: Invocation) -> str:
        parts = []
        for name, value in sorted(inv.options.items()):
            if value is None or value is False:
                continue
            if isinstance(value, (dynamics.CatMap, dynamics.KroneckerMap)):
                value = value.describe()
            parts.append(f"{_flag_name(name)}={value}")
        return " ".join(parts) or "defaults"

    def _load(self, inv: Invocation, expected: type):
        loaded = load_object(inv.options["in_file"])
        if not isinstance(loaded, expected):
            raise UsageError(
                f"{inv.command} expects a {expected.__name__} document in --in, got {type(loaded).__name__}",
                flag="--in"
            )
        return loaded

    def _element(self, inv: Invocation) -> AlgebraElement:
        if inv.get("in_file") is not None:
            return self._load(inv, AlgebraElement)
        return weyl_monomial(inv.options["a"], PlanckParameter(inv.options["n"]))

    def _trace(self, inv: Invocation) -> _Result:
        a = self._element(inv)
        grid = theta_rep.exact_grid_size(a)
        tau = a.coefficient(0, 0)
        averaged = theta_rep.theta_averaged_trace(a, grid, workers=self.settings.workers)
        document = {
            "n": a.planck.n,
            "grid": grid,
            "trace": complex_document(tau),
            "theta_averaged_trace": complex_document(averaged),
        }
        rows = [
            ("trace", tau.real, tau.imag),
            ("theta_averaged_trace", averaged.real, averaged.imag),
        ]
        return _Result(document, COMPLEX_HEADER, rows)

    def _evolve(self, inv: Invocation) -> _Result:
        a = self._element(inv)
        evolved = dynamics.apply_automorphism(inv.options["map"], a, inv.get("steps", 1))
        evolved = prune(evolved, self.settings.prune_threshold)
        rows = [(v.m, v.k, c.real, c.imag) for v, c in sorted(evolved.terms.items())]
        return _Result(evolved.to_document(), ELEMENT_HEADER, rows)

    def _ergodicity(self, inv: Invocation) -> _Result:
        a = self._element(inv)
        report = dynamics.ergodicity_sweep(inv.options["map"], a, range(1, inv.options["max_steps"] + 1))
        return _Result({"report": report}, (), [])

    def _mixing(self, inv: Invocation) -> _Result:
        planck = PlanckParameter(inv.options["n"])
        a = weyl_monomial(inv.options["a"], planck)
        b = weyl_monomial(inv.options["b"], planck)
        steps = inv.options["steps"]
        if steps < 1:
            raise UsageError(f"--steps must be positive, got {steps}", flag="--steps")
        report = dynamics.mixing_sweep(inv.options["map"], a, b, range(1, steps + 1), workers=self.settings.workers)
        return _Result({"report": report}, (), [])

    def _sector(self, inv: Invocation) -> _Result:
        a = self._element(inv)
        matrix = theta_rep.represent(a, inv.get("theta", ThetaPoint()))
        return _Result({"matrix": matrix}, (), [])

    def _dft_check(self, inv: Invocation) -> _Result:
        planck = PlanckParameter(inv.options["n"])
        theta = inv.get("theta", ThetaPoint())
        truncation = inv.get("truncation", self.settings.truncation)
        tolerance = inv.get("tolerance", self.settings.tolerance)
        lemma = bargmann.verify_dft_lemma(theta, planck, truncation)
        recovered = bargmann.recover_change_of_basis(theta, planck, truncation)
        expected = bargmann.expected_change_of_basis(theta, planck)
        recovery = float(np.max(np.abs(recovered.entries - expected.entries)))
        failure = _tolerance_failure("DFT lemma deviation", max(lemma, recovery), tolerance)
        document = {
            "n": planck.n,
            "theta": [theta.theta1, theta.theta2],
            "truncation": truncation,
            "lemma_deviation": lemma,
            "recovery_deviation": recovery,
            "tolerance": tolerance,
            "passed": failure is None,
        }
        rows = [("lemma_deviation", lemma), ("recovery_deviation", recovery), ("tolerance", tolerance)]
        return _Result(document, QUANTITY_HEADER, rows, failure)

    def _kernel_plot(self, inv: Invocation) -> _Result:
        h = inv.options["h"]
        figure = bool(inv.get("figure_convention", False))
        r, values = bargmann.diffraction_profile(h, figure)
        _, other = bargmann.diffraction_profile(h, not figure)
        document = {
            "h": h,
            "figure_convention": figure,
            "hbar": h if figure else h / (2.0 * math.pi),
            "peak": float(np.max(values)),
            "r": r.tolist(),
            "g_abs2": values.tolist(),
            "g_abs2_other_convention": other.tolist(),
        }
        rows = list(zip(r.tolist(), values.tolist()))
        return _Result(document, KERNEL_HEADER, rows)

    def _basis_check(self, inv: Invocation) -> _Result:
        planck = PlanckParameter(inv.options["n"])
        theta = inv.get("theta", ThetaPoint())
        grid = inv.get("grid", self.settings.grid)
        tolerance = inv.get("tolerance", self.settings.tolerance)
        gram = bargmann.basis_gram_matrix(planck, theta, grid, self.series)
        gram_deviation = float(np.max(np.abs(gram.entries - np.eye(planck.n))))
        _, _, z, _ = bargmann.cell_nodes(8, planck)
        wrap = max(bargmann.measure_wrap_identity(m, theta, planck, z, self.series) for m in range(planck.n))
        norms = bargmann.monomial_norms(4, planck, self.settings.hermite_nodes)
        norm_deviation = max(abs(measured - expected) / expected for _, measured, expected in norms)
        failure = _tolerance_failure("Gram matrix deviation", gram_deviation, tolerance)
        document = {
            "n": planck.n,
            "theta": [theta.theta1, theta.theta2],
            "grid": grid,
            "gram_deviation": gram_deviation,
            "wrap_deviation": wrap,
            "monomial_norm_deviation": norm_deviation,
            "tolerance": tolerance,
            "passed": failure is None,
        }
        rows = [
            ("gram_deviation", gram_deviation),
            ("wrap_deviation", wrap),
            ("monomial_norm_deviation", norm_deviation),
            ("tolerance", tolerance),
        ]
        return _Result(document, QUANTITY_HEADER, rows, failure)

    def _egorov(self, inv: Invocation) -> _Result:
        planck = PlanckParameter(inv.options["n"])
        if inv.get("in_file") is not None:
            symbol = self._load(inv, TorusSymbol)
        else:
            symbol = quantize.mode(*inv.options["a"])
        alpha = inv.options["map"]
        defect = quantize.egorov_defect(symbol, alpha, planck)
        document = {"n": planck.n, "map": alpha.describe(), "defect": defect}
        return _Result(document, QUANTITY_HEADER, [("defect", defect)])


def execute(inv: Invocation, settings: Optional[Settings] = None) -> Report:
    """Run an invocation; usage problems raise UsageError, others QuantumTorusError."""
    return DiagnosticsRunner(settings).execute(inv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point. Returns the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    settings = load_settings()
    try:
        invocation = parse(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2

    logger = setup_logger(settings.log_file, settings.log_level, console=bool(invocation.get("verbose", False)))
    try:
        report = execute(invocation, settings)
    except UsageError as e:
        logger.error(f"Usage error in {invocation.command}: {e}")
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except QuantumTorusError as e:
        logger.error(f"{invocation.command} failed: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1

    write_output(report.text, invocation.get("out"))
    if report.failure is not None:
        print(f"check failed: {report.failure}", file=sys.stderr)
    return report.exit_code
