"""Experiment specifications, parameter schemas and runners."""

from __future__ import annotations

import json
import logging
import os.path
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from .continuation import continuation_count
from .exceptions import AsdBoundaryError, CertificateError, ExperimentValidationError
from .integrate import (
    FiberRegion,
    ToyConfig,
    angular_factor_audit,
    concentration_contrast,
    fiber_limit_report,
    integrate_Ip_mc,
    integrate_Ip_reduced,
    ip_closed_form,
    limit_order_study,
    toy_wedge_integral,
    truncated_fiber_integral,
    worker_count,
)
from .intersect import (
    GENERIC,
    ProblemConfig,
    boundary_report,
    count_degenerate,
    count_model_intersections,
    count_with_holonomy_model,
    degenerate_background,
    expected_count,
    sample_generic_background,
    sensitivity_scan,
)
from .reducible import decompose_rank1
from .reporting import ExperimentReport, render_report, render_summary
from .serialization import check_schema_version, dumps, write_csv
from .types import SCHEMA_VERSION

if TYPE_CHECKING:
    from typing import Any, Callable, Mapping, Sequence

    from .intersect import CountReport

    Table = tuple[Sequence[str], list[list[Any]]]

logger = logging.getLogger(__name__)


def float_list(value: Any) -> list[float]:
    """Comma-separated string or sequence of numbers."""
    if isinstance(value, str):
        items = [item for item in value.split(",") if item.strip()]
    elif isinstance(value, (list, tuple)):
        items = list(value)
    else:
        raise ValueError(f"expected a list of numbers, got {value!r}")
    if not items:
        raise ValueError("expected at least one number")
    return [float(item) for item in items]


def positive_int(value: Any) -> int:
    """Whole number of at least one; float notation such as ``1e7`` is accepted."""
    number = float(value)
    if not (number.is_integer() and number >= 1):
        raise ValueError(f"expected a positive whole number, got {value!r}")
    return int(number)


class Param(NamedTuple):
    name: str
    type: Callable[[Any], Any]
    default: Any
    choices: tuple[str, ...] | None = None
    help: str = ""


LENGTH_PARAMS = (
    Param("L", float, 1e-2, help="half-separation of the marked points, in patch units"),
    Param("K", float, 1.0, help="scale bound coefficient"),
    Param("alpha", float, 1.0, help="scale bound exponent"),
)

SCHEMAS: dict[str, tuple[Param, ...]] = {
    "reduce": (Param("matrix", float_list, [3.0, 0.2, 0.0, 0.1, 1.0, 0.3, 0.0, 0.2, 0.4], help="nine entries, row major"),),
    "count": LENGTH_PARAMS
    + (
        Param("n_backgrounds", positive_int, 1),
        Param("background", str, "generic", ("generic", "degenerate")),
    ),
    "degenerate": (
        Param("L", float, 1e-2),
        Param("K", float, 1.0),
        Param("alpha", float, 1.5),
        Param("splitting", float, 1.0),
    ),
    "holonomy": LENGTH_PARAMS + (Param("strength", float, 0.05),),
    "continuation": (
        Param("L", float, 1e-2),
        Param("n_backgrounds", positive_int, 1),
        Param("t_steps", positive_int, 5),
    ),
    "sensitivity": (
        Param("eps", float_list, [1e-4, 1e-3, 1e-2]),
        Param("L_values", float_list, [1e-2, 3e-3, 1e-3]),
    ),
    "toy": (
        Param("L", float, 1.0),
        Param("x_max", float, 1e9),
        Param("lambda_max", float, 1e9),
    ),
    "ip": (
        Param("method", str, "reduced", ("reduced", "mc", "closed")),
        Param("n_samples", positive_int, 10**7, help="Monte Carlo sample count, plain or float notation (1e7)"),
        Param("inner", str, "quad", ("quad", "residues")),
    ),
    "fiber": (
        Param("L_values", float_list, [0.1, 0.03, 0.01]),
        Param("n0", float, 1.0),
    ),
    "concentration": (Param("L_values", float_list, [1e-2, 3e-3, 1e-3]),),
    "limits": (
        Param("lambda0_values", float_list, [1e-1, 1e-2, 1e-3]),
        Param("L", float, 0.1),
        Param("alpha_prime", float, 0.5),
    ),
    "audit": (Param("n_samples", positive_int, 2**26, help="sample count, plain or float notation (1e6)"),),
    "report": (Param("L", float, 1e-2),),
}

COMMAND_HELP = {
    "reduce": "reducible decompositions of a 3x3 curvature matrix",
    "count": "signed count of reducible configurations",
    "degenerate": "count for a background with sigma1 = sigma2 at the origin",
    "holonomy": "count with a synthetic holonomy model",
    "continuation": "track the count through the interpolated family",
    "sensitivity": "fitted displacement exponents",
    "toy": "half-plane wedge integral",
    "ip": "fiber integral I_p",
    "fiber": "truncated fiber integrals over the exhaustion sets",
    "concentration": "scale concentration of solutions against the integrand",
    "limits": "order of limits in the fiber integral",
    "audit": "Monte Carlo audit of the sphere-area factors",
    "report": "headline boundary and fiber ratios",
}


@dataclass
class ExperimentSpec:
    command: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    output_path: str | None = None

    def __post_init__(self) -> None:
        if self.command not in SCHEMAS:
            raise ExperimentValidationError(f"unknown command {self.command!r}")
        if self.output_path is None:
            self.output_path = f"{self.command}.json"

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], output_dir: str = ".") -> ExperimentSpec:
        unknown = set(data) - {"name", "command", "params", "seed", "output"}
        if unknown:
            raise ExperimentValidationError(f"unknown experiment keys: {sorted(unknown)}")
        if "command" not in data:
            raise ExperimentValidationError("experiment without a command")
        name = data.get("name", data["command"])
        return cls(
            data["command"],
            dict(data.get("params", {})),
            int(data.get("seed", 0)),
            os.path.join(output_dir, data.get("output", f"{name}.json")),
        )

    def resolved_params(self) -> dict[str, Any]:
        """Parameters cast to their schema types, defaults filled in.

        :raises ExperimentValidationError: On unknown keys, uncastable values or values outside the choices.
        """
        schema = {param.name: param for param in SCHEMAS[self.command]}
        unknown = set(self.params) - set(schema)
        if unknown:
            raise ExperimentValidationError(f"unknown parameters for {self.command}: {sorted(unknown)}")
        resolved = {}
        for name, param in schema.items():
            raw = self.params.get(name, param.default)
            try:
                value = param.type(raw)
            except (TypeError, ValueError) as exc:
                raise ExperimentValidationError(f"parameter {name}: {exc}") from None
            if param.choices is not None and value not in param.choices:
                raise ExperimentValidationError(f"parameter {name} must be one of {param.choices}, got {value!r}")
            resolved[name] = value
        return resolved


@dataclass
class Outcome:
    """What a runner produces: result document member, CSV tables, summary line and headline ratios."""

    result: dict[str, Any]
    summary: str
    tables: dict[str, Table] = field(default_factory=dict)
    headlines: dict[str, str] = field(default_factory=dict)


def _backgrounds(seed: int, n: int) -> list[Any]:
    rng = np.random.default_rng(seed)
    return [sample_generic_background(rng) for _ in range(n)]


def _check_count(report: CountReport) -> None:
    expected = expected_count(report.classification)
    if report.total_signed_count != expected:
        raise CertificateError(f"signed count {report.total_signed_count} differs from {expected} ({report.classification})")


def _solution_rows(index: int, report: CountReport) -> list[list[Any]]:
    return [[index, f"{sol.pair[0]}{sol.pair[1]}", *sol.y, sol.lam, sol.sign, sol.residual] for sol in report.solutions]


SOLUTION_HEADER = ("background", "pair", "y0", "y1", "y2", "y3", "lambda", "sign", "residual")


def run_reduce(params: dict[str, Any], seed: int) -> Outcome:
    if len(params["matrix"]) != 9:
        raise ExperimentValidationError("matrix needs nine entries")
    P = np.reshape(params["matrix"], (3, 3))
    decompositions = decompose_rank1(P)
    result = {
        "decompositions": [
            {"branch": d.branch.value, "s": d.s, "theta": d.theta, "M": d.M, "rank_residual": list(d.rank_residual(P))}
            for d in decompositions
        ]
    }
    summary = ", ".join(f"{d.branch.value}: s={d.s:.6g}" for d in decompositions)
    return Outcome(result, summary)


def run_count(params: dict[str, Any], seed: int) -> Outcome:
    if params["background"] == "degenerate":
        backgrounds = [degenerate_background()] * params["n_backgrounds"]
    else:
        backgrounds = _backgrounds(seed, params["n_backgrounds"])
    reports = []
    for background in backgrounds:
        report = count_model_intersections(ProblemConfig(params["L"], background, params["K"], params["alpha"]), seed)
        _check_count(report)
        reports.append(report)
    summary = boundary_report(reports)
    rows = [row for index, report in enumerate(reports) for row in _solution_rows(index, report)]
    return Outcome(
        {
            "reports": [report.serialize() for report in reports],
            "total_signed_count": reports[0].total_signed_count,
            "summary": summary.serialize(),
        },
        f"signed count {reports[0].total_signed_count}, boundary ratio {summary.ratio_label}",
        {"solutions": (SOLUTION_HEADER, rows)},
        {"boundary ratio": summary.ratio_label or ""},
    )


def run_degenerate(params: dict[str, Any], seed: int) -> Outcome:
    cfg = ProblemConfig(params["L"], degenerate_background(params["splitting"]), params["K"], params["alpha"])
    report = count_degenerate(cfg, seed)
    _check_count(report)
    return Outcome(
        report.serialize(),
        f"{report.classification}: signed count {report.total_signed_count}",
        {"solutions": (SOLUTION_HEADER, _solution_rows(0, report))},
    )


def run_holonomy(params: dict[str, Any], seed: int) -> Outcome:
    (background,) = _backgrounds(seed, 1)
    cfg = ProblemConfig(params["L"], background, params["K"], params["alpha"])
    report = count_with_holonomy_model(cfg, params["strength"], seed)
    _check_count(report)
    constant = report.diagnostics["displacement_constant"]
    return Outcome(
        report.serialize(),
        f"signed count {report.total_signed_count}, displacement constant {constant:.3g}",
        {"solutions": (SOLUTION_HEADER, _solution_rows(0, report))},
    )


def run_continuation(params: dict[str, Any], seed: int) -> Outcome:
    if params["t_steps"] < 2:
        raise ExperimentValidationError("t_steps must be at least 2")
    t_grid = np.linspace(1.0, 0.0, params["t_steps"])
    reports = [
        continuation_count(ProblemConfig(params["L"], background), t_grid=t_grid, seed=seed)
        for background in _backgrounds(seed, params["n_backgrounds"])
    ]
    rows = [[index, t, count] for index, report in enumerate(reports) for t, count in zip(report.t_values, report.counts)]
    counts = sorted({count for report in reports for count in report.counts})
    return Outcome(
        {"backgrounds": [report.serialize() for report in reports]},
        f"counts along the family: {counts}",
        {"counts": (("background", "t", "count"), rows)},
    )


def run_sensitivity(params: dict[str, Any], seed: int) -> Outcome:
    (background,) = _backgrounds(seed, 1)
    scan = sensitivity_scan(ProblemConfig(params["L_values"][0], background), params["eps"], params["L_values"], seed)
    rows = [[row["eps"], row["L"], row["m"], row["y"], row["lambda"]] for row in scan.rows]
    summary = ", ".join(f"d{name} ~ eps^{e:.2f} L^{l:.2f}" for name, (e, l) in scan.exponents.items())
    return Outcome(scan.serialize(), summary, {"displacements": (("eps", "L", "m", "y", "lambda"), rows)})


def run_toy(params: dict[str, Any], seed: int) -> Outcome:
    result = toy_wedge_integral(ToyConfig(params["L"], params["x_max"], params["lambda_max"]))
    return Outcome(result.serialize(), f"toy integral {result.value:.12g} +- {result.err_estimate:.2g}")


def run_ip(params: dict[str, Any], seed: int) -> Outcome:
    if params["method"] == "mc":
        result = integrate_Ip_mc(seed, params["n_samples"])
    elif params["method"] == "closed":
        result = ip_closed_form()
    else:
        result = integrate_Ip_reduced(params["inner"])
    return Outcome(result.serialize(), f"I_p = {result.value:.8f} +- {result.err_estimate:.2g} ({result.method.value})")


def run_fiber(params: dict[str, Any], seed: int) -> Outcome:
    rows = []
    for L in params["L_values"]:
        region = FiberRegion.exhaustion(L, params["n0"])
        result = truncated_fiber_integral(truncation=region)
        rows.append({"L": L, "region": region.serialize(), **result.serialize()})
    values = [row["value"] for row in rows]
    return Outcome(
        {"rows": rows, "monotone": bool(all(b > a for a, b in zip(values, values[1:])))},
        "truncated fiber integrals " + ", ".join(f"{v:.6f}" for v in values),
        {"exhaustion": (("L", "value", "error"), [[row["L"], row["value"], row["error"]] for row in rows])},
    )


def run_concentration(params: dict[str, Any], seed: int) -> Outcome:
    contrast = concentration_contrast(params["L_values"], seed)
    rows = [[row["L"], row["solution_lambda"], row["median_lambda"]] for row in contrast.rows]
    return Outcome(
        contrast.serialize(),
        f"solution lambda ~ L^{contrast.solution_exponent:.2f}, integrand lambda ~ L^{contrast.integrand_exponent:.2f}",
        {"concentration": (("L", "solution_lambda", "median_lambda"), rows)},
    )


def run_limits(params: dict[str, Any], seed: int) -> Outcome:
    studies = [
        limit_order_study(params["lambda0_values"], params["L"], coupling, params["alpha_prime"])
        for coupling in ("fixed", "coupled")
    ]
    rows = [[study.coupling, row["lambda0"], row["L"], row["value"]] for study in studies for row in study.rows]
    return Outcome(
        {study.coupling: study.serialize() for study in studies},
        "; ".join(f"{study.coupling}: " + ", ".join(f"{v:.3g}" for v in study.values) for study in studies),
        {"limits": (("coupling", "lambda0", "L", "value"), rows)},
    )


def run_audit(params: dict[str, Any], seed: int) -> Outcome:
    audit = angular_factor_audit(seed, params["n_samples"])
    return Outcome(audit, ", ".join(f"{name} rel. error {row['relative_error']:.2e}" for name, row in audit.items()))


def run_report(params: dict[str, Any], seed: int) -> Outcome:
    (background,) = _backgrounds(seed, 1)
    report = count_model_intersections(ProblemConfig(params["L"], background), seed)
    _check_count(report)
    summary = boundary_report([report])
    fiber = fiber_limit_report()
    result = {
        "count": {
            "classification": GENERIC,
            "total_signed_count": report.total_signed_count,
            "boundary_ratio": summary.ratio_label,
            "interior_requirement": summary.interior_requirement,
        },
        "fiber": fiber.serialize(),
    }
    result["text"] = render_report(result)
    return Outcome(
        result,
        f"boundary ratio {summary.ratio_label}, fiber ratio {fiber.ratio_label}",
        headlines={"boundary ratio": summary.ratio_label or "", "fiber ratio": fiber.ratio_label},
    )


RUNNERS: dict[str, Callable[[dict[str, Any], int], Outcome]] = {
    "reduce": run_reduce,
    "count": run_count,
    "degenerate": run_degenerate,
    "holonomy": run_holonomy,
    "continuation": run_continuation,
    "sensitivity": run_sensitivity,
    "toy": run_toy,
    "ip": run_ip,
    "fiber": run_fiber,
    "concentration": run_concentration,
    "limits": run_limits,
    "audit": run_audit,
    "report": run_report,
}


@dataclass
class RunResult:
    exit_code: int
    document: dict[str, Any]
    summary: str
    headlines: dict[str, str] = field(default_factory=dict)


def run(spec: ExperimentSpec, echo: bool = True) -> RunResult:
    """Run one experiment and write its JSON document, plus CSV tables next to it.

    :param spec: Experiment specification.
    :param echo: Print the one-line summary.
    :return: Exit code, document and summary line.
    """
    report = ExperimentReport(spec)
    params: dict[str, Any] = dict(spec.params)
    outcome = None
    error = None
    try:
        params = spec.resolved_params()
        outcome = RUNNERS[spec.command](params, spec.seed)
        exit_code = 0
    except AsdBoundaryError as exc:
        exit_code = exc.exit_code
        error = {"type": type(exc).__name__, "message": str(exc)}
        logger.debug("%s failed with exit code %d: %s", spec.command, exit_code, exc)
    report.finalize(exit_code)
    document = {
        "schema_version": SCHEMA_VERSION,
        "command": spec.command,
        "seed": spec.seed,
        "params": params,
        "result": outcome.result if outcome is not None else None,
        "error": error,
        "sidecar": report.serialize(),
    }
    assert spec.output_path is not None
    directory = os.path.dirname(spec.output_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(spec.output_path, "w") as fd:
        fd.write(dumps(document))
    stem = os.path.splitext(spec.output_path)[0]
    if outcome is not None:
        for name, (header, rows) in outcome.tables.items():
            write_csv(f"{stem}.{name}.csv", header, rows)
    summary = outcome.summary if outcome is not None else f"{error['type']}: {error['message']}" if error else ""
    if echo:
        print(f"{spec.command}: {summary}")
    return RunResult(exit_code, document, summary, outcome.headlines if outcome is not None else {})


@dataclass
class SuiteResult:
    exit_code: int
    summary: str
    results: list[RunResult]


def load_suite(path: str, output_dir: str) -> tuple[list[str], list[ExperimentSpec], bool]:
    """Parse a suite file into names, specs and the parallel flag."""
    with open(path) as fd:
        try:
            document = json.load(fd)
        except json.JSONDecodeError as exc:
            raise ExperimentValidationError(f"{path}: {exc}") from None
    if not isinstance(document, dict):
        raise ExperimentValidationError(f"{path}: suite must be a JSON object")
    check_schema_version(document)
    unknown = set(document) - {"schema_version", "experiments", "parallel"}
    if unknown:
        raise ExperimentValidationError(f"unknown suite keys: {sorted(unknown)}")
    entries = document.get("experiments", [])
    names = [entry.get("name", entry.get("command", "")) for entry in entries]
    specs = [ExperimentSpec.from_dict(entry, output_dir) for entry in entries]
    return names, specs, bool(document.get("parallel", False))


def run_suite(path: str, output_dir: str = ".") -> SuiteResult:
    """Run every experiment of a suite file and write ``summary.txt`` and ``suite.json``.

    :param path: Suite file.
    :param output_dir: Directory for the result documents.
    :return: Exit code, the maximum over the experiments, and the rendered summary.
    """
    names, specs, parallel = load_suite(path, output_dir)
    workers = worker_count() if parallel else 1
    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(lambda spec: run(spec, echo=False), specs))
    exit_code = max((result.exit_code for result in results), default=0)
    headlines: dict[str, str] = {}
    for result in results:
        headlines.update(result.headlines)
    rows = [
        {"name": name, "command": spec.command, "exit_code": result.exit_code, "summary": result.summary, "output": spec.output_path}
        for name, spec, result in zip(names, specs, results)
    ]
    summary = render_summary(rows, sorted(headlines.items()), exit_code)
    os.makedirs(output_dir, exist_ok=True)
    with open(os.path.join(output_dir, "summary.txt"), "w") as fd:
        fd.write(summary)
    with open(os.path.join(output_dir, "suite.json"), "w") as fd:
        fd.write(
            dumps(
                {
                    "schema_version": SCHEMA_VERSION,
                    "suite": os.path.basename(path),
                    "experiments": rows,
                    "headlines": headlines,
                    "exit_code": exit_code,
                }
            )
        )
    failed = [row["name"] for row in rows if row["exit_code"]]
    if failed:
        logger.warning("suite %s: failed experiments %s", path, failed)
    return SuiteResult(exit_code, summary, results)


def shipped_suite(name: str = "reproduction") -> str:
    return os.path.join(os.path.dirname(__file__), "suites", f"{name}.json")
