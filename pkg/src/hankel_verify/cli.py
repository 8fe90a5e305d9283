"""Command-line entry point: ``hankel-verify <command> [options]``.

Exit status: 0 success, 2 invalid configuration, 3 bound or domination
violation, 4 sharpness gap, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from .bounds import domination_sweep, h3, sharp_bound, worker_count
from .classes import ClassTag, CoefficientVector, extremal
from .errors import BoundViolation, ConfigInvalid, InvalidParameter, SharpnessGap
from .optimize import verify_sharp_bound
from .report import emit_report, report_to_dict, samples_dict
from .series import as_q

log = logging.getLogger("hankel_verify")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BOUND = 3
EXIT_SHARPNESS = 4
EXIT_IO = 5

COMMANDS = ("verify-star", "verify-qstar", "sweep", "sample", "extremal", "face-table")
DEFAULT_SWEEP = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


@dataclass
class RunConfig:
    command: str
    q_values: list = field(default_factory=list)
    resolution: int = 64
    rounds: int = 30
    samples: int = 10_000
    seed: int = 42
    output_format: str = "json"
    output_path: str = "-"
    class_kind: str = "star"
    order: int = 8
    record_time: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigInvalid(f"unknown command {self.command!r}")
        try:
            self.q_values = [as_q(q) for q in self.q_values]
        except InvalidParameter as exc:
            raise ConfigInvalid(str(exc)) from None
        needs_q = self.command in ("verify-qstar", "sweep") or (
            self.command in ("sample", "extremal", "face-table") and self.class_kind == "qstar"
        )
        if needs_q and not self.q_values:
            raise ConfigInvalid(f"{self.command} needs at least one --q value in (0, 1)")
        if self.command == "verify-qstar" and len(self.q_values) != 1:
            raise ConfigInvalid("verify-qstar takes exactly one --q; use 'sweep' for several")
        if self.resolution < 2:
            raise ConfigInvalid("--resolution must be >= 2")
        if self.rounds < 0:
            raise ConfigInvalid("--rounds must be >= 0")
        if self.samples < 0 or (self.command == "sample" and self.samples < 1):
            raise ConfigInvalid("--samples must be >= 1")
        if self.order < 7:
            raise ConfigInvalid("--order must be >= 7")
        if self.output_format not in ("json", "csv"):
            raise ConfigInvalid("--format must be json or csv")
        try:
            worker_count()
        except InvalidParameter as exc:
            raise ConfigInvalid(str(exc)) from None

    def tags(self) -> list[ClassTag]:
        if self.command == "verify-star":
            return [ClassTag.star()]
        if self.command in ("verify-qstar", "sweep") or self.class_kind == "qstar":
            return [ClassTag.qstar(q) for q in self.q_values]
        return [ClassTag.star()]


class _Outcome:
    def __init__(self):
        self.status = EXIT_OK

    def fail(self, status: int, message: str) -> None:
        log.error(message)
        if self.status == EXIT_OK:
            self.status = status


def _verify(tag: ClassTag, config: RunConfig, outcome: _Outcome) -> dict:
    start = time.perf_counter()
    try:
        report = verify_sharp_bound(tag, config.resolution, config.rounds)
    except (BoundViolation, SharpnessGap) as exc:
        report = exc.report
        outcome.fail(EXIT_BOUND if isinstance(exc, BoundViolation) else EXIT_SHARPNESS, str(exc))
    samples = None
    if config.samples > 0:
        samples = domination_sweep(tag, config.samples, config.seed)
        if not samples.ok:
            outcome.fail(EXIT_BOUND, f"{tag.label}: {samples.domination_violations} domination and "
                                     f"{samples.bound_violations} bound violations in sampling")
    elapsed = (time.perf_counter() - start) * 1000.0 if config.record_time else None
    return report_to_dict(report, samples, elapsed)


def _face_table(tag: ClassTag, config: RunConfig) -> dict:
    report = verify_sharp_bound(tag, config.resolution, config.rounds, strict=False)
    doc = report_to_dict(report)
    keep = ("class", "q", "face_table", "edge_table", "grid_initial", "refinement_rounds")
    return {k: v for k, v in doc.items() if k in keep}


def _sample(tag: ClassTag, config: RunConfig, outcome: _Outcome) -> dict:
    summary = domination_sweep(tag, config.samples, config.seed)
    if not summary.ok:
        outcome.fail(EXIT_BOUND, f"{tag.label}: {summary.domination_violations} domination and "
                                 f"{summary.bound_violations} bound violations")
    doc = {"class": "star" if tag.is_star else "qstar"}
    if not tag.is_star:
        doc["q"] = tag.q
    doc.update({
        "bound_closed_form": sharp_bound(tag),
        "samples": samples_dict(summary),
        "worst_params": summary.worst_params,
    })
    return doc


def _extremal(tag: ClassTag, config: RunConfig) -> dict:
    f = extremal(tag, config.order)
    a = CoefficientVector.from_series(f)
    doc = {"class": "star" if tag.is_star else "qstar"}
    if not tag.is_star:
        doc["q"] = tag.q
    doc.update({
        "coefficients": [float(c.real) for c in f.coeffs],
        "a2": a.a2.real, "a3": a.a3.real, "a4": a.a4.real, "a5": a.a5.real,
        "extremal_h3": abs(complex(h3(a))),
        "bound_closed_form": sharp_bound(tag),
    })
    return doc


def run(config: RunConfig) -> int:
    """Execute ``config`` and write its report; return the process exit status."""
    try:
        config.validate()
    except ConfigInvalid as exc:
        log.error("invalid configuration: %s", exc)
        return EXIT_CONFIG

    outcome = _Outcome()
    start = time.perf_counter()
    tags = config.tags()
    if config.command in ("verify-star", "verify-qstar"):
        doc = _verify(tags[0], config, outcome)
    elif config.command == "sweep":
        doc = {"command": "sweep", "records": [_verify(t, config, outcome) for t in tags]}
    elif config.command == "face-table":
        recs = [_face_table(t, config) for t in tags]
        doc = recs[0] if len(recs) == 1 else {"command": "face-table", "records": recs}
    elif config.command == "sample":
        doc = {"command": "sample", "seed": config.seed,
               "records": [_sample(t, config, outcome) for t in tags]}
    else:
        doc = {"command": "extremal", "records": [_extremal(t, config) for t in tags]}
    if "command" not in doc:
        doc = {"command": config.command, **doc}
    if config.record_time and config.command not in ("verify-star", "verify-qstar"):
        doc["wall_time_ms"] = (time.perf_counter() - start) * 1000.0

    try:
        emit_report(doc, config.output_format, config.output_path)
    except OSError as exc:
        log.error("cannot write report to %s: %s", config.output_path, exc)
        return EXIT_IO
    return outcome.status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hankel-verify",
        description="Numerical verification of sharp third Hankel determinant bounds.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, q=True, cls=False, samples=10_000):
        if q:
            p.add_argument("--q", type=float, action="append", default=None,
                           help="q in (0, 1); repeatable")
        if cls:
            p.add_argument("--class", dest="class_kind", choices=["star", "qstar"], default="star")
        p.add_argument("--resolution", type=int, default=64)
        p.add_argument("--rounds", type=int, default=30)
        p.add_argument("--samples", type=int, default=samples)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--format", dest="output_format", choices=["json", "csv"], default="json")
        p.add_argument("--out", dest="output_path", default="-", help="output file, '-' for stdout")
        p.add_argument("--record-time", action="store_true",
                       help="fill wall_time_ms (makes reports non-reproducible)")

    common(sub.add_parser("verify-star", help="maximize S and compare with 4/9"), q=False)
    common(sub.add_parser("verify-qstar", help="maximize T for one q"))
    common(sub.add_parser("sweep", help="verify-qstar over several q values"))
    common(sub.add_parser("sample", help="Monte-Carlo domination sweep"), cls=True, samples=100_000)
    ext = sub.add_parser("extremal", help="coefficients of the extremal functions")
    common(ext, cls=True)
    ext.add_argument("--order", type=int, default=8)
    common(sub.add_parser("face-table", help="face and edge maxima of the surrogate"), cls=True)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    qs = getattr(ns, "q", None)
    if qs is None:
        qs = list(DEFAULT_SWEEP) if ns.command == "sweep" else []
    kind = getattr(ns, "class_kind", "star")
    if ns.command in ("sample", "extremal", "face-table") and qs and kind == "star":
        kind = "qstar"
    return RunConfig(
        command=ns.command,
        q_values=list(qs),
        resolution=ns.resolution,
        rounds=ns.rounds,
        samples=ns.samples,
        seed=ns.seed,
        output_format=ns.output_format,
        output_path=ns.output_path,
        class_kind=kind,
        order=getattr(ns, "order", 8),
        record_time=ns.record_time,
    )


def main(argv: Optional[list] = None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
