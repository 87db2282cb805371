"""Command-line harness: moment sweeps, verification suites and plot tables.

Reports go to ``--out`` (or stdout); progress and timings go to stderr as
one JSON object per line, so report bytes depend only on the configuration.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import sys
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import mpmath

from . import __version__, checks
from .errors import ConfigError
from .precision import PrecisionPolicy, fmt_sci

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2
MOMENT_COLUMNS = ("k", "status", "lhs", "m1", "m_minus4", "m_minus3", "residual", "error")
VERIFY_COLUMNS = ("suite", "check", "measured", "tolerance", "status")
PLOT_COLUMNS = ("k", "residual", "abs_m_minus4", "abs_m_minus3", "k_pow_minus_1_2", "k_pow_minus_3_2")

log = logging.getLogger("sym2moment")


@dataclass(frozen=True)
class RunConfig:
    command: str
    k_min: int = 12
    k_max: int = 60
    digits: int = 50
    sigma: float = 1.0
    n_cutoff: str = "certified"
    c_max: str = "certified"
    fmt: str = "csv"
    suite: str | None = None
    n_max: int = 10**5

    def validate(self) -> None:
        if self.k_min % 2 or self.k_max % 2:
            raise ConfigError("--k-min and --k-max must be even")
        if self.k_min < 12:
            raise ConfigError("--k-min must be >= 12")
        if self.k_min > self.k_max:
            raise ConfigError("--k-min must not exceed --k-max")
        if not 0.5 < self.sigma <= 3:
            raise ConfigError("--sigma must lie in (1/2, 3]")
        if self.fmt not in ("csv", "json"):
            raise ConfigError("--format must be csv or json")
        if self.n_max < 1:
            raise ConfigError("--n-max must be positive")
        if self.suite is not None and self.suite not in checks.SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}")
        self.policy()

    def policy(self) -> PrecisionPolicy:
        try:
            return PrecisionPolicy(self.digits)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def weights(self) -> list[int]:
        return list(range(self.k_min, self.k_max + 1, 2))

    def as_dict(self) -> dict:
        d = asdict(self)
        d["version"] = __version__
        return d

    def fingerprint(self) -> str:
        blob = json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _log_event(**fields) -> None:
    log.info(json.dumps(fields, sort_keys=True, default=str))


# ---------------------------------------------------------------- writers


def _header_lines(config: RunConfig) -> list[str]:
    return [
        f"# sym2moment {__version__}",
        f"# config {json.dumps(config.as_dict(), sort_keys=True)}",
        f"# fingerprint sha256:{config.fingerprint()}",
    ]


def render(config: RunConfig, columns, rows: list[dict]) -> str:
    if config.fmt == "json":
        doc = {
            "version": __version__,
            "config": config.as_dict(),
            "fingerprint": "sha256:" + config.fingerprint(),
            "columns": list(columns),
            "rows": rows,
        }
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    buf.write("\n".join(_header_lines(config)) + "\n")
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- moment


def _moment_row(k: int, digits: int, sigma: float) -> tuple[dict, float]:
    from .asymptotics import moment_report
    from .lvalues import afe_spec

    t0 = time.perf_counter()
    try:
        pol = PrecisionPolicy(digits)
        with mpmath.workdps(digits + 10):
            rep = moment_report(k, pol, afe_spec(k, pol, sigma=sigma))
        row = {"status": "ok", **rep.as_row(digits), "error": ""}
    except Exception as exc:  # isolate failures per weight
        row = {c: "" for c in MOMENT_COLUMNS}
        row.update(k=k, status="error", error=f"{type(exc).__name__}: {exc}")
        log.debug(traceback.format_exc())
    return row, time.perf_counter() - t0


def _map(fn, args, jobs: int):
    if jobs <= 1:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(fn, *a) for a in args]
        return [f.result() for f in futures]


def cmd_moment(config: RunConfig, out: str | None = None, jobs: int = 1) -> int:
    results = _map(_moment_row, [(k, config.digits, config.sigma) for k in config.weights], jobs)
    rows = []
    for row, secs in sorted(results, key=lambda r: r[0]["k"]):
        _log_event(event="moment", k=row["k"], status=row["status"], runtime_seconds=round(secs, 3))
        rows.append(row)
    _emit(render(config, MOMENT_COLUMNS, rows), out)
    return EXIT_OK if all(r["status"] == "ok" for r in rows) else EXIT_FAILED


# ---------------------------------------------------------------- verify


def _check_row(c: checks.Check) -> dict:
    tol = "" if math.isnan(c.tolerance) else fmt_sci(c.tolerance, 3)
    return {"suite": c.suite, "check": c.name, "measured": fmt_sci(c.measured, 6), "tolerance": tol, "status": c.status}


def _suite_rows(name: str, k_min: int, k_max: int, n_max: int, digits: int) -> list[checks.Check]:
    try:
        return checks.run_suite(name, k_min=k_min, k_max=k_max, n_max=n_max, policy=PrecisionPolicy(digits))
    except Exception as exc:
        log.debug(traceback.format_exc())
        return [checks.Check(name, f"error: {type(exc).__name__}: {exc}", math.nan, math.nan, "fail")]


def cmd_verify(config: RunConfig, out: str | None = None) -> int:
    t0 = time.perf_counter()
    results = _suite_rows(config.suite, config.k_min, config.k_max, config.n_max, config.digits)
    failures = sum(c.failed for c in results)
    _log_event(event="verify", suite=config.suite, checks=len(results), failures=failures, runtime_seconds=round(time.perf_counter() - t0, 3))
    _emit(render(config, VERIFY_COLUMNS, [_check_row(c) for c in results]), out)
    return EXIT_OK if failures == 0 else EXIT_FAILED


# ---------------------------------------------------------------- plotdata


def read_moment_csv(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    if reader.fieldnames is None or "residual" not in reader.fieldnames:
        raise ConfigError(f"{path} is not a moment table")
    return list(reader)


def _strip_sign(s: str) -> str:
    return s[1:] if s.startswith("-") else s


def cmd_plotdata(config: RunConfig, input_path: str, out: str | None = None) -> int:
    rows = []
    for r in read_moment_csv(input_path):
        k = int(r["k"])
        with mpmath.workdps(config.digits + 10):
            kk = mpmath.mpf(k)
            rows.append(
                {
                    "k": k,
                    "residual": r["residual"],
                    "abs_m_minus4": _strip_sign(r["m_minus4"]),
                    "abs_m_minus3": _strip_sign(r["m_minus3"]),
                    "k_pow_minus_1_2": fmt_sci(1 / mpmath.sqrt(kk), config.digits),
                    "k_pow_minus_3_2": fmt_sci(1 / (kk * mpmath.sqrt(kk)), config.digits),
                }
            )
    _emit(render(config, PLOT_COLUMNS, rows), out)
    return EXIT_OK


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k-min", type=int, default=12)
    common.add_argument("--k-max", type=int, default=60)
    common.add_argument("--digits", type=int, default=50, help="working precision in decimal digits")
    common.add_argument("--sigma", type=float, default=1.0, help="abscissa of the V_k contour")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for per-k work")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="sym2moment", description="First moment of L(1/2, sym^2 f) over weight-k eigenforms.")
    p.add_argument("--version", action="version", version=f"sym2moment {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("moment", parents=[common], help="moment left side, main terms and residual per k")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=checks.SUITES)
    v.add_argument("--n-max", type=int, default=10**5, help="range of the lemma identity sweep")
    pd = sub.add_parser("plotdata", parents=[common], help="residual and reference columns from a moment CSV")
    pd.add_argument("--input", required=True, help="moment CSV produced by the moment command")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(stream=sys.stderr, level=logging.DEBUG if args.verbose else logging.INFO, format="%(message)s", force=True)
    config = RunConfig(
        command=args.command,
        k_min=args.k_min,
        k_max=args.k_max,
        digits=args.digits,
        sigma=args.sigma,
        fmt=args.fmt,
        suite=getattr(args, "suite", None),
        n_max=getattr(args, "n_max", 10**5),
    )
    try:
        config.validate()
        if args.jobs < 1:
            raise ConfigError("--jobs must be positive")
        if args.command == "moment":
            return cmd_moment(config, args.out, args.jobs)
        if args.command == "verify":
            return cmd_verify(config, args.out)
        if not Path(args.input).is_file():
            raise ConfigError(f"missing input {args.input}")
        return cmd_plotdata(config, args.input, args.out)
    except ConfigError as exc:
        _log_event(event="config_error", error=str(exc))
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
