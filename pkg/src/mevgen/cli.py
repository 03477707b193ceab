"""Command-line front end tying synthesis, sampling, evaluation, and
estimation together.

Subcommands
-----------
synth     build a model spec from a target tail-dependence matrix file
sample    draw a seeded batch from a spec and write CSV plus sidecar
coeffs    print the spec's tail-dependence and extremal matrices as JSON
cdf       evaluate the joint CDF or the copula at one point
estimate  estimate pairwise tail dependence from a sample CSV
plot      render pairwise scatter panels to a deterministic SVG
check     validate a spec file and run closed-form invariant smoke checks

Exit codes: 0 success, 2 usage or parse failure, 3 validation or
infeasibility, 4 provenance mismatch.  Coordinates in flags and file
formats are 1-based (x1..xd); the Python API underneath is 0-based.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import fileio
from .errors import (
    CsvFormatError,
    DomainError,
    InfeasibleTargetError,
    ProvenanceError,
    ShapeError,
    SpecValidationError,
)
from .estimation import estimate_tail_dep, theoretical_vs_empirical
from .model import (
    ModelSpec,
    copula,
    extremal_matrix,
    joint_cdf,
    log_copula,
    log_joint_cdf,
    require_valid_spec,
    require_valid_tail_dep_matrix,
    tail_dep_matrix,
    validate_spec,
)
from .plotting import pair_scatter_svg
from .sampling import SampleBatch, sample_batch
from .synthesis import exactness_check, synthesize

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_PROVENANCE = 4

MAX_STABILITY_SMOKE_TOL = 1e-12


class _UsageError(Exception):
    """Bad flag values detected after argparse; mapped to exit code 2."""


@dataclass(frozen=True)
class PlotRequest:
    """Parsed plot invocation: where the batch lives and what to render.

    ``pairs`` holds 0-based coordinate pairs; None means every pair (s, k)
    with s < k.
    """

    source: str
    out: str
    pairs: tuple[tuple[int, int], ...] | None
    scale: str


def _load_spec_file(path) -> ModelSpec:
    """Read a spec file; synthesis result files are unwrapped transparently."""
    obj = fileio.load_json(path)
    if "spec" in obj and isinstance(obj["spec"], dict):
        obj = obj["spec"]
    spec = ModelSpec.from_json_dict(obj)
    require_valid_spec(spec)
    return spec


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _emit_json(obj: dict, out_path) -> None:
    if out_path is None:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        fileio.dump_json(obj, out_path)
        print(f"wrote {out_path}")


def cmd_synth(args) -> int:
    target = fileio.load_tail_dep(args.target)
    canonical = require_valid_tail_dep_matrix(target)
    off = canonical.values[~np.eye(canonical.d, dtype=bool)]
    if np.all(off == 0.0):
        _warn("no extremal dependence requested; all margins will be independent")
    result = synthesize(canonical, c=args.c)
    report = exactness_check(canonical)
    fileio.dump_synthesis(result, args.out)
    print(f"d = {result.spec.d}, shared factors = {result.spec.D}")
    print(f"c_min = {result.c_min:.17g}")
    print(f"c_used = {result.c_used:.17g}")
    print(f"exact construction (scale 1): {'yes' if result.exact else 'no'}")
    print(f"exact feasible (c_min <= 1): {'yes' if report.exact_feasible else 'no'}")
    print(
        "entrywise sufficient bound (all coefficients <= 1/(d-1)): "
        f"{'yes' if report.entrywise_bound else 'no'}"
    )
    if result.exact:
        print("achieved matrix equals the target")
    else:
        print(f"achieved matrix equals target / {result.c_used:.17g}")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.n < 0:
        raise _UsageError(f"--n must be nonnegative, got {args.n}")
    if not 0 <= args.seed < 2**64:
        raise _UsageError("--seed must fit in an unsigned 64-bit integer")
    spec = _load_spec_file(args.spec)
    batch = sample_batch(spec, args.n, args.seed, chunk_size=args.chunk_size)
    fileio.write_csv(batch, args.out, sidecar=not args.no_sidecar)
    print(f"wrote {batch.n} observations of dimension {batch.d} to {args.out}")
    if not args.no_sidecar:
        print(f"wrote {fileio.sidecar_path(args.out)}")
    return EXIT_OK


def cmd_coeffs(args) -> int:
    spec = _load_spec_file(args.spec)
    lam = tail_dep_matrix(spec)
    eps = extremal_matrix(spec)
    out = {
        "d": spec.d,
        "C": spec.C,
        "lambda": [[float(v) for v in row] for row in lam.values],
        "extremal": [[float(v) for v in row] for row in eps.values],
    }
    _emit_json(out, args.out)
    return EXIT_OK


def _parse_point(text: str, d: int) -> np.ndarray:
    fields = text.split(",")
    if len(fields) != d:
        raise _UsageError(f"--at needs {d} comma-separated values, got {len(fields)}")
    try:
        return np.array([float(f) for f in fields])
    except ValueError:
        raise _UsageError(f"--at contains a non-numeric field: {text!r}") from None


def cmd_cdf(args) -> int:
    spec = _load_spec_file(args.spec)
    point = _parse_point(args.at, spec.d)
    if args.copula:
        log_val = log_copula(spec, point)
        out = {
            "u": [float(v) for v in point],
            "log_copula": log_val,
            "copula": copula(spec, point),
        }
    else:
        log_val = log_joint_cdf(spec, point)
        out = {
            "x": [float(v) for v in point],
            "log_cdf": log_val,
            "cdf": joint_cdf(spec, point),
        }
    _emit_json(out, args.out)
    return EXIT_OK


def cmd_estimate(args) -> int:
    if not 0.0 < args.u < 1.0:
        raise _UsageError(f"--u must lie strictly between 0 and 1, got {args.u}")
    data = fileio.read_csv(args.data)
    if data.shape[0] == 0:
        raise _UsageError(f"{args.data} holds no observations")
    meta = fileio.load_sidecar(args.data)
    seed = int(meta["seed"]) if meta else 0
    fingerprint = meta["spec_fingerprint"] if meta else ""

    spec = None
    if args.spec is not None:
        spec = _load_spec_file(args.spec)
        if meta is None:
            _warn(f"{args.data} has no provenance sidecar; trusting it was drawn from {args.spec}")
            fingerprint = spec.fingerprint()
        if data.shape[1] != spec.d:
            raise ShapeError(
                f"data has {data.shape[1]} columns but spec has dimension {spec.d}"
            )
    batch = SampleBatch(data=data, seed=seed, spec_fingerprint=fingerprint)

    rank_report = estimate_tail_dep(batch, args.u, margins="rank")
    out = rank_report.to_json_dict()
    if spec is not None:
        comparison = theoretical_vs_empirical(spec, batch, u_grid=[args.u])[0]
        known = comparison.to_json_dict()
        out["exact_finite_u"] = known["exact_finite_u"]
        out["lambda_limit"] = known["lambda_limit"]
        out["known"] = known
        if comparison.flagged:
            pairs = ", ".join(f"({s + 1},{k + 1})" for s, k in comparison.flagged)
            _warn(f"estimate deviates by more than 3 half-widths for pairs: {pairs}")
    _emit_json(out, args.out)
    return EXIT_OK


def _parse_pairs(raw: list[str] | None, d: int) -> tuple[tuple[int, int], ...] | None:
    if not raw:
        return None
    pairs = []
    for item in raw:
        fields = item.split(",")
        if len(fields) != 2:
            raise _UsageError(f"--pairs entries must look like s,k, got {item!r}")
        try:
            s, k = int(fields[0]), int(fields[1])
        except ValueError:
            raise _UsageError(f"--pairs entries must be integers, got {item!r}") from None
        if not (1 <= s <= d and 1 <= k <= d):
            raise _UsageError(f"pair ({s},{k}) outside coordinate range 1..{d}")
        if s == k:
            raise _UsageError(f"pair ({s},{k}) repeats a coordinate")
        pairs.append((s - 1, k - 1))
    return tuple(pairs)


def cmd_plot(args) -> int:
    data = fileio.read_csv(args.data)
    request = PlotRequest(
        source=str(args.data),
        out=str(args.out),
        pairs=_parse_pairs(args.pairs, data.shape[1]),
        scale="log" if args.log else "linear",
    )
    pair_scatter_svg(
        data, path=request.out, log_scale=request.scale == "log", pairs=request.pairs
    )
    print(f"wrote {request.out}")
    return EXIT_OK


def cmd_check(args) -> int:
    obj = fileio.load_json(args.spec)
    if "spec" in obj and isinstance(obj["spec"], dict):
        obj = obj["spec"]
    spec = ModelSpec.from_json_dict(obj)
    report = validate_spec(spec)
    if not report.ok:
        print(f"spec invalid ({len(report.violations)} violations):", file=sys.stderr)
        for v in report.violations:
            print(f"  - {v}", file=sys.stderr)
        return EXIT_INVALID
    print(f"spec valid: d={spec.d}, shared factors={spec.D}, C={spec.C:.17g}")

    lam = tail_dep_matrix(spec).values
    eps = extremal_matrix(spec).values
    checks: list[tuple[str, bool, str]] = []

    off = ~np.eye(spec.d, dtype=bool)
    checks.append(
        (
            "tail dependence matrix symmetric, unit diagonal, entries in [0, 1]",
            bool(
                np.array_equal(lam, lam.T)
                and np.all(np.diagonal(lam) == 1.0)
                and np.all((lam[off] >= 0.0) & (lam[off] <= 1.0))
            ),
            "",
        )
    )
    checks.append(
        (
            "extremal matrix equals 2 - lambda with entries in [1, 2]",
            bool(
                np.all(eps[off] == 2.0 - lam[off])
                and np.all((eps[off] >= 1.0) & (eps[off] <= 2.0))
            ),
            "",
        )
    )

    rng = np.random.default_rng(20210905)
    worst_ms = 0.0
    for _ in range(8):
        u = rng.uniform(0.05, 0.95, size=spec.d)
        t = rng.uniform(0.1, 5.0)
        worst_ms = max(worst_ms, abs(log_copula(spec, u**t) - t * log_copula(spec, u)))
    checks.append(
        (
            "max-stability: log copula(u^t) == t log copula(u)",
            worst_ms <= MAX_STABILITY_SMOKE_TOL,
            f"max deviation {worst_ms:.3e}",
        )
    )

    worst_diag = 0.0
    for s in range(spec.d - 1):
        for k in range(s + 1, spec.d):
            u = np.ones(spec.d)
            u[[s, k]] = np.exp(-1.0)
            worst_diag = max(worst_diag, abs(2.0 + log_copula(spec, u) - lam[s, k]))
    checks.append(
        (
            "pairwise coefficients match the bivariate copula diagonal",
            worst_diag <= MAX_STABILITY_SMOKE_TOL,
            f"max deviation {worst_diag:.3e}",
        )
    )

    x = np.full(spec.d, spec.C)
    lf = log_joint_cdf(spec, x)
    checks.append(
        (
            "joint CDF is a proper probability at a finite point",
            bool(np.isfinite(lf) and lf <= 0.0),
            f"log F = {lf:.6g}",
        )
    )

    failed = 0
    for name, ok, detail in checks:
        status = "ok" if ok else "FAILED"
        suffix = f" ({detail})" if detail else ""
        print(f"{status}: {name}{suffix}")
        if not ok:
            failed += 1
    if failed:
        print(f"{failed} smoke checks failed", file=sys.stderr)
        return EXIT_INVALID
    print("all checks passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mevgen",
        description=(
            "Construct multivariate extreme value models with prescribed "
            "pairwise tail dependence, sample them, and validate the "
            "coefficients empirically."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="build a model spec from a target matrix file")
    p.add_argument("--target", required=True, help="tail dependence matrix JSON file")
    p.add_argument("--c", type=float, default=None, help="scale constant (default max(c_min, 1))")
    p.add_argument("--out", required=True, help="output path for the synthesis result JSON")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("sample", help="draw a seeded batch and write CSV")
    p.add_argument("--spec", required=True, help="spec JSON file (synthesis output accepted)")
    p.add_argument("--n", type=int, required=True, help="number of observations")
    p.add_argument("--seed", type=int, default=0, help="64-bit stream seed (default 0)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--chunk-size", type=int, default=None, help="observations per generation block")
    p.add_argument("--no-sidecar", action="store_true", help="skip the provenance sidecar")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("coeffs", help="print tail dependence and extremal matrices")
    p.add_argument("--spec", required=True, help="spec JSON file (synthesis output accepted)")
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("cdf", help="evaluate the joint CDF or copula at a point")
    p.add_argument("--spec", required=True, help="spec JSON file (synthesis output accepted)")
    p.add_argument("--at", required=True, help="comma-separated coordinates, one per margin")
    p.add_argument("--copula", action="store_true", help="treat the point as copula uniforms")
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_cdf)

    p = sub.add_parser("estimate", help="estimate pairwise tail dependence from CSV")
    p.add_argument("--data", required=True, help="sample CSV file")
    p.add_argument("--u", type=float, required=True, help="threshold in (0, 1)")
    p.add_argument("--spec", default=None, help="spec file enabling theoretical comparison")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("plot", help="render pairwise scatter panels to SVG")
    p.add_argument("--data", required=True, help="sample CSV file")
    p.add_argument("--out", required=True, help="output SVG path")
    p.add_argument(
        "--pairs",
        nargs="*",
        default=None,
        help="coordinate pairs like 1,2 (1-based; default: all pairs)",
    )
    p.add_argument("--log", action="store_true", help="log-scale axes")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("check", help="validate a spec and run invariant smoke checks")
    p.add_argument("--spec", required=True, help="spec JSON file (synthesis output accepted)")
    p.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except json.JSONDecodeError as exc:
        doc = getattr(exc, "doc", "")
        print(
            f"error: JSON parse failure at line {exc.lineno} column {exc.colno}: {exc.msg}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    except CsvFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpecValidationError as exc:
        print("error: validation failed:", file=sys.stderr)
        for v in exc.violations:
            print(f"  - {v}", file=sys.stderr)
        return EXIT_INVALID
    except InfeasibleTargetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (DomainError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ProvenanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROVENANCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
