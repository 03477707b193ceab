"""Parametric max-mixture model and its closed-form evaluations.

The model is a d-dimensional random vector built from D shared unit
Fréchet factors Z_1..Z_D and d idiosyncratic unit Fréchet factors Y_1..Y_d:

    X_i = max_j (alpha[i, j] * Z_j)  v  (C - sum_j alpha[i, j]) * Y_i

with nonnegative weights ``alpha`` and a scale constant ``C`` at least as
large as every row sum of ``alpha``.  Every margin is Fréchet with scale C,
the joint law is max-stable, and all pairwise tail dependence coefficients
are available in closed form:

    lambda[s, k] = (1 / C) * sum_j min(alpha[s, j], alpha[k, j]).

This module holds the spec container, its validation, and the closed-form
evaluations (joint CDF, copula, marginal CDF, tail-dependence and extremal
coefficients).  All functions are pure; specs are immutable and safe to
share across threads.

Indexing convention: margins are 0-based throughout the Python API.  The
CLI and file formats label coordinates 1-based (``x1``..``xd``).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainError, ShapeError, SpecValidationError

#: Absolute slack allowed on the feasibility bound C >= max row sum.  Rows at
#: the exact boundary (slack in [-FEASIBILITY_TOL, 0)) are treated as having
#: no idiosyncratic term; larger violations are rejected by validation.
FEASIBILITY_TOL = 1e-9

#: Tolerance for symmetry / unit-diagonal checks on tail dependence matrices.
#: The upper triangle is authoritative; the lower triangle is mirrored.
SYMMETRY_TOL = 1e-9


def _as_readonly_matrix(values, name: str) -> np.ndarray:
    try:
        arr = np.array(values, dtype=np.float64, copy=True)
    except (TypeError, ValueError) as exc:
        raise ShapeError(f"{name} must be a rectangular numeric matrix: {exc}") from exc
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be a 2-D matrix, got ndim={arr.ndim}")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """Full parametrization of the max-mixture model.

    Parameters
    ----------
    alpha : (d, D) array_like
        Nonnegative factor weights; ``alpha[i, j]`` scales shared factor j
        in margin i.
    C : float
        Global Fréchet scale constant.  Feasibility requires
        ``C >= alpha.sum(axis=1).max()`` (up to ``FEASIBILITY_TOL``).

    Construction only normalizes shapes; use :func:`validate_spec` to check
    the numeric invariants.
    """

    alpha: np.ndarray
    C: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _as_readonly_matrix(self.alpha, "alpha"))
        object.__setattr__(self, "C", float(self.C))

    @property
    def d(self) -> int:
        return self.alpha.shape[0]

    @property
    def D(self) -> int:
        return self.alpha.shape[1]

    def row_sums(self) -> np.ndarray:
        """Per-margin total shared weight, ``sum_j alpha[i, j]``."""
        return self.alpha.sum(axis=1)

    def slacks(self) -> np.ndarray:
        """Idiosyncratic coefficients ``C - row_sums``, clamped at zero."""
        return np.maximum(self.C - self.row_sums(), 0.0)

    def fingerprint(self) -> str:
        """Content hash identifying this spec across serialization round trips."""
        payload = json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("ascii")).hexdigest()

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "D": self.D,
            "C": self.C,
            "alpha": [[float(v) for v in row] for row in self.alpha],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ModelSpec":
        try:
            d, big_d, c, alpha = obj["d"], obj["D"], obj["C"], obj["alpha"]
        except (KeyError, TypeError) as exc:
            raise ShapeError(f"spec object must carry d, D, C, alpha: {exc}") from exc
        spec = cls(alpha=alpha, C=c)
        if spec.d != int(d) or spec.D != int(big_d):
            raise ShapeError(
                f"declared dimensions d={d}, D={big_d} do not match alpha of "
                f"shape {spec.alpha.shape}"
            )
        return spec


@dataclass(frozen=True, eq=False)
class TailDepMatrix:
    """Symmetric d x d matrix of pairwise tail dependence coefficients.

    ``values[s, k]`` is the limiting conditional probability that margin s is
    extreme given margin k is extreme; the diagonal is 1 by definition.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = _as_readonly_matrix(self.values, "tail dependence matrix")
        if arr.shape[0] != arr.shape[1]:
            raise ShapeError(f"tail dependence matrix must be square, got {arr.shape}")
        object.__setattr__(self, "values", arr)

    @property
    def d(self) -> int:
        return self.values.shape[0]

    def canonical(self) -> "TailDepMatrix":
        """Mirror the authoritative upper triangle down and pin the diagonal at 1."""
        out = np.triu(self.values, k=1)
        out = out + out.T
        np.fill_diagonal(out, 1.0)
        return TailDepMatrix(out)

    def to_json_dict(self) -> dict:
        return {"d": self.d, "lambda": [[float(v) for v in row] for row in self.values]}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "TailDepMatrix":
        try:
            d, lam = obj["d"], obj["lambda"]
        except (KeyError, TypeError) as exc:
            raise ShapeError(f"matrix object must carry d and lambda: {exc}") from exc
        mat = cls(values=lam)
        if mat.d != int(d):
            raise ShapeError(
                f"declared dimension d={d} does not match matrix of shape "
                f"{mat.values.shape}"
            )
        return mat


@dataclass(frozen=True, eq=False)
class ExtremalMatrix:
    """Pairwise extremal coefficients, ``2 - lambda`` off the diagonal, 1 on it.

    An off-diagonal value of 1 means complete dependence of the pair, 2 means
    independence.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = _as_readonly_matrix(self.values, "extremal matrix")
        if arr.shape[0] != arr.shape[1]:
            raise ShapeError(f"extremal matrix must be square, got {arr.shape}")
        object.__setattr__(self, "values", arr)

    @property
    def d(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of an invariant check: empty ``violations`` means valid."""

    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_spec(spec: ModelSpec) -> ValidationReport:
    """Check all ModelSpec invariants on an arbitrary candidate.

    Violations are reported as data, one message per offending entry or row;
    nothing is raised.
    """
    violations: list[str] = []
    if spec.d < 2:
        violations.append(f"dimension d={spec.d} must be at least 2")
    if spec.D < 1:
        violations.append(f"factor count D={spec.D} must be at least 1")
    if not np.isfinite(spec.C) or spec.C <= 0:
        violations.append(f"scale constant C={spec.C!r} must be positive and finite")
    if not np.all(np.isfinite(spec.alpha)):
        bad = np.argwhere(~np.isfinite(spec.alpha))
        for i, j in bad[:10]:
            violations.append(f"alpha[{i}][{j}] is not finite")
    else:
        neg = np.argwhere(spec.alpha < 0)
        for i, j in neg[:10]:
            violations.append(
                f"alpha[{i}][{j}] = {float(spec.alpha[i, j])!r} is negative"
            )
        if np.isfinite(spec.C):
            row_sums = spec.alpha.sum(axis=1)
            over = np.flatnonzero(row_sums > spec.C + FEASIBILITY_TOL)
            for i in over[:10]:
                violations.append(
                    f"row {i} sum {float(row_sums[i])!r} exceeds scale constant C={spec.C!r}"
                )
    return ValidationReport(tuple(violations))


def require_valid_spec(spec: ModelSpec) -> None:
    report = validate_spec(spec)
    if not report.ok:
        raise SpecValidationError(report.violations)


def validate_tail_dep_matrix(target: TailDepMatrix) -> ValidationReport:
    """Check symmetry (within tolerance), unit diagonal, and [0, 1] entries."""
    violations: list[str] = []
    lam = target.values
    d = target.d
    if d < 2:
        violations.append(f"dimension d={d} must be at least 2")
    if not np.all(np.isfinite(lam)):
        violations.append("matrix contains non-finite entries")
        return ValidationReport(tuple(violations))
    diag_off = np.abs(np.diagonal(lam) - 1.0)
    for i in np.flatnonzero(diag_off > SYMMETRY_TOL)[:10]:
        violations.append(f"diagonal entry [{i}][{i}] = {float(lam[i, i])!r} must be 1")
    asym = np.abs(lam - lam.T)
    for i, j in np.argwhere(np.triu(asym, k=1) > SYMMETRY_TOL)[:10]:
        violations.append(
            f"asymmetric pair [{i}][{j}]={float(lam[i, j])!r} vs [{j}][{i}]={float(lam[j, i])!r}"
        )
    off_mask = ~np.eye(d, dtype=bool)
    bad = np.argwhere(off_mask & ((lam < 0.0) | (lam > 1.0)))
    for i, j in bad[:10]:
        violations.append(f"entry [{i}][{j}] = {float(lam[i, j])!r} outside [0, 1]")
    return ValidationReport(tuple(violations))


def require_valid_tail_dep_matrix(target: TailDepMatrix) -> TailDepMatrix:
    """Validate and return the canonical (mirrored, unit-diagonal) matrix."""
    report = validate_tail_dep_matrix(target)
    if not report.ok:
        raise SpecValidationError(report.violations)
    return target.canonical()


def _check_point(x, d: int, name: str) -> np.ndarray:
    try:
        arr = np.asarray(x, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ShapeError(f"{name} must be a numeric vector: {exc}") from exc
    if arr.shape != (d,):
        raise ShapeError(f"{name} must have shape ({d},), got {arr.shape}")
    return arr


def marginal_cdf(spec: ModelSpec, i: int, x: float) -> float:
    """Marginal CDF of margin i, ``exp(-C / x)``; identical for every margin.

    Parameters
    ----------
    spec : ModelSpec
    i : int
        Margin index, 0-based.
    x : float
        Evaluation point, strictly positive.
    """
    if not 0 <= i < spec.d:
        raise DomainError(f"margin index {i} outside range [0, {spec.d})")
    if not x > 0:
        raise DomainError(f"marginal CDF requires x > 0, got {x!r}")
    return float(np.exp(-spec.C / x))


def log_joint_cdf(spec: ModelSpec, x) -> float:
    """Log of the joint CDF at a point with all coordinates positive.

    The product of exponentials is evaluated as a single exp of a summed
    exponent, so the result never underflows for large d or D:

        log F(x) = -( sum_j max_i alpha[i, j] / x_i  +  sum_i slack_i / x_i )
    """
    xv = _check_point(x, spec.d, "x")
    if not np.all(xv > 0):
        raise DomainError("joint CDF requires every coordinate to be positive")
    inv_x = 1.0 / xv
    shared = (spec.alpha * inv_x[:, None]).max(axis=0).sum()
    own = (spec.slacks() * inv_x).sum()
    return -(shared + own)


def joint_cdf(spec: ModelSpec, x) -> float:
    """Joint CDF ``P(X_1 <= x_1, ..., X_d <= x_d)``."""
    return float(np.exp(log_joint_cdf(spec, x)))


def log_copula(spec: ModelSpec, u) -> float:
    """Log of the extreme-value copula at ``u`` with every ``u_i`` in (0, 1].

    Satisfies max-stability: ``t * log_copula(u) == log_copula(u**t)`` for
    every t > 0.
    """
    uv = _check_point(u, spec.d, "u")
    if not np.all((uv > 0) & (uv <= 1)):
        raise DomainError("copula requires every coordinate in (0, 1]")
    v = -np.log(uv)  # nonnegative; 0 exactly where u == 1
    shared = (spec.alpha * v[:, None]).max(axis=0).sum()
    own = (spec.slacks() * v).sum()
    return -(shared + own) / spec.C


def copula(spec: ModelSpec, u) -> float:
    """Extreme-value copula of the model evaluated at ``u``."""
    return float(np.exp(log_copula(spec, u)))


def tail_dep_matrix(spec: ModelSpec) -> TailDepMatrix:
    """All pairwise tail dependence coefficients of a valid spec.

    ``lambda[s, k] = (1 / C) * sum_j min(alpha[s, j], alpha[k, j])`` off the
    diagonal; the diagonal is 1 by definition, never computed.
    """
    require_valid_spec(spec)
    d = spec.d
    lam = np.zeros((d, d))
    # Row-at-a-time keeps peak memory at O(d * D) even for d ~ 1e3, D ~ 1e4.
    for s in range(d - 1):
        lam[s, s + 1 :] = np.minimum(spec.alpha[s + 1 :], spec.alpha[s]).sum(axis=1)
    lam = (lam + lam.T) / spec.C
    np.fill_diagonal(lam, 1.0)
    return TailDepMatrix(lam)


def extremal_matrix(spec: ModelSpec) -> ExtremalMatrix:
    """Pairwise extremal coefficients ``2 - lambda``, 1 on the diagonal."""
    lam = tail_dep_matrix(spec).values
    eps = 2.0 - lam
    np.fill_diagonal(eps, 1.0)
    return ExtremalMatrix(eps)


def multivariate_extremal_coeff(spec: ModelSpec, subset: Iterable[int]) -> float:
    """Extremal coefficient of a subset of margins, in [1, len(subset)].

    Computed from the joint CDF evaluated on the subset's diagonal:

        theta = (1/C) * ( sum_j max_{i in S} alpha[i, j] + sum_{i in S} slack_i )

    For a pair this equals the bivariate extremal coefficient.  The value is
    1 under complete dependence of the subset and ``len(subset)`` under full
    independence.
    """
    require_valid_spec(spec)
    idx = list(subset)
    if len(idx) < 2:
        raise DomainError(f"subset must contain at least 2 margins, got {len(idx)}")
    if len(set(idx)) != len(idx):
        raise DomainError(f"subset {idx} contains duplicate margins")
    if any(not 0 <= i < spec.d for i in idx):
        raise DomainError(f"subset {idx} outside margin range [0, {spec.d})")
    rows = spec.alpha[idx]
    shared = rows.max(axis=0).sum()
    own = spec.slacks()[idx].sum()
    return float((shared + own) / spec.C)
