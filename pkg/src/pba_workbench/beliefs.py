"""Second-order belief structures and the Bayes linear adjustment.

A belief specification here is a prevision vector plus a covariance matrix
over a fixed, ordered set of named variables. Adjusting a collection B by
observed data D projects beliefs about B onto affine functions of D:

    adjusted expectation:  P(B) + Cov(B,D) Var(D)+ (d - P(D))
    adjusted variance:     Var(B) - Cov(B,D) Var(D)+ Cov(D,B)

Coherence of the joint (B, D) specification is a hard precondition: both
operations refuse incoherent priors rather than returning artefacts of an
impossible belief state.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import CoherenceError, InvalidInput, ShapeError
from .linalg import (
    PSD_TOL,
    as_matrix,
    in_range_of,
    is_psd,
    nearest_psd_clip,
    pseudo_inverse,
    psd_margin,
    symmetrize,
)


@dataclass(frozen=True)
class VariableSet:
    """An ordered collection of named quantities.

    ``integral`` marks count-valued variables (affects display rounding of
    elicitation hypotheticals and clipping of report bands at zero, never
    the algebra).
    """

    names: tuple[str, ...]
    units: tuple[str, ...] = ()
    integral: tuple[bool, ...] = ()

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        if not names:
            raise InvalidInput("variable set must not be empty")
        if any(not n for n in names):
            raise InvalidInput("variable names must be non-empty")
        if len(set(names)) != len(names):
            raise InvalidInput("variable names must be unique")
        units = tuple(self.units) if self.units else ("",) * len(names)
        integral = tuple(bool(b) for b in self.integral) if self.integral else (False,) * len(names)
        if len(units) != len(names) or len(integral) != len(names):
            raise ShapeError("units and integral flags must match the number of names")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "units", units)
        object.__setattr__(self, "integral", integral)

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InvalidInput(f"unknown variable {name!r}") from None


def _as_vector(v, n: int, name: str) -> np.ndarray:
    a = np.asarray(v, dtype=float).reshape(-1)
    if a.shape != (n,):
        raise ShapeError(f"{name} must have length {n}, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} contains non-finite entries")
    return a


@dataclass(frozen=True)
class BeliefSpec:
    """Prevision vector and covariance matrix over a VariableSet.

    The covariance is symmetrized on construction and must be non-negative
    definite within the relative tolerance; set ``repair=True`` to opt into
    clipping negative eigenvalues (the Frobenius distance of the repair is
    reported through a warning).
    """

    variables: VariableSet
    prevision: np.ndarray
    covariance: np.ndarray
    repair: bool = field(default=False, compare=False)

    def __post_init__(self):
        n = len(self.variables)
        prevision = _as_vector(self.prevision, n, "prevision")
        cov = symmetrize(self.covariance, "covariance")
        if cov.shape != (n, n):
            raise ShapeError(f"covariance must be {n}x{n}, got {cov.shape}")
        if not is_psd(cov):
            if not self.repair:
                raise CoherenceError(
                    f"covariance is not non-negative definite (PSD margin {psd_margin(cov):.3e})"
                )
            cov, dist = nearest_psd_clip(cov)
            warnings.warn(f"covariance repaired to PSD; Frobenius distance {dist:.6g}", stacklevel=2)
        prevision.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "prevision", prevision)
        object.__setattr__(self, "covariance", cov)

    @property
    def dim(self) -> int:
        return len(self.variables)

    def sd(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))


@dataclass(frozen=True)
class JointBelief:
    """A partitioned second-order specification over two blocks B and D."""

    prevision_b: np.ndarray
    prevision_d: np.ndarray
    var_b: np.ndarray
    var_d: np.ndarray
    cov_bd: np.ndarray
    labels: tuple[str, str] = ("B", "D")

    def __post_init__(self):
        var_b = symmetrize(self.var_b, "var_b")
        var_d = symmetrize(self.var_d, "var_d")
        nb, nd = var_b.shape[0], var_d.shape[0]
        cov_bd = as_matrix(self.cov_bd, "cov_bd")
        if cov_bd.shape != (nb, nd):
            raise ShapeError(f"cov_bd must be {nb}x{nd}, got {cov_bd.shape}")
        pb = _as_vector(self.prevision_b, nb, "prevision_b")
        pd = _as_vector(self.prevision_d, nd, "prevision_d")
        for arr in (var_b, var_d, cov_bd, pb, pd):
            arr.flags.writeable = False
        object.__setattr__(self, "var_b", var_b)
        object.__setattr__(self, "var_d", var_d)
        object.__setattr__(self, "cov_bd", cov_bd)
        object.__setattr__(self, "prevision_b", pb)
        object.__setattr__(self, "prevision_d", pd)

    @property
    def dim_b(self) -> int:
        return self.var_b.shape[0]

    @property
    def dim_d(self) -> int:
        return self.var_d.shape[0]

    def assembled(self) -> np.ndarray:
        """The full joint variance matrix [[var_b, cov_bd], [cov_bd', var_d]]."""
        return np.block([[self.var_b, self.cov_bd], [self.cov_bd.T, self.var_d]])


@dataclass(frozen=True)
class CoherenceCondition:
    name: str
    passed: bool
    margin: float
    detail: str


@dataclass(frozen=True)
class CoherenceVerdict:
    passed: bool
    conditions: tuple[CoherenceCondition, ...]

    def failures(self) -> tuple[CoherenceCondition, ...]:
        return tuple(c for c in self.conditions if not c.passed)


def check_coherence(joint: JointBelief, tol: float = PSD_TOL) -> CoherenceVerdict:
    """Validate a joint specification by the three block conditions.

    The assembled joint variance matrix is non-negative definite iff:
      1. Var(D) is non-negative definite;
      2. the columns of Cov(D,B) lie in the range of Var(D);
      3. the Schur complement Var(B) - Cov(B,D) Var(D)+ Cov(D,B) is
         non-negative definite.
    Each condition is reported separately so an incoherent elicitation can
    be traced to its source.
    """
    var_d = joint.var_d
    cov_db = joint.cov_bd.T

    m1 = psd_margin(var_d)
    c1 = CoherenceCondition("var_d_psd", m1 >= -tol, m1, "Var(D) non-negative definite")

    vd_pinv = pseudo_inverse(var_d)
    proj = var_d @ (vd_pinv @ cov_db)
    scale = max(float(np.abs(cov_db).max(initial=0.0)), float(np.abs(var_d).max(initial=0.0)), 1.0)
    range_err = float(np.abs(proj - cov_db).max(initial=0.0)) / scale
    c2 = CoherenceCondition(
        "cov_in_range", range_err <= tol, -range_err, "columns of Cov(D,B) in range of Var(D)"
    )

    schur = joint.var_b - joint.cov_bd @ (vd_pinv @ cov_db)
    m3 = psd_margin(schur)
    c3 = CoherenceCondition(
        "schur_psd", m3 >= -tol, m3, "Var(B) - Cov(B,D) Var(D)+ Cov(D,B) non-negative definite"
    )

    conditions = (c1, c2, c3)
    return CoherenceVerdict(all(c.passed for c in conditions), conditions)


def _require_coherent(joint: JointBelief) -> None:
    verdict = check_coherence(joint)
    if not verdict.passed:
        failed = ", ".join(f"{c.name} (margin {c.margin:.3e})" for c in verdict.failures())
        raise CoherenceError(f"joint specification incoherent: {failed}")


def adjust_expectation(joint: JointBelief, observed_d) -> np.ndarray:
    """Adjusted expectation of block B given observed values of block D.

    Returns P(B) + Cov(B,D) Var(D)+ (d - P(D)): the affine function of D
    minimising the prior-quantified squared distance to B.
    """
    _require_coherent(joint)
    d = _as_vector(observed_d, joint.dim_d, "observed_d")
    resolver = joint.cov_bd @ pseudo_inverse(joint.var_d)
    return joint.prevision_b + resolver @ (d - joint.prevision_d)


def adjust_variance(joint: JointBelief) -> np.ndarray:
    """Adjusted variance of block B after observing block D.

    Returns Var(B) - Cov(B,D) Var(D)+ Cov(D,B); symmetric, non-negative
    definite, with diagonal never exceeding the prior diagonal.
    """
    _require_coherent(joint)
    resolved = joint.cov_bd @ (pseudo_inverse(joint.var_d) @ joint.cov_bd.T)
    return symmetrize(joint.var_b - resolved, "adjusted variance", warn=False)


def resolved_variance(joint: JointBelief) -> np.ndarray:
    """The variance resolved by D: Cov(B,D) Var(D)+ Cov(D,B)."""
    _require_coherent(joint)
    return symmetrize(joint.cov_bd @ (pseudo_inverse(joint.var_d) @ joint.cov_bd.T), warn=False)
