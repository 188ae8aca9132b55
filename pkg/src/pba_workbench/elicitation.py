"""Iterative elicitation of a coherent covariance matrix.

The protocol extends a positive-definite matrix one variable at a time.
For the new variable the expert supplies a nested sequence of conditional
previsions - first given a hypothetical value of the first variable, then
given hypotheticals for the first two, and so on - plus one conditional
variance. Solving the implied linear system recovers the new covariance
column, and the conditional variance fixes the new diagonal entry so the
extended matrix stays positive definite by construction.

Hypothetical values are suggested as (latest conditional prevision) +
multiplier * (conditional sd). The exact value enters the algebra; prompts
display it rounded for count-valued variables.

Because later conditional variances tend to be over-inflated, the final
matrix is used only through its correlations: finalize rescales them by
directly elicited marginal variances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .beliefs import BeliefSpec, VariableSet
from .errors import (
    DegenerateConditioning,
    IncoherentElicitation,
    IncoherentStep,
    InvalidInput,
    SessionClosed,
    ShapeError,
)
from .linalg import PSD_TOL, psd_margin


def _display_value(value: float, integral: bool) -> float:
    # round half up for count variables; exact value still drives the algebra
    return float(math.floor(value + 0.5)) if integral else float(value)


@dataclass(frozen=True)
class Hypothetical:
    variable: str
    exact: float
    display: float


@dataclass(frozen=True)
class QuestionPrompt:
    """What the engine needs next.

    ``kind`` is "answers" while variables remain (supply ``previsions_required``
    cumulative conditional previsions plus one conditional variance and the
    prior prevision for ``variable``) and "finalize" once every variable has
    been elicited (supply marginal variances).
    """

    kind: str
    variable: str | None
    conditioning: tuple[Hypothetical, ...]
    previsions_required: int
    variance_required: bool
    statement: str


@dataclass(frozen=True)
class StepRecord:
    variable: str
    conditional_previsions: tuple[float, ...]
    conditional_variance: float
    prior_prevision: float


@dataclass
class ElicitationSession:
    """Mutable single-writer state of one elicitation run."""

    variables: VariableSet
    multiplier: float
    u: np.ndarray
    prior_previsions: list[float]
    hypotheticals: list[Hypothetical]
    g_history: list[np.ndarray] = field(default_factory=list)
    answers: list[StepRecord] = field(default_factory=list)
    marginal_variances: list[float] | None = None
    status: str = "in-progress"

    @property
    def elicited(self) -> int:
        return len(self.prior_previsions)

    @property
    def finalized(self) -> bool:
        return self.status == "finalized"

    def correlation(self) -> np.ndarray:
        """Correlation matrix of the variables elicited so far."""
        sd = np.sqrt(np.diag(self.u))
        c = self.u / np.outer(sd, sd)
        np.fill_diagonal(c, 1.0)
        return c


def start_session(
    variables: VariableSet,
    first_prevision: float,
    first_variance: float,
    multiplier: float = 0.5,
) -> ElicitationSession:
    """Open a session with the first variable's marginal prevision and variance."""
    if not np.isfinite(first_prevision):
        raise InvalidInput("first prevision must be finite")
    if not (np.isfinite(first_variance) and first_variance > 0):
        raise InvalidInput("first variance must be positive")
    if not (np.isfinite(multiplier) and multiplier > 0):
        raise InvalidInput("hypothetical-policy multiplier must be positive")
    exact = float(first_prevision) + multiplier * math.sqrt(first_variance)
    hypo = Hypothetical(
        variable=variables.names[0],
        exact=exact,
        display=_display_value(exact, variables.integral[0]),
    )
    return ElicitationSession(
        variables=variables,
        multiplier=float(multiplier),
        u=np.array([[float(first_variance)]]),
        prior_previsions=[float(first_prevision)],
        hypotheticals=[hypo],
    )


def next_question(session: ElicitationSession) -> QuestionPrompt:
    """The next required judgement, or the finalize prompt when done."""
    if session.finalized:
        raise SessionClosed("session is finalized")
    k = session.elicited
    names = session.variables.names
    if k >= len(names):
        return QuestionPrompt(
            kind="finalize",
            variable=None,
            conditioning=tuple(session.hypotheticals[: len(names) - 1]),
            previsions_required=0,
            variance_required=False,
            statement="All variables elicited; supply marginal variances to finalize.",
        )
    target = names[k]
    conditioning = tuple(session.hypotheticals[:k])
    given = ", ".join(f"{h.variable}={h.display:g}" for h in conditioning)
    unit = session.variables.units[k]
    unit_txt = f" ({unit})" if unit else ""
    statement = (
        f"Working through the hypotheticals {given}: give the conditional prevision for "
        f"{target}{unit_txt} after each additional value, then the conditional variance "
        f"given all of them, and the prior prevision for {target}."
    )
    return QuestionPrompt(
        kind="answers",
        variable=target,
        conditioning=conditioning,
        previsions_required=k,
        variance_required=True,
        statement=statement,
    )


def submit_answers(
    session: ElicitationSession,
    conditional_previsions,
    conditional_variance: float,
    prior_prevision: float,
) -> ElicitationSession:
    """Record one variable's answers and extend the covariance matrix.

    ``conditional_previsions[j-1]`` is the prevision of the new variable
    given the first j hypotheticals. The nested conditioning makes the
    system for the new covariance column triangular, so it is solved by
    forward substitution; the step is rejected if the extended matrix is
    not positive definite.
    """
    if session.finalized:
        raise SessionClosed("session is finalized")
    k = session.elicited
    names = session.variables.names
    if k >= len(names):
        raise InvalidInput("all variables already elicited; call finalize")
    c = np.asarray(conditional_previsions, dtype=float).reshape(-1)
    if c.shape != (k,):
        raise ShapeError(f"expected {k} cumulative conditional previsions, got {c.shape[0]}")
    if not np.all(np.isfinite(c)):
        raise InvalidInput("conditional previsions must be finite")
    cv = float(conditional_variance)
    if not (np.isfinite(cv) and cv > 0):
        raise InvalidInput("conditional variance must be positive")
    prior = float(prior_prevision)
    if not np.isfinite(prior):
        raise InvalidInput("prior prevision must be finite")

    u = session.u
    hypo = np.array([h.exact for h in session.hypotheticals[:k]])
    prev = np.array(session.prior_previsions[:k])

    w = np.zeros(k)
    for j in range(1, k + 1):
        try:
            y = np.linalg.solve(u[:j, :j], hypo[:j] - prev[:j])
        except np.linalg.LinAlgError as exc:
            raise DegenerateConditioning(f"conditioning system singular at stage {j}") from exc
        denom = y[j - 1]
        if abs(denom) <= 1e-12 * max(float(np.abs(y).max()), 1e-30):
            raise DegenerateConditioning(
                f"hypothetical for {names[j - 1]!r} adds no new information at stage {j}"
            )
        w[j - 1] = (c[j - 1] - prior - w[: j - 1] @ y[: j - 1]) / denom

    g = np.linalg.solve(u, w)
    new_var = cv + float(w @ g)
    extended = np.block([[u, w[:, None]], [w[None, :], np.array([[new_var]])]])
    margin = psd_margin(extended)
    if margin <= PSD_TOL:
        raise IncoherentStep(
            f"answers for {names[k]!r} break positive definiteness (margin {margin:.3e})",
            margin=margin,
        )

    session.u = extended
    session.g_history.append(g)
    session.prior_previsions.append(prior)
    session.answers.append(
        StepRecord(
            variable=names[k],
            conditional_previsions=tuple(float(x) for x in c),
            conditional_variance=cv,
            prior_prevision=prior,
        )
    )
    exact = float(c[-1]) + session.multiplier * math.sqrt(cv)
    session.hypotheticals.append(
        Hypothetical(
            variable=names[k],
            exact=exact,
            display=_display_value(exact, session.variables.integral[k]),
        )
    )
    return session


def finalize(session: ElicitationSession, marginal_variances) -> BeliefSpec:
    """Rescale the elicited correlations by directly specified marginal variances.

    The unrescaled variances stay in the session history for audit; the
    returned specification carries Corr_ij * sd_i * sd_j.
    """
    if session.finalized:
        raise SessionClosed("session is finalized")
    n = len(session.variables)
    if session.elicited < n:
        raise InvalidInput(
            f"only {session.elicited} of {n} variables elicited; session cannot finalize"
        )
    mv = np.asarray(marginal_variances, dtype=float).reshape(-1)
    if mv.shape != (n,):
        raise ShapeError(f"expected {n} marginal variances, got {mv.shape[0]}")
    if not np.all(np.isfinite(mv) & (mv > 0)):
        raise InvalidInput("marginal variances must be positive")

    corr = session.correlation()
    off = np.abs(corr - np.diag(np.diag(corr))).max(initial=0.0)
    if off > 1.0 + 1e-9:
        raise IncoherentElicitation(f"elicited correlation magnitude {off:.6f} exceeds 1")
    sd = np.sqrt(mv)
    cov = corr * np.outer(sd, sd)
    np.fill_diagonal(cov, mv)  # unit correlation diagonal, exactly
    try:
        spec = BeliefSpec(
            variables=session.variables,
            prevision=np.array(session.prior_previsions),
            covariance=cov,
        )
    except Exception as exc:
        raise IncoherentElicitation(f"rescaled covariance is not coherent: {exc}") from exc
    session.marginal_variances = [float(v) for v in mv]
    session.status = "finalized"
    return spec
