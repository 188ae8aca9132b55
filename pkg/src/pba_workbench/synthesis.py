"""Co-exchangeable model synthesis.

Model outputs are grouped into classes whose members are judged a priori
exchangeable: output j of class i decomposes as a class mean plus a
zero-prevision residual, Z_ij = mu_i + R_ij. The quantity of interest is
tied to the class means through

    X = A_1 mu_1 + ... + A_m mu_m + U,

with U a discrepancy uncorrelated with every mean and residual. Given the
prior covariance judgements, A = Cov(X,mu) Var(mu)+ and the prevision and
variance of U follow by subtraction. The synthesis then runs in two stages:
adjust the class means by the per-class sample means, then push the
adjusted means through A. Var(U) bounds the uncertainty that any amount of
modelling from these classes can resolve.

Stacking convention: mu is class-major, vec((mu_1, ..., mu_m)) - all q
entries of class 1, then class 2, and so on. Every matrix in this module is
laid out against that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .beliefs import BeliefSpec, JointBelief, VariableSet, adjust_expectation, adjust_variance
from .errors import (
    EmptyClass,
    IncoherentElicitation,
    InvalidInput,
    ShapeError,
)
from .linalg import PSD_TOL, in_range_of, is_psd, pseudo_inverse, psd_margin, symmetrize

# slack, in percentage points, for the resolved-uncertainty ordering checks
_PCT_SLACK = 1e-6


def _finite_or_nan(m, name: str) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if np.any(np.isinf(a)):
        raise InvalidInput(f"{name} contains infinite entries")
    return a


@dataclass(frozen=True)
class ClassStructure:
    """Prior second-order judgements over the class means.

    ``var_mu`` holds Var(mu) with blocks Cov(mu_i, mu_k); ``cov_x_mu`` is
    Cov(X, mu), shape q x (m q); ``var_resid`` holds one within-class
    residual variance per class (identical across members by
    exchangeability). Cross entries may be NaN while the structure is under
    construction; a partial structure supports completion but no synthesis.
    """

    quantity: VariableSet
    class_labels: tuple[str, ...]
    n: tuple[int, ...]
    prevision_mu: np.ndarray
    var_mu: np.ndarray
    var_resid: tuple[np.ndarray, ...]
    cov_x_mu: np.ndarray

    def __post_init__(self):
        q = len(self.quantity)
        labels = tuple(str(c) for c in self.class_labels)
        if not labels:
            raise InvalidInput("at least one class is required")
        if len(set(labels)) != len(labels):
            raise InvalidInput("class labels must be unique")
        m = len(labels)
        counts = tuple(int(k) for k in self.n)
        if len(counts) != m or any(k < 1 for k in counts):
            raise InvalidInput("each class needs a count n_i >= 1")
        prev = np.asarray(self.prevision_mu, dtype=float).reshape(-1)
        if prev.shape != (m * q,):
            raise ShapeError(f"prevision_mu must have length {m * q}")
        var_mu = _finite_or_nan(self.var_mu, "var_mu")
        if var_mu.shape != (m * q, m * q):
            raise ShapeError(f"var_mu must be {m * q}x{m * q}")
        cov = _finite_or_nan(self.cov_x_mu, "cov_x_mu")
        if cov.shape != (q, m * q):
            raise ShapeError(f"cov_x_mu must be {q}x{m * q}")
        resid = tuple(symmetrize(r, f"var_resid[{i}]") for i, r in enumerate(self.var_resid))
        if len(resid) != m:
            raise ShapeError("one residual variance block per class is required")
        for i, r in enumerate(resid):
            if r.shape != (q, q):
                raise ShapeError(f"var_resid[{i}] must be {q}x{q}")
            if not is_psd(r):
                raise IncoherentElicitation(
                    f"residual variance for class {labels[i]!r} is not non-negative definite"
                )
        complete = bool(np.all(np.isfinite(var_mu)) and np.all(np.isfinite(cov)))
        if complete:
            var_mu = symmetrize(var_mu, "var_mu")
            if not is_psd(var_mu):
                raise IncoherentElicitation(
                    f"Var(mu) is not non-negative definite (margin {psd_margin(var_mu):.3e})"
                )
        for arr in (prev, var_mu, cov, *resid):
            arr.flags.writeable = False
        object.__setattr__(self, "class_labels", labels)
        object.__setattr__(self, "n", counts)
        object.__setattr__(self, "prevision_mu", prev)
        object.__setattr__(self, "var_mu", var_mu)
        object.__setattr__(self, "cov_x_mu", cov)
        object.__setattr__(self, "var_resid", resid)
        object.__setattr__(self, "_complete", complete)

    @property
    def q(self) -> int:
        return len(self.quantity)

    @property
    def m(self) -> int:
        return len(self.class_labels)

    @property
    def complete(self) -> bool:
        return self._complete

    def block(self, i: int) -> slice:
        """Index range of class i (0-based) in the stacked mu order."""
        return slice(i * self.q, (i + 1) * self.q)

    def with_counts(self, n) -> "ClassStructure":
        return ClassStructure(
            self.quantity, self.class_labels, tuple(n), self.prevision_mu,
            self.var_mu, self.var_resid, self.cov_x_mu,
        )

    def require_complete(self) -> None:
        if not self._complete:
            raise InvalidInput("class structure has unfilled cross-covariance entries")


@dataclass(frozen=True)
class ModelOutput:
    model_id: str
    values: np.ndarray
    timestamp: str | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise InvalidInput(f"model {self.model_id!r} reports non-finite values")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class ModelOutputBatch:
    """Observed estimates, grouped by co-exchangeable class."""

    variables: VariableSet
    outputs: dict[str, tuple[ModelOutput, ...]]

    def __post_init__(self):
        q = len(self.variables)
        clean: dict[str, tuple[ModelOutput, ...]] = {}
        for label, items in self.outputs.items():
            items = tuple(items)
            if not items:
                raise EmptyClass(f"class {label!r} has no model outputs")
            for out in items:
                if out.values.shape != (q,):
                    raise ShapeError(
                        f"model {out.model_id!r} supplies {out.values.shape[0]} values, expected {q}"
                    )
            clean[str(label)] = items
        object.__setattr__(self, "outputs", clean)

    def counts(self) -> dict[str, int]:
        return {label: len(items) for label, items in self.outputs.items()}

    def class_matrix(self, label: str) -> np.ndarray:
        return np.stack([o.values for o in self.outputs[label]])


def _check_conforms(cs: ClassStructure, batch: ModelOutputBatch) -> None:
    cs.require_complete()
    if tuple(batch.variables.names) != tuple(cs.quantity.names):
        raise ShapeError("batch variables do not match the class structure quantity")
    missing = [c for c in cs.class_labels if c not in batch.outputs]
    if missing:
        raise EmptyClass(f"no outputs for class(es) {missing}")
    extra = [c for c in batch.outputs if c not in cs.class_labels]
    if extra:
        raise InvalidInput(f"batch contains undeclared class(es) {extra}")
    for i, label in enumerate(cs.class_labels):
        have = len(batch.outputs[label])
        if have != cs.n[i]:
            raise ShapeError(
                f"class {label!r} declares n={cs.n[i]} but the batch has {have} outputs"
            )


@dataclass(frozen=True)
class SampleMeans:
    """Per-class sample means and their implied joint covariance.

    Var(Zbar) has diagonal blocks Var(mu_i) + Var(R_i)/n_i and off-diagonal
    blocks Cov(mu_i, mu_k); Cov(mu, Zbar) equals Var(mu) block for block, so
    the sample means are all the data the mean-adjustment ever needs.
    """

    zbar: np.ndarray
    var_zbar: np.ndarray


def sample_means(cs: ClassStructure, batch: ModelOutputBatch) -> SampleMeans:
    """Collapse a batch to per-class sample means, with their covariance."""
    _check_conforms(cs, batch)
    zbar = np.concatenate(
        [batch.class_matrix(label).mean(axis=0) for label in cs.class_labels]
    )
    var_zbar = cs.var_mu.copy()
    for i in range(cs.m):
        b = cs.block(i)
        var_zbar[b, b] += cs.var_resid[i] / cs.n[i]
    return SampleMeans(zbar=zbar, var_zbar=symmetrize(var_zbar, warn=False))


@dataclass(frozen=True)
class SynthesisWeights:
    """The derived weight matrix and discrepancy moments.

    Var(X) = A Var(mu) A' + Var(U) holds by construction; an indefinite
    Var(U) means the covariance judgements between X and the class means
    over-claim how informative the classes can possibly be.
    """

    a: np.ndarray
    prevision_u: np.ndarray
    var_u: np.ndarray
    class_labels: tuple[str, ...] = field(default=(), compare=False)

    @property
    def q(self) -> int:
        return self.a.shape[0]

    @property
    def m(self) -> int:
        return self.a.shape[1] // self.a.shape[0]

    def block(self, i: int) -> np.ndarray:
        """Weight block A_i applied to class i's mean."""
        return self.a[:, i * self.q:(i + 1) * self.q]


def derive_weights(prior_x: BeliefSpec, cs: ClassStructure) -> SynthesisWeights:
    """Derive A, P(U) and Var(U) from the prior specification.

    A solves Var(mu) A' = Cov(mu, X); when Var(mu) is rank deficient the
    minimum-norm solution is taken, which requires Cov(mu, X) to lie in the
    range of Var(mu).
    """
    cs.require_complete()
    if tuple(prior_x.variables.names) != tuple(cs.quantity.names):
        raise ShapeError("prior variables do not match the class structure quantity")
    if not in_range_of(cs.var_mu, cs.cov_x_mu.T):
        raise IncoherentElicitation(
            "Cov(mu, X) is not in the range of Var(mu): the stated covariance with X "
            "claims information outside the span of the class means"
        )
    a = cs.cov_x_mu @ pseudo_inverse(cs.var_mu)
    prevision_u = prior_x.prevision - a @ cs.prevision_mu
    var_u = symmetrize(prior_x.covariance - a @ cs.var_mu @ a.T, warn=False)
    margin = psd_margin(var_u)
    if margin < -PSD_TOL:
        raise IncoherentElicitation(
            f"implied discrepancy variance is indefinite (PSD margin {margin:.3e}); "
            "the class-to-quantity correlations over-claim model informativeness"
        )
    return SynthesisWeights(a=a, prevision_u=prevision_u, var_u=var_u, class_labels=cs.class_labels)


@dataclass(frozen=True)
class PbaReport:
    """Everything the synthesis resolves about the quantity of interest."""

    variables: VariableSet
    class_labels: tuple[str, ...]
    adjusted_class_means: np.ndarray
    pba: np.ndarray
    adjusted_var: np.ndarray
    resolved_pct: np.ndarray
    max_resolvable_pct: np.ndarray
    weights: SynthesisWeights
    zbar: np.ndarray
    prior_prevision: np.ndarray
    prior_var_diag: np.ndarray

    def __post_init__(self):
        ru, mru = self.resolved_pct, self.max_resolvable_pct
        if np.any(ru < -_PCT_SLACK) or np.any(mru > 100.0 + _PCT_SLACK) or np.any(
            ru > mru + _PCT_SLACK
        ):
            raise IncoherentElicitation(
                "resolved-uncertainty accounting violated 0 <= RU <= MRU <= 100"
            )

    def class_means_matrix(self) -> np.ndarray:
        """Adjusted class means, one row per class."""
        q = len(self.variables)
        return self.adjusted_class_means.reshape(len(self.class_labels), q)


def pba(prior_x: BeliefSpec, cs: ClassStructure, batch: ModelOutputBatch) -> PbaReport:
    """Posterior belief assessment of the quantity of interest.

    Stage one adjusts the stacked class means by the per-class sample means;
    stage two maps them through the weight matrix and adds the discrepancy
    prevision. The adjusted variance comes from adjusting X by the adjusted
    means themselves.
    """
    weights = derive_weights(prior_x, cs)
    sm = sample_means(cs, batch)

    mean_joint = JointBelief(
        prevision_b=cs.prevision_mu,
        prevision_d=cs.prevision_mu,
        var_b=cs.var_mu,
        var_d=sm.var_zbar,
        cov_bd=cs.var_mu,
        labels=("mu", "zbar"),
    )
    adjusted_means = adjust_expectation(mean_joint, sm.zbar)
    pba_vec = weights.a @ adjusted_means + weights.prevision_u

    # Var and Cov of the adjusted means: Var(Zcal) = Var(mu) Var(Zbar)+ Var(mu),
    # Cov(X, Zcal) = A Var(Zcal).
    var_zcal = symmetrize(cs.var_mu @ pseudo_inverse(sm.var_zbar) @ cs.var_mu, warn=False)
    x_joint = JointBelief(
        prevision_b=prior_x.prevision,
        prevision_d=cs.prevision_mu,
        var_b=prior_x.covariance,
        var_d=var_zcal,
        cov_bd=weights.a @ var_zcal,
        labels=("X", "zcal"),
    )
    adjusted_var = adjust_variance(x_joint)

    prior_diag = np.diag(prior_x.covariance)
    with np.errstate(divide="ignore", invalid="ignore"):
        ru = np.where(prior_diag > 0, (1.0 - np.diag(adjusted_var) / prior_diag) * 100.0, 0.0)
        mru = np.where(prior_diag > 0, (1.0 - np.diag(weights.var_u) / prior_diag) * 100.0, 0.0)

    return PbaReport(
        variables=prior_x.variables,
        class_labels=cs.class_labels,
        adjusted_class_means=adjusted_means,
        pba=pba_vec,
        adjusted_var=adjusted_var,
        resolved_pct=ru,
        max_resolvable_pct=mru,
        weights=weights,
        zbar=sm.zbar,
        prior_prevision=prior_x.prevision,
        prior_var_diag=prior_diag.copy(),
    )


@dataclass(frozen=True)
class DominanceRow:
    class_label: str
    model_id: str
    variable: str
    model_dist: float
    pba_dist: float

    @property
    def margin(self) -> float:
        return self.model_dist - self.pba_dist

    @property
    def dominated(self) -> bool:
        # tiny slack for rounding at the equality boundary
        return self.margin >= -1e-9 * max(self.model_dist, 1.0)


def dominance_check(
    prior_x: BeliefSpec, cs: ClassStructure, batch: ModelOutputBatch
) -> list[DominanceRow]:
    """Prior-quantified squared distances: synthesis versus each model.

    For every output Z_ij and every variable, compares
    ||X - Z_ij||^2 = Var(X - Z_ij) + (P(X) - P(Z_ij))^2 against
    ||X - P(X|data)||^2, which equals the adjusted variance diagonal. The
    synthesis is never further from X than any single model.
    """
    report = pba(prior_x, cs, batch)
    pba_dist = np.diag(report.adjusted_var)
    rows: list[DominanceRow] = []
    prior_diag = np.diag(prior_x.covariance)
    for i, label in enumerate(cs.class_labels):
        b = cs.block(i)
        var_mu_i = np.diag(cs.var_mu[b, b])
        cov_xi = np.diag(cs.cov_x_mu[:, b])
        resid_i = np.diag(cs.var_resid[i])
        offset = (prior_x.prevision - cs.prevision_mu[b]) ** 2
        model_dist = prior_diag - 2.0 * cov_xi + var_mu_i + resid_i + offset
        for out in batch.outputs[label]:
            for v, name in enumerate(prior_x.variables.names):
                rows.append(
                    DominanceRow(
                        class_label=label,
                        model_id=out.model_id,
                        variable=name,
                        model_dist=float(model_dist[v]),
                        pba_dist=float(pba_dist[v]),
                    )
                )
    return rows


@dataclass(frozen=True)
class ConvergenceDiagnostic:
    scales: tuple[float, ...]
    distances: tuple[float, ...]

    @property
    def monotone(self) -> bool:
        return all(a > b for a, b in zip(self.distances, self.distances[1:]))


@dataclass(frozen=True)
class ConvergenceLimit:
    """The infinite-model limit of the synthesis.

    As every class count grows without bound the assessment tends to
    A mu + P(U) evaluated at the realised class means: the ultimate
    weighting across classes is fixed a priori, and the discrepancy
    prevision never washes out.
    """

    weights: SynthesisWeights
    cs: ClassStructure

    def limit(self, mu_star) -> np.ndarray:
        mu_star = np.asarray(mu_star, dtype=float).reshape(-1)
        if mu_star.shape != (self.cs.m * self.cs.q,):
            raise ShapeError(f"mu_star must have length {self.cs.m * self.cs.q}")
        return self.weights.a @ mu_star + self.weights.prevision_u

    def diagnostic(
        self, mu_star, scales: tuple[float, ...] = (1.0, 1e-2, 1e-4, 1e-6)
    ) -> ConvergenceDiagnostic:
        """Distance to the limit as the residual share of Var(Zbar) shrinks.

        Holds the observed sample means at mu_star and scales Var(R_i)/n_i
        by each factor; the synthesis must approach the limit monotonically.
        """
        target = self.limit(mu_star)
        mu_star = np.asarray(mu_star, dtype=float).reshape(-1)
        dists = []
        for t in scales:
            var_zbar = self.cs.var_mu.copy()
            for i in range(self.cs.m):
                b = self.cs.block(i)
                var_zbar[b, b] += t * self.cs.var_resid[i] / self.cs.n[i]
            adjusted = self.cs.prevision_mu + self.cs.var_mu @ (
                pseudo_inverse(var_zbar) @ (mu_star - self.cs.prevision_mu)
            )
            value = self.weights.a @ adjusted + self.weights.prevision_u
            dists.append(float(np.linalg.norm(value - target)))
        return ConvergenceDiagnostic(scales=tuple(scales), distances=tuple(dists))


def convergence_limit(prior_x: BeliefSpec, cs: ClassStructure) -> ConvergenceLimit:
    return ConvergenceLimit(weights=derive_weights(prior_x, cs), cs=cs)
