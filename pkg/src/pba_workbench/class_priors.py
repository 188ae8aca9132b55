"""Building class-mean covariance structures from elicited judgements.

The expert gives, per class, the share of the prior variance carried by the
class mean and by the within-class residual, plus per-variable correlations
linking each class mean to the quantity and to the other class means. The
mean and residual blocks reuse the correlation structure of the prior
covariance with standard deviations scaled by the square root of the
shares.

Those judgements only pin down the same-variable entries of the cross
blocks. The remaining entries are completed either by belief separations -
orthogonality judgements "a is uncorrelated with b given mediator c", each
implying Cov(a,b) = Cov(a,c) Var(c)+ Cov(c,b) - or conservatively by
zero-fill, which never increases any correlation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beliefs import BeliefSpec, JointBelief, VariableSet, check_coherence
from .errors import (
    IncoherentElicitation,
    IncompleteRules,
    InvalidInput,
    ShapeError,
)
from .synthesis import ClassStructure

# element address: (class label, variable name); class None is the quantity itself
Element = tuple[str | None, str]


@dataclass(frozen=True)
class ClassPrior:
    """One class's elicited inputs."""

    label: str
    mean_pct: float
    resid_pct: float
    corr_with_quantity: tuple[float, ...]
    count: int = 1

    def __post_init__(self):
        # a zero residual share is allowed (members that reproduce their class
        # mean exactly); the mean share cannot vanish or exceed the whole
        if not (0.0 < self.mean_pct <= 100.0) or not (0.0 <= self.resid_pct <= 100.0):
            raise InvalidInput(f"class {self.label!r}: variance shares must be within (0, 100]")
        if self.mean_pct + self.resid_pct > 100.0 + 1e-9:
            raise InvalidInput(
                f"class {self.label!r}: mean and residual shares exceed 100% of the prior variance"
            )
        object.__setattr__(self, "corr_with_quantity", tuple(float(r) for r in self.corr_with_quantity))
        for r in self.corr_with_quantity:
            if not -1.0 <= r <= 1.0:
                raise InvalidInput(f"class {self.label!r}: correlation {r} outside [-1, 1]")


@dataclass(frozen=True)
class SeparationRule:
    """Judgement that ``target_a`` and ``target_b`` are uncorrelated given ``mediator``.

    The mediator must share a class with one target and a variable with the
    other, so the three covariances on the right-hand side of the product
    formula are already pinned down by the per-variable judgements.
    """

    target_a: Element
    target_b: Element
    mediator: Element

    def __post_init__(self):
        (ca, va), (cb, vb), (cm, vm) = self.target_a, self.target_b, self.mediator
        if (ca, va) == (cb, vb):
            raise InvalidInput("separation targets must be distinct elements")
        ok = (cm == ca and vm == vb) or (cm == cb and vm == va)
        if not ok:
            raise InvalidInput(
                f"mediator {self.mediator} must share a class with one of {self.target_a}, "
                f"{self.target_b} and a variable with the other"
            )


def scale_class_covariances(
    prior_x: BeliefSpec,
    classes: list[ClassPrior],
    cross_class_corr: dict[tuple[str, str], tuple[float, ...]],
) -> ClassStructure:
    """Lay out a class structure from variance shares and per-variable correlations.

    Returns a partial structure: the same-variable entries of every cross
    block are filled, all other cross entries are left NaN for completion.
    Class means are a priori unbiased (their previsions copy the prior's).
    """
    q = prior_x.dim
    m = len(classes)
    if m == 0:
        raise InvalidInput("at least one class is required")
    labels = [c.label for c in classes]
    for c in classes:
        if len(c.corr_with_quantity) != q:
            raise ShapeError(f"class {c.label!r}: need one quantity correlation per variable")
    vx = prior_x.covariance
    var_mu = np.full((m * q, m * q), np.nan)
    cov_x_mu = np.full((q, m * q), np.nan)
    var_resid = []

    fractions = {c.label: c.mean_pct / 100.0 for c in classes}
    for i, c in enumerate(classes):
        b = slice(i * q, (i + 1) * q)
        f = fractions[c.label]
        var_mu[b, b] = f * vx
        var_resid.append((c.resid_pct / 100.0) * vx)
        # same-variable covariances with the quantity
        diag = np.array(c.corr_with_quantity) * np.sqrt(f) * np.diag(vx)
        blk = np.full((q, q), np.nan)
        np.fill_diagonal(blk, diag)
        cov_x_mu[:, b] = blk

    lookup = dict(cross_class_corr)
    for i in range(m):
        for k in range(i + 1, m):
            key = (labels[i], labels[k])
            rho = lookup.pop(key, None)
            if rho is None:
                rho = lookup.pop((labels[k], labels[i]), None)
            if rho is None:
                raise InvalidInput(f"missing cross-class correlations for pair {key}")
            rho = np.asarray(rho, dtype=float).reshape(-1)
            if rho.shape != (q,):
                raise ShapeError(f"pair {key}: need one correlation per variable")
            f2 = np.sqrt(fractions[labels[i]] * fractions[labels[k]])
            blk = np.full((q, q), np.nan)
            np.fill_diagonal(blk, rho * f2 * np.diag(vx))
            bi, bk = slice(i * q, (i + 1) * q), slice(k * q, (k + 1) * q)
            var_mu[bi, bk] = blk
            var_mu[bk, bi] = blk.T
    if lookup:
        raise InvalidInput(f"cross-class correlations for unknown pair(s) {sorted(lookup)}")

    return ClassStructure(
        quantity=prior_x.variables,
        class_labels=tuple(labels),
        n=tuple(c.count for c in classes),
        prevision_mu=np.tile(prior_x.prevision, m),
        var_mu=var_mu,
        var_resid=tuple(var_resid),
        cov_x_mu=cov_x_mu,
    )


def preference_separation_rules(
    variables: VariableSet, class_labels: tuple[str, ...]
) -> list[SeparationRule]:
    """One separation per missing cross entry, mediated by preference order.

    For a pair of elements in different classes and different variables, the
    mediator is the element at the earlier-ordered variable inside the other
    member's class, so judgements about early variables (the ones the expert
    trusts most) carry the completion.
    """
    names = variables.names
    rules: list[SeparationRule] = []
    groups: list[str | None] = [None, *class_labels]
    for a_idx, ca in enumerate(groups):
        for cb in groups[a_idx + 1:]:
            for l, vl in enumerate(names):
                for mm, vm in enumerate(names):
                    if l == mm:
                        continue
                    a: Element = (ca, vl)
                    b: Element = (cb, vm)
                    mediator: Element = (cb, vl) if l < mm else (ca, vm)
                    rules.append(SeparationRule(target_a=a, target_b=b, mediator=mediator))
    return rules


class _JointView:
    """Index the joint (X, mu) matrix by (class, variable) elements."""

    def __init__(self, prior_x: BeliefSpec, cs: ClassStructure):
        self.q = cs.q
        self.names = {name: i for i, name in enumerate(cs.quantity.names)}
        self.classes = {label: i for i, label in enumerate(cs.class_labels)}
        self.joint = np.block(
            [[prior_x.covariance, cs.cov_x_mu], [cs.cov_x_mu.T, cs.var_mu]]
        )

    def index(self, el: Element) -> int:
        label, var = el
        v = self.names.get(var)
        if v is None:
            raise InvalidInput(f"unknown variable {var!r} in separation rule")
        if label is None:
            return v
        c = self.classes.get(label)
        if c is None:
            raise InvalidInput(f"unknown class {label!r} in separation rule")
        return self.q * (1 + c) + v


def complete_by_separation(
    prior_x: BeliefSpec, partial: ClassStructure, rules: list[SeparationRule]
) -> ClassStructure:
    """Fill every missing cross entry through its separation product.

    Each rule must target a missing entry, each missing entry must be
    covered exactly once, and all mediator quantities must already be
    populated. The completed joint specification is validated for
    coherence before the structure is returned.
    """
    view = _JointView(prior_x, partial)
    joint = view.joint
    for rule in rules:
        ia, ib = view.index(rule.target_a), view.index(rule.target_b)
        ic = view.index(rule.mediator)
        if not np.isnan(joint[ia, ib]):
            raise IncompleteRules(
                f"rule for {rule.target_a} x {rule.target_b} targets an entry that is "
                "already populated or covered twice"
            )
        cac = joint[ia, ic]
        ccb = joint[ic, ib]
        vc = joint[ic, ic]
        if np.isnan(cac) or np.isnan(ccb) or np.isnan(vc):
            raise IncompleteRules(
                f"mediator quantities for {rule.target_a} x {rule.target_b} are not populated"
            )
        value = cac * (ccb / vc) if vc > 0 else 0.0
        joint[ia, ib] = value
        joint[ib, ia] = value
    if np.any(np.isnan(joint)):
        missing = int(np.isnan(joint).sum() // 2)
        raise IncompleteRules(f"{missing} cross entries remain uncovered by the rules")
    return _structure_from_joint(prior_x, partial, joint)


def complete_by_zero_fill(prior_x: BeliefSpec, partial: ClassStructure) -> ClassStructure:
    """Set every missing cross entry to zero: the conservative completion."""
    view = _JointView(prior_x, partial)
    joint = view.joint
    joint[np.isnan(joint)] = 0.0
    return _structure_from_joint(prior_x, partial, joint)


def _structure_from_joint(
    prior_x: BeliefSpec, partial: ClassStructure, joint: np.ndarray
) -> ClassStructure:
    q = partial.q
    cs = ClassStructure(
        quantity=partial.quantity,
        class_labels=partial.class_labels,
        n=partial.n,
        prevision_mu=partial.prevision_mu,
        var_mu=joint[q:, q:],
        var_resid=partial.var_resid,
        cov_x_mu=joint[:q, q:],
    )
    verdict = check_coherence(
        JointBelief(
            prevision_b=prior_x.prevision,
            prevision_d=cs.prevision_mu,
            var_b=prior_x.covariance,
            var_d=cs.var_mu,
            cov_bd=cs.cov_x_mu,
            labels=("X", "mu"),
        )
    )
    if not verdict.passed:
        failed = ", ".join(f"{c.name} (margin {c.margin:.3e})" for c in verdict.failures())
        raise IncoherentElicitation(f"completed joint specification incoherent: {failed}")
    return cs
