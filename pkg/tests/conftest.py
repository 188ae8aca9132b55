"""Shared generators: random coherent specifications and session simulation."""

from __future__ import annotations

import numpy as np
import pytest

from pba_workbench.beliefs import BeliefSpec, VariableSet
from pba_workbench.elicitation import finalize, next_question, start_session, submit_answers
from pba_workbench.synthesis import ClassStructure, ModelOutput, ModelOutputBatch


def random_psd(rng: np.random.Generator, n: int, rank: int | None = None) -> np.ndarray:
    g = rng.normal(size=(n, rank or n))
    return g @ g.T


def random_structure(
    rng: np.random.Generator,
    q: int | None = None,
    m: int | None = None,
    n_max: int = 5,
    rank_deficient: bool = False,
):
    """A coherent (prior, class structure) pair.

    The joint over (X, mu) is a Gram matrix, so coherence (and the range
    condition on Cov(mu, X)) holds by construction; a well-scaled identity
    jitter keeps the full-rank variant comfortably conditioned.
    """
    q = q or int(rng.integers(1, 6))
    m = m or int(rng.integers(1, 4))
    dim = q * (m + 1)
    if rank_deficient:
        rank = max(1, dim - int(rng.integers(1, q + 1)))
        joint = random_psd(rng, dim, rank)
    else:
        joint = random_psd(rng, dim)
        joint += 0.1 * (np.trace(joint) / dim) * np.eye(dim)

    variables = VariableSet(names=tuple(f"v{i}" for i in range(q)))
    labels = tuple(f"c{i}" for i in range(m))
    prior = BeliefSpec(
        variables=variables,
        prevision=rng.normal(0.0, 10.0, size=q),
        covariance=joint[:q, :q],
    )
    var_resid = tuple(
        random_psd(rng, q) + 0.2 * np.eye(q) for _ in range(m)
    )
    cs = ClassStructure(
        quantity=variables,
        class_labels=labels,
        n=tuple(int(v) for v in rng.integers(1, n_max + 1, size=m)),
        prevision_mu=rng.normal(0.0, 10.0, size=m * q),
        var_mu=joint[q:, q:],
        var_resid=var_resid,
        cov_x_mu=joint[:q, q:],
    )
    return prior, cs


def random_batch(rng: np.random.Generator, cs: ClassStructure) -> ModelOutputBatch:
    outputs = {}
    k = 0
    for i, label in enumerate(cs.class_labels):
        items = []
        for j in range(cs.n[i]):
            values = cs.prevision_mu[cs.block(i)] + rng.normal(0.0, 5.0, size=cs.q)
            items.append(ModelOutput(model_id=f"{label}-m{j}", values=values))
            k += 1
        outputs[label] = tuple(items)
    return ModelOutputBatch(variables=cs.quantity, outputs=outputs)


def full_output_joint(cs: ClassStructure):
    """Second-order spec of the full stacked outputs Z (class-major, member-major).

    Returns (prevision_z, var_z, cov_mu_z, cov_x_z): Var(Z) has blocks
    Cov(mu_i, mu_k) plus Var(R_i) on same-member diagonals; every member of
    class i covaries with mu like mu_i does.
    """
    q, m = cs.q, cs.m
    counts = cs.n
    total = sum(counts)
    var_z = np.zeros((total * q, total * q))
    cov_mu_z = np.zeros((m * q, total * q))
    cov_x_z = np.zeros((q, total * q))
    prevision_z = np.zeros(total * q)
    offsets = np.cumsum([0, *counts[:-1]])
    for i in range(m):
        bi = cs.block(i)
        for j in range(counts[i]):
            zi = slice((offsets[i] + j) * q, (offsets[i] + j + 1) * q)
            prevision_z[zi] = cs.prevision_mu[bi]
            cov_x_z[:, zi] = cs.cov_x_mu[:, bi]
            cov_mu_z[:, zi] = cs.var_mu[:, bi]
            for k in range(m):
                for l in range(counts[k]):
                    zk = slice((offsets[k] + l) * q, (offsets[k] + l + 1) * q)
                    var_z[np.ix_(range(zi.start, zi.stop), range(zk.start, zk.stop))] = cs.var_mu[
                        np.ix_(range(bi.start, bi.stop), range(cs.block(k).start, cs.block(k).stop))
                    ]
            var_z[np.ix_(range(zi.start, zi.stop), range(zi.start, zi.stop))] += cs.var_resid[i]
    return prevision_z, var_z, cov_mu_z, cov_x_z


def stacked_values(cs: ClassStructure, batch: ModelOutputBatch) -> np.ndarray:
    return np.concatenate(
        [out.values for label in cs.class_labels for out in batch.outputs[label]]
    )


def conditional_answers(cov: np.ndarray, previsions: np.ndarray, hypotheticals: np.ndarray, k: int):
    """True nested conditional previsions and variance for variable k (0-based)."""
    c = []
    for j in range(1, k + 1):
        w = cov[k, :j]
        c.append(
            float(
                previsions[k]
                + w @ np.linalg.solve(cov[:j, :j], hypotheticals[:j] - previsions[:j])
            )
        )
    w = cov[k, :k]
    cond_var = float(cov[k, k] - w @ np.linalg.solve(cov[:k, :k], w))
    return c, cond_var


def simulate_session(cov: np.ndarray, previsions: np.ndarray, multiplier: float = 0.5):
    """Drive a full session with answers computed from a known covariance."""
    n = cov.shape[0]
    variables = VariableSet(names=tuple(f"x{i}" for i in range(n)))
    session = start_session(variables, float(previsions[0]), float(cov[0, 0]), multiplier)
    for k in range(1, n):
        prompt = next_question(session)
        assert prompt.variable == f"x{k}"
        hyp = np.array([h.exact for h in session.hypotheticals[:k]])
        c, cond_var = conditional_answers(cov, previsions, hyp, k)
        submit_answers(session, c, cond_var, float(previsions[k]))
    return session


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20231208)
