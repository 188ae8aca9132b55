"""Bundled example study: four epidemic models of regional case counts.

Nine English regions, three co-exchangeable model classes (a hierarchical
Bayesian regression; two Markov-random-field spatio-temporal models; a deep
Gaussian process), and the full elicited prior. The reference-results
fixture carries the study's published numbers so the whole pipeline can be
validated offline; quantities the study did not publish are flagged
derived in the fixture metadata.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .beliefs import BeliefSpec, VariableSet
from .documents import batch_from_doc, prior_from_doc, variables_from_doc
from .store import WorkspaceStore
from .synthesis import ModelOutputBatch

PRIOR_ID = "study-prior"
CLASSES_ID = "study-classes"
BATCH_ID = "study-batch"


def _fixture(name: str) -> dict:
    ref = resources.files("pba_workbench") / "fixtures" / name
    return json.loads(ref.read_text("utf-8"))


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("pba_workbench") / "fixtures" / name))


def study_variables() -> VariableSet:
    return variables_from_doc(_fixture("study_prior.json")["variables"])


def study_prior_doc() -> dict:
    return _fixture("study_prior.json")


def study_prior() -> BeliefSpec:
    return prior_from_doc(study_prior_doc())


def study_class_doc() -> dict:
    return _fixture("study_classes.json")


def study_batch_doc() -> dict:
    return _fixture("study_batch.json")


def study_batch() -> ModelOutputBatch:
    return batch_from_doc(study_batch_doc())


def study_session_transcript() -> dict:
    return _fixture("study_session.json")


def study_expected() -> dict:
    """Reference results with matrix values as numpy arrays."""
    raw = _fixture("study_expected.json")
    out = dict(raw)
    for key in (
        "correlation_matrix", "covariance_matrix", "adjusted_class_means", "pba",
        "adjusted_var_diag", "prior_var_diag", "var_u_diag", "resolved_pct",
        "max_resolvable_pct", "prevision_u",
    ):
        out[key] = np.array(raw[key], dtype=float)
    out["weight_blocks"] = [np.array(b, dtype=float) for b in raw["weight_blocks"]]
    return out


def install_into_store(store: WorkspaceStore) -> dict[str, str]:
    """Persist the study documents, returning their ids."""
    ids = {}
    for kind, doc in (
        ("prior", study_prior_doc()),
        ("class_structure", study_class_doc()),
        ("batch", study_batch_doc()),
    ):
        ids[kind] = store.save(doc)
    return ids
