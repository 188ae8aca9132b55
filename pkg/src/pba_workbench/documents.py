"""Document schemas and canonical serialization.

Every persisted artefact is a JSON document with an explicit
``schema_version`` and ``kind``. Serialization is canonical - sorted keys,
minimal separators, shortest-repr floats, trailing newline - so documents
round-trip byte-identically and content hashes are stable audit anchors.

Matrices are stored row-major with the variable order embedded in the
document; stacked class-mean quantities are class-major (all variables of
the first class, then the second, ...).
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .beliefs import BeliefSpec, VariableSet
from .class_priors import (
    ClassPrior,
    complete_by_separation,
    complete_by_zero_fill,
    preference_separation_rules,
    scale_class_covariances,
)
from .elicitation import ElicitationSession, Hypothetical, StepRecord
from .errors import SchemaError
from .synthesis import ClassStructure, ModelOutput, ModelOutputBatch, PbaReport

SCHEMA_VERSION = 1


def canonical_json(doc: dict) -> bytes:
    return (json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n").encode(
        "utf-8"
    )


def content_hash(doc: dict) -> str:
    return hashlib.sha256(canonical_json(doc)).hexdigest()


def _require(doc: dict, kind: str) -> None:
    if not isinstance(doc, dict):
        raise SchemaError(f"{kind} document must be an object")
    if doc.get("kind") != kind:
        raise SchemaError(f"expected a {kind!r} document, got kind={doc.get('kind')!r}")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {doc.get('schema_version')!r}")


def _floats(values) -> list[float]:
    return [float(v) for v in values]


def _matrix(values) -> list[list[float]]:
    return [[float(v) for v in row] for row in np.asarray(values, dtype=float)]


# --- variables ---------------------------------------------------------------

def variables_to_doc(vs: VariableSet) -> dict:
    return {
        "names": list(vs.names),
        "units": list(vs.units),
        "integral": list(vs.integral),
    }


def variables_from_doc(d: dict) -> VariableSet:
    try:
        return VariableSet(
            names=tuple(d["names"]),
            units=tuple(d.get("units") or ()),
            integral=tuple(d.get("integral") or ()),
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad variables block: {exc}") from exc


# --- prior (belief specification) --------------------------------------------

def prior_to_doc(spec: BeliefSpec, doc_id: str | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "prior",
        "id": doc_id,
        "variables": variables_to_doc(spec.variables),
        "prevision": _floats(spec.prevision),
        "covariance": _matrix(spec.covariance),
    }


def prior_from_doc(d: dict) -> BeliefSpec:
    _require(d, "prior")
    try:
        return BeliefSpec(
            variables=variables_from_doc(d["variables"]),
            prevision=np.array(d["prevision"], dtype=float),
            covariance=np.array(d["covariance"], dtype=float),
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad prior document: {exc}") from exc


# --- class structure (elicitation-level inputs) -------------------------------

def class_config_to_doc(
    variables: VariableSet,
    classes: list[ClassPrior],
    cross_class_corr: dict[tuple[str, str], tuple[float, ...]],
    completion: str = "preference",
    doc_id: str | None = None,
) -> dict:
    names = variables.names
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "class_structure",
        "id": doc_id,
        "variables": variables_to_doc(variables),
        "classes": [
            {
                "label": c.label,
                "count": c.count,
                "mean_pct": float(c.mean_pct),
                "resid_pct": float(c.resid_pct),
                "corr_with_quantity": {n: float(r) for n, r in zip(names, c.corr_with_quantity)},
            }
            for c in classes
        ],
        "cross_class_corr": {
            f"{a}|{b}": {n: float(r) for n, r in zip(names, rho)}
            for (a, b), rho in cross_class_corr.items()
        },
        "completion": completion,
    }


def class_config_from_doc(d: dict):
    _require(d, "class_structure")
    variables = variables_from_doc(d["variables"])
    names = variables.names
    try:
        classes = [
            ClassPrior(
                label=c["label"],
                mean_pct=float(c["mean_pct"]),
                resid_pct=float(c["resid_pct"]),
                corr_with_quantity=tuple(float(c["corr_with_quantity"][n]) for n in names),
                count=int(c.get("count", 1)),
            )
            for c in d["classes"]
        ]
        cross = {}
        for key, table in d.get("cross_class_corr", {}).items():
            a, _, b = key.partition("|")
            if not b:
                raise SchemaError(f"cross_class_corr key {key!r} must be 'label|label'")
            cross[(a, b)] = tuple(float(table[n]) for n in names)
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad class_structure document: {exc}") from exc
    completion = d.get("completion", "preference")
    if completion not in ("preference", "zero"):
        raise SchemaError(f"unknown completion mode {completion!r}")
    return variables, classes, cross, completion


def build_class_structure(prior: BeliefSpec, class_doc: dict) -> ClassStructure:
    """Scale the prior by the class document's judgements and complete it."""
    variables, classes, cross, completion = class_config_from_doc(class_doc)
    if tuple(variables.names) != tuple(prior.variables.names):
        raise SchemaError("class document variables do not match the prior")
    partial = scale_class_covariances(prior, classes, cross)
    if completion == "zero":
        return complete_by_zero_fill(prior, partial)
    rules = preference_separation_rules(prior.variables, partial.class_labels)
    return complete_by_separation(prior, partial, rules)


# --- model output batch -------------------------------------------------------

def batch_to_doc(batch: ModelOutputBatch, doc_id: str | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "batch",
        "id": doc_id,
        "variables": variables_to_doc(batch.variables),
        "outputs": {
            label: [
                {"model_id": o.model_id, "values": _floats(o.values), "timestamp": o.timestamp}
                for o in items
            ]
            for label, items in batch.outputs.items()
        },
    }


def batch_from_doc(d: dict) -> ModelOutputBatch:
    _require(d, "batch")
    variables = variables_from_doc(d["variables"])
    try:
        outputs = {
            label: tuple(
                ModelOutput(
                    model_id=o["model_id"],
                    values=np.array(o["values"], dtype=float),
                    timestamp=o.get("timestamp"),
                )
                for o in items
            )
            for label, items in d["outputs"].items()
        }
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad batch document: {exc}") from exc
    return ModelOutputBatch(variables=variables, outputs=outputs)


# --- synthesis report ----------------------------------------------------------

def report_to_doc(
    report: PbaReport,
    batch: ModelOutputBatch,
    inputs: dict,
    doc_id: str | None = None,
) -> dict:
    m = len(report.class_labels)
    q = len(report.variables)
    prior_sd = np.sqrt(report.prior_var_diag)
    adjusted_sd = np.sqrt(np.diag(report.adjusted_var))
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "report",
        "id": doc_id,
        "inputs": inputs,
        "variables": variables_to_doc(report.variables),
        "class_labels": list(report.class_labels),
        "zbar": _matrix(report.zbar.reshape(m, q)),
        "adjusted_class_means": _matrix(report.class_means_matrix()),
        "pba": _floats(report.pba),
        # two-standard-deviation bands, unclipped; clipping count variables
        # at zero is a display concern
        "prior_band": {
            "lower": _floats(report.prior_prevision - 2.0 * prior_sd),
            "upper": _floats(report.prior_prevision + 2.0 * prior_sd),
        },
        "adjusted_band": {
            "lower": _floats(report.pba - 2.0 * adjusted_sd),
            "upper": _floats(report.pba + 2.0 * adjusted_sd),
        },
        "adjusted_var": _matrix(report.adjusted_var),
        "adjusted_var_diag": _floats(np.diag(report.adjusted_var)),
        "resolved_pct": _floats(report.resolved_pct),
        "max_resolvable_pct": _floats(report.max_resolvable_pct),
        "prior_prevision": _floats(report.prior_prevision),
        "prior_var_diag": _floats(report.prior_var_diag),
        "weights": {
            "a_blocks": [_matrix(report.weights.block(i)) for i in range(m)],
            "prevision_u": _floats(report.weights.prevision_u),
            "var_u": _matrix(report.weights.var_u),
            "var_u_diag": _floats(np.diag(report.weights.var_u)),
        },
        "model_outputs": {
            label: [
                {"model_id": o.model_id, "values": _floats(o.values)} for o in items
            ]
            for label, items in batch.outputs.items()
        },
    }


# --- elicitation session --------------------------------------------------------

def session_to_doc(session: ElicitationSession, doc_id: str | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "session",
        "id": doc_id,
        "variables": variables_to_doc(session.variables),
        "multiplier": session.multiplier,
        "status": session.status,
        "prior_previsions": _floats(session.prior_previsions),
        "hypotheticals": [
            {"variable": h.variable, "exact": h.exact, "display": h.display}
            for h in session.hypotheticals
        ],
        "answers": [
            {
                "variable": a.variable,
                "conditional_previsions": _floats(a.conditional_previsions),
                "conditional_variance": a.conditional_variance,
                "prior_prevision": a.prior_prevision,
            }
            for a in session.answers
        ],
        "g_history": [_floats(g) for g in session.g_history],
        "u": _matrix(session.u),
        "marginal_variances": (
            _floats(session.marginal_variances) if session.marginal_variances is not None else None
        ),
    }


def session_from_doc(d: dict) -> ElicitationSession:
    _require(d, "session")
    try:
        return ElicitationSession(
            variables=variables_from_doc(d["variables"]),
            multiplier=float(d["multiplier"]),
            u=np.array(d["u"], dtype=float),
            prior_previsions=[float(v) for v in d["prior_previsions"]],
            hypotheticals=[
                Hypothetical(h["variable"], float(h["exact"]), float(h["display"]))
                for h in d["hypotheticals"]
            ],
            g_history=[np.array(g, dtype=float) for g in d["g_history"]],
            answers=[
                StepRecord(
                    variable=a["variable"],
                    conditional_previsions=tuple(float(v) for v in a["conditional_previsions"]),
                    conditional_variance=float(a["conditional_variance"]),
                    prior_prevision=float(a["prior_prevision"]),
                )
                for a in d["answers"]
            ],
            marginal_variances=(
                [float(v) for v in d["marginal_variances"]]
                if d.get("marginal_variances") is not None
                else None
            ),
            status=d["status"],
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad session document: {exc}") from exc
