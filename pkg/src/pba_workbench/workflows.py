"""Store-level operations composing the math modules.

These are the verbs shared by the CLI and the HTTP API: run a synthesis
over persisted documents, and recompute one under sparse what-if edits to
the elicited correlations and variance shares.
"""

from __future__ import annotations

from dataclasses import dataclass

from .documents import (
    batch_from_doc,
    build_class_structure,
    content_hash,
    prior_from_doc,
    report_to_doc,
)
from .errors import SchemaError
from .store import WorkspaceStore
from .synthesis import PbaReport, pba


@dataclass(frozen=True)
class SynthesisResult:
    report: PbaReport
    doc: dict
    report_id: str | None


def _input_stamp(store: WorkspaceStore, kind: str, doc_id: str) -> dict:
    return {"id": doc_id, "sha256": store.hash_of(kind, doc_id)}


def run_synthesis(
    store: WorkspaceStore,
    prior_id: str,
    class_id: str,
    batch_id: str,
    persist: bool = True,
    report_id: str | None = None,
) -> SynthesisResult:
    """Synthesize the documents into a report, optionally persisting it.

    The report document embeds the content hashes of its inputs so every
    number it carries can be traced to the judgements that produced it.
    """
    prior_doc = store.load("prior", prior_id)
    class_doc = store.load("class_structure", class_id)
    batch_doc = store.load("batch", batch_id)

    prior = prior_from_doc(prior_doc)
    batch = batch_from_doc(batch_doc)
    cs = build_class_structure(prior, class_doc).with_counts(
        [len(batch.outputs[label]) for label in _class_labels(class_doc)]
    )
    report = pba(prior, cs, batch)
    inputs = {
        "prior": _input_stamp(store, "prior", prior_id),
        "classes": _input_stamp(store, "class_structure", class_id),
        "batch": _input_stamp(store, "batch", batch_id),
    }
    doc = report_to_doc(report, batch, inputs, doc_id=report_id)
    saved_id = store.save(doc) if persist else None
    if saved_id is not None:
        doc["id"] = saved_id
    return SynthesisResult(report=report, doc=doc, report_id=saved_id)


def _class_labels(class_doc: dict) -> list[str]:
    return [c["label"] for c in class_doc["classes"]]


def apply_overrides(class_doc: dict, overrides: dict) -> dict:
    """Apply sparse what-if edits to a class document.

    Supported keys: ``corr_with_quantity`` ({class: {variable: rho}}),
    ``cross_class_corr`` ({"a|b": {variable: rho}}), ``mean_pct`` and
    ``resid_pct`` ({class: pct}). Unknown classes or variables are schema
    errors; an empty override map returns an identical document.
    """
    if not overrides:
        return class_doc
    doc = {
        **class_doc,
        "classes": [dict(c, corr_with_quantity=dict(c["corr_with_quantity"])) for c in class_doc["classes"]],
        "cross_class_corr": {k: dict(v) for k, v in class_doc.get("cross_class_corr", {}).items()},
    }
    by_label = {c["label"]: c for c in doc["classes"]}
    names = set(doc["variables"]["names"])

    unknown = set(overrides) - {"corr_with_quantity", "cross_class_corr", "mean_pct", "resid_pct"}
    if unknown:
        raise SchemaError(f"unknown override key(s) {sorted(unknown)}")

    for label, table in (overrides.get("corr_with_quantity") or {}).items():
        if label not in by_label:
            raise SchemaError(f"override references unknown class {label!r}")
        for var, rho in table.items():
            if var not in names:
                raise SchemaError(f"override references unknown variable {var!r}")
            by_label[label]["corr_with_quantity"][var] = float(rho)
    for key, table in (overrides.get("cross_class_corr") or {}).items():
        if key not in doc["cross_class_corr"]:
            raise SchemaError(f"override references unknown class pair {key!r}")
        for var, rho in table.items():
            if var not in names:
                raise SchemaError(f"override references unknown variable {var!r}")
            doc["cross_class_corr"][key][var] = float(rho)
    for field in ("mean_pct", "resid_pct"):
        for label, pct in (overrides.get(field) or {}).items():
            if label not in by_label:
                raise SchemaError(f"override references unknown class {label!r}")
            by_label[label][field] = float(pct)
    return doc


def run_whatif(
    store: WorkspaceStore,
    report_id: str,
    overrides: dict,
    save: bool = False,
) -> SynthesisResult:
    """Recompute a persisted report under sparse judgement edits.

    The recomputed report is not persisted unless ``save`` is set; with no
    overrides the payload is identical to rerunning the original inputs.
    """
    base = store.load("report", report_id)
    inputs = base.get("inputs", {})
    try:
        prior_id = inputs["prior"]["id"]
        class_id = inputs["classes"]["id"]
        batch_id = inputs["batch"]["id"]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"report {report_id!r} carries no input provenance: {exc}") from exc

    prior_doc = store.load("prior", prior_id)
    class_doc = apply_overrides(store.load("class_structure", class_id), overrides)
    batch_doc = store.load("batch", batch_id)

    prior = prior_from_doc(prior_doc)
    batch = batch_from_doc(batch_doc)
    cs = build_class_structure(prior, class_doc).with_counts(
        [len(batch.outputs[label]) for label in _class_labels(class_doc)]
    )
    report = pba(prior, cs, batch)
    stamp = {
        "prior": {"id": prior_id, "sha256": content_hash(prior_doc)},
        "classes": {"id": class_id, "sha256": content_hash(store.load("class_structure", class_id))},
        "batch": {"id": batch_id, "sha256": content_hash(batch_doc)},
    }
    if overrides:
        stamp["overrides"] = overrides
        stamp["base_report"] = {"id": report_id, "sha256": content_hash(base)}
    doc = report_to_doc(report, batch, stamp, doc_id=None)
    saved_id = store.save(doc) if save else None
    if saved_id is not None:
        doc["id"] = saved_id
    else:
        doc.pop("id", None)
    return SynthesisResult(report=report, doc=doc, report_id=saved_id)
