"""CSV ingestion of model outputs.

Expected schema: UTF-8, header ``class,model_id,variable,value`` (extra
``unit`` and ``timestamp`` columns are carried as provenance), "." decimal
separator. Every model must supply every declared variable exactly once.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .beliefs import VariableSet
from .errors import IncompleteModel, InvalidInput, SchemaError
from .synthesis import ModelOutput, ModelOutputBatch

REQUIRED_COLUMNS = ("class", "model_id", "variable", "value")


def ingest_outputs(path: str | Path, variables: VariableSet) -> ModelOutputBatch:
    """Parse a model-output CSV into a batch grouped by class."""
    path = Path(path)
    if not path.exists():
        raise InvalidInput(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise IncompleteModel("(no models found)", variables.names[0])
        missing_cols = [c for c in REQUIRED_COLUMNS if c not in reader.fieldnames]
        if missing_cols:
            raise SchemaError(f"missing column(s) {missing_cols}; expected {REQUIRED_COLUMNS}")
        rows = list(reader)

    if not rows:
        raise IncompleteModel("(no models found)", variables.names[0])

    names = set(variables.names)
    # (class, model) -> {variable: value}; class -> [model order]
    values: dict[tuple[str, str], dict[str, float]] = {}
    order: dict[str, list[str]] = {}
    timestamps: dict[tuple[str, str], str | None] = {}
    for lineno, row in enumerate(rows, start=2):
        label = (row.get("class") or "").strip()
        model = (row.get("model_id") or "").strip()
        var = (row.get("variable") or "").strip()
        raw = (row.get("value") or "").strip()
        if not label or not model or not var:
            raise SchemaError(f"line {lineno}: class, model_id and variable are required")
        if var not in names:
            raise SchemaError(f"line {lineno}: unknown variable {var!r}")
        try:
            value = float(raw)
        except ValueError:
            raise SchemaError(f"line {lineno}: value {raw!r} is not a number") from None
        if not math.isfinite(value):
            raise InvalidInput(f"line {lineno}: non-finite value for {model!r}/{var!r}")
        key = (label, model)
        if key not in values:
            values[key] = {}
            order.setdefault(label, []).append(model)
        if var in values[key]:
            raise SchemaError(f"line {lineno}: duplicate value for model {model!r}, variable {var!r}")
        values[key][var] = value
        ts = (row.get("timestamp") or "").strip() or None
        timestamps.setdefault(key, ts)

    outputs = {}
    for label, models in order.items():
        items = []
        for model in models:
            got = values[(label, model)]
            for var in variables.names:
                if var not in got:
                    raise IncompleteModel(model, var)
            items.append(
                ModelOutput(
                    model_id=model,
                    values=np.array([got[v] for v in variables.names]),
                    timestamp=timestamps[(label, model)],
                )
            )
        outputs[label] = tuple(items)
    return ModelOutputBatch(variables=variables, outputs=outputs)


def write_outputs_csv(batch: ModelOutputBatch, path: str | Path) -> None:
    """Inverse of ingest_outputs, used to ship derived fixture batches."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(REQUIRED_COLUMNS)
        for label in batch.outputs:
            for out in batch.outputs[label]:
                for var, value in zip(batch.variables.names, out.values):
                    writer.writerow([label, out.model_id, var, repr(float(value))])
