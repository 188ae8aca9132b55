#!/usr/bin/env python3
"""Regenerate the bundled example-study fixtures.

Writes the fixture documents under src/pba_workbench/fixtures/. Directly
elicited quantities are transcribed from the original study's published
tables; quantities the study did not publish (per-step conditional
variances beyond the second variable, and the raw model outputs) are
derived here and flagged as such in the fixture metadata:

* conditional variances: the published hypothetical header is rounded for
  display, so the inversion N_k = c_k + 0.5 * sd is ambiguous within the
  rounding interval; the round conditional sds consistent with the header
  that reproduce the published correlation/covariance matrices at display
  precision are (75, 40, 35, 65, 63, 80, 80) plus 50 for the final
  variable (which has no printed hypothetical at all).
* model outputs: the published per-class adjusted means are inverted
  through the sample-mean adjustment (zbar = P(mu) + Var(zbar) Var(mu)^-1
  (adjusted - P(mu))); the two class-2 members are split symmetrically
  around their mean, which leaves every synthesis result unchanged by
  sample-mean sufficiency.
"""

import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from pba_workbench.beliefs import BeliefSpec, VariableSet
from pba_workbench.documents import (
    SCHEMA_VERSION,
    batch_to_doc,
    build_class_structure,
    canonical_json,
    class_config_to_doc,
    prior_to_doc,
)
from pba_workbench.class_priors import ClassPrior
from pba_workbench.ingest import write_outputs_csv
from pba_workbench.synthesis import ModelOutput, ModelOutputBatch, sample_means

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "pba_workbench" / "fixtures"

REGIONS = [
    "London", "South East", "North West", "East", "East Midlands",
    "West Midlands", "Yorkshire", "North East", "South West",
]

PREVISION = [400.0, 180.0, 150.0, 80.0, 80.0, 40.0, 40.0, 40.0, 20.0]

# directly elicited prior covariance for the regional case counts
COVARIANCE = [
    [40000.00, 8470.59, 12026.76, 1659.12, 2614.73, 809.40, 685.99, 685.99, 357.60],
    [8470.59, 8100.00, 4138.62, 2327.65, 1937.97, 332.09, 281.46, 281.46, 132.52],
    [12026.76, 4138.62, 5625.00, 1330.26, 1310.28, 608.41, 515.64, 446.89, 136.19],
    [1659.12, 2327.65, 1330.26, 1600.00, 1084.54, 209.83, 177.84, 163.61, 35.60],
    [2614.73, 1937.97, 1310.28, 1084.54, 1600.00, 502.64, 377.42, 224.21, 47.53],
    [809.40, 332.09, 608.41, 209.83, 502.64, 400.00, 289.77, 147.83, 66.07],
    [685.99, 281.46, 515.64, 177.84, 377.42, 289.77, 400.00, 276.47, 56.42],
    [685.99, 281.46, 446.89, 163.61, 224.21, 147.83, 276.47, 400.00, 37.41],
    [357.60, 132.52, 136.19, 35.60, 47.53, 66.07, 56.42, 37.41, 100.00],
]

# published correlation matrix implied by the elicitation session
CORRELATION = [
    [1.00, 0.47, 0.80, 0.21, 0.33, 0.20, 0.17, 0.17, 0.18],
    [0.47, 1.00, 0.61, 0.65, 0.54, 0.18, 0.16, 0.16, 0.15],
    [0.80, 0.61, 1.00, 0.44, 0.44, 0.41, 0.34, 0.30, 0.18],
    [0.21, 0.65, 0.44, 1.00, 0.68, 0.26, 0.22, 0.20, 0.09],
    [0.33, 0.54, 0.44, 0.68, 1.00, 0.63, 0.47, 0.28, 0.12],
    [0.20, 0.18, 0.41, 0.26, 0.63, 1.00, 0.72, 0.37, 0.33],
    [0.17, 0.16, 0.34, 0.22, 0.47, 0.72, 1.00, 0.69, 0.28],
    [0.17, 0.16, 0.30, 0.20, 0.28, 0.37, 0.69, 1.00, 0.19],
    [0.18, 0.15, 0.18, 0.09, 0.12, 0.33, 0.28, 0.19, 1.00],
]

# session transcript: cumulative conditional previsions per variable, in
# elicitation order; conditional sds marked elicited (SE) or derived
SESSION_STEPS = [
    {"variable": "South East", "conditional_previsions": [200.0], "conditional_sd": 75.0,
     "prior_prevision": 180.0, "sd_derived": False},
    {"variable": "North West", "conditional_previsions": [180.0, 190.0], "conditional_sd": 40.0,
     "prior_prevision": 150.0, "sd_derived": True},
    {"variable": "East", "conditional_previsions": [85.0, 100.0, 105.0], "conditional_sd": 35.0,
     "prior_prevision": 80.0, "sd_derived": True},
    {"variable": "East Midlands", "conditional_previsions": [95.0, 115.0, 120.0, 140.0],
     "conditional_sd": 65.0, "prior_prevision": 80.0, "sd_derived": True},
    {"variable": "West Midlands", "conditional_previsions": [50.0, 55.0, 75.0, 80.0, 110.0],
     "conditional_sd": 63.0, "prior_prevision": 40.0, "sd_derived": True},
    {"variable": "Yorkshire", "conditional_previsions": [50.0, 55.0, 75.0, 80.0, 105.0, 130.0],
     "conditional_sd": 80.0, "prior_prevision": 40.0, "sd_derived": True},
    {"variable": "North East", "conditional_previsions": [50.0, 55.0, 70.0, 75.0, 85.0, 95.0, 130.0],
     "conditional_sd": 80.0, "prior_prevision": 40.0, "sd_derived": True},
    {"variable": "South West", "conditional_previsions": [25.0, 27.0, 28.0, 28.0, 29.0, 40.0, 42.0, 43.0],
     "conditional_sd": 50.0, "prior_prevision": 20.0, "sd_derived": True},
]

# rounded hypothetical values as shown to the expert
DISPLAY_HYPOTHETICALS = [500, 238, 210, 123, 173, 142, 170, 170]

CLASSES = [
    {"label": "hier-bayes", "mean_pct": 65.0, "resid_pct": 5.0,
     "corr_with_quantity": [0.75] * 9, "models": ["m1"]},
    {"label": "gmrf", "mean_pct": 75.0, "resid_pct": 10.0,
     "corr_with_quantity": [0.85, 0.70, 0.80, 0.75, 0.75, 0.70, 0.75, 0.70, 0.60],
     "models": ["m2", "m3"]},
    {"label": "deep-gp", "mean_pct": 80.0, "resid_pct": 15.0,
     "corr_with_quantity": [0.85, 0.80, 0.80, 0.75, 0.75, 0.65, 0.75, 0.65, 0.60],
     "models": ["m4"]},
]

CROSS_CLASS_CORR = {
    ("hier-bayes", "gmrf"): [0.70, 0.75, 0.75, 0.75, 0.75, 0.75, 0.75, 0.75, 0.65],
    ("hier-bayes", "deep-gp"): [0.70, 0.75, 0.75, 0.75, 0.75, 0.75, 0.75, 0.75, 0.65],
    ("gmrf", "deep-gp"): [0.75] * 9,
}

# published synthesis results: adjusted class means, assessment, variance accounting
ADJUSTED_CLASS_MEANS = [
    [965.63, 312.17, 277.03, 300.12, 113.57, 61.13, 68.93, 7.79, 51.39],
    [1012.51, 382.49, 292.58, 336.13, 143.77, 81.31, 83.50, 18.19, 63.19],
    [1067.25, 401.51, 300.15, 337.52, 144.90, 83.56, 86.26, 22.80, 74.63],
]
PBA_ROW = [1125.01, 483.28, 370.83, 333.38, 144.87, 50.83, 65.88, 8.97, 60.42]
ADJ_VAR_DIAG = [8126.92, 2408.02, 1439.62, 534.23, 540.84, 148.93, 123.47, 150.42, 42.58]
VAR_U_DIAG = [6525.97, 1822.21, 1196.88, 477.39, 490.28, 122.49, 99.57, 132.68, 39.29]
RESOLVED_PCT = [79.7, 70.3, 74.4, 66.6, 66.2, 62.8, 69.1, 62.4, 57.4]
MAX_RESOLVABLE_PCT = [83.7, 77.5, 78.7, 70.2, 69.4, 69.4, 75.1, 66.8, 60.7]

WEIGHT_BLOCK_1 = [
    [0.20, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00],
    [-0.70, 0.34, 2.24, -1.68, 1.75, -2.87, -0.25, -0.13, 1.29],
    [-0.23, 0.18, 0.89, -0.71, 0.47, -0.75, -0.08, -0.02, 0.31],
    [0.07, 0.04, -0.29, 0.55, -0.20, 0.38, 0.01, 0.05, -0.14],
    [-0.01, 0.03, -0.02, -0.02, 0.38, 0.04, -0.01, 0.03, 0.01],
    [0.15, 0.06, -0.55, 0.41, -0.57, 1.50, 0.04, 0.07, -0.33],
    [0.11, 0.04, -0.41, 0.31, -0.43, 1.05, 0.08, 0.14, -0.31],
    [0.06, 0.03, -0.24, 0.14, -0.21, 0.69, -0.57, 0.92, -0.12],
    [-0.02, 0.00, 0.05, -0.05, 0.05, -0.02, -0.13, 0.06, 0.78],
]
WEIGHT_BLOCK_2 = [
    [0.49, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00],
    [0.58, 0.15, -1.69, 1.27, -1.34, 2.22, 0.19, 0.10, -1.21],
    [0.15, -0.41, 0.20, 0.63, -0.06, 0.05, 0.03, -0.04, 0.07],
    [-0.04, -0.19, 0.24, 0.37, 0.22, -0.43, -0.01, -0.05, 0.23],
    [0.01, -0.16, 0.09, 0.11, 0.44, -0.20, 0.00, -0.04, 0.12],
    [-0.06, -0.04, 0.24, -0.14, 0.20, -0.02, -0.02, -0.03, 0.12],
    [-0.05, -0.03, 0.18, -0.11, 0.15, -0.29, 0.37, -0.03, 0.08],
    [-0.02, -0.03, 0.11, -0.05, 0.09, -0.19, 0.05, 0.28, 0.06],
    [0.01, -0.01, -0.03, 0.04, -0.04, 0.07, 0.02, 0.00, 0.10],
]
WEIGHT_BLOCK_3 = [
    [0.47, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00],
    [0.19, 0.57, -0.72, 0.54, -0.55, 0.89, 0.08, 0.04, -0.27],
    [0.15, 0.18, -0.14, 0.24, -0.50, 0.85, 0.06, 0.05, -0.51],
    [-0.03, 0.14, 0.05, 0.15, -0.03, 0.04, 0.00, 0.00, -0.10],
    [0.02, 0.12, -0.08, -0.06, 0.22, 0.18, 0.02, 0.00, -0.16],
    [-0.09, -0.03, 0.32, -0.28, 0.41, -0.54, -0.02, -0.05, 0.24],
    [-0.06, -0.02, 0.24, -0.21, 0.31, -0.88, 0.68, -0.14, 0.27],
    [-0.03, -0.01, 0.14, -0.09, 0.14, -0.59, 0.64, -0.26, 0.06],
    [0.01, 0.01, -0.02, 0.01, -0.01, -0.07, 0.13, -0.07, 0.13],
]
PREVISION_U = [-62.64, -19.15, -21.48, -5.12, -6.29, -0.62, -1.62, -0.80, -0.60]


def write(name: str, doc: dict) -> None:
    path = FIXTURES / name
    path.write_bytes(canonical_json(doc))
    print(f"wrote {path}")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    variables = VariableSet(
        names=tuple(REGIONS),
        units=("cases",) * 9,
        integral=(True,) * 9,
    )
    prior = BeliefSpec(variables=variables, prevision=PREVISION, covariance=COVARIANCE)
    write("study_prior.json", prior_to_doc(prior, doc_id="study-prior"))

    classes = [
        ClassPrior(
            label=c["label"], mean_pct=c["mean_pct"], resid_pct=c["resid_pct"],
            corr_with_quantity=tuple(c["corr_with_quantity"]), count=len(c["models"]),
        )
        for c in CLASSES
    ]
    cross = {pair: tuple(v) for pair, v in CROSS_CLASS_CORR.items()}
    class_doc = class_config_to_doc(variables, classes, cross, "preference", doc_id="study-classes")
    write("study_classes.json", class_doc)

    write(
        "study_session.json",
        {
            "schema_version": SCHEMA_VERSION,
            "kind": "session_transcript",
            "id": "study-session",
            "variables": {
                "names": REGIONS, "units": ["cases"] * 9, "integral": [True] * 9,
            },
            "multiplier": 0.5,
            "first_prevision": 400.0,
            "first_variance": 40000.0,
            "display_hypotheticals": DISPLAY_HYPOTHETICALS,
            "marginal_variances": [float(COVARIANCE[i][i]) for i in range(9)],
            "steps": SESSION_STEPS,
            "notes": (
                "conditional sds flagged sd_derived were not published; they are the round "
                "values consistent with the display-rounded hypothetical header that reproduce "
                "the published correlation and covariance matrices at display precision"
            ),
        },
    )

    # derive the raw model outputs by inverting the class-mean adjustment
    cs = build_class_structure(prior, class_doc)
    adjusted = np.array(ADJUSTED_CLASS_MEANS, dtype=float).ravel()
    p_mu = cs.prevision_mu
    var_zbar = cs.var_mu.copy()
    for i in range(cs.m):
        b = cs.block(i)
        var_zbar[b, b] += cs.var_resid[i] / cs.n[i]
    zbar = p_mu + var_zbar @ np.linalg.solve(cs.var_mu, adjusted - p_mu)
    # round-trip guard: adjusting the derived zbar must give back the inputs
    roundtrip = p_mu + cs.var_mu @ np.linalg.solve(var_zbar, zbar - p_mu)
    assert np.abs(roundtrip - adjusted).max() < 1e-9, "inversion round trip failed"

    rows = zbar.reshape(cs.m, cs.q)
    delta = 0.04 * rows[1]
    outputs = {
        "hier-bayes": (ModelOutput("m1", rows[0]),),
        "gmrf": (ModelOutput("m2", rows[1] + delta), ModelOutput("m3", rows[1] - delta)),
        "deep-gp": (ModelOutput("m4", rows[2]),),
    }
    batch = ModelOutputBatch(variables=variables, outputs=outputs)
    sm = sample_means(cs, batch)
    assert np.abs(sm.zbar - zbar).max() < 1e-9, "class-2 split broke the sample means"
    write_outputs_csv(batch, FIXTURES / "study_outputs.csv")
    print(f"wrote {FIXTURES / 'study_outputs.csv'}")
    write("study_batch.json", batch_to_doc(batch, doc_id="study-batch"))

    write(
        "study_expected.json",
        {
            "schema_version": SCHEMA_VERSION,
            "kind": "reference_results",
            "id": "study-expected",
            "variables": {"names": REGIONS},
            "class_labels": [c["label"] for c in CLASSES],
            "correlation_matrix": CORRELATION,
            "covariance_matrix": COVARIANCE,
            "adjusted_class_means": ADJUSTED_CLASS_MEANS,
            "pba": PBA_ROW,
            "adjusted_var_diag": ADJ_VAR_DIAG,
            "prior_var_diag": [float(COVARIANCE[i][i]) for i in range(9)],
            "var_u_diag": VAR_U_DIAG,
            "resolved_pct": RESOLVED_PCT,
            "max_resolvable_pct": MAX_RESOLVABLE_PCT,
            "weight_blocks": [WEIGHT_BLOCK_1, WEIGHT_BLOCK_2, WEIGHT_BLOCK_3],
            "prevision_u": PREVISION_U,
            "first_step": {
                "g2": 0.2,
                "u2": [[40000.0, 8000.0], [8000.0, 7225.0]],
                "hypothetical": 500.0,
            },
            "derived_model_outputs": True,
        },
    )


if __name__ == "__main__":
    main()
