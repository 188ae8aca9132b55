import csv

import pytest

from pba_workbench.casestudy import install_into_store
from pba_workbench.reporting import render_figures, report_table_text, write_delimited
from pba_workbench.store import WorkspaceStore
from pba_workbench.workflows import run_synthesis


@pytest.fixture(scope="module")
def report_doc(tmp_path_factory):
    store = WorkspaceStore(tmp_path_factory.mktemp("store"))
    install_into_store(store)
    return run_synthesis(store, "study-prior", "study-classes", "study-batch").doc


def test_table_layout(report_doc):
    text = report_table_text(report_doc)
    lines = text.splitlines()
    assert "London" in lines[0] and "South West" in lines[0]
    row_labels = [line.split("  ")[0].strip() for line in lines[1:]]
    assert "adjusted mean [hier-bayes]" in row_labels[0]
    assert any(label == "assessment" for label in row_labels)
    assert any(label.startswith("resolved %") for label in row_labels)
    # display rounding is two decimals
    assert "1125." in text


def test_delimited_output(report_doc, tmp_path):
    path = write_delimited(report_doc, tmp_path / "report.csv")
    with path.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["row", *report_doc["variables"]["names"]]
    labels = [r[0] for r in rows[1:]]
    assert "assessment" in labels and "max resolvable %" in labels
    # full precision round-trips through the file
    assessment = next(r for r in rows[1:] if r[0] == "assessment")
    assert float(assessment[1]) == report_doc["pba"][0]


def test_figures_written(report_doc, tmp_path):
    paths = render_figures(report_doc, tmp_path)
    assert [p.name for p in paths] == ["uncertainty_bands.png", "resolution.png"]
    for p in paths:
        assert p.exists() and p.stat().st_size > 10_000
