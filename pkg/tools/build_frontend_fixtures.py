#!/usr/bin/env python3
"""Regenerate the frontend test fixtures from the primary package.

Captures real API payloads so the UI tests can assert display fidelity
against exactly what the service returns: the study synthesis response and
the first two elicitation prompts (with their session summaries).
"""

import json
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from fastapi.testclient import TestClient

from pba_workbench.casestudy import install_into_store
from pba_workbench.service import create_app
from pba_workbench.store import WorkspaceStore

OUT = Path(__file__).resolve().parents[1] / "frontend" / "tests" / "fixtures"


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        store = WorkspaceStore(tmp)
        install_into_store(store)
        client = TestClient(create_app(store))

        synthesis = client.post(
            "/v1/synthesis",
            json={
                "prior_id": "study-prior",
                "class_id": "study-classes",
                "batch_id": "study-batch",
            },
        )
        synthesis.raise_for_status()
        (OUT / "synthesis.json").write_text(
            json.dumps(synthesis.json(), indent=1, sort_keys=True) + "\n"
        )

        created = client.post(
            "/v1/sessions",
            json={
                "variables": store.load("prior", "study-prior")["variables"],
                "first_prevision": 400.0,
                "first_variance": 40000.0,
            },
        )
        created.raise_for_status()
        session_id = created.json()["session_id"]
        first_prompt = client.get(f"/v1/sessions/{session_id}/next").json()
        first_summary = client.get(f"/v1/sessions/{session_id}").json()
        answered = client.post(
            f"/v1/sessions/{session_id}/answers",
            json={
                "conditional_previsions": [200.0],
                "conditional_variance": 5625.0,
                "prior_prevision": 180.0,
            },
        ).json()
        second_prompt = client.get(f"/v1/sessions/{session_id}/next").json()
        (OUT / "session.json").write_text(
            json.dumps(
                {
                    "first_prompt": first_prompt,
                    "first_summary": first_summary,
                    "after_first_answer": answered,
                    "second_prompt": second_prompt,
                },
                indent=1,
                sort_keys=True,
            )
            + "\n"
        )
    print(f"wrote fixtures under {OUT}")


if __name__ == "__main__":
    main()
