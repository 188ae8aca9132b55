import numpy as np
import pytest
from fastapi.testclient import TestClient

from pba_workbench.casestudy import install_into_store, study_expected
from pba_workbench.documents import canonical_json
from pba_workbench.service import create_app
from pba_workbench.store import WorkspaceStore

REGIONS3 = {
    "names": ["London", "South East", "North West"],
    "units": ["cases", "cases", "cases"],
    "integral": [True, True, True],
}


@pytest.fixture
def store(tmp_path):
    store = WorkspaceStore(tmp_path)
    install_into_store(store)
    return store


@pytest.fixture
def client(store):
    return TestClient(create_app(store))


def open_session(client, variables=REGIONS3, prevision=400.0, variance=40000.0):
    resp = client.post(
        "/v1/sessions",
        json={"variables": variables, "first_prevision": prevision, "first_variance": variance},
    )
    assert resp.status_code == 201, resp.text
    return resp.json()["session_id"]


class TestSessions:
    def test_create_next_hypothetical_500(self, client):
        session_id = open_session(client)
        resp = client.get(f"/v1/sessions/{session_id}/next")
        assert resp.status_code == 200
        prompt = resp.json()
        assert prompt["kind"] == "answers"
        assert prompt["variable"] == "South East"
        assert prompt["conditioning"] == [
            {"variable": "London", "display": 500.0, "exact": 500.0}
        ]

    def test_answers_and_display_sequence(self, client):
        session_id = open_session(client)
        resp = client.post(
            f"/v1/sessions/{session_id}/answers",
            json={
                "conditional_previsions": [200.0],
                "conditional_variance": 5625.0,
                "prior_prevision": 180.0,
            },
        )
        assert resp.status_code == 200, resp.text
        body = resp.json()
        assert body["last_step"]["g"] == [pytest.approx(0.2)]
        assert body["u"][0] == [40000.0, 8000.0]
        prompt = client.get(f"/v1/sessions/{session_id}/next").json()
        assert [c["display"] for c in prompt["conditioning"]] == [500.0, 238.0]
        assert [c["exact"] for c in prompt["conditioning"]] == [500.0, 237.5]

    def test_incoherent_step_margin_detail(self, client):
        session_id = open_session(client, prevision=0.0, variance=1e8)
        resp = client.post(
            f"/v1/sessions/{session_id}/answers",
            json={
                "conditional_previsions": [1.0],
                "conditional_variance": 1e-12,
                "prior_prevision": 0.0,
            },
        )
        assert resp.status_code == 422
        body = resp.json()
        assert body["code"] == "incoherent_step"
        assert "margin" in body["detail"]

    def test_finalize_persists_prior_and_closes(self, client, store):
        session_id = open_session(
            client, variables={"names": ["a"], "units": [""], "integral": [False]},
            prevision=1.0, variance=2.0,
        )
        resp = client.post(
            f"/v1/sessions/{session_id}/finalize", json={"marginal_variances": [2.0]}
        )
        assert resp.status_code == 200
        body = resp.json()
        assert store.exists("prior", body["prior_id"])
        assert body["document"]["covariance"] == [[2.0]]
        assert body["sha256"]
        resp = client.get(f"/v1/sessions/{session_id}/next")
        assert resp.status_code == 409
        assert resp.json()["code"] == "session_closed"

    def test_unknown_session_404(self, client):
        resp = client.get("/v1/sessions/doesnotexist/next")
        assert resp.status_code == 404
        assert resp.json()["code"] == "unknown_document"

    def test_validation_error_body(self, client):
        resp = client.post("/v1/sessions", json={"first_prevision": 1.0})
        assert resp.status_code == 422
        assert resp.json()["code"] == "request_validation"

    def test_sessions_survive_restart(self, store):
        client = TestClient(create_app(store))
        session_id = open_session(client)
        client.post(
            f"/v1/sessions/{session_id}/answers",
            json={
                "conditional_previsions": [200.0],
                "conditional_variance": 5625.0,
                "prior_prevision": 180.0,
            },
        )
        # a brand-new service instance over the same store sees the session
        reborn = TestClient(create_app(store))
        body = reborn.get(f"/v1/sessions/{session_id}").json()
        assert body["elicited"] == 2
        assert body["u"][1][1] == 7225.0


class TestSynthesis:
    def test_synthesis_report_and_hashes(self, client, store):
        resp = client.post(
            "/v1/synthesis",
            json={"prior_id": "study-prior", "class_id": "study-classes", "batch_id": "study-batch"},
        )
        assert resp.status_code == 200, resp.text
        body = resp.json()
        assert store.exists("report", body["report_id"])
        doc = body["document"]
        assert doc["inputs"]["prior"]["sha256"] == store.hash_of("prior", "study-prior")
        expected = study_expected()
        np.testing.assert_allclose(np.array(doc["pba"]), expected["pba"], rtol=0.02)

    def test_unknown_prior_404(self, client):
        resp = client.post(
            "/v1/synthesis",
            json={"prior_id": "nope", "class_id": "study-classes", "batch_id": "study-batch"},
        )
        assert resp.status_code == 404

    def test_incoherent_classes_422(self, client, store):
        doc = store.load("class_structure", "study-classes")
        doc["id"] = "overclaimed"
        for c in doc["classes"]:
            c["corr_with_quantity"] = {k: 0.999 for k in c["corr_with_quantity"]}
        store.save(doc)
        resp = client.post(
            "/v1/synthesis",
            json={"prior_id": "study-prior", "class_id": "overclaimed", "batch_id": "study-batch"},
        )
        assert resp.status_code == 422
        assert resp.json()["code"] == "incoherent_elicitation"


class TestWhatIf:
    def synthesize(self, client):
        return client.post(
            "/v1/synthesis",
            json={"prior_id": "study-prior", "class_id": "study-classes", "batch_id": "study-batch"},
        ).json()

    def test_identity_override_byte_identical(self, client):
        base = self.synthesize(client)
        resp = client.post("/v1/whatif", json={"report_id": base["report_id"], "overrides": {}})
        assert resp.status_code == 200
        redo = resp.json()
        assert redo["report_id"] is None
        base_doc = dict(base["document"])
        base_doc.pop("id")
        assert canonical_json(redo["document"]) == canonical_json(base_doc)

    def test_sw_resolution_strictly_increases(self, client):
        base = self.synthesize(client)
        sw = base["document"]["variables"]["names"].index("South West")
        resp = client.post(
            "/v1/whatif",
            json={
                "report_id": base["report_id"],
                "overrides": {"corr_with_quantity": {"deep-gp": {"South West": 0.75}}},
            },
        )
        assert resp.status_code == 200
        redo = resp.json()["document"]
        assert redo["resolved_pct"][sw] > base["document"]["resolved_pct"][sw]

    def test_save_flag(self, client, store):
        base = self.synthesize(client)
        resp = client.post(
            "/v1/whatif?save=true", json={"report_id": base["report_id"], "overrides": {}}
        )
        saved_id = resp.json()["report_id"]
        assert saved_id and store.exists("report", saved_id)


class TestDocumentEndpoints:
    def test_get_and_post_round_trip(self, client, store):
        prior = client.get("/v1/priors/study-prior")
        assert prior.status_code == 200
        doc = prior.json()
        doc["id"] = "copy-prior"
        resp = client.post("/v1/priors", json=doc)
        assert resp.status_code == 201
        assert store.exists("prior", "copy-prior")

    def test_post_invalid_prior(self, client):
        resp = client.post("/v1/priors", json={"kind": "prior", "schema_version": 1})
        assert resp.status_code == 422

    def test_get_batch_and_classes(self, client):
        assert client.get("/v1/batches/study-batch").status_code == 200
        assert client.get("/v1/classes/study-classes").status_code == 200
        assert client.get("/v1/reports/none").status_code == 404
