"""HTTP session service: lifecycle, optimistic concurrency, error shapes."""
from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from graphstate import GraphDocument, deserialize, document_to_jsonable, replay, serialize
from graphstate.service import create_app
from _helpers import graph_from_edges, path_graph

CANONICAL_EMPTY = (
    b'{"format_version":1,"graph":{"edges":[],"vertices":[]},'
    b'"journal":[],"metadata":{}}'
)


@pytest.fixture
def client():
    return TestClient(create_app())


def create_path_session(client) -> str:
    doc = document_to_jsonable(GraphDocument(graph=path_graph(3)))
    response = client.post("/sessions", json=doc)
    assert response.status_code == 201
    return response.json()["session_id"]


def post_op(client, session_id, kind, args, revision):
    return client.post(f"/sessions/{session_id}/ops",
                       json={"kind": kind, "args": args,
                             "expected_revision": revision})


class TestSessionLifecycle:
    def test_create_empty(self, client):
        response = client.post("/sessions")
        assert response.status_code == 201
        body = response.json()
        assert body["revision"] == 0
        graph = client.get(f"/sessions/{body['session_id']}/graph").json()
        assert graph["document"]["graph"] == {"edges": [], "vertices": []}
        assert graph["revision"] == 0

    def test_create_with_document(self, client):
        session_id = create_path_session(client)
        doc = client.get(f"/sessions/{session_id}/graph").json()["document"]
        assert doc["graph"]["edges"] == [[1, 2], [2, 3]]

    def test_create_with_loop_document(self, client):
        doc = document_to_jsonable(GraphDocument(graph=path_graph(2)))
        doc["graph"]["edges"] = [[1, 1]]
        response = client.post("/sessions", json=doc)
        assert response.status_code == 422
        body = response.json()
        assert body["rule"] == "loop"
        assert "message" in body

    def test_unknown_session_404(self, client):
        for path in ("graph", "journal", "save"):
            response = client.get(f"/sessions/nope/{path}")
            assert response.status_code == 404
            assert response.json()["rule"] == "unknown-session"


class TestApplyOperation:
    def test_z_measurement(self, client):
        session_id = create_path_session(client)
        response = post_op(client, session_id, "z", {"target": 2}, 0)
        assert response.status_code == 200
        body = response.json()
        assert body["revision"] == 1
        assert body["graph"]["edges"] == []
        assert [v["label"] for v in body["graph"]["vertices"]] == [1, 2]
        assert body["label_map"] == [[1, 1], [3, 2]]

    def test_x_defaults_special_neighbour(self, client):
        session_id = create_path_session(client)
        response = post_op(client, session_id, "x", {"target": 1}, 0)
        assert response.status_code == 200
        assert response.json()["graph"]["edges"] == []
        journal = client.get(f"/sessions/{session_id}/journal").json()["journal"]
        assert journal[0]["args"] == {"special_neighbour": 2, "target": 1}

    def test_move_vertex_persists_position(self, client):
        session_id = create_path_session(client)
        response = post_op(client, session_id, "move_vertex",
                           {"vertex": 3, "position": [12.5, 8.0]}, 0)
        assert response.status_code == 200
        vertices = response.json()["graph"]["vertices"]
        assert vertices[2]["position"] == [12.5, 8.0]
        saved = deserialize(client.get(f"/sessions/{session_id}/save").content)
        assert saved.graph.attrs(3).position == (12.5, 8.0)

    def test_revision_increments_by_one(self, client):
        session_id = create_path_session(client)
        for expected, kind, args in ((0, "add_vertex", {}), (1, "add_edge", {"a": 1, "b": 4})):
            response = post_op(client, session_id, kind, args, expected)
            assert response.status_code == 200
            assert response.json()["revision"] == expected + 1

    def test_stale_revision_conflict_no_mutation(self, client):
        session_id = create_path_session(client)
        assert post_op(client, session_id, "z", {"target": 2}, 0).status_code == 200
        response = post_op(client, session_id, "z", {"target": 1}, 0)
        assert response.status_code == 409
        body = response.json()
        assert body["rule"] == "revision-conflict"
        assert body["detail"]["current_revision"] == 1
        graph = client.get(f"/sessions/{session_id}/graph").json()
        assert graph["revision"] == 1
        assert len(graph["document"]["graph"]["vertices"]) == 2

    @pytest.mark.parametrize("kind,args,rule", [
        ("add_edge", {"a": 1, "b": 1}, "loop"),
        ("add_edge", {"a": 1, "b": 2}, "duplicate-edge"),
        ("z", {"target": 9}, "not-found"),
        ("x", {"target": 1, "special_neighbour": 3}, "invalid-special-neighbour"),
        ("teleport", {}, "unknown-op"),
        ("z", {"target": "two"}, "malformed"),
    ])
    def test_domain_errors_are_422_with_rule(self, client, kind, args, rule):
        session_id = create_path_session(client)
        response = post_op(client, session_id, kind, args, 0)
        assert response.status_code == 422
        assert response.json()["rule"] == rule
        # no mutation happened
        assert client.get(f"/sessions/{session_id}/graph").json()["revision"] == 0

    def test_missing_expected_revision_rejected(self, client):
        session_id = create_path_session(client)
        response = client.post(f"/sessions/{session_id}/ops",
                               json={"kind": "add_vertex", "args": {}})
        assert response.status_code == 422
        assert response.json()["rule"] == "malformed"

    def test_malformed_json_body(self, client):
        session_id = create_path_session(client)
        response = client.post(f"/sessions/{session_id}/ops",
                               content=b"{not json",
                               headers={"content-type": "application/json"})
        assert response.status_code == 400
        assert response.json()["rule"] == "parse"


class TestJournalAndPersistence:
    def test_journal_seq_numbers(self, client):
        session_id = create_path_session(client)
        post_op(client, session_id, "add_vertex", {}, 0)
        post_op(client, session_id, "z", {"target": 2}, 1)
        journal = client.get(f"/sessions/{session_id}/journal").json()["journal"]
        assert [r["seq"] for r in journal] == [1, 2]

    def test_journal_replay_matches_served_graph(self, client):
        session_id = create_path_session(client)
        post_op(client, session_id, "lc", {"vertex": 2}, 0)
        post_op(client, session_id, "y", {"target": 1}, 1)
        post_op(client, session_id, "add_vertex", {}, 2)
        saved = client.get(f"/sessions/{session_id}/save")
        doc = deserialize(saved.content)
        assert replay(doc) == doc.graph

    def test_save_empty_session_is_canonical(self, client):
        response = client.post("/sessions")
        session_id = response.json()["session_id"]
        saved = client.get(f"/sessions/{session_id}/save")
        assert saved.content == CANONICAL_EMPTY
        assert saved.headers["content-type"].startswith("application/json")

    def test_save_load_round_trip(self, client):
        session_id = create_path_session(client)
        post_op(client, session_id, "z", {"target": 2}, 0)
        saved = client.get(f"/sessions/{session_id}/save").content

        other = client.post("/sessions").json()["session_id"]
        response = client.put(f"/sessions/{other}/load",
                              json=json.loads(saved))
        assert response.status_code == 200
        assert response.json()["revision"] == 0
        assert client.get(f"/sessions/{other}/save").content == saved

    def test_load_resets_revision(self, client):
        session_id = create_path_session(client)
        post_op(client, session_id, "add_vertex", {}, 0)
        assert client.get(f"/sessions/{session_id}/graph").json()["revision"] == 1
        empty = json.loads(CANONICAL_EMPTY)
        response = client.put(f"/sessions/{session_id}/load", json=empty)
        assert response.json()["revision"] == 0
        doc = client.get(f"/sessions/{session_id}/graph").json()["document"]
        assert doc["graph"]["vertices"] == []

    def test_load_validates_journal_integrity(self, client):
        session_id = create_path_session(client)
        post_op(client, session_id, "z", {"target": 2}, 0)
        doc = json.loads(client.get(f"/sessions/{session_id}/save").content)
        doc["graph"]["edges"] = [[1, 2]]  # journal no longer replays to this
        response = client.put(f"/sessions/{session_id}/load", json=doc)
        assert response.status_code == 422
        assert response.json()["rule"] == "journal-integrity"

    def test_load_rejects_label_gap(self, client):
        session_id = create_path_session(client)
        doc = document_to_jsonable(GraphDocument(graph=graph_from_edges(2)))
        doc["graph"]["vertices"][1]["label"] = 7
        response = client.put(f"/sessions/{session_id}/load", json=doc)
        assert response.status_code == 422
        assert response.json()["rule"] == "non-contiguous-labels"
