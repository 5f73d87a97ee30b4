import json
import pathlib
import threading
import urllib.error
import urllib.request

import pytest

from qpmut.server import make_server

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="module")
def server():
    srv = make_server(port=0)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{srv.server_address[1]}"
    srv.shutdown()
    srv.server_close()


def call(base, method, path, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(base + path, data=data, method=method,
                                 headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


def test_upload_and_fetch(server):
    doc = json.loads((FIXTURES / "hex.qp.json").read_text())
    status, out = call(server, "POST", "/qps", doc)
    assert status == 200
    qid = out["id"]
    status, fetched = call(server, "GET", f"/qps/{qid}")
    assert status == 200
    assert fetched == doc


def test_fixture_listing_and_load(server):
    status, names = call(server, "GET", "/fixtures")
    assert status == 200 and "HEX" in names["names"]
    status, out = call(server, "POST", "/fixtures/GRID3")
    assert status == 200
    assert len(out["document"]["vertices"]) == 9


def test_analysis_and_orbits(server):
    _, out = call(server, "POST", "/fixtures/HEX")
    qid = out["id"]
    status, analysis = call(server, "GET", f"/qps/{qid}/analysis")
    assert status == 200
    assert analysis["selfinjective"] is True
    assert analysis["dimension"] == 30
    assert analysis["nakayama"] == "(1 5 3)(2 6 4)"
    assert [o["vertices"] for o in analysis["orbits"]] == [["1", "3", "5"], ["2", "4", "6"]]
    assert all(o["mutable"] for o in analysis["orbits"])
    assert all(not v["on_two_cycle"] for v in analysis["vertices"])


def test_mutate_and_history(server):
    _, out = call(server, "POST", "/fixtures/HEX")
    qid = out["id"]
    status, mu = call(server, "POST", f"/qps/{qid}/mutate", {"vertices": [1, 3, 5]})
    assert status == 200
    # identical to the CLI golden output for the same mutation
    golden = json.loads((pathlib.Path(__file__).parent / "golden" / "hex_mu135.qp.json").read_text())
    assert mu["document"] == golden
    status, doc = call(server, "GET", f"/qps/{mu['id']}")
    assert doc == golden
    status, hist = call(server, "GET", f"/qps/{mu['id']}/history")
    assert status == 200
    assert [h["id"] for h in hist["chain"]] == [qid, mu["id"]]
    assert hist["chain"][1]["vertices"] == ["1", "3", "5"]


def test_error_shapes(server):
    status, err = call(server, "GET", "/qps/nope")
    assert status == 404 and err["code"] == 404
    _, out = call(server, "POST", "/fixtures/HEX")
    qid = out["id"]
    status, err = call(server, "POST", f"/qps/{qid}/mutate", {"vertices": [1, 2]})
    assert status == 422
    assert "message" in err and "details" in err
    status, err = call(server, "POST", f"/qps/{qid}/mutate", {"vertices": []})
    assert status == 422
    status, err = call(server, "POST", "/qps", {"field": "Q"})
    assert status == 422


def test_verify_endpoint(server):
    _, out = call(server, "POST", "/fixtures/HEX")
    qid = out["id"]
    status, rep = call(server, "POST", f"/qps/{qid}/verify", {"vertices": [1]})
    assert status == 200
    assert rep["iso_verdict"] is True
    assert rep["tilting_by_sigma"] is False
