"""The HTTP layer: sessions, views, editing, and static serving."""

import json
import math
import threading
import urllib.error
import urllib.request

import pytest

from photonlab.server import make_server
from photonlab.setupdoc import to_document
from photonlab.fixtures import fixture_board, fixture_names


@pytest.fixture(scope="module")
def base_url():
    httpd = make_server(port=0)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{httpd.server_address[1]}"
    httpd.shutdown()
    httpd.server_close()
    thread.join(timeout=5)


def request(method, url, body=None):
    data = None
    headers = {}
    if body is not None:
        data = json.dumps(body).encode("utf-8")
        headers["Content-Type"] = "application/json"
    req = urllib.request.Request(url, data=data, method=method, headers=headers)
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, dict(resp.headers), resp.read().decode("utf-8")
    except urllib.error.HTTPError as exc:
        return exc.code, dict(exc.headers), exc.read().decode("utf-8")


def get_json(url):
    status, headers, text = request("GET", url)
    return status, json.loads(text)


def test_meta(base_url):
    status, doc = get_json(f"{base_url}/api/meta")
    assert status == 200
    assert doc["format"] == "photonlab-serve" and doc["version"] == 1
    assert doc["fixtureCount"] == len(fixture_names())


def test_fixture_listing_and_fetch(base_url):
    status, listing = get_json(f"{base_url}/api/fixtures")
    assert status == 200
    names = [f["name"] for f in listing]
    assert names == fixture_names()
    assert all("title" in f for f in listing)

    status, doc = get_json(f"{base_url}/api/fixtures/mach-zehnder")
    assert status == 200 and doc["format"] == "photonlab-setup"

    status, doc = get_json(f"{base_url}/api/fixtures/nope")
    assert status == 404 and "error" in doc


def test_element_catalog_and_operator(base_url):
    status, catalog = get_json(f"{base_url}/api/elements")
    assert status == 200
    by_kind = {e["kind"]: e for e in catalog}
    assert by_kind["BeamSplitter"]["params"] == ["reflectance", "reflectionPhase"]
    assert by_kind["Detector"]["isMeasurement"] is True
    assert by_kind["BellPairSource"]["isSource"] is True

    status, _, text = request("POST", f"{base_url}/api/operator",
                              {"kind": "Mirror", "rotation": 1})
    doc = json.loads(text)
    assert status == 200 and doc["type"] == "unitary"
    assert all(len(e["out"]) == 2 for e in doc["entries"])

    status, _, text = request("POST", f"{base_url}/api/operator",
                              {"kind": "Detector"})
    doc = json.loads(text)
    assert status == 200 and doc["type"] == "measurement" and doc["destructive"]

    # display-basis toggle: the mirror's H sign flip turns into a D<->A swap
    status, _, text = request("POST", f"{base_url}/api/operator",
                              {"kind": "Mirror", "rotation": 1, "basis": "DA"})
    doc = json.loads(text)
    assert status == 200 and doc["basis"] == "DA"
    swap = {(tuple(e["out"]), tuple(e["in"])): e["re"] for e in doc["entries"]}
    assert swap[(("→", "D"), ("↑", "A"))] == pytest.approx(-1.0)
    assert (("→", "D"), ("↑", "D")) not in swap

    status, _, text = request("POST", f"{base_url}/api/operator",
                              {"kind": "Mirror", "rotation": 9})
    assert status == 400

    status, _, text = request("POST", f"{base_url}/api/operator",
                              {"kind": "Mirror", "basis": "XY"})
    assert status == 400

    status, _, text = request("POST", f"{base_url}/api/operator",
                              {"kind": "WarpDrive"})
    assert status == 400


def test_session_lifecycle_and_editing(base_url):
    status, _, text = request("POST", f"{base_url}/api/sessions",
                              {"fixture": "mach-zehnder"})
    assert status == 200
    doc = json.loads(text)
    sid = doc["session"]
    assert doc["detections"]["detectors"]["d_bright"] == pytest.approx(1.0, abs=1e-9)

    status, listing = get_json(f"{base_url}/api/sessions")
    assert status == 200 and sid in [s["session"] for s in listing]

    # edit: drop a phase slab into one arm and re-simulate
    setup = doc["setup"]
    setup["elements"].append(
        {"name": "delay", "kind": "GlassSlab", "x": 6, "y": 7,
         "params": {"phase": 90}}
    )
    status, _, text = request("PUT", f"{base_url}/api/sessions/{sid}/setup", setup)
    assert status == 200
    edited = json.loads(text)
    assert edited["detections"]["detectors"]["d_bright"] == pytest.approx(0.5, abs=1e-9)
    assert edited["detections"]["detectors"]["d_dark"] == pytest.approx(0.5, abs=1e-9)

    status, _, text = request("DELETE", f"{base_url}/api/sessions/{sid}")
    assert status == 200
    status, _, _ = request("GET", f"{base_url}/api/sessions/{sid}")
    assert status == 404


def test_invalid_setup_rejected_with_details(base_url):
    doc = to_document(fixture_board("mach-zehnder"))
    doc["elements"][0]["rotation"] = 11
    status, _, text = request("POST", f"{base_url}/api/sessions", {"setup": doc})
    assert status == 400
    body = json.loads(text)
    assert body["error"] == "setup rejected"
    assert body["details"]


def test_session_body_needs_setup_or_fixture(base_url):
    status, _, text = request("POST", f"{base_url}/api/sessions", {})
    assert status == 400
    status, _, text = request(
        "POST", f"{base_url}/api/sessions",
        {"fixture": "bb84", "setup": {"x": 1}},
    )
    assert status == 400


def test_tree_and_node_views(base_url):
    status, _, text = request("POST", f"{base_url}/api/sessions",
                              {"fixture": "bell-pair"})
    sid = json.loads(text)["session"]

    status, tree = get_json(f"{base_url}/api/sessions/{sid}/tree")
    assert status == 200 and tree["format"] == "photonlab-tree"
    assert any("state" in n for n in tree["nodes"])

    status, slim = get_json(f"{base_url}/api/sessions/{sid}/tree?states=0")
    assert not any("state" in n for n in slim["nodes"])

    status, state = get_json(
        f"{base_url}/api/sessions/{sid}/nodes/0/state?basis=DA&format=polar"
    )
    assert status == 200 and state["basis"] == "DA"
    assert state["components"]

    status, doc = get_json(f"{base_url}/api/sessions/{sid}/nodes/0/state?basis=XY")
    assert status == 400

    status, doc = get_json(f"{base_url}/api/sessions/{sid}/nodes/999/state")
    assert status == 404

    status, ent = get_json(f"{base_url}/api/sessions/{sid}/nodes/0/entanglement")
    assert status == 200
    assert ent["particles"][0]["entropy"] == pytest.approx(1.0, abs=1e-9)

    status, blink = get_json(
        f"{base_url}/api/sessions/{sid}/nodes/0/blink?seed=b&shots=3"
    )
    assert status == 200 and len(blink["shots"]) == 3

    request("DELETE", f"{base_url}/api/sessions/{sid}")


def test_chsh_endpoint(base_url):
    status, _, text = request("POST", f"{base_url}/api/sessions",
                              {"fixture": "chsh-bell"})
    sid = json.loads(text)["session"]
    status, doc = get_json(f"{base_url}/api/sessions/{sid}/chsh")
    assert status == 200
    assert doc["S"] == pytest.approx(2 * math.sqrt(2), abs=1e-9)
    request("DELETE", f"{base_url}/api/sessions/{sid}")

    status, _, text = request("POST", f"{base_url}/api/sessions",
                              {"fixture": "mach-zehnder"})
    sid = json.loads(text)["session"]
    status, doc = get_json(f"{base_url}/api/sessions/{sid}/chsh")
    assert status == 400
    request("DELETE", f"{base_url}/api/sessions/{sid}")


def test_sample_endpoint_csv_and_records(base_url):
    status, _, text = request("POST", f"{base_url}/api/sessions", {"fixture": "bb84"})
    sid = json.loads(text)["session"]

    status, headers, text = request(
        "POST", f"{base_url}/api/sessions/{sid}/sample",
        {"seed": "web", "runs": 5, "format": "csv"},
    )
    assert status == 200
    assert headers["Content-Type"].startswith("text/csv")
    assert text.startswith("run,seed,")
    assert len(text.split("\r\n")) == 7

    status, _, text = request(
        "POST", f"{base_url}/api/sessions/{sid}/sample",
        {"seed": "web", "runs": 2, "format": "records"},
    )
    doc = json.loads(text)
    assert status == 200 and len(doc["records"]) == 2

    status, _, _ = request("POST", f"{base_url}/api/sessions/{sid}/sample",
                           {"runs": -4})
    assert status == 400
    request("DELETE", f"{base_url}/api/sessions/{sid}")


def test_session_config_respected(base_url):
    doc = to_document(fixture_board("mach-zehnder"))
    status, _, text = request(
        "POST", f"{base_url}/api/sessions",
        {"setup": doc, "config": {"maxSteps": 3}},
    )
    assert status == 200
    body = json.loads(text)
    assert body["config"]["maxSteps"] == 3
    assert body["detections"]["truncations"]

    status, _, text = request(
        "POST", f"{base_url}/api/sessions",
        {"setup": doc, "config": {"warp": 9}},
    )
    assert status == 400
    request("DELETE", f"{base_url}/api/sessions/{json.loads(text).get('session', 'sX')}")


def test_cors_and_options(base_url):
    status, headers, _ = request("GET", f"{base_url}/api/meta")
    assert headers["Access-Control-Allow-Origin"] == "*"
    status, headers, _ = request("OPTIONS", f"{base_url}/api/sessions")
    assert status == 204
    assert "PUT" in headers["Access-Control-Allow-Methods"]


def test_unknown_routes_and_methods(base_url):
    status, _, text = request("GET", f"{base_url}/api/warp")
    assert status == 404
    status, _, text = request("PUT", f"{base_url}/api/fixtures")
    assert status == 405


def test_fallback_page_without_ui(base_url):
    status, headers, text = request("GET", f"{base_url}/")
    assert status == 200
    assert headers["Content-Type"].startswith("text/html")
    assert "photonlab" in text


def test_static_ui_serving(tmp_path):
    (tmp_path / "index.html").write_text("<html>shell</html>")
    (tmp_path / "app.js").write_text("console.log('hi')")
    httpd = make_server(port=0, ui_dir=str(tmp_path))
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{httpd.server_address[1]}"
    try:
        status, headers, text = request("GET", f"{base}/app.js")
        assert status == 200 and "console" in text
        assert "javascript" in headers["Content-Type"]
        # client-routed paths fall back to the shell
        status, _, text = request("GET", f"{base}/experiments/42")
        assert status == 200 and text == "<html>shell</html>"
        status, _, _ = request("GET", f"{base}/../secret")
        assert status in (200, 404)  # normalized by urllib; never escapes
        status, doc = get_json(f"{base}/api/meta")
        assert status == 200
    finally:
        httpd.shutdown()
        httpd.server_close()
        thread.join(timeout=5)
