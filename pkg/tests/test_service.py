import numpy as np
import pytest
from fastapi.testclient import TestClient

from fuglede.service.app import create_app

UNIT = {"intervals": [["0", "1"]]}
UNION = {"intervals": [["0", "1/2"], ["1", "3/2"]]}
IDENTITY_1 = {"n": 1, "re": [[1.0]], "im": [[0.0]]}
IDENTITY_2 = {"n": 2, "re": [[1.0, 0.0], [0.0, 1.0]], "im": [[0.0, 0.0], [0.0, 0.0]]}


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_spectrum_unit_interval_integers(client):
    resp = client.post(
        "/spectrum",
        json={"domain": UNIT, "bmatrix": IDENTITY_1, "window": [-3.2, 3.2]},
    )
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["spectral_in_window"] is True
    assert doc["violations"] == []
    found = [p["lambda"] for p in doc["points"]]
    np.testing.assert_allclose(found, [-3, -2, -1, 0, 1, 2, 3], atol=1e-8)
    assert all(p["multiplicity"] == 1 for p in doc["points"])


def test_spectrum_identity_on_union_not_spectral(client):
    # both intervals have length 1/2, so I - M(lam) degenerates twice at
    # once and the eigenspace at each spectrum point is two dimensional
    resp = client.post(
        "/spectrum",
        json={"domain": UNION, "bmatrix": IDENTITY_2, "window": [-2.5, 2.5]},
    )
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["spectral_in_window"] is False
    assert len(doc["violations"]) > 0
    assert any(p["multiplicity"] == 2 for p in doc["points"])


def test_spectrum_rejects_mismatched_sizes(client):
    resp = client.post(
        "/spectrum",
        json={"domain": UNION, "bmatrix": IDENTITY_1, "window": [-1, 1]},
    )
    assert resp.status_code == 400
    assert resp.json()["error"] == "DimensionMismatchError"


def test_bmatrix_quarter_shift(client):
    resp = client.post(
        "/bmatrix",
        json={"domain": UNIT, "spectrum": "Z+1/4", "truncate": 3},
    )
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["bmatrix"]["n"] == 1
    assert abs(doc["bmatrix"]["re"][0][0]) < 1e-10
    assert abs(doc["bmatrix"]["im"][0][0] - 1.0) < 1e-10
    assert doc["unitarity_defect"] < 1e-10


def test_bmatrix_union_golden(client):
    resp = client.post(
        "/bmatrix",
        json={"domain": UNION, "spectrum": "2Z u 2Z+1/2", "truncate": 6},
    )
    assert resp.status_code == 200
    doc = resp.json()
    B = np.array(doc["bmatrix"]["re"]) + 1j * np.array(doc["bmatrix"]["im"])
    want = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
    np.testing.assert_allclose(B, want, atol=1e-10)
    eig = sorted(
        (complex(a, b) for a, b in doc["eigenvalues"]),
        key=lambda z: (z.real, z.imag),
    )
    np.testing.assert_allclose(eig, [1j, 1.0], atol=1e-10)


def test_bmatrix_unbounded_spectrum_needs_truncation(client):
    resp = client.post("/bmatrix", json={"domain": UNIT, "spectrum": "Z"})
    assert resp.status_code == 400
    assert resp.json()["error"] == "ParseError"


def test_gram_diagonal_is_measure(client):
    resp = client.post(
        "/gram",
        json={"domain": UNION, "spectrum": "2Z u 2Z+1/2", "truncate": 10},
    )
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["orthogonality_defect"] < 1e-10
    G = np.array(doc["re"]) + 1j * np.array(doc["im"])
    np.testing.assert_allclose(np.diag(G), doc["measure"], atol=1e-12)


def test_verify_passes_in_golden_case(client):
    resp = client.post(
        "/verify",
        json={
            "domain": UNION,
            "spectrum": "2Z u 2Z+1/2",
            "tiling": "period=2;residues=0,1/2",
        },
    )
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["passed"] is True
    assert doc["orthogonal"] is True
    assert doc["parseval"]["monotone"] is True
    assert doc["parseval"]["relative_defect"] <= 0.01
    assert set(doc["parseval_defect_by_K"]) == {"10", "25", "50", "100"}
    assert doc["tiling"]["tiles"] is True


def test_verify_fails_for_non_orthogonal(client):
    resp = client.post(
        "/verify",
        json={"domain": UNION, "spectrum": "2Z u 2Z+1/4", "truncate": 20},
    )
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["orthogonal"] is False
    assert doc["parseval"] is None
    assert doc["passed"] is False


def test_verify_bad_tiling_spec(client):
    resp = client.post(
        "/verify",
        json={"domain": UNION, "spectrum": "2Z u 2Z+1/2", "tiling": "period=2"},
    )
    assert resp.status_code == 400
    assert "residues" in resp.json()["detail"]


def test_evolve_methods_agree_in_span(client):
    resp = client.post(
        "/evolve",
        json={
            "domain": UNION,
            "spectrum": "2Z u 2Z+1/2",
            "truncate": 6,
            "function": "exp:2",
            "t": 0.25,
            "method": "both",
            "samples_per_interval": 64,
        },
    )
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["snap_error"] == 0.0
    assert doc["max_method_difference"] < 1e-8
    assert abs(doc["norm_after"] - doc["norm_before"]) < 1e-10
    assert len(doc["samples"]) == 2 * 64


def test_evolve_boundary_only_derives_bmatrix(client):
    resp = client.post(
        "/evolve",
        json={
            "domain": UNION,
            "spectrum": "2Z u 2Z+1/2",
            "truncate": 6,
            "function": "indicator:0:1/4",
            "t": 0.5,
            "method": "boundary",
            "samples_per_interval": 32,
        },
    )
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["max_method_difference"] is None
    assert doc["method"] == "boundary"
    # norms survive the routing exactly
    assert abs(doc["norm_after"] - doc["norm_before"]) < 1e-12


def test_evolve_missing_spectrum_is_schema_error(client):
    resp = client.post(
        "/evolve",
        json={"domain": UNION, "function": "exp:2", "t": 0.5, "method": "both"},
    )
    assert resp.status_code == 422


def test_evolve_bad_function_spec(client):
    resp = client.post(
        "/evolve",
        json={
            "domain": UNION,
            "spectrum": "2Z u 2Z+1/2",
            "truncate": 6,
            "function": "wiggle:3",
            "t": 0.5,
        },
    )
    assert resp.status_code == 400
    assert resp.json()["error"] == "FunctionSpecError"


def test_tile_golden_pair(client):
    resp = client.post(
        "/tile",
        json={"domain": UNION, "translations": "period=2;residues=0,1/2"},
    )
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["tiling"]["tiles"] is True
    assert doc["period_exact"] == "2"
    assert doc["residues"] == ["0", "0.5"]


def test_tile_quarter_offset_fails(client):
    resp = client.post(
        "/tile",
        json={"domain": UNION, "translations": "period=2;residues=0,1/4"},
    )
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["tiling"]["tiles"] is False
    assert doc["tiling"]["defect_exact"] == "1/2"


def test_nikodym_norms_and_growth(client):
    resp = client.post("/nikodym", json={"p_max": 2, "n_max": 16})
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["all_ok"] is True
    for row in doc["rows"]:
        assert abs(row["norm"] - 1.0) < 1e-12
        assert row["grad2_sq"] == 0.0
    assert doc["quotient_ratios"][0] > 1e6
    assert doc["cross_decay"] == 0.0


def test_nikodym_depth_validation(client):
    resp = client.post("/nikodym", json={"p_max": 5, "n_max": 16})
    assert resp.status_code == 422


def test_square2d_small_grid_all_pass(client):
    resp = client.post(
        "/square2d",
        json={"lmax": 2, "grid": 16, "n_times": 3, "seed": 0},
    )
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["all_ok"] is True
    assert doc["gram_max_offdiag"] < 1e-10
    assert len(doc["times"]) == 3


def test_square2d_seed_controls_times(client):
    a = client.post(
        "/square2d", json={"lmax": 2, "grid": 16, "n_times": 4, "seed": 1}
    ).json()
    b = client.post(
        "/square2d", json={"lmax": 2, "grid": 16, "n_times": 4, "seed": 1}
    ).json()
    c = client.post(
        "/square2d", json={"lmax": 2, "grid": 16, "n_times": 4, "seed": 2}
    ).json()
    assert a["times"] == b["times"]
    assert a["times"] != c["times"]


def test_error_body_shape(client):
    resp = client.post(
        "/bmatrix",
        json={"domain": {"intervals": [["0", "1"], ["0.5", "2"]]}, "spectrum": [0.0, 1.0]},
    )
    assert resp.status_code == 400
    body = resp.json()
    assert set(body) == {"error", "detail"}
    assert body["error"] == "OverlapError"
