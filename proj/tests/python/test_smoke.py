from fractions import Fraction

import pytest

import ttl

SPLIT4 = {"p": 3, "planes": 2, "diag": []}


def test_quadspace_roundtrip():
    q = ttl.quadspace(SPLIT4)
    assert len(q["gram"]) == 4
    assert ttl.quadspace(q) == q


def test_fiber_volume_basic():
    phi = ttl.basic_phi(SPLIT4)
    d = ttl.fiber_volume(phi, 1, SPLIT4)
    assert d["certified"]
    assert ttl.to_fraction(d["value"]) == Fraction(8, 9)


def test_volume_from_groups():
    assert ttl.x_volume_from_groups(SPLIT4) == Fraction(8, 9)


def test_transfer_routes_agree():
    phi = ttl.basic_phi(SPLIT4)
    for a in [1, 3, "1/3", 2]:
        w = ttl.whittaker_orbital(phi, a, SPLIT4)
        x = ttl.x_transfer_value(phi, a, SPLIT4)
        assert w["value"]["terms"] == x["terms"]
    assert ttl.to_fraction(ttl.x_transfer_value(phi, 3, SPLIT4)) == -1


def test_p_value_identity_and_weil_index():
    phi = ttl.basic_phi(SPLIT4)
    g = {"a": 1, "b": 0, "c": 0, "d": 1}
    assert ttl.to_fraction(ttl.p_value(phi, g, SPLIT4)) == 1
    assert ttl.to_fraction(ttl.weil_index(SPLIT4)) == 1
    assert ttl.fourier(phi, SPLIT4) == phi


def test_metaplectic_guard():
    dim3 = {"p": 3, "planes": 1, "diag": [1]}
    g = {"a": 1, "b": 0, "c": 0, "d": 1}
    with pytest.raises(ttl.TtlError):
        ttl.p_value(ttl.basic_phi(dim3), g, dim3)


def test_assembly_and_lx():
    alpha = {"terms": [{"order": 8, "exp": 1, "num": "1", "den": "1"}]}
    r = ttl.assembly_check(SPLIT4, alpha)
    assert r["pass"] and r.get("exact_equal", True)
    assert "exact" in ttl.lx_sharp(SPLIT4, alpha)
    assert ttl.assembly_check(SPLIT4, [0.6, 0.8])["pass"]


def test_run_job_density():
    report, code = ttl.run_job({"command": "density", "quadspace": SPLIT4, "phi": "basic", "grid": {"a": ["1"]}})
    assert code == 0
    assert report["pass"]
    assert report["cases"][0]["value"] == "8/9"


def test_run_job_config_error():
    with pytest.raises(ttl.TtlError):
        ttl.run_job({"command": "density", "quadspace": {"p": 3, "gram": [[1, 2]], "v1": [1]}})
