import json

import pytest

import khflow

TREFOIL = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"


def test_diagram():
    d = khflow.Diagram(TREFOIL)
    assert d.crossings == 3
    assert d.components == 1
    assert d.n_plus == 3
    assert d.pd() == TREFOIL
    assert d.mirror().n_minus == 3


def test_s_invariant():
    d = khflow.Diagram(TREFOIL)
    assert khflow.s_invariant(d)["s"] == 2
    assert khflow.s_invariant(d.mirror(), "F2")["s"] == -2
    s = khflow.s_invariant(khflow.braid_closure([1, 1, 1, 1, 1], 2))
    assert s["s"] == 4
    assert s["s_max"] - s["s_min"] == 2


def test_homology():
    d = khflow.Diagram(TREFOIL)
    bn = khflow.homology(d)
    assert sum(rank for rank, _ in bn.values()) == 2
    kh = khflow.homology(d, "Z", h=0, t=0)
    assert sum(rank for rank, _ in kh.values()) == 4
    assert any(tors == ["2"] for _, tors in kh.values())
    assert khflow.homology(khflow.Diagram("")) == {0: (1, [])}


def test_canonical():
    classes = khflow.canonical_classes(khflow.Diagram("X[4,1,3,2] X[2,3,1,4]"))
    assert sorted(c[1] for c in classes) == [0, 0, 2, 2]
    deg = khflow.canonical_degrees(khflow.Diagram(TREFOIL), "cup\nsaddle e1 e7\n")
    assert deg == {"aa": 1, "ab": 0, "ba": 0, "bb": 1}


def test_json_schema():
    d = khflow.Diagram(TREFOIL)
    assert json.loads(khflow.complex_json(d))["schema"] == 1
    fc = json.loads(khflow.flowcat_json(d, "bn"))
    assert fc["schema"] == 1
    assert len(fc["objects"]) > 0


def test_errors():
    with pytest.raises(khflow.KhflowError, match="MalformedPD"):
        khflow.Diagram("X[1,2")
    with pytest.raises(khflow.KhflowError):
        khflow.canonical_degrees(khflow.Diagram("Loop[1]"), "cup\n")


def test_cli_and_verify():
    code, out, err = khflow.run_cli(["s", "--pd", TREFOIL, "--coeffs", "Q"])
    assert (code, out) == (0, "2\n")
    assert khflow.run_cli(["nope"])[0] == 2
    assert "frame-assignments" in khflow.suites()
    ok, details = khflow.verify("frame-assignments", n=4)
    assert ok
    assert len(details) == 3
