"""Smoke test for the pydimer extension.

Build and run from the repository root:

    cargo build -p dimer-coamoeba-py --release --features extension-module
    cp target/release/libpydimer.so python/pydimer.so
    python3 python/smoke_test.py
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pydimer  # noqa: E402


def close(a, b, tol=1e-10):
    return abs(a - b) < tol


def main():
    w = pydimer.Polynomial("x - x^-1 + y + y^-1")
    assert len(w) == 4
    values = sorted((v for _, _, v in w.critical_points()), key=lambda z: (z.real, z.imag))
    want = [-2 - 2j, -2 + 2j, 2 - 2j, 2 + 2j]
    assert all(close(a, b) for a, b in zip(values, want)), values

    wt = pydimer.Polynomial("x + (2*t-1)*x^-1 + y + (t+1)*y^-1", {"t": 0.25})
    assert close(dict(wt.terms())[(-1, 0)], -0.5)

    r = pydimer.Polynomial("x*y + x - y + 1").coamoeba(radial=120, angular=32)
    assert r["containment_fraction"] >= 0.99 and r["orientation_constant"], r

    sq = pydimer.hv_dimer([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert len(sq.matchings()) == 4
    assert pydimer.DimerModel.from_text(sq.to_text()).euler() == sq.euler()

    f11 = pydimer.DimerModel.fixture("fig11")
    f24 = pydimer.DimerModel.fixture("fig24")
    assert len(f11.matchings()) == 8 and f11.is_isoradial()
    assert not f24.is_isoradial() and f24.euler() == (8, 12, 4, 0)
    assert "<svg" in f11.svg("Fig. 11")

    report = json.loads(pydimer.fibration_report_json("ec2", 128))
    assert report["census"]["polygons"]["3"] == 8
    assert pydimer.contracted_dimer("ec").euler() == (4, 8, 4, 0)

    ec = [(0, 0), (1, 0), (1, 1), (2, 1)]
    ec2 = pydimer.mutate_last(ec)
    assert ec2 == [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert pydimer.mutate_last(ec2, inverse=True) == ec
    assert pydimer.is_strong_exceptional(ec) and pydimer.is_full(ec2)
    assert pydimer.hom_ext_dims((0, 0), (2, 1)) == (6, 0, 0)

    try:
        pydimer.Polynomial("x +")
    except ValueError as e:
        assert "syntax" in str(e)
    else:
        raise AssertionError("expected a syntax error")

    print("pydimer smoke test passed")


if __name__ == "__main__":
    main()
