#!/usr/bin/env python3
"""Smoke test for the ellip2_py extension module.

Locates the built cdylib under target/, imports it under the module name
Python expects, and exercises one value from each evaluation route against
fixed references. Exit status 0 means every check passed.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libellip2_py.so", "ellip2_py.so", "libellip2_py.dylib")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("no built extension found; run `cargo build -p ellip2-py` first")
    tmp = Path(tempfile.mkdtemp(prefix="ellip2_py_"))
    shutil.copy2(built, tmp / "ellip2_py.so")
    sys.path.insert(0, str(tmp))
    import ellip2_py

    return ellip2_py


def check(label, got, want, tol):
    err = abs(got - want)
    scale = max(abs(want), 1e-300)
    if err / scale > tol:
        sys.exit(f"FAIL {label}: got {got!r}, want {want!r} (rel err {err / scale:.2e})")
    print(f"ok   {label}: {got!r}")


def expect_value_error(label, fn):
    try:
        fn()
    except ValueError as e:
        print(f"ok   {label}: rejected ({e})")
        return
    sys.exit(f"FAIL {label}: expected ValueError")


def main():
    m = load_module()

    check("complete_k(0.5)", m.complete_k(0.5), 1.6857503548125963, 1e-14)
    check("complete_e(0.5)", m.complete_e(0.5), 1.4674622093394272, 1e-14)

    r = m.gen_e(m.ModulusPair(0.5, 0.5))
    check("gen_e(0.5, 0.5)", r.value, 2.129261354284658, 1e-12)
    assert r.method == "f4_closed", f"unexpected method {r.method!r}"
    print(f"ok   gen_e method: {r.method}")

    sym = m.gen_e_symmetric(0.5)
    check("gen_e_symmetric(0.5)", sym.value, r.value, 1e-12)

    k = m.gen_k(m.ModulusPair(0.5, 0.5))
    check("gen_k(0.5, 0.5)", k.value, 2.880233162090572, 1e-10)

    # Three independent routes at an asymmetric point.
    mp = m.ModulusPair(0.3, 0.7)
    series = m.gen_e_series(mp).value
    closed = m.gen_e_closed(mp).value
    quad = m.oracle_e2(mp, 1e-11)
    check("gen_e_series(0.3, 0.7)", series, 2.062551757100862, 1e-11)
    check("series vs closed", closed, series, 1e-9)
    check("series vs quadrature", quad, series, 1e-9)

    check(
        "legendre_p_halfint(2, 1.25)",
        m.legendre_p_halfint(2, 1.25),
        1.0903335014002942,
        1e-13,
    )

    # Degenerate corner: both moduli zero gives (pi/2)^2.
    check(
        "gen_e(0, 0)",
        m.gen_e(m.ModulusPair(0.0, 0.0)).value,
        math.pi * math.pi / 4.0,
        1e-14,
    )

    expect_value_error("ModulusPair(0.71, 0.71)", lambda: m.ModulusPair(0.71, 0.71))
    expect_value_error("gen_e_symmetric(0.8)", lambda: m.gen_e_symmetric(0.8))

    print("all smoke checks passed")


if __name__ == "__main__":
    main()
