#!/usr/bin/env python3
"""Smoke test for the ballspec Python bindings.

Builds nothing itself: it locates the compiled extension under
target/{release,debug}, stages it under an importable name, and runs a
handful of end-to-end checks through the Python surface.

Usage:
    cargo build -p ballspec-python --release
    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        ROOT / "target" / "release" / "libballspec_py.so",
        ROOT / "target" / "debug" / "libballspec_py.so",
        ROOT / "target" / "release" / "ballspec_py.dll",
        ROOT / "target" / "debug" / "ballspec_py.dll",
        ROOT / "target" / "release" / "libballspec_py.dylib",
        ROOT / "target" / "debug" / "libballspec_py.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("error: build the extension first: cargo build -p ballspec-python")
    stage = Path(tempfile.mkdtemp(prefix="ballspec-py-"))
    suffix = ".pyd" if built.suffix == ".dll" else ".so"
    shutil.copy2(built, stage / f"ballspec_py{suffix}")
    sys.path.insert(0, str(stage))
    import ballspec_py

    return ballspec_py


checks = []


def check(name, ok, detail=""):
    checks.append(ok)
    print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))


def main():
    bs = load_module()

    # Jacobi primitives
    check("pochhammer(0.5, 2) = 0.75", abs(bs.pochhammer(0.5, 2) - 0.75) < 1e-15)
    check(
        "generalized Jacobi (-2,0,1) at t=0.4 is (t-1)/2",
        abs(bs.gjacobi_eval(-2.0, 0.0, 1, 0.4) - (0.4 - 1.0) / 2.0) < 1e-15,
    )
    check(
        "boundary value P^(0,0)_2(1) = 1/12 in hatted normalization",
        abs(bs.gjacobi_value_at_one(0.0, 0.0, 2) - 1.0 / 12.0) < 1e-15,
    )

    nodes, weights = bs.gauss_jacobi_rule(4, 0.0, 0.0)
    m8 = sum(w * t**8 for t, w in zip(nodes, weights))
    check("5-point Gauss-Legendre integrates t^8 to 2/9", abs(m8 - 2.0 / 9.0) < 1e-13)
    check("rule weights positive", all(w > 0 for w in weights))

    # harmonics
    check("dim H_4^3 = 9", bs.harmonic_dim(3, 4) == 9)
    check(
        "zonal degree-1 harmonic at the pole = sqrt(3)",
        abs(bs.sph_eval(3, 1, 2, [0.0, 0.0, 1.0]) - math.sqrt(3.0)) < 1e-14,
    )

    # BallPoly algebra
    y = bs.BallPoly.solid_harmonic(2, 3, 1)
    check("solid harmonics are harmonic", y.laplacian().total_degree() is None)
    check("unit sphere norm of Y^3_1", abs(y.inner_sphere(y) - 1.0) < 1e-14)
    check("gradient norm d*n of Y^3_1", abs(y.inner_grad(y) - 6.0) < 1e-12)

    p = bs.BallPoly.ball_basis(0.0, 2, 2, 1, 1)
    h = bs.ball_norm(0.0, 2, 1, 2)
    check(
        "h^0_(1,2) = 1/3 matches the quadrature",
        abs(p.inner_l2(p, 0.0) - h) < 1e-12 and abs(h - 1.0 / 3.0) < 1e-15,
    )

    q = bs.BallPoly.q_basis(2, [2.0], 2, 6, 2, 1)
    hq = bs.q_norm(2, [2.0], 6, 2, 2)
    check(
        "Q^(-2,6)_2 Sobolev norm matches closed form",
        abs(q.sobolev_inner(q, 2, [2.0]) - hq) < 1e-8 * hq,
        f"h = {hq:.6g}",
    )
    trace = q.boundary_trace()
    check("clamped basis has zero trace", all(abs(v) < 1e-12 for v in trace.values()))

    # JSON round trip
    back = bs.BallPoly.from_json(p.to_json())
    check(
        "JSON round trip preserves values",
        abs(back.eval([0.3, -0.2]) - p.eval([0.3, -0.2])) < 1e-13,
    )

    # projection reproduces polynomials
    rec = bs.classical_partial_sum(p, 1.0, 4)
    check(
        "partial sum reproduces a degree-2 polynomial",
        abs(rec.eval([0.4, 0.1]) - p.eval([0.4, 0.1])) < 1e-12,
    )
    table = bs.project_classical(p, 0.0, 4)
    check(
        "projection of a basis element is a unit coefficient",
        abs(table.get((2, 1, 1), 0.0) - 1.0) < 1e-12
        and all(abs(v) < 1e-12 for k, v in table.items() if k != (2, 1, 1)),
    )

    # solver end-to-end: exam1a recovered at machine precision
    _, errs = bs.solve_example("exam1a", 6, 10)
    check(
        "Helmholtz exam1a at n=6 is machine precision",
        errs["e_M"] < 1e-11 and errs["e_L2"] < 1e-11,
        f"e_M={errs['e_M']:.3e}",
    )

    rows, rate = bs.convergence_example("exam2", [8, 12, 16, 20], 22)
    decreasing = all(a[2] > b[2] for a, b in zip(rows, rows[1:]))
    check(
        "biharmonic exam2 errors decay exponentially",
        decreasing and rate <= -0.3,
        f"rate={rate:.3f}",
    )

    # grid surface
    grid = bs.BallGrid.build(2, 6)
    check("grid weights normalized", abs(sum(grid.weights()) - 1.0) < 1e-13)
    check("grid size (n+1)(2n+1)", len(grid) == 7 * 13)

    print(f"\n{sum(checks)}/{len(checks)} smoke checks passed")
    if not all(checks):
        sys.exit(1)


if __name__ == "__main__":
    main()
