"""Smoke test for the liecohom extension module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml
--features extension-module`, then run `python python/smoke_test.py`.
"""

import json
import math
import os
import sys
import tempfile

import liecohom


def main() -> int:
    b3 = liecohom.Algebra.builtin("borel-sl", 3)
    assert b3.dim == 5 and b3.basis == ["h1", "h2", "e12", "e13", "e23"], b3
    assert b3.betti() == [1, 2, 1, 0, 0, 0]
    assert b3.betti(reduce=True) == [1, 2, 1, 0, 0, 0]

    for n in range(2, 5):
        alg = liecohom.Algebra.builtin("borel-sl", n)
        expected = [math.comb(n - 1, k) for k in range(alg.dim + 1)]
        assert alg.betti(reduce=True) == expected, n

    graded = b3.graded_betti(1)
    assert graded == {("0", "0"): 2}, graded

    sl2 = liecohom.Algebra.builtin("sl", 2, module="adjoint")
    assert sl2.invariants() == []
    assert liecohom.Algebra.builtin("sl", 2).betti() == [1, 0, 0, 1]
    heis = liecohom.Algebra.builtin("heisenberg", 1, module="adjoint")
    assert len(heis.invariants()) == 1

    verdict = liecohom.verify_borel(4, field="Fp:5")
    assert verdict["passed"] is True and verdict["modes_agree"], verdict
    assert liecohom.verify_borel(3, field="Fp:2")["passed"] is None

    # two-dimensional nonabelian algebra [x, y] = y, graded by x
    spec = {"field": "Q", "dim": 2, "basis": ["x", "y"],
            "brackets": [{"i": 0, "j": 1, "terms": [[1, "1"]]}]}
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "aff.json")
        with open(path, "w") as fh:
            json.dump(spec, fh)
        aff = liecohom.Algebra.from_file(path)
        assert aff.betti() == [1, 1, 0]
        assert aff.betti(sigmas=[["1", "0"]]) == [1, 1, 0]

    for bad in (lambda: liecohom.Algebra.builtin("so", 3),
                lambda: liecohom.Algebra.builtin("borel-sl", 2, field="Fp:4"),
                lambda: b3.betti(sigmas=[["0", "0", "1", "0", "0"]])):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("smoke test passed:", repr(b3))
    return 0


if __name__ == "__main__":
    sys.exit(main())
