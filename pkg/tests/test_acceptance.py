"""Acceptance criteria 1-11, one test each.

Every test records a PASS/FAIL line (with wall time against its limit); the
lines are printed together at the end of the pytest run by conftest.py.
Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np

from wgcalc.combinatorics import Permutation, all_permutations
from wgcalc.engine import SYMBOLIC, ascension, ascension_kernel_a, weingarten, weingarten_diagonal_ladder
from wgcalc.moments import permutation_r_moment
from wgcalc.numerics import to_exact_string
from wgcalc.sampler import SamplerConfig, build_reflection, estimate_moment, neretin_project, sample_haar_unitary, sample_sphere
from wgcalc.verify import (
    negative_control_value,
    suite_lower,
    suite_moments,
    suite_pseudo,
    suite_recursion,
    suite_routes,
    suite_u_routes,
)

RESULTS = []


@contextmanager
def criterion(num, title, limit=None):
    t0 = time.perf_counter()
    ok = False
    note = ""
    try:
        yield
        ok = True
    except AssertionError as e:
        note = str(e).splitlines()[0] if str(e) else "assertion failed"
        raise
    finally:
        dt = time.perf_counter() - t0
        if limit is not None and dt > limit:
            ok = False
            note = note or f"over time limit {limit}s"
        timing = f"{dt:.2f}s" + (f" / limit {limit}s" if limit else "")
        RESULTS.append(f"criterion {num:>2} {'PASS' if ok else 'FAIL'}  {title}  [{timing}]" + (f"  {note}" if note else ""))
    if limit is not None:
        assert dt <= limit, f"took {dt:.1f}s, limit {limit}s"


def _all_pass(checks):
    checks = list(checks)
    bad = [c.line() for c in checks if not c.passed]
    assert not bad, bad[0]
    return len(checks)


def test_c01_symbolic_weingarten_k2():
    with criterion(1, "symbolic Wg_{2,n} in canonical form", 1.0):
        wg = weingarten(2, SYMBOLIC)
        assert to_exact_string(wg.values[(1, 1)]) == "1/((n-1)*(n+1))"
        assert to_exact_string(wg.values[(2,)]) == "-1/((n-1)*n*(n+1))"


def test_c02_ladder():
    with criterion(2, "ladder gives Wg_{2,2}(e)=1/3 and Wg_{3,3}(e)=7/120", 1.0):
        e1, e2, e3 = (Permutation.identity(k) for k in (1, 2, 3))
        t = Permutation.parse("(1 2)", k=2)
        assert ascension_kernel_a(e2, e1) * 1 == Fraction(1, 3)
        a_e = ascension_kernel_a(e3, e2)
        a_t = ascension_kernel_a(e3, t)
        assert (a_e, a_t) == (Fraction(11, 60), Fraction(1, 60))
        w2 = weingarten_diagonal_ladder(2)
        assert w2[e2] == Fraction(1, 3) and w2[t] == Fraction(-1, 6)
        assert a_e * w2[e2] + a_t * w2[t] == Fraction(7, 120)
        assert weingarten_diagonal_ladder(3)[e3] == Fraction(7, 120)


def test_c03_route_agreement():
    with criterion(3, "char/gram/recursive routes agree, k<=5, k<=n<=8", 300):
        _all_pass(suite_routes(kmax=5, nmax=8, symbolic_kmax=0))


def test_c04_recursion_and_descension():
    with criterion(4, "Raise recursion (k<=5,n<=8; symbolic k<=4) and Lower identities (k<=5,n<=7)"):
        _all_pass(suite_recursion(kmax=5, nmax=8, symbolic_kmax=4))
        _all_pass(c for c in suite_lower(kmax=5, nmax=7) if "symbolic" not in c.instance)


def test_c05_negative_control():
    with criterion(5, "Raise_{2,2} * w_{2,1} at e equals 1/12, not 1/3"):
        v = negative_control_value()
        assert v == Fraction(1, 12)
        assert v != weingarten(2, 2).values[(1, 1)] == Fraction(1, 3)


def test_c06_pseudo_weingarten():
    with criterion(6, "G*W*G=G and W*G*W=W for (3,2),(4,2),(4,3)", 30):
        _all_pass(suite_pseudo(((3, 2), (4, 2), (4, 3))))


def test_c07_moment_closed_forms():
    with criterion(7, "P-moment examples, 2^k/(n^(k))^2, 200 random one-diagonal-r queries"):
        n_checks = _all_pass(suite_moments(count=200, seed=2024))
        assert n_checks == 3 + 4 + 3


def test_c08_bridge():
    with criterion(8, "permutation r-moment equals Raise_{k,n} for all s in S_k, k<=5, n<=8"):
        for k in range(1, 6):
            for n in range(k + 1, 9):
                r = ascension(k, n)
                for s in all_permutations(k):
                    assert permutation_r_moment(s, k, n) == r[s], (k, n, s)


def test_c09_u_routes():
    with criterion(9, "recursive and Weingarten U-moment routes agree, n in {3,4}", 120):
        _all_pass(suite_u_routes((3, 4)))


MC_CASES = [
    ("|x[1]|^2 |x[2]|^2", Fraction(1, 12)),
    ("r[1,1]^3", Fraction(2, 5)),
    ("|p[1,1]|^4 |p[3,3]|^2", Fraction(2, 25)),
    ("u[2,2] u[3,3] u~[2,3] u~[3,2]", Fraction(-1, 24)),
]


def test_c10_monte_carlo():
    with criterion(10, "Monte Carlo N=2e5 within 5 SE at n=3", 120):
        cfg = SamplerConfig(seed=12345, samples=200_000, workers=1)
        zs = []
        for q, exact in MC_CASES:
            est = estimate_moment(q, 3, cfg)
            assert est.exact == to_exact_string(exact), (q, est.exact)
            zs.append(est.z_score)
            assert est.z_score <= 5, f"{q}: z={est.z_score:.2f}"
        RESULTS.append("             z-scores: " + ", ".join(f"{z:.2f}" for z in zs))


def test_c11_sampler_structure():
    with criterion(11, "reflection structure at n=6 and Neretin recovery"):
        rng = np.random.default_rng(99)
        n = 6
        x = sample_sphere(n, rng, 1000)
        R = build_reflection(x)
        eye = np.eye(n)
        RH = np.conj(np.swapaxes(R, -1, -2))
        assert np.max(np.abs(RH @ R - eye)) <= 1e-10
        assert np.max(np.linalg.svd(eye - R, compute_uv=False)[:, 1]) <= 1e-10
        assert np.max(np.abs(R @ eye[:, -1] - x)) <= 1e-10
        V = sample_haar_unitary(n - 1, rng, 1000)
        g = np.zeros((1000, n, n), dtype=complex)
        g[:, : n - 1, : n - 1] = V
        g[:, -1, -1] = 1
        g = build_reflection(sample_sphere(n, rng, 1000)) @ g
        assert np.max(np.abs(neretin_project(g) - V)) <= 1e-8


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-v"]))
