"""Identity suites: each yields one :class:`Check` per identity instance."""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List

from .combinatorics import Permutation, all_permutations
from .engine import (
    SYMBOLIC,
    WgRoute,
    ascension,
    ascension_kernel_a,
    ascension_via_sphere,
    descension,
    gram_function,
    pseudo_weingarten,
    shift_dimension,
    weingarten,
    weingarten_by_ladder,
)
from .group_algebra import ClassFunction, NotInvertible, convolve_class, convolve_many, delta, invert_class
from .moments import (
    MomentQuery,
    moment_p,
    moment_p_times_abs_rss_sq,
    moment_p_times_rss_power,
    moment_p_words,
    moment_r,
    moment_u_recursive,
    moment_u_weingarten,
    permutation_r_moment,
    permutation_r_query,
)
from .numerics import Fraction, RationalFunctionN, N, rising_factorial


@dataclass
class Check:
    suite: str
    instance: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.suite}: {self.instance}" + (
            f" ({self.detail})" if self.detail else ""
        )

    def to_json_dict(self) -> dict:
        return {"suite": self.suite, "instance": self.instance, "passed": self.passed, "detail": self.detail}


def suite_routes(kmax: int = 5, nmax: int = 8, symbolic_kmax: int = 4) -> Iterator[Check]:
    """Character, Gram-inverse and recursive-ascension routes agree exactly."""
    for k in range(1, kmax + 1):
        for n in range(k, nmax + 1):
            ref = weingarten(k, n, WgRoute.CHARACTER)
            gram = weingarten(k, n, WgRoute.GRAM)
            rec = weingarten(k, n, WgRoute.RECURSIVE)
            ok = ref == gram == rec
            yield Check("routes", f"k={k} n={n}", ok)
    for k in range(1, symbolic_kmax + 1):
        ref = weingarten(k, SYMBOLIC, WgRoute.CHARACTER)
        ok = ref == weingarten(k, SYMBOLIC, WgRoute.GRAM) == weingarten(k, SYMBOLIC, WgRoute.RECURSIVE)
        yield Check("routes", f"k={k} symbolic", ok)


def suite_recursion(kmax: int = 5, nmax: int = 8, symbolic_kmax: int = 4) -> Iterator[Check]:
    """Wg_{k,n} = Raise_{k,n} * Wg_{k,n-1} for k < n, and Raise = G_{k,n-1} * Wg_{k,n}."""
    for k in range(1, kmax + 1):
        for n in range(k + 1, nmax + 1):
            wg = weingarten(k, n)
            ok = convolve_class(ascension(k, n), weingarten(k, n - 1)) == wg
            yield Check("recursion", f"Wg[{k},{n}] = Raise[{k},{n}] * Wg[{k},{n - 1}]", ok)
            ok2 = convolve_class(gram_function(k, n - 1), wg) == ascension(k, n)
            yield Check("recursion", f"Raise[{k},{n}] = G[{k},{n - 1}] * Wg[{k},{n}]", ok2)
    for k in range(1, symbolic_kmax + 1):
        wg = weingarten(k, SYMBOLIC)
        ok = convolve_class(ascension(k, SYMBOLIC), shift_dimension(wg, -1)) == wg
        yield Check("recursion", f"k={k} symbolic", ok)


def suite_lower(kmax: int = 5, nmax: int = 7) -> Iterator[Check]:
    """Raise_{k,n+1} * Lower_{k,n} = delta and Wg_{k,n} = Lower_{k,n} * Wg_{k,n+1}."""
    for k in range(1, kmax + 1):
        for n in range(k, nmax + 1):
            low = descension(k, n)
            yield Check("lower", f"Raise[{k},{n + 1}] * Lower[{k},{n}] = delta",
                        convolve_class(ascension(k, n + 1), low) == delta(k))
            yield Check("lower", f"Wg[{k},{n}] = Lower[{k},{n}] * Wg[{k},{n + 1}]",
                        convolve_class(low, weingarten(k, n + 1)) == weingarten(k, n))
    for k in range(1, min(kmax, 4) + 1):
        # Lower_{k,n} = sgn * Raise_{k,-n} under the formal substitution n -> -n
        raise_neg = ascension(k, SYMBOLIC).map_values(lambda v: v.negate_arg(), True)
        flipped = ClassFunction(k, {mu: v * (-1) ** (k - len(mu)) for mu, v in raise_neg.values.items()}, True)
        yield Check("lower", f"Lower[{k},n] = sgn * Raise[{k},-n] symbolic", flipped == descension(k, SYMBOLIC))


def suite_pseudo(pairs=((3, 2), (4, 2), (4, 3))) -> Iterator[Check]:
    for k, n in pairs:
        G = gram_function(k, n)
        W = pseudo_weingarten(k, n)
        yield Check("pseudo", f"G*W*G = G k={k} n={n}", convolve_many(G, W, G) == G)
        yield Check("pseudo", f"W*G*W = W k={k} n={n}", convolve_many(W, G, W) == W)


def negative_control_value() -> Fraction:
    """(Raise_{2,2} * w_{2,1})(e_2) with the canonical pseudo-Weingarten w_{2,1}."""
    return convolve_class(ascension(2, 2), pseudo_weingarten(2, 1)).values[(1, 1)]


def suite_negative_control() -> Iterator[Check]:
    v = negative_control_value()
    wg22 = weingarten(2, 2).values[(1, 1)]
    yield Check("negative-control", "Raise[2,2]*w[2,1](e) = 1/12", v == Fraction(1, 12), f"got {v}")
    yield Check("negative-control", "differs from Wg[2,2](e) = 1/3", v != wg22 and wg22 == Fraction(1, 3))
    ladder = ascension_kernel_a(Permutation.identity(2), Permutation.identity(1)) * weingarten(1, 1).values[(1,)]
    yield Check("negative-control", "a_2(e,e) Wg[1,1](e) = 1/3", ladder == Fraction(1, 3))


def suite_ladder(kmax: int = 5, nmax: int = 8) -> Iterator[Check]:
    for k in range(1, kmax + 1):
        for n in range(k, nmax + 1):
            yield Check("ladder", f"k={k} n={n}", weingarten_by_ladder(k, n) == weingarten(k, n))


def suite_bridge(kmax: int = 5, nmax: int = 8) -> Iterator[Check]:
    """E[r_{1 s(1)} ... r_{k s(k)}] = Raise_{k,n}(s) for every s in S_k, k < n."""
    for k in range(1, kmax + 1):
        for n in range(k + 1, nmax + 1):
            raise_kn = ascension(k, n)
            ok = True
            for s in all_permutations(k):
                target = raise_kn[s]
                if permutation_r_moment(s, k, n) != target or moment_r(permutation_r_query(s), n) != target:
                    ok = False
                    break
            yield Check("bridge", f"k={k} n={n} all {len(all_permutations(k))} permutations", ok)
        n = max(k, 2)
        if k <= n:
            ok = all(ascension_via_sphere(k, k, s) == ascension(k, k)[s] for s in all_permutations(k))
            yield Check("bridge", f"sphere expansion k={k} n={k}", ok)


def _random_words(rng: random.Random, n: int, m: int, l: int, balanced: bool):
    labels = list(range(1, n + 1))
    i = [rng.choice(labels) for _ in range(m)]
    j = [rng.choice(labels) for _ in range(m)]
    if balanced and l >= 0:
        # choose i', j' so that i + j' is a rearrangement of j + i'
        pool_left = i[:]
        pool_right = j[:]
        ip, jp = [], []
        for _ in range(l):
            a = rng.choice(labels)
            ip.append(a)
            jp.append(a)
        # rebalance: swap in the multiset difference
        left = pool_left + jp
        right = pool_right + ip
        diff_l = list((Counter(right) - Counter(left)).elements())
        diff_r = list((Counter(left) - Counter(right)).elements())
        ip = ip + diff_r
        jp = jp + diff_l
        # pad to equal lengths with identical letters
        while len(ip) < len(jp):
            ip.append(jp[len(ip)])
        while len(jp) < len(ip):
            jp.append(ip[len(jp)])
        rng.shuffle(ip)
        return i, j, ip, jp
    ip = [rng.choice(labels) for _ in range(l)]
    jp = [rng.choice(labels) for _ in range(l)]
    return i, j, ip, jp



def random_prop_queries(count: int = 200, seed: int = 2024, kmax: int = 4, nmax: int = 7):
    """Random (words, s, q) instances for the one-diagonal-r closed forms."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, nmax)
        m = rng.randint(0, kmax)
        l = rng.randint(0, kmax)
        balanced = rng.random() < 0.8
        i, j, ip, jp = _random_words(rng, n, m, l, balanced)
        if len(i) > kmax or len(ip) > kmax + kmax:
            continue
        s = rng.choice([n, rng.randint(1, n)])
        q = rng.randint(1, kmax)
        out.append((n, i, j, ip, jp, s, q))
    return out


def _p_query(i, j, ip, jp) -> MomentQuery:
    return MomentQuery.from_words(i, j, ip, jp, kind="p")


def suite_moments(count: int = 200, seed: int = 2024) -> Iterator[Check]:
    """P-moment worked examples and the one-diagonal-r closed forms against moment_r."""
    P = MomentQuery.parse
    n = SYMBOLIC
    nn = RationalFunctionN(N)
    examples = [
        ("E|p11|^4|pnn|^2", P("|p[1,1]|^4 |p[n,n]|^2"), 24 / (nn * (nn + 1) * (nn + 2) ** 2)),
        ("E p12^2 pn1^2 pnn^3 conj(pn2)^2", P("p[1,2]^2 p[n,1]^2 p[n,n]^3 p~[n,2]^2"),
         4 / (nn * (nn + 1) * (nn + 5) * (nn + 6))),
        ("E p12 p21 pnn^4 conj(p33^2 pnn^3)", P("p[1,2] p[2,1] p[n,n]^4 p~[3,3]^2 p~[n,n]^3"),
         2 * (nn + 6) / (nn * (nn + 1) * (nn + 2) * (nn + 3) * (nn + 4))),
    ]
    for name, q, expect in examples:
        yield Check("moments", name, moment_p(q, n) == expect)
    for k in range(1, 5):
        q = P(" ".join(f"|p[{a},{a}]|^2" for a in range(1, k + 1)))
        expect = Fraction(2**k) / rising_factorial(nn, k) ** 2
        yield Check("moments", f"E|p11...pkk|^2 = 2^k/(n^(k))^2 k={k}", moment_p(q, n) == expect)

    bad26 = bad28 = bad_words = 0
    for (nv, i, j, ip, jp, s, q) in random_prop_queries(count, seed):
        base = _p_query(i, j, ip, jp)
        if moment_p(base, nv) != moment_p_words(i, j, ip, jp, nv):
            bad_words += 1
        q26 = MomentQuery(base.factors + MomentQuery.parse(f"r[{s},{s}]^{q}").factors)
        if moment_r(q26, nv) != moment_p_times_rss_power(i, j, ip, jp, s, q, nv):
            bad26 += 1
        q28 = MomentQuery(base.factors + MomentQuery.parse(f"|r[{s},{s}]|^2").factors)
        if moment_r(q28, nv) != moment_p_times_abs_rss_sq(i, j, ip, jp, s, nv):
            bad28 += 1
    yield Check("moments", f"word form = matrix form on {count} random queries", bad_words == 0, f"{bad_words} mismatches")
    yield Check("moments", f"p-monomial * r_ss^q closed form on {count} random queries", bad26 == 0, f"{bad26} mismatches")
    yield Check("moments", f"p-monomial * |r_ss|^2 closed form on {count} random queries", bad28 == 0, f"{bad28} mismatches")


def degree2_u_queries(n: int):
    """All degree-2 U monomials with rows and columns in {n-1, n}."""
    idx = [n - 1, n]
    for a, b, c, d in itertools.product(itertools.product(idx, idx), repeat=4):
        yield MomentQuery.from_words([a[0], b[0]], [a[1], b[1]], [c[0], d[0]], [c[1], d[1]], kind="u")


def suite_u_routes(ns=(3, 4)) -> Iterator[Check]:
    for n in ns:
        bad = 0
        total = 0
        for q in degree2_u_queries(n):
            total += 1
            if moment_u_recursive(q, n) != moment_u_weingarten(q, n):
                bad += 1
        yield Check("u-routes", f"n={n}: {total} degree-2 queries on rows/cols {{n-1,n}}", bad == 0, f"{bad} mismatches")
        q1 = MomentQuery.parse("u[n-1,n-1] u[n,n] u~[n-1,n] u~[n,n-1]")
        q2 = MomentQuery.parse("u[n-1,n-1] u[n,n] u~[n-1,n-1] u~[n,n]")
        e1 = Fraction(-1, (n - 1) * n * (n + 1))
        e2 = Fraction(1, (n - 1) * (n + 1))
        yield Check("u-routes", f"n={n}: E[u(n-1,n-1) u(n,n) conj(u(n-1,n) u(n,n-1))] = {e1}",
                    moment_u_recursive(q1, n) == e1 == moment_u_weingarten(q1, n))
        yield Check("u-routes", f"n={n}: E[|u(n-1,n-1) u(n,n)|^2] = {e2}",
                    moment_u_recursive(q2, n) == e2 == moment_u_weingarten(q2, n))


def suite_invertibility(kmax: int = 4) -> Iterator[Check]:
    """G_{k,z} fails to invert exactly on z in {0..k-1}; Raise_{k,z} exactly on z in {1..k}."""
    for k in range(1, kmax + 1):
        for z in range(0, k + 3):
            expect = z >= k
            yield Check("invertibility", f"G[{k},{z}] invertible={expect}", _invertible(gram_function(k, z)) == expect)
        for z in range(1, k + 4):
            expect = z > k
            yield Check("invertibility", f"Raise[{k},{z}] invertible={expect}", _invertible(ascension(k, z)) == expect)
        for z in range(-k - 2, -k + 1):
            yield Check("invertibility", f"Raise[{k},{z}] invertible=True", _invertible(ascension(k, z)))


def _invertible(f) -> bool:
    try:
        g = invert_class(f)
    except NotInvertible:
        return False
    return convolve_class(f, g) == delta(f.k)


SUITES: Dict[str, Callable[..., Iterator[Check]]] = {
    "routes": suite_routes,
    "recursion": suite_recursion,
    "lower": suite_lower,
    "pseudo": suite_pseudo,
    "negative-control": suite_negative_control,
    "ladder": suite_ladder,
    "bridge": suite_bridge,
    "moments": suite_moments,
    "u-routes": suite_u_routes,
    "invertibility": suite_invertibility,
}


def run_suite(name: str, kmax: int | None = None, nmax: int | None = None,
              k: int | None = None, n: int | None = None) -> List[Check]:
    if name == "all":
        out: List[Check] = []
        for nm in SUITES:
            out.extend(run_suite(nm, kmax, nmax, k, n))
        return out
    if name not in SUITES:
        raise KeyError(name)
    kw = {}
    if name in ("routes", "recursion", "lower", "ladder", "bridge"):
        if kmax is not None:
            kw["kmax"] = kmax
        if nmax is not None:
            kw["nmax"] = nmax
    elif name == "pseudo" and (k is not None or n is not None):
        if k is None or n is None:
            raise ValueError("pseudo needs both --k and --n")
        kw["pairs"] = ((k, n),)
    elif name == "invertibility" and kmax is not None:
        kw["kmax"] = kmax
    elif name == "u-routes" and n is not None:
        kw["ns"] = (n,)
    return list(SUITES[name](**kw))
