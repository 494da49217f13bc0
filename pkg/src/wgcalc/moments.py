"""Exact moments of sphere vectors, rank-one reflections and Haar unitaries.

A query is a product of entries, each one of

* ``x[i]``    coordinate of the uniform sphere vector,
* ``p[i,j]``  entry of P = I - R,
* ``r[i,j]``  entry of the complex reflection R (with R e_n = x),
* ``u[i,j]``  entry of a Haar unitary,

optionally conjugated (``~``) and raised to a power.  Indices are integers or
the tokens ``n``, ``n-1``, ... .  With a symbolic dimension every label other
than ``n`` is taken to be a distinct index below ``n``.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial
from typing import Dict, List, Mapping, Sequence, Tuple

from .combinatorics import cycle_type
from .engine import dim_value, is_symbolic_dim, pseudo_weingarten, weingarten
from .group_algebra import DENSE_BOUND
from .numerics import Fraction, RationalFunctionN, rising_factorial

R_TERM_BOUND = 10**6
U_TERM_BOUND = 10**7


class QueryError(ValueError):
    pass


class TermBoundExceeded(RuntimeError):
    pass


# ------------------------------------------------------------------ queries


@dataclass(frozen=True)
class Factor:
    kind: str  # one of "x", "p", "r", "u"
    row: object
    col: object = None
    conj: bool = False
    power: int = 1

    def __post_init__(self):
        if self.kind not in ("x", "p", "r", "u"):
            raise QueryError(f"unknown entry kind {self.kind!r}")
        if self.kind == "x" and self.col is not None:
            raise QueryError("x[i] takes a single index")
        if self.kind != "x" and self.col is None:
            raise QueryError(f"{self.kind}[i,j] needs two indices")
        if self.power < 0:
            raise QueryError("powers must be nonnegative")

    def __str__(self):
        idx = f"{self.row}" if self.kind == "x" else f"{self.row},{self.col}"
        s = f"{self.kind}{'~' if self.conj else ''}[{idx}]"
        return s if self.power == 1 else f"{s}^{self.power}"


@dataclass(frozen=True)
class MomentQuery:
    """A monomial in matrix entries and their conjugates."""

    factors: Tuple[Factor, ...] = field(default_factory=tuple)

    @property
    def target(self) -> str:
        kinds = {f.kind for f in self.factors if f.power}
        if "u" in kinds:
            if kinds != {"u"}:
                raise QueryError("u[...] entries cannot be mixed with reflection entries")
            return "U"
        if kinds <= {"x"}:
            return "X"
        if kinds <= {"p"}:
            return "P"
        return "R"

    def __str__(self):
        return " ".join(str(f) for f in self.factors) or "1"

    @classmethod
    def parse(cls, text: str) -> "MomentQuery":
        return cls(tuple(parse_factors(text)))

    @classmethod
    def from_words(cls, i, j, ip, jp, kind: str = "p") -> "MomentQuery":
        """E[ e_{i1 j1} ... e_{im jm} conj(e_{i'1 j'1} ... e_{i'l j'l}) ]."""
        if len(i) != len(j) or len(ip) != len(jp):
            raise QueryError("word lengths must satisfy |i| = |j| and |i'| = |j'|")
        fs = [Factor(kind, a, b) for a, b in zip(i, j)]
        fs += [Factor(kind, a, b, conj=True) for a, b in zip(ip, jp)]
        return cls(tuple(fs))

    @classmethod
    def from_matrices(cls, A, B, kind: str = "p") -> "MomentQuery":
        """Exponent matrices (nested lists, 1-based positions) or dicts {(i, j): e}."""
        fs = []
        for mat, conj in ((A, False), (B, True)):
            for (i, j), e in _matrix_items(mat):
                if e < 0:
                    raise QueryError("exponents must be nonnegative")
                if e:
                    fs.append(Factor(kind, i, j, conj, e))
        return cls(tuple(fs))

    def words(self):
        """(i, j, i', j') with powers expanded."""
        i, j, ip, jp = [], [], [], []
        for f in self.factors:
            for _ in range(f.power):
                if f.conj:
                    ip.append(f.row)
                    jp.append(f.col)
                else:
                    i.append(f.row)
                    j.append(f.col)
        return i, j, ip, jp


def _matrix_items(mat):
    if isinstance(mat, Mapping):
        return list(mat.items())
    return [((a + 1, b + 1), e) for a, row in enumerate(mat) for b, e in enumerate(row)]


_TOKEN = re.compile(
    r"""\s*(?:
        \|(?P<akind>[xpru])\[(?P<aidx>[^\]]*)\]\|\^(?P<apow>\d+)     # |t|^2m
      | (?P<kind>[xpru])(?P<conj>~?)\[(?P<idx>[^\]]*)\](?:\^(?P<pow>\d+))?
    )""",
    re.X,
)


def _parse_index(tok: str):
    tok = tok.strip().replace(" ", "")
    if re.fullmatch(r"\d+", tok):
        return int(tok)
    if tok == "n" or re.fullmatch(r"n-\d+", tok):
        return tok
    raise QueryError(f"bad index {tok!r}; use integers, 'n' or 'n-j'")


def parse_factors(text: str) -> List[Factor]:
    """Parse e.g. ``"p[1,2]^2 p~[n,2]^2 r[2,2]^3"`` or ``"|x[1]|^2"``."""
    text = text.replace("*", " ").strip()
    out: List[Factor] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise QueryError(f"cannot parse query near {text[pos:pos + 12]!r}")
        if m.group("akind"):
            kind = m.group("akind")
            idx = [_parse_index(t) for t in m.group("aidx").split(",")]
            p = int(m.group("apow"))
            if p % 2:
                raise QueryError("|t|^k needs an even power")
            row, col = (idx[0], None) if kind == "x" else (idx[0], idx[1] if len(idx) > 1 else None)
            out.append(Factor(kind, row, col, False, p // 2))
            out.append(Factor(kind, row, col, True, p // 2))
        else:
            kind = m.group("kind")
            idx = [_parse_index(t) for t in m.group("idx").split(",")]
            if (kind == "x") != (len(idx) == 1) or len(idx) > 2:
                raise QueryError(f"wrong number of indices in {m.group(0).strip()!r}")
            row, col = (idx[0], None) if kind == "x" else (idx[0], idx[1])
            out.append(Factor(kind, row, col, bool(m.group("conj")), int(m.group("pow") or 1)))
        pos = m.end()
    return out


def resolve_index(tok, n):
    """Concrete integer for a concrete n; a string label for symbolic n."""
    if is_symbolic_dim(n):
        return str(tok)
    if isinstance(tok, str):
        v = n if tok == "n" else n - int(tok[2:])
    else:
        v = int(tok)
    if not 1 <= v <= n:
        raise QueryError(f"index {tok} out of range 1..{n}")
    return v


def _is_last(label, n) -> bool:
    return label == "n" if is_symbolic_dim(n) else label == n


# ----------------------------------------------------------- sphere moments


def sphere_moment(m: Sequence[int], l: Sequence[int], n) -> object:
    """E[prod x_i^m_i conj(x_i)^l_i] for x uniform on the unit sphere of C^n."""
    if any(v < 0 for v in list(m) + list(l)):
        raise ValueError("exponents must be nonnegative")
    width = max(len(m), len(l))
    m = list(m) + [0] * (width - len(m))
    l = list(l) + [0] * (width - len(l))
    if not is_symbolic_dim(n) and width > n:
        if any(m[n:]) or any(l[n:]):
            raise ValueError(f"exponent vector longer than the dimension {n}")
    if m != l:
        return _zero(n)
    num = 1
    for v in m:
        num *= factorial(v)
    return Fraction(num) / rising_factorial(dim_value(n), sum(m))


def _zero(n):
    return RationalFunctionN.constant(0) if is_symbolic_dim(n) else Fraction(0)


# -------------------------------------------------------------- P moments


def _p_exponents(query: MomentQuery, n):
    A: Counter = Counter()
    B: Counter = Counter()
    for f in query.factors:
        if f.kind != "p":
            raise QueryError(f"moment_p takes only p[...] entries, got {f}")
        key = (resolve_index(f.row, n), resolve_index(f.col, n))
        (B if f.conj else A)[key] += f.power
    return A, B


def _p_value(A: Mapping, B: Mapping, n):
    """Closed form for E[prod p_ij^a_ij conj(p_ij)^b_ij]."""
    labels = {i for i, _ in A} | {j for _, j in A} | {i for i, _ in B} | {j for _, j in B}
    alpha = {}
    for k in labels:
        lhs = sum(e for (i, j), e in A.items() if j == k) + sum(e for (i, j), e in B.items() if i == k)
        rhs = sum(e for (i, j), e in A.items() if i == k) + sum(e for (i, j), e in B.items() if j == k)
        if lhs != rhs:
            return _zero(n)
        alpha[k] = lhs
    z = dim_value(n)
    num = 1
    alpha_n = 0
    for k, a in alpha.items():
        if _is_last(k, n):
            alpha_n = a
        else:
            num *= factorial(a)
    sa, sb = sum(A.values()), sum(B.values())
    return Fraction(num) * rising_factorial(z, alpha_n) / (rising_factorial(z, sa) * rising_factorial(z, sb))


def moment_p(query: MomentQuery, n) -> object:
    """Exact E of a monomial in entries of P = I - R (exponent-matrix form)."""
    A, B = _p_exponents(query, n)
    return _p_value(A, B, n)


def moment_p_words(i, j, ip, jp, n) -> object:
    """Word form: vanishes unless i + j' is a rearrangement of j + i'."""
    if len(i) != len(j) or len(ip) != len(jp):
        raise QueryError("word lengths must satisfy |i| = |j| and |i'| = |j'|")
    res = lambda w: [resolve_index(t, n) for t in w]  # noqa: E731
    i, j, ip, jp = res(i), res(j), res(ip), res(jp)
    left, right = Counter(i + jp), Counter(j + ip)
    if left != right:
        return _zero(n)
    z = dim_value(n)
    num = 1
    alpha_n = 0
    for k, a in left.items():
        if _is_last(k, n):
            alpha_n = a
        else:
            num *= factorial(a)
    return Fraction(num) * rising_factorial(z, alpha_n) / (rising_factorial(z, len(i)) * rising_factorial(z, len(ip)))


# -------------------------------------------------------------- R moments


def _reflection_exponents(query: MomentQuery, n):
    """Split into p-exponents and r-exponents; x_i is rewritten as r[i,n]."""
    pA: Counter = Counter()
    pB: Counter = Counter()
    rA: Counter = Counter()
    rB: Counter = Counter()
    last = resolve_index("n", n)
    for f in query.factors:
        if f.kind == "u":
            raise QueryError("u[...] entries need moment_u_*")
        row = resolve_index(f.row, n)
        col = last if f.kind == "x" else resolve_index(f.col, n)
        if f.kind == "p":
            (pB if f.conj else pA)[(row, col)] += f.power
        else:
            (rB if f.conj else rA)[(row, col)] += f.power
    return pA, pB, rA, rB


def moment_r(query: MomentQuery, n, term_bound: int = R_TERM_BOUND) -> object:
    """Exact E of a monomial in entries of R (and P, x) by binomial reduction to P-moments."""
    pA, pB, rA, rB = _reflection_exponents(query, n)
    key = lambda c: tuple(sorted(c.items()))  # noqa: E731
    return _moment_r_cached(key(pA), key(pB), key(rA), key(rB), n, term_bound)


@lru_cache(maxsize=200_000)
def _moment_r_cached(pA, pB, rA, rB, n, term_bound):
    A = Counter(dict(pA))
    B = Counter(dict(pB))
    sign = 1
    diag = []  # (label, exponent, conj)
    for items, target, conj in ((rA, A, False), (rB, B, True)):
        for (i, j), e in items:
            if i == j:
                diag.append((i, e, conj))
            else:
                # off-diagonal: r_ij = -p_ij
                target[(i, j)] += e
                sign *= (-1) ** e
    terms = 1
    for _, e, _ in diag:
        terms *= e + 1
    if terms > term_bound:
        raise TermBoundExceeded(f"moment_r expansion needs {terms} terms (bound {term_bound})")
    total = _zero(n)
    # r_ss^e = sum_c C(e, c) (-1)^c p_ss^c
    for choice in itertools.product(*[range(e + 1) for _, e, _ in diag]):
        AA, BB = Counter(A), Counter(B)
        coeff = sign
        for (s, e, conj), c in zip(diag, choice):
            coeff *= comb(e, c) * (-1) ** c
            if c:
                (BB if conj else AA)[(s, s)] += c
        v = _p_value(AA, BB, n)
        if v != 0:
            total = total + v * coeff
    return total


def moment_p_times_rss_power(i, j, ip, jp, s, q: int, n) -> object:
    """Closed form for E[p-monomial * r_ss^q]."""
    res = lambda w: [resolve_index(t, n) for t in w]  # noqa: E731
    i, j, ip, jp = res(i), res(j), res(ip), res(jp)
    s = resolve_index(s, n)
    left = Counter(i + jp)
    if left != Counter(j + ip):
        return _zero(n)
    z = dim_value(n)
    m, l = len(i), len(ip)
    base = _alpha_prefactor(left, n) / (rising_factorial(z, m + q) * rising_factorial(z, l))
    if _is_last(s, n):
        last = rising_factorial(Fraction(m - left.get(s, 0)), q)
    else:
        last = rising_factorial(z + (m - left.get(s, 0) - 1), q)
    return base * last


def moment_p_times_abs_rss_sq(i, j, ip, jp, s, n) -> object:
    """Closed form for E[p-monomial * |r_ss|^2]."""
    res = lambda w: [resolve_index(t, n) for t in w]  # noqa: E731
    i, j, ip, jp = res(i), res(j), res(ip), res(jp)
    s = resolve_index(s, n)
    left = Counter(i + jp)
    if left != Counter(j + ip):
        return _zero(n)
    z = dim_value(n)
    m, l = len(i), len(ip)
    base = _alpha_prefactor(left, n) / (rising_factorial(z, m + 1) * rising_factorial(z, l + 1))
    a = left.get(s, 0)
    if _is_last(s, n):
        last = z + (m - a) * (l - a) + a
    else:
        last = (z + m) * (z + l) - (a + 1) * (2 * z + m + l) + (a + 1) * (a + 2)
    return base * last


def _alpha_prefactor(alpha: Counter, n):
    z = dim_value(n)
    num = 1
    alpha_n = 0
    for k, a in alpha.items():
        if _is_last(k, n):
            alpha_n = a
        else:
            num *= factorial(a)
    return Fraction(num) * rising_factorial(z, alpha_n)


def distinct_row_r_moment(i, j, n) -> object:
    """E[r_{i1 j1} ... r_{im jm}] for distinct rows i avoiding n (finite fixed-point sum)."""
    res = lambda w: [resolve_index(t, n) for t in w]  # noqa: E731
    i, j = res(i), res(j)
    if len(i) != len(j):
        raise QueryError("|i| must equal |j|")
    if len(set(i)) != len(i) or any(_is_last(a, n) for a in i):
        raise QueryError("rows must be distinct and different from n")
    if Counter(i) != Counter(j):
        return _zero(n)
    m = len(i)
    f = sum(1 for a, b in zip(i, j) if a == b)
    z = dim_value(n)
    total = _zero(n)
    for t in range(f + 1):
        total = total + Fraction((-1) ** (m - t) * comb(f, t)) / rising_factorial(z, m - t)
    return total


def permutation_r_moment(sigma, k: int, n: int) -> Fraction:
    """E[r_{1 sigma(1)} ... r_{k sigma(k)}] for k < n."""
    if sigma.k != k:
        raise ValueError("sigma must lie in S_k")
    if not is_symbolic_dim(n) and k >= n:
        raise QueryError(f"needs k < n (got k={k}, n={n})")
    return distinct_row_r_moment(list(range(1, k + 1)), [sigma(a) for a in range(1, k + 1)], n)


def permutation_r_query(sigma) -> MomentQuery:
    return MomentQuery(tuple(Factor("r", a, sigma(a)) for a in range(1, sigma.k + 1)))


# -------------------------------------------------------------- U moments


def _u_words(query: MomentQuery, n):
    if query.target != "U" and query.factors:
        raise QueryError("expected a query in u[...] entries")
    i, j, ip, jp = query.words()
    res = lambda w: [resolve_index(t, n) for t in w]  # noqa: E731
    return res(i), res(j), res(ip), res(jp)


def _matchings(src: Sequence, dst: Sequence):
    """All sigma (0-based tuples) with src[sigma[a]] == dst[a] for every a."""
    k = len(src)
    out = []
    used = [False] * k
    cur = [0] * k

    def rec(a):
        if a == k:
            out.append(tuple(cur))
            return
        for b in range(k):
            if not used[b] and src[b] == dst[a]:
                used[b] = True
                cur[a] = b
                rec(a + 1)
                used[b] = False

    rec(0)
    return out


def moment_u_weingarten(query: MomentQuery, n: int, dense_bound: int = DENSE_BOUND) -> Fraction:
    """Exact Haar moment through the Weingarten sum over pairs of permutations."""
    if is_symbolic_dim(n):
        raise QueryError("Haar moments need a concrete n")
    i, j, ip, jp = _u_words(query, n)
    k = len(i)
    if k != len(ip):
        return Fraction(0)
    if k == 0:
        return Fraction(1)
    if k > dense_bound:
        raise QueryError(f"degree {k} exceeds the dense bound {dense_bound}")
    rows = _matchings(i, ip)
    if not rows:
        return Fraction(0)
    cols = _matchings(j, jp)
    if not cols:
        return Fraction(0)
    wg = weingarten(k, n) if k <= n else pseudo_weingarten(k, n)
    # Group row matchings by identical delta pattern is implicit: only
    # matching permutations are enumerated.  Count cycle types of sigma tau^-1.
    types: Counter = Counter()
    for s in rows:
        for t in cols:
            tinv = [0] * k
            for a, b in enumerate(t):
                tinv[b] = a
            types[cycle_type(tuple(s[tinv[a]] for a in range(k)))] += 1
    total = Fraction(0)
    for mu, c in types.items():
        total += c * wg.values[mu]
    return total


class _URecursion:
    def __init__(self, term_bound: int):
        self.term_bound = term_bound
        self.terms = 0
        self.memo: Dict = {}

    def moment(self, plain: Tuple, conj: Tuple, n: int) -> Fraction:
        plain, conj = tuple(sorted(plain)), tuple(sorted(conj))
        if len(plain) != len(conj):
            return Fraction(0)
        if Counter(a for a, _ in plain) != Counter(a for a, _ in conj):
            return Fraction(0)
        if Counter(b for _, b in plain) != Counter(b for _, b in conj):
            return Fraction(0)
        if not plain:
            return Fraction(1)
        if n == 1:
            # a uniform phase: E[u^m conj(u)^m] = 1
            return Fraction(1)
        key = (plain, conj, n)
        if key in self.memo:
            return self.memo[key]
        val = self._expand(plain, conj, n)
        self.memo[key] = val
        return val

    def _expand(self, plain, conj, n):
        # u_ij = sum_{p<n} r_ip v_pj for j < n, and u_in = r_in.
        open_plain = [a for a, (_, c) in enumerate(plain) if c < n]
        open_conj = [a for a, (_, c) in enumerate(conj) if c < n]
        if len(open_plain) != len(open_conj):
            return Fraction(0)
        total = Fraction(0)
        for ps in itertools.product(range(1, n), repeat=len(open_plain)):
            for qs in set(itertools.permutations(ps)):
                self.terms += 1
                if self.terms > self.term_bound:
                    raise TermBoundExceeded(
                        f"recursive expansion exceeded {self.term_bound} terms; use the Weingarten route"
                    )
                rp = list((r, n) for r, _ in plain)
                rc = list((r, n) for r, _ in conj)
                vp, vc = [], []
                for a, p in zip(open_plain, ps):
                    rp[a] = (plain[a][0], p)
                    vp.append((p, plain[a][1]))
                for a, q in zip(open_conj, qs):
                    rc[a] = (conj[a][0], q)
                    vc.append((q, conj[a][1]))
                rmom = _r_moment_pairs(tuple(sorted(rp)), tuple(sorted(rc)), n)
                if rmom == 0:
                    continue
                vmom = self.moment(tuple(vp), tuple(vc), n - 1)
                if vmom:
                    total += rmom * vmom
        return total


@lru_cache(maxsize=200_000)
def _r_moment_pairs(rp, rc, n):
    rA = Counter(rp)
    rB = Counter(rc)
    key = lambda c: tuple(sorted(c.items()))  # noqa: E731
    return _moment_r_cached((), (), key(rA), key(rB), n, R_TERM_BOUND)


def moment_u_recursive(query: MomentQuery, n: int, term_bound: int = U_TERM_BOUND) -> Fraction:
    """Exact Haar moment from U = R (V + 1): reflection moments times a U(n-1) moment."""
    if is_symbolic_dim(n):
        raise QueryError("Haar moments need a concrete n")
    i, j, ip, jp = _u_words(query, n)
    return _URecursion(term_bound).moment(tuple(zip(i, j)), tuple(zip(ip, jp)), n)


def exact_moment(query: MomentQuery, n):
    """Dispatch on the query target."""
    t = query.target
    if t == "U":
        return moment_u_weingarten(query, n)
    if t == "P":
        return moment_p(query, n)
    if t == "X":
        if is_symbolic_dim(n):
            return moment_r(query, n)
        m = [0] * n
        l = [0] * n
        for f in query.factors:
            idx = resolve_index(f.row, n) - 1
            (l if f.conj else m)[idx] += f.power
        return sphere_moment(m, l, n)
    return moment_r(query, n)
