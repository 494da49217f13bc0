"""Partitions, permutations and irreducible characters of the symmetric group.

Permutations are 1-based in all text I/O (one-line images ``"2 1 3"`` or
cycle notation ``"(1 2)(3)"``).  Internally a :class:`Permutation` stores a
0-based tuple of images.
"""

from __future__ import annotations

import itertools
import math
import re
import threading
from collections import Counter
from functools import lru_cache
from typing import Iterator, List, Sequence, Tuple

from .numerics import Fraction, PolynomialN

Partition = Tuple[int, ...]
CycleType = Partition


def validate_partition(parts: Sequence[int], k: int | None = None) -> Partition:
    parts = tuple(int(p) for p in parts)
    if any(p <= 0 for p in parts):
        raise ValueError(f"partition parts must be positive: {parts}")
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise ValueError(f"partition parts must be nonincreasing: {parts}")
    if k is not None and sum(parts) != k:
        raise ValueError(f"partition {parts} has weight {sum(parts)}, expected {k}")
    return parts


@lru_cache(maxsize=None)
def partitions_of(k: int) -> Tuple[Partition, ...]:
    """All partitions of ``k`` in reverse-lexicographic order."""
    if k < 1:
        raise ValueError("k must be positive")

    def gen(rest: int, cap: int) -> Iterator[Partition]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    return tuple(gen(k, k))


def transpose(lam: Partition) -> Partition:
    """Conjugate partition."""
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0]))


def diagonal_length(lam: Partition) -> int:
    """d(lambda) = #{i : lambda_i >= i} (1-based i)."""
    return sum(1 for i, p in enumerate(lam, start=1) if p >= i)


def z_centralizer(mu: CycleType) -> int:
    out = 1
    for m, c in Counter(mu).items():
        out *= m**c * math.factorial(c)
    return out


def conjugacy_class_size(mu: CycleType) -> int:
    return math.factorial(sum(mu)) // z_centralizer(mu)


def dimension(lam: Partition) -> int:
    """Number of standard tableaux of shape ``lam`` (hook-length formula)."""
    conj = transpose(lam)
    hooks = 1
    for i, row in enumerate(lam):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(sum(lam)) // hooks


def content_product(lam: Partition, z):
    """prod over cells (i, j) of (z + j - i); ``z`` may be a number or ``N``."""
    out = PolynomialN([1]) if isinstance(z, PolynomialN) else Fraction(1)
    for i, row in enumerate(lam):
        for j in range(row):
            out = out * (z + (j - i))
    return out


# ------------------------------------------------------------ characters

_char_lock = threading.Lock()
_char_memo: dict = {}


def _rim_hook_removals(lam: Partition, r: int):
    """Yield (shape after removing a border strip of size r, height)."""
    # Work in beta-numbers: removing an r-strip moves one bead from b to b - r.
    L = len(lam)
    beta = [lam[i] + (L - 1 - i) for i in range(L)]
    bset = set(beta)
    for b in beta:
        nb = b - r
        if nb < 0 or nb in bset:
            continue
        height = sum(1 for c in beta if nb < c < b)
        new = sorted((nb if c == b else c for c in beta), reverse=True)
        shape = tuple(x - (L - 1 - i) for i, x in enumerate(new))
        yield tuple(p for p in shape if p > 0), height


def _mn(lam: Partition, mu: CycleType) -> int:
    if not mu:
        return 1 if not lam else 0
    key = (lam, mu)
    val = _char_memo.get(key)
    if val is not None:
        return val
    r, rest = mu[0], mu[1:]
    total = 0
    for shape, height in _rim_hook_removals(lam, r):
        total += (-1) ** height * _mn(shape, rest)
    with _char_lock:
        _char_memo[key] = total
    return total


def character(lam: Partition, mu: CycleType) -> int:
    """chi^lam evaluated on the class of cycle type ``mu`` (Murnaghan-Nakayama)."""
    lam = validate_partition(lam)
    mu = tuple(sorted(validate_partition(sorted(mu, reverse=True)), reverse=True))
    if sum(lam) != sum(mu):
        raise ValueError(f"weight mismatch: {lam} vs {mu}")
    return _mn(lam, mu)


@lru_cache(maxsize=None)
def character_table(k: int) -> Tuple[Tuple[int, ...], ...]:
    """Rows indexed by lambda, columns by mu, both in partitions_of(k) order."""
    ps = partitions_of(k)
    return tuple(tuple(character(lam, mu) for mu in ps) for lam in ps)


# ------------------------------------------------------------ permutations


class Permutation:
    """Bijection of {1..k}; ``images[i]`` is the 0-based image of i."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int], one_based: bool = False):
        imgs = tuple(int(x) - 1 for x in images) if one_based else tuple(int(x) for x in images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation: {images}")
        self.images = imgs

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return cls(range(k))

    @classmethod
    def parse(cls, text: str, k: int | None = None) -> "Permutation":
        """Parse ``"2 1 3"`` or cycle notation ``"(1 2)(3)"``."""
        text = text.strip()
        if text.startswith("(") or text == "e":
            cycles = [[int(x) for x in c.replace(",", " ").split()] for c in re.findall(r"\(([^)]*)\)", text)]
            size = max([x for c in cycles for x in c] + [k or 0])
            imgs = list(range(size))
            seen = set()
            for c in cycles:
                for a in c:
                    if a in seen or a < 1:
                        raise ValueError(f"bad cycle notation: {text}")
                    seen.add(a)
                for a, b in zip(c, c[1:] + c[:1]):
                    imgs[a - 1] = b - 1
            return cls(imgs)
        return cls([int(x) for x in text.replace(",", " ").split()], one_based=True)

    @property
    def k(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        """1-based application."""
        return self.images[i - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition (self * other)(i) = self(other(i))."""
        if self.k != other.k:
            raise ValueError("degree mismatch")
        return Permutation(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.k
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def extend(self, k: int) -> "Permutation":
        """Embed into S_k by fixing the extra points."""
        return Permutation(self.images + tuple(range(self.k, k)))

    def fixed_points(self) -> int:
        return sum(1 for i, j in enumerate(self.images) if i == j)

    def cycles(self) -> List[Tuple[int, ...]]:
        seen = [False] * self.k
        out = []
        for s in range(self.k):
            if seen[s]:
                continue
            c = []
            i = s
            while not seen[i]:
                seen[i] = True
                c.append(i + 1)
                i = self.images[i]
            out.append(tuple(c))
        return out

    def sign(self) -> int:
        return -1 if (self.k - len(self.cycles())) % 2 else 1

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({self})"

    def __str__(self):
        return " ".join(str(i + 1) for i in self.images)

    def cycle_str(self) -> str:
        cs = [c for c in self.cycles() if len(c) > 1]
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cs) or "e"


def cycle_type(sigma: Permutation | Sequence[int]) -> CycleType:
    imgs = sigma.images if isinstance(sigma, Permutation) else tuple(sigma)
    k = len(imgs)
    seen = [False] * k
    lengths = []
    for s in range(k):
        if seen[s]:
            continue
        n = 0
        i = s
        while not seen[i]:
            seen[i] = True
            i = imgs[i]
            n += 1
        lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


def all_permutations(k: int) -> List[Permutation]:
    """S_k in lexicographic one-line order."""
    return [Permutation(p) for p in itertools.permutations(range(k))]


def class_representative(mu: CycleType) -> Permutation:
    imgs = []
    start = 0
    for m in mu:
        imgs.extend(range(start + 1, start + m))
        imgs.append(start)
        start += m
    return Permutation(imgs)


def format_cycle_type(mu: CycleType) -> str:
    return ",".join(map(str, mu))


def parse_cycle_type(text: str) -> CycleType:
    text = text.strip()
    if text in ("e", ""):
        raise ValueError("cycle type needs explicit parts, e.g. '1,1'")
    return validate_partition(sorted((int(x) for x in text.replace(" ", "").split(",")), reverse=True))


def random_permutation(k: int, rng) -> Permutation:
    """Uniform element of S_k; ``rng`` is a numpy Generator or a ``random.Random``."""
    if hasattr(rng, "permutation"):
        return Permutation([int(i) for i in rng.permutation(k)])
    return Permutation(rng.sample(range(k), k))
