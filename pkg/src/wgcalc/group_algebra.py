"""Functions on S_k: class functions, dense group functions, and convolution.

Values are exact scalars of one homogeneous domain: either ``Fraction``
("rational") or ``RationalFunctionN`` ("symbolic").  Mixing the two in one
operation raises :class:`DomainMismatch` instead of silently evaluating.
"""

from __future__ import annotations

import itertools
import json
import math
from functools import lru_cache
from typing import Callable, Dict, Mapping, Sequence, Tuple

from .combinatorics import (
    CycleType,
    Permutation,
    all_permutations,
    character_table,
    class_representative,
    conjugacy_class_size,
    cycle_type,
    dimension,
    format_cycle_type,
    parse_cycle_type,
    partitions_of,
)
from .numerics import Fraction, RationalFunctionN, parse_exact, to_exact_string

DENSE_BOUND = 7


class DomainMismatch(TypeError):
    """Numeric and symbolic scalars met in one operation."""


class NotInvertible(ArithmeticError):
    def __init__(self, lam, message=None):
        self.partition = lam
        super().__init__(message or f"not invertible: Fourier coefficient at lambda={format_cycle_type(lam)} is zero")


class NotClassFunction(ValueError):
    pass


def _coerce(v, symbolic: bool):
    if symbolic:
        if isinstance(v, RationalFunctionN):
            return v
        return RationalFunctionN.constant(Fraction(v))
    if isinstance(v, RationalFunctionN):
        raise DomainMismatch("symbolic value in a rational class function")
    return v if isinstance(v, Fraction) else Fraction(v)


def _zero(symbolic: bool):
    return RationalFunctionN.constant(0) if symbolic else Fraction(0)


class ClassFunction:
    """A function on S_k constant on conjugacy classes, keyed by cycle type."""

    __slots__ = ("k", "values", "symbolic")

    def __init__(self, k: int, values: Mapping[CycleType, object], symbolic: bool | None = None):
        if symbolic is None:
            symbolic = any(isinstance(v, RationalFunctionN) for v in values.values())
        classes = partitions_of(k)
        unknown = set(values) - set(classes)
        if unknown:
            raise ValueError(f"not cycle types of {k}: {sorted(unknown)}")
        self.k = k
        self.symbolic = symbolic
        self.values: Dict[CycleType, object] = {
            mu: _coerce(values.get(mu, 0), symbolic) for mu in classes
        }

    @classmethod
    def from_function(cls, k: int, fn: Callable[[CycleType], object], symbolic: bool | None = None):
        return cls(k, {mu: fn(mu) for mu in partitions_of(k)}, symbolic)

    def __getitem__(self, key):
        if isinstance(key, Permutation):
            key = cycle_type(key)
        elif isinstance(key, str):
            key = parse_cycle_type(key)
        return self.values[tuple(key)]

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return self.k == other.k and self.symbolic == other.symbolic and self.values == other.values

    def __repr__(self):
        body = ", ".join(f"{format_cycle_type(mu)}: {to_exact_string(v)}" for mu, v in self.values.items())
        return f"ClassFunction(k={self.k}, {{{body}}})"

    def _check(self, other: "ClassFunction"):
        if self.k != other.k:
            raise ValueError(f"degree mismatch: S_{self.k} vs S_{other.k}")
        if self.symbolic != other.symbolic:
            raise DomainMismatch("cannot mix symbolic and rational class functions")

    def __add__(self, other):
        self._check(other)
        return ClassFunction(self.k, {mu: self.values[mu] + other.values[mu] for mu in self.values}, self.symbolic)

    def __sub__(self, other):
        self._check(other)
        return ClassFunction(self.k, {mu: self.values[mu] - other.values[mu] for mu in self.values}, self.symbolic)

    def scale(self, c):
        return ClassFunction(self.k, {mu: c * v for mu, v in self.values.items()}, self.symbolic)

    def __mul__(self, other):
        """``*`` is convolution."""
        if isinstance(other, ClassFunction):
            return convolve_class(self, other)
        return NotImplemented

    def map_values(self, fn, symbolic: bool | None = None):
        return ClassFunction(self.k, {mu: fn(v) for mu, v in self.values.items()}, symbolic)

    def evaluate_at(self, n0: int) -> "ClassFunction":
        """Substitute a concrete dimension into a symbolic class function."""
        from .numerics import evaluate_at

        if not self.symbolic:
            return self
        return ClassFunction(self.k, {mu: evaluate_at(v, n0) for mu, v in self.values.items()}, False)

    # -- serialization
    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "basis": "cycle-type",
            "values": {format_cycle_type(mu): to_exact_string(v) for mu, v in self.values.items()},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_json_dict(), **kw)

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "ClassFunction":
        if data.get("basis", "cycle-type") != "cycle-type":
            raise ValueError(f"unsupported basis {data.get('basis')!r}")
        k = int(data["k"])
        vals = {parse_cycle_type(key): parse_exact(v) for key, v in data["values"].items()}
        symbolic = any(isinstance(v, RationalFunctionN) for v in vals.values())
        return cls(k, vals, symbolic)

    @classmethod
    def from_json(cls, text: str) -> "ClassFunction":
        return cls.from_json_dict(json.loads(text))


def delta(k: int, symbolic: bool = False) -> ClassFunction:
    """Dirac function at the identity permutation."""
    return ClassFunction(k, {(1,) * k: 1}, symbolic)


def sign_function(k: int, symbolic: bool = False) -> ClassFunction:
    return ClassFunction.from_function(k, lambda mu: -1 if (k - len(mu)) % 2 else 1, symbolic)


def character_function(lam, symbolic: bool = False) -> ClassFunction:
    k = sum(lam)
    ps = partitions_of(k)
    row = character_table(k)[ps.index(tuple(lam))]
    return ClassFunction(k, dict(zip(ps, row)), symbolic)


# ------------------------------------------------------- character basis


def fourier_coefficients(f: ClassFunction) -> Dict[CycleType, object]:
    """Coefficients c_lam with f = sum_lam c_lam chi^lam."""
    k = f.k
    ps = partitions_of(k)
    table = character_table(k)
    kfact = math.factorial(k)
    sizes = [conjugacy_class_size(mu) for mu in ps]
    out = {}
    for lam, row in zip(ps, table):
        acc = _zero(f.symbolic)
        for size, chi, mu in zip(sizes, row, ps):
            if chi:
                acc = acc + f.values[mu] * (size * chi)
        out[lam] = acc * Fraction(1, kfact)
    return out


def from_fourier(k: int, coeffs: Mapping[CycleType, object], symbolic: bool) -> ClassFunction:
    ps = partitions_of(k)
    table = character_table(k)
    vals = {}
    for j, mu in enumerate(ps):
        acc = _zero(symbolic)
        for lam, row in zip(ps, table):
            c = coeffs.get(lam, 0)
            if row[j] and c:
                acc = acc + c * row[j]
        vals[mu] = acc
    return ClassFunction(k, vals, symbolic)


def convolve_class(f: ClassFunction, g: ClassFunction) -> ClassFunction:
    """Convolution of class functions through the character basis."""
    f._check(g)
    k = f.k
    kfact = math.factorial(k)
    cf, cg = fourier_coefficients(f), fourier_coefficients(g)
    coeffs = {lam: cf[lam] * cg[lam] * Fraction(kfact, dimension(lam)) for lam in cf}
    return from_fourier(k, coeffs, f.symbolic)


@lru_cache(maxsize=None)
def _structure_constants(k: int):
    """N[mu][(alpha, beta)] = #{sigma in C_alpha : sigma^-1 pi_mu in C_beta}."""
    if k > DENSE_BOUND:
        raise ValueError(f"k={k} exceeds the dense bound {DENSE_BOUND}; use the character basis")
    perms = list(itertools.permutations(range(k)))
    out = {}
    for mu in partitions_of(k):
        rep = class_representative(mu).images
        counts: Dict[Tuple[CycleType, CycleType], int] = {}
        for s in perms:
            inv = [0] * k
            for i, j in enumerate(s):
                inv[j] = i
            prod = tuple(inv[rep[i]] for i in range(k))
            key = (cycle_type(s), cycle_type(prod))
            counts[key] = counts.get(key, 0) + 1
        out[mu] = counts
    return out


def convolve_class_direct(f: ClassFunction, g: ClassFunction) -> ClassFunction:
    """Convolution by direct summation over S_k (oracle for the character route)."""
    f._check(g)
    consts = _structure_constants(f.k)
    vals = {}
    for mu, counts in consts.items():
        acc = _zero(f.symbolic)
        for (a, b), c in counts.items():
            acc = acc + f.values[a] * g.values[b] * c
        vals[mu] = acc
    return ClassFunction(f.k, vals, f.symbolic)


def invert_class(f: ClassFunction) -> ClassFunction:
    """Convolution inverse; raises :class:`NotInvertible` naming the offending lambda."""
    k = f.k
    kfact = math.factorial(k)
    coeffs = fourier_coefficients(f)
    inv = {}
    for lam, c in coeffs.items():
        if c == 0:
            raise NotInvertible(lam)
        d = Fraction(dimension(lam), kfact)
        inv[lam] = d * d / c
    return from_fourier(k, inv, f.symbolic)


def convolve_many(*fs: ClassFunction) -> ClassFunction:
    out = fs[0]
    for g in fs[1:]:
        out = convolve_class(out, g)
    return out


# ------------------------------------------------------- dense functions


class GroupFunction:
    """Dense function on S_k indexed by permutations in lexicographic order."""

    __slots__ = ("k", "values", "symbolic")

    def __init__(self, k: int, values: Sequence, symbolic: bool | None = None):
        if len(values) != math.factorial(k):
            raise ValueError(f"expected {math.factorial(k)} values for S_{k}, got {len(values)}")
        if symbolic is None:
            symbolic = any(isinstance(v, RationalFunctionN) for v in values)
        self.k = k
        self.symbolic = symbolic
        self.values = [_coerce(v, symbolic) for v in values]

    @classmethod
    def from_function(cls, k: int, fn: Callable[[Permutation], object], symbolic: bool | None = None):
        return cls(k, [fn(p) for p in all_permutations(k)], symbolic)

    def __getitem__(self, p: Permutation):
        return self.values[perm_index(p.images)]

    def __eq__(self, other):
        if not isinstance(other, GroupFunction):
            return NotImplemented
        return self.k == other.k and self.symbolic == other.symbolic and self.values == other.values

    def __repr__(self):
        return f"GroupFunction(k={self.k}, symbolic={self.symbolic})"


@lru_cache(maxsize=None)
def _perm_tables(k: int):
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    return perms, index


def perm_index(images: Tuple[int, ...]) -> int:
    return _perm_tables(len(images))[1][tuple(images)]


def convolve_dense(f: GroupFunction, g: GroupFunction, bound: int = DENSE_BOUND) -> GroupFunction:
    """(f*g)(pi) = sum_sigma f(sigma) g(sigma^-1 pi), by brute force."""
    if f.k != g.k:
        raise ValueError(f"degree mismatch: S_{f.k} vs S_{g.k}")
    if f.symbolic != g.symbolic:
        raise DomainMismatch("cannot mix symbolic and rational group functions")
    k = f.k
    if k > bound:
        raise ValueError(f"k={k} exceeds the dense bound {bound}; use convolve_class for class functions")
    perms, index = _perm_tables(k)
    out = [_zero(f.symbolic) for _ in perms]
    for s, fs in zip(perms, f.values):
        if fs == 0:
            continue
        # sigma^-1 pi = rho  <=>  pi = sigma rho
        for r, gr in zip(perms, g.values):
            if gr == 0:
                continue
            pi = tuple(s[r[i]] for i in range(k))
            j = index[pi]
            out[j] = out[j] + fs * gr
    return GroupFunction(k, out, f.symbolic)


def lift_to_dense(f: ClassFunction) -> GroupFunction:
    perms, _ = _perm_tables(f.k)
    return GroupFunction(f.k, [f.values[cycle_type(p)] for p in perms], f.symbolic)


def project_to_class(f: GroupFunction) -> ClassFunction:
    """Inverse of :func:`lift_to_dense`; raises if ``f`` is not constant on classes."""
    perms, _ = _perm_tables(f.k)
    seen: Dict[CycleType, Tuple[Tuple[int, ...], object]] = {}
    for p, v in zip(perms, f.values):
        mu = cycle_type(p)
        if mu in seen:
            q, w = seen[mu]
            if w != v:
                a = Permutation(q).cycle_str()
                b = Permutation(p).cycle_str()
                raise NotClassFunction(
                    f"not a class function: {a} and {b} share cycle type {format_cycle_type(mu)} "
                    f"but take values {to_exact_string(w)} and {to_exact_string(v)}"
                )
        else:
            seen[mu] = (p, v)
    return ClassFunction(f.k, {mu: v for mu, (_, v) in seen.items()}, f.symbolic)
