"""Weingarten, ascension and descension functions on S_k.

The dimension argument ``n`` is either a concrete integer or the string
``"n"`` (``SYMBOLIC``), in which case values are rational functions of n.
Several functions also accept an arbitrary rational ``z`` in place of ``n``;
this is the formal extension used for the inversion identities.
"""

from __future__ import annotations

import enum
import math
from functools import lru_cache
from math import comb
from typing import List

from .combinatorics import (
    CycleType,
    Permutation,
    all_permutations,
    content_product,
    dimension,
    partitions_of,
)
from .group_algebra import (
    DENSE_BOUND,
    ClassFunction,
    GroupFunction,
    _structure_constants,
    convolve_class,
    from_fourier,
    project_to_class,
)
from .numerics import (
    N,
    Fraction,
    PolynomialN,
    RationalFunctionN,
    falling_factorial,
    rising_factorial,
)

SYMBOLIC = "n"


class WgRoute(str, enum.Enum):
    CHARACTER = "char"
    GRAM = "gram"
    RECURSIVE = "recursive"
    LADDER = "ladder"


class DimensionError(ValueError):
    """Degree/dimension combination outside an operation's domain."""


def is_symbolic_dim(n) -> bool:
    return isinstance(n, str) and n == SYMBOLIC


def dim_value(n):
    """The scalar playing the role of n: RationalFunctionN(n) or a Fraction."""
    if is_symbolic_dim(n):
        return RationalFunctionN(N)
    if isinstance(n, str):
        raise ValueError(f"unknown dimension {n!r}; use an integer or 'n'")
    return Fraction(n)


def _fixed_points(mu: CycleType) -> int:
    return sum(1 for p in mu if p == 1)


def _sign(mu: CycleType) -> int:
    return -1 if (sum(mu) - len(mu)) % 2 else 1


# --------------------------------------------------------------- G and Wg


def gram_function(k: int, n) -> ClassFunction:
    """pi -> n^(number of cycles of pi)."""
    if k < 1:
        raise ValueError("k must be positive")
    z = dim_value(n)
    return ClassFunction.from_function(k, lambda mu: z ** len(mu), is_symbolic_dim(n))


def _require_k_le_n(k: int, n, what: str = "Wg"):
    if not is_symbolic_dim(n) and k > n:
        raise DimensionError(
            f"{what}_{{{k},{n}}} needs k <= n (got k={k} > n={n}); "
            "use pseudo_weingarten (CLI: pseudo-wg) for k > n"
        )


def _character_sum(k: int, n, restrict_length: int | None = None) -> ClassFunction:
    z = N if is_symbolic_dim(n) else Fraction(n)
    symbolic = is_symbolic_dim(n)
    kfact = math.factorial(k)
    coeffs = {}
    for lam in partitions_of(k):
        if restrict_length is not None and len(lam) > restrict_length:
            continue
        cp = content_product(lam, z)
        if cp == 0:
            raise DimensionError(f"content product (n|lambda) vanishes at lambda={lam}, n={n}")
        c = Fraction(dimension(lam), kfact)
        coeffs[lam] = RationalFunctionN(PolynomialN([c]), cp) if symbolic else c / cp
    return from_fourier(k, coeffs, symbolic)


def weingarten(k: int, n, route: WgRoute | str = WgRoute.CHARACTER, base: str = "ladder") -> ClassFunction:
    """Wg_{k,n}.  All routes return identical class functions.

    ``base`` selects how the recursive route obtains Wg_{k,k}: ``"ladder"``
    (the a-kernel recursion) or ``"char"`` (character expansion).
    """
    route = WgRoute(route)
    if k < 1:
        raise ValueError("k must be positive")
    _require_k_le_n(k, n)
    if route is WgRoute.CHARACTER:
        return _character_sum(k, n)
    if route is WgRoute.GRAM:
        return weingarten_gram_inverse(k, n)
    if route is WgRoute.LADDER:
        if is_symbolic_dim(n):
            raise DimensionError("the ladder route is dimension-specific; give a concrete n")
        return weingarten_by_ladder(k, n)
    return weingarten_recursive(k, n, base=base)


def weingarten_gram_inverse(k: int, n) -> ClassFunction:
    """Solve G_{k,n} * W = delta as a linear system on class functions.

    The system matrix is assembled by summing over S_k directly, so this
    route shares no character theory with the expansion route.
    """
    if k > DENSE_BOUND:
        raise DimensionError(f"GramInverse route limited to k <= {DENSE_BOUND}")
    _require_k_le_n(k, n)
    G = gram_function(k, n)
    ps = partitions_of(k)
    consts = _structure_constants(k)
    idx = {mu: i for i, mu in enumerate(ps)}
    zero = G.values[ps[0]] * 0
    M = [[zero for _ in ps] for _ in ps]
    for mu, counts in consts.items():
        row = M[idx[mu]]
        for (a, b), c in counts.items():
            row[idx[b]] = row[idx[b]] + G.values[a] * c
    rhs = [zero + (1 if mu == (1,) * k else 0) for mu in ps]
    sol = solve_linear(M, rhs)
    return ClassFunction(k, dict(zip(ps, sol)), G.symbolic)


def solve_linear(M: List[list], b: list) -> list:
    """Exact Gaussian elimination over Fractions or rational functions."""
    n = len(M)
    A = [list(row) + [rhs] for row, rhs in zip(M, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular system")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


def pseudo_weingarten(k: int, n: int) -> ClassFunction:
    """Canonical W_{k,n}: character sum restricted to lambda with at most n rows."""
    if k < 1 or (not is_symbolic_dim(n) and n < 1):
        raise ValueError("k and n must be positive")
    if is_symbolic_dim(n):
        return _character_sum(k, n)
    return _character_sum(k, n, restrict_length=n)


# ------------------------------------------------------------ ascension


def _raise_value(k: int, fix: int, z):
    total = z * 0
    for t in range(fix + 1):
        rf = rising_factorial(z, k - t)
        if rf == 0:
            raise ZeroDivisionError(f"rising factorial {z}^(up {k - t}) vanishes")
        total = total + Fraction((-1) ** (k - t) * comb(fix, t)) / rf
    return total


def ascension(k: int, n) -> ClassFunction:
    """Raise_{k,n}(sigma) = sum_t (-1)^(k-t) C(fix, t) / n^(up k-t)."""
    if k < 1:
        raise ValueError("k must be positive")
    z = dim_value(n)
    return ClassFunction.from_function(k, lambda mu: _raise_value(k, _fixed_points(mu), z), is_symbolic_dim(n))


def descension(k: int, n) -> ClassFunction:
    """Lower_{k,n}(sigma) = sgn(sigma) sum_t C(fix, t) / n^(down k-t); needs k <= n."""
    if k < 1:
        raise ValueError("k must be positive")
    if not is_symbolic_dim(n) and k > n:
        raise DimensionError(f"Lower_{{{k},{n}}} needs k <= n: the falling factorial vanishes otherwise")
    z = dim_value(n)

    def value(mu):
        fix = _fixed_points(mu)
        total = z * 0
        for t in range(fix + 1):
            total = total + Fraction(comb(fix, t)) / falling_factorial(z, k - t)
        return total * _sign(mu)

    return ClassFunction.from_function(k, value, is_symbolic_dim(n))


def ascension_via_sphere(k: int, n: int, sigma: Permutation) -> Fraction:
    """Raise_{k,n}(sigma) as E[prod_i (delta_{i,sigma(i)} - x_i conj(x_sigma(i)))].

    The product is expanded over subsets of the fixed points and each
    monomial is integrated with the sphere-moment formula.
    """
    from .moments import sphere_moment

    if sigma.k != k:
        raise ValueError("sigma must lie in S_k")
    if k > n:
        raise DimensionError(f"needs k <= n (got k={k}, n={n})")
    fixed = [i for i in range(k) if sigma.images[i] == i]
    moving = [i for i in range(k) if sigma.images[i] != i]
    total = Fraction(0)
    for mask in range(1 << len(fixed)):
        chosen = [fixed[b] for b in range(len(fixed)) if mask >> b & 1]
        # positions taking the -x_i conj(x_sigma(i)) term
        picked = moving + chosen
        m = [0] * n
        l = [0] * n
        for i in picked:
            m[i] += 1
            l[sigma.images[i]] += 1
        total += (-1) ** len(picked) * sphere_moment(m, l, n)
    return total


def ascension_kernel_a(pi: Permutation, tau: Permutation) -> Fraction:
    """a_n(pi, tau) for pi in S_n, tau in S_{n-1}."""
    n = pi.k
    if tau.k != n - 1 or n < 2:
        raise ValueError(f"need pi in S_n and tau in S_(n-1), got degrees {pi.k} and {tau.k}")
    fix = sum(1 for i in range(n - 1) if pi.images[tau.images[i]] == i)
    return _a_value(n, fix)


@lru_cache(maxsize=None)
def _a_value(n: int, fix: int) -> Fraction:
    total = Fraction(0)
    for t in range(fix + 1):
        total += Fraction((-1) ** (n - t + 1) * comb(fix, t)) / rising_factorial(n, n - t)
    return total


def weingarten_diagonal_ladder(m: int) -> GroupFunction:
    """Wg_{m,m} as a dense function, built from Wg_{1,1} by the a-kernel."""
    w = GroupFunction(1, [Fraction(1)])
    for d in range(2, m + 1):
        prev = list(zip(all_permutations(d - 1), w.values))
        vals = []
        for pi in all_permutations(d):
            acc = Fraction(0)
            for tau, wt in prev:
                if wt:
                    fix = sum(1 for i in range(d - 1) if pi.images[tau.images[i]] == i)
                    acc += _a_value(d, fix) * wt
            vals.append(acc)
        w = GroupFunction(d, vals, False)
    return w


def weingarten_by_ladder(k: int, n: int) -> ClassFunction:
    """Wg_{k,n}: a-kernel ladder up to Wg_{k,k}, then ascension convolutions to n."""
    if not isinstance(n, int) or k < 1 or k > n:
        raise DimensionError(f"ladder needs integers 1 <= k <= n (got k={k}, n={n})")
    w = project_to_class(weingarten_diagonal_ladder(k))
    for m in range(k + 1, n + 1):
        w = convolve_class(ascension(k, m), w)
    return w


def weingarten_recursive(k: int, n, base: str = "ladder") -> ClassFunction:
    """Recursive-ascension route: Wg_{k,n} = Raise_{k,n} * ... * Raise_{k,k+1} * Wg_{k,k}.

    With a symbolic ``n`` a single step is taken: Raise_{k,n} * Wg_{k,n-1},
    the lower function being the character expansion shifted to n-1.
    """
    if is_symbolic_dim(n):
        lower = _character_sum(k, n).map_values(lambda v: v.shift(-1), True)
        return convolve_class(ascension(k, n), lower)
    _require_k_le_n(k, n)
    if base == "ladder":
        w = project_to_class(weingarten_diagonal_ladder(k))
    elif base == "char":
        w = _character_sum(k, k)
    else:
        raise ValueError(f"unknown base {base!r}; expected 'ladder' or 'char'")
    for m in range(k + 1, n + 1):
        w = convolve_class(ascension(k, m), w)
    return w


def shift_dimension(f: ClassFunction, a: int) -> ClassFunction:
    """Substitute n -> n + a in a symbolic class function."""
    if not f.symbolic:
        raise ValueError("shift_dimension needs a symbolic class function")
    return f.map_values(lambda v: v.shift(a), True)
