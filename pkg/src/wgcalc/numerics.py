"""Exact scalars: rationals, polynomials and rational functions in the dimension ``n``.

Rationals are plain :class:`fractions.Fraction`.  Polynomials and rational
functions are univariate in a formal symbol ``n`` with rational coefficients.
``RationalFunctionN`` is kept in a canonical form (coprime, monic denominator)
so that ``==`` is structural.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Union

__all__ = [
    "Fraction",
    "PolynomialN",
    "RationalFunctionN",
    "N",
    "rising_factorial",
    "falling_factorial",
    "ratfunc_normalize",
    "evaluate_at",
    "is_symbolic",
    "to_exact_string",
    "parse_exact",
]

Scalar = Union[Fraction, "RationalFunctionN"]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class PolynomialN:
    """Polynomial in ``n`` with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c) -> "PolynomialN":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c=1) -> "PolynomialN":
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, PolynomialN):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == PolynomialN([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("PolynomialN", self.coeffs))

    def __repr__(self):
        return f"PolynomialN({self})"

    def __str__(self):
        return _poly_str(self)

    def __neg__(self):
        return PolynomialN(-c for c in self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return PolynomialN(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return PolynomialN()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PolynomialN(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = PolynomialN([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, other: "PolynomialN"):
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        dq = other.degree
        q = [Fraction(0)] * max(len(rem) - dq, 0)
        inv_lead = 1 / other.lead
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] * inv_lead
            if c == 0:
                continue
            q[i - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] -= c * b
        return PolynomialN(q), PolynomialN(rem[:dq])

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        if isinstance(acc, int):
            return Fraction(acc)
        return acc

    def monic(self) -> "PolynomialN":
        if self.is_zero():
            return self
        inv = 1 / self.lead
        return PolynomialN(c * inv for c in self.coeffs)

    def shift(self, a) -> "PolynomialN":
        """Return p(n + a)."""
        return self(PolynomialN([a, 1])) if not self.is_zero() else self

    def scale_arg(self, a) -> "PolynomialN":
        """Return p(a * n)."""
        a = _frac(a)
        return PolynomialN(c * a**i for i, c in enumerate(self.coeffs))


def _as_poly(x):
    if isinstance(x, PolynomialN):
        return x
    if isinstance(x, (int, Fraction)):
        return PolynomialN([x])
    return None


def poly_gcd(a: PolynomialN, b: PolynomialN) -> PolynomialN:
    """Monic gcd over the rationals (Euclid)."""
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r.monic()
    return a.monic()


N = PolynomialN([0, 1])


class RationalFunctionN:
    """Reduced ratio of polynomials in ``n`` with monic denominator.

    Construct through :func:`ratfunc_normalize` or the arithmetic operators.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized: bool = False):
        num = _as_poly(num)
        den = PolynomialN([1]) if den is None else _as_poly(den)
        if num is None or den is None:
            raise TypeError("numerator and denominator must be polynomials or rationals")
        if _normalized:
            self.num, self.den = num, den
            return
        if den.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if num.is_zero():
            self.num, self.den = PolynomialN(), PolynomialN([1])
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, _ = num.divmod(g)
            den, _ = den.divmod(g)
        lead = den.lead
        self.num = PolynomialN(c / lead for c in num.coeffs)
        self.den = PolynomialN(c / lead for c in den.coeffs)

    @classmethod
    def constant(cls, c) -> "RationalFunctionN":
        return cls(PolynomialN([c]), _normalized=True) if c != 0 else cls(PolynomialN())

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def __eq__(self, other):
        if isinstance(other, RationalFunctionN):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.den.degree == 0 and self.num == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunctionN({self})"

    def __str__(self):
        return ratfunc_str(self)

    def __neg__(self):
        return RationalFunctionN(-self.num, self.den, _normalized=True)

    def __add__(self, other):
        other = _as_rf(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RationalFunctionN(self.num + other.num, self.den)
        return RationalFunctionN(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_rf(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_rf(other)
        if other is None:
            return NotImplemented
        return RationalFunctionN(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunctionN":
        if self.num.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        return RationalFunctionN(self.den, self.num)

    def __truediv__(self, other):
        other = _as_rf(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _as_rf(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RationalFunctionN(self.num**e, self.den**e)

    def __bool__(self):
        return not self.num.is_zero()

    def __call__(self, x):
        return evaluate_at(self, x)

    def shift(self, a) -> "RationalFunctionN":
        """Return f(n + a)."""
        return RationalFunctionN(self.num.shift(a), self.den.shift(a))

    def negate_arg(self) -> "RationalFunctionN":
        """Return f(-n)."""
        return RationalFunctionN(self.num.scale_arg(-1), self.den.scale_arg(-1))


def _as_rf(x):
    if isinstance(x, RationalFunctionN):
        return x
    if isinstance(x, PolynomialN):
        return RationalFunctionN(x, _normalized=True)
    if isinstance(x, (int, Fraction)):
        return RationalFunctionN.constant(x)
    return None


def is_symbolic(x) -> bool:
    return isinstance(x, (RationalFunctionN, PolynomialN))


def ratfunc_normalize(num, den) -> RationalFunctionN:
    return RationalFunctionN(num, den)


def evaluate_at(f, n0) -> Fraction:
    """Exact value of ``f`` at the integer (or rational) point ``n0``."""
    if isinstance(f, (int, Fraction)):
        return Fraction(f)
    if isinstance(f, PolynomialN):
        return f(_frac(n0))
    d = f.den(_frac(n0))
    if d == 0:
        raise ZeroDivisionError(f"pole at n={n0}: denominator {ratfunc_str_poly(f.den, factored=True)} vanishes")
    return f.num(_frac(n0)) / d


def rising_factorial(a, k: int):
    """a(a+1)...(a+k-1); the empty product is 1.

    Works for ints, Fractions, polynomials and rational functions.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if isinstance(a, int):
        a = Fraction(a)
    out = PolynomialN([1]) if isinstance(a, PolynomialN) else (
        RationalFunctionN.constant(1) if isinstance(a, RationalFunctionN) else Fraction(1))
    for j in range(k):
        out = out * (a + j)
    return out


def falling_factorial(a, k: int):
    """a(a-1)...(a-k+1); the empty product is 1."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if isinstance(a, int):
        a = Fraction(a)
    out = PolynomialN([1]) if isinstance(a, PolynomialN) else (
        RationalFunctionN.constant(1) if isinstance(a, RationalFunctionN) else Fraction(1))
    for j in range(k):
        out = out * (a - j)
    return out


# ---------------------------------------------------------------- rendering


def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _poly_str(p: PolynomialN) -> str:
    if p.is_zero():
        return "0"
    terms = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = _fmt_frac(a)
        else:
            mono = "n" if i == 1 else f"n^{i}"
            body = mono if a == 1 else f"{_fmt_frac(a)}*{mono}"
        terms.append((sign, body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def _integer_roots(p: PolynomialN):
    """Split ``p`` as c * prod (n - r)^m over integer roots r, plus a cofactor."""
    roots = []
    q = p
    if q.degree <= 0:
        return roots, q
    # Integer roots divide the constant term of the primitive integer form.
    lcm = 1
    for c in q.coeffs:
        lcm = lcm * c.denominator // _gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in q.coeffs]
    while ints and ints[0] == 0:
        roots.append(0)
        ints = ints[1:]
        q, _ = q.divmod(N)
    if len(ints) > 1:
        c0 = abs(ints[0])
        cands = set()
        d = 1
        while d * d <= c0:
            if c0 % d == 0:
                cands.update({d, -d, c0 // d, -(c0 // d)})
            d += 1
        for r in sorted(cands, key=lambda v: (abs(v), v)):
            lin = PolynomialN([-r, 1])
            while q.degree > 0:
                quo, rem = q.divmod(lin)
                if not rem.is_zero():
                    break
                roots.append(r)
                q = quo
    return roots, q


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _linear_str(r: int) -> str:
    if r == 0:
        return "n"
    return f"(n - {r})" if r > 0 else f"(n + {-r})"


def ratfunc_str_poly(p: PolynomialN, factored: bool = True) -> str:
    """Render a polynomial, factoring out integer-root linear factors."""
    if not factored or p.degree <= 0:
        return _poly_str(p)
    roots, rest = _integer_roots(p)
    if not roots:
        return _poly_str(p)
    parts = []
    for r in sorted(set(roots), key=lambda v: -v):
        m = roots.count(r)
        f = _linear_str(r).replace(" ", "")
        parts.append(f if m == 1 else f"{f}^{m}")
    if rest.degree > 0:
        parts.insert(0, "(" + _poly_str(rest).replace(" ", "") + ")")
        return "*".join(parts)
    c = rest.lead
    if c == 1:
        return "*".join(parts)
    if c == -1:
        return "-" + "*".join(parts)
    return _fmt_frac(c) + "*" + "*".join(parts)


def ratfunc_str(f: RationalFunctionN) -> str:
    """Exact text such as ``-1/((n-1)*n*(n+1))``."""
    num, den = f.num, f.den
    ns = _fmt_frac(num.lead) if num.degree <= 0 else ratfunc_str_poly(num).replace(" ", "")
    if den.degree == 0:
        return ns
    if _top_level_ops(ns, "+-"):
        ns = f"({ns})"
    ds = ratfunc_str_poly(den).replace(" ", "")
    if _top_level_ops(ds, "+-*"):
        ds = f"({ds})"
    return f"{ns}/{ds}"


def _top_level_ops(s: str, ops: str) -> bool:
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and i > 0 and ch in ops:
            return True
    return False


def to_exact_string(x) -> str:
    if isinstance(x, RationalFunctionN):
        return ratfunc_str(x)
    if isinstance(x, PolynomialN):
        return ratfunc_str(RationalFunctionN(x, _normalized=True))
    return _fmt_frac(_frac(x))


def parse_exact(text: str):
    """Parse an exact string produced by :func:`to_exact_string`.

    Plain rationals become Fractions; anything mentioning ``n`` is parsed as a
    rational function with a small recursive-descent parser.
    """
    text = text.strip()
    if "n" not in text:
        return Fraction(text.replace(" ", ""))
    return _ExprParser(text).parse()


class _ExprParser:
    # grammar: expr := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*;
    # factor := '-' factor | atom ('^' int)?; atom := int | 'n' | '(' expr ')'
    def __init__(self, text: str):
        self.s = text.replace(" ", "")
        self.i = 0

    def parse(self) -> RationalFunctionN:
        v = self.expr()
        if self.i != len(self.s):
            raise ValueError(f"unexpected trailing input at {self.i} in {self.s!r}")
        return _as_rf(v)

    def peek(self):
        return self.s[self.i] if self.i < len(self.s) else ""

    def expr(self):
        v = self.term()
        while self.peek() in ("+", "-"):
            op = self.s[self.i]
            self.i += 1
            t = self.term()
            v = v + t if op == "+" else v - t
        return v

    def term(self):
        v = self.factor()
        while self.peek() in ("*", "/"):
            op = self.s[self.i]
            self.i += 1
            f = self.factor()
            v = _as_rf(v) * f if op == "*" else _as_rf(v) / _as_rf(f)
        return v

    def factor(self):
        if self.peek() == "-":
            self.i += 1
            return -_as_rf(self.factor())
        v = self.atom()
        if self.peek() == "^":
            self.i += 1
            v = _as_rf(v) ** self.integer()
        return v

    def integer(self) -> int:
        start = self.i
        while self.peek().isdigit():
            self.i += 1
        if start == self.i:
            raise ValueError(f"expected integer at {start} in {self.s!r}")
        return int(self.s[start:self.i])

    def atom(self):
        ch = self.peek()
        if ch == "n":
            self.i += 1
            return _as_rf(N)
        if ch == "(":
            self.i += 1
            v = self.expr()
            if self.peek() != ")":
                raise ValueError(f"missing ')' in {self.s!r}")
            self.i += 1
            return v
        if ch.isdigit():
            return _as_rf(self.integer())
        raise ValueError(f"unexpected {ch!r} at {self.i} in {self.s!r}")
