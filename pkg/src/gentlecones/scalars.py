"""Exact scalars ``q * zeta_N^e`` and the fields the oracle computes in.

A nonzero :class:`CycloScalar` is stored as a positive rational magnitude and
an angle ``e/N`` in ``[0, 1)`` (a fraction of a full turn), so the sign of a
negative rational is carried by ``zeta_2``.
"""
from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import sympy


class IrrationalRoot(ValueError):
    pass


class OrderMismatch(ValueError):
    pass


def _int_root(n: int, k: int) -> int | None:
    r = round(n ** (1.0 / k)) if n else 0
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    lo, hi = 0, n + 1
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == n else None


@dataclass(frozen=True)
class CycloScalar:
    magnitude: Fraction
    angle: Fraction = Fraction(0)

    def __post_init__(self):
        m = Fraction(self.magnitude)
        a = Fraction(self.angle) % 1
        if m < 0:
            m, a = -m, (a + Fraction(1, 2)) % 1
        if m == 0:
            a = Fraction(0)
        object.__setattr__(self, "magnitude", m)
        object.__setattr__(self, "angle", a)

    @classmethod
    def of(cls, q, order: int = 1, exponent: int = 0) -> "CycloScalar":
        return cls(Fraction(q), Fraction(exponent, order))

    @property
    def root_order(self) -> int:
        return self.angle.denominator

    @property
    def root_exponent(self) -> int:
        return self.angle.numerator

    @property
    def is_zero(self) -> bool:
        return self.magnitude == 0

    def __mul__(self, other: "CycloScalar") -> "CycloScalar":
        if not isinstance(other, CycloScalar):
            other = CycloScalar(Fraction(other))
        return CycloScalar(self.magnitude * other.magnitude, self.angle + other.angle)

    __rmul__ = __mul__

    def __neg__(self) -> "CycloScalar":
        return CycloScalar(self.magnitude, self.angle + Fraction(1, 2))

    def inverse(self) -> "CycloScalar":
        if self.is_zero:
            raise ZeroDivisionError("zero scalar")
        return CycloScalar(1 / self.magnitude, -self.angle)

    def __truediv__(self, other: "CycloScalar") -> "CycloScalar":
        return self * other.inverse()

    def __pow__(self, n: int) -> "CycloScalar":
        if n < 0:
            return self.inverse() ** (-n)
        return CycloScalar(self.magnitude**n, self.angle * n)

    def __str__(self) -> str:
        q = self.magnitude
        if self.angle == 0:
            return str(q)
        if self.angle == Fraction(1, 2):
            return f"-{q}"
        return f"{q}*z({self.root_order})^{self.root_exponent}"

    def to_json(self) -> str:
        return str(self)


ONE = CycloScalar(Fraction(1))


_SCALAR_RE = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?P<q>\d+(?:/\d+)?)?\s*(?:\*?\s*z\(\s*(?P<n>\d+)\s*\)\s*(?:\^\s*(?P<e>-?\d+))?)?\s*$"
)


def parse_scalar(text: str) -> CycloScalar:
    """Parse ``q``, ``-q``, ``q*z(N)^e`` (also ``-q*z(N)^e`` and bare ``z(N)``)."""
    m = _SCALAR_RE.match(str(text))
    if not m or (m.group("q") is None and m.group("n") is None):
        raise ValueError(f"bad scalar {text!r}")
    q = Fraction(m.group("q") or 1)
    if m.group("sign") == "-":
        q = -q
    if m.group("n"):
        n = int(m.group("n"))
        if n < 1:
            raise ValueError(f"bad root order in {text!r}")
        e = int(m.group("e") if m.group("e") is not None else 1)
        return CycloScalar(q, Fraction(e, n))
    return CycloScalar(q)


def primitive_unity_root(k: int) -> CycloScalar:
    if k < 1:
        raise ValueError("k must be positive")
    return CycloScalar(Fraction(1), Fraction(1, k))


def kth_root(s: CycloScalar, k: int) -> CycloScalar:
    """Canonical k-th root: rational root of the magnitude, angle divided by k."""
    if k < 1:
        raise ValueError("k must be positive")
    if s.is_zero:
        return s
    num = _int_root(s.magnitude.numerator, k)
    den = _int_root(s.magnitude.denominator, k)
    if num is None or den is None:
        raise IrrationalRoot(f"{s} has no rational {k}-th root magnitude")
    return CycloScalar(Fraction(num, den), s.angle / k)


@dataclass(frozen=True)
class SymbolicRoot:
    """``omega^i * root_of(base, k)`` when the magnitude has no rational root."""

    base: CycloScalar
    k: int
    twist: int = 0
    power: int = 1  # -1 for the inverse of the chosen root

    is_zero = False

    def inverse(self) -> "SymbolicRoot":
        return SymbolicRoot(self.base, self.k, -self.twist % self.k, -self.power)

    def __str__(self) -> str:
        s = f"root_of({self.base},{self.k})" + ("^-1" if self.power < 0 else "")
        return f"z({self.k})^{self.twist}*{s}" if self.twist % self.k else s

    def to_json(self) -> str:
        return str(self)


# ---------------------------------------------------------------- fields


class PrimeField:
    """F_p with a fixed primitive N-th root of unity."""

    kind = "prime"

    def __init__(self, p: int, order: int = 1):
        if (p - 1) % order:
            raise OrderMismatch(f"{order} does not divide {p}-1")
        self.p = p
        self.order = order
        g = sympy.primitive_root(p)
        self.generator = g
        self.zeta = pow(g, (p - 1) // order, p)
        self.zero, self.one = 0, 1

    def __repr__(self) -> str:
        return f"F_{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and (self.p, self.order) == (other.p, other.order)

    def __hash__(self):
        return hash((self.p, self.order))

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("zero in F_p")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def from_int(self, n: int):
        return n % self.p

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def embed(self, s: CycloScalar | SymbolicRoot | int | Fraction):
        if isinstance(s, SymbolicRoot):
            base = self.embed(s.base)
            root = self.kth_root(base, s.k)
            if root is None:
                raise IrrationalRoot(f"{s.base} has no {s.k}-th root in {self}")
            if s.power < 0:
                root = self.inv(root)
            return self.mul(root, self.embed(primitive_unity_root(s.k) ** s.twist))
        if not isinstance(s, CycloScalar):
            s = CycloScalar(Fraction(s))
        if s.is_zero:
            return 0
        n = s.root_order
        if self.order % n:
            raise OrderMismatch(f"root order {n} does not divide {self.order}")
        q = s.magnitude
        val = q.numerator % self.p * self.inv(q.denominator % self.p) % self.p
        return val * pow(self.zeta, (self.order // n) * s.root_exponent, self.p) % self.p

    def kth_root(self, a: int, k: int) -> int | None:
        a %= self.p
        if a == 0:
            return 0
        g = math.gcd(k, self.p - 1)
        if pow(a, (self.p - 1) // g, self.p) != 1:
            return None
        for x in sympy.nthroot_mod(a, k, self.p, all_roots=True):
            return int(x)
        return None

    def fmt(self, a) -> str:
        a %= self.p
        return str(a - self.p if a > self.p // 2 else a)


class CyclotomicField:
    """Q(zeta_N) as Q[x]/Phi_N, elements are tuples of Fractions."""

    kind = "cyclo"

    def __init__(self, order: int):
        self.order = max(1, order)
        x = sympy.Symbol("x")
        coeffs = sympy.Poly(sympy.cyclotomic_poly(self.order, x), x).all_coeffs()
        self.phi = [Fraction(int(c)) for c in reversed(coeffs)]  # low degree first, monic
        self.deg = len(self.phi) - 1
        self.zero = tuple([Fraction(0)] * self.deg)
        self.one = self._reduce([Fraction(1)])

    def __repr__(self) -> str:
        return f"Q(z{self.order})"

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and self.order == other.order

    def __hash__(self):
        return hash(("cyclo", self.order))

    def _reduce(self, poly) -> tuple:
        poly = list(poly)
        d = self.deg
        for i in range(len(poly) - 1, d - 1, -1):
            c = poly[i]
            if c:
                for j in range(d + 1):
                    poly[i - d + j] -= c * self.phi[j]
        poly = poly[:d] + [Fraction(0)] * max(0, d - len(poly))
        return tuple(poly[:d])

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        out = [Fraction(0)] * (2 * self.deg)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return self._reduce(out)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("zero in cyclotomic field")
        # solve a * y = 1 through the multiplication matrix
        d = self.deg
        cols = []
        basis = [tuple(Fraction(int(i == j)) for i in range(d)) for j in range(d)]
        for e in basis:
            cols.append(self.mul(a, e))
        m = [[cols[j][i] for j in range(d)] + [self.one[i]] for i in range(d)]
        for c in range(d):
            piv = next(r for r in range(c, d) if m[r][c] != 0)
            m[c], m[piv] = m[piv], m[c]
            pv = m[c][c]
            m[c] = [v / pv for v in m[c]]
            for r in range(d):
                if r != c and m[r][c]:
                    f = m[r][c]
                    m[r] = [v - f * w for v, w in zip(m[r], m[c])]
        return tuple(m[i][d] for i in range(d))

    def is_zero(self, a) -> bool:
        return not any(a)

    def from_int(self, n: int):
        return self._reduce([Fraction(n)])

    def random(self, rng: random.Random):
        return tuple(Fraction(rng.randint(-3, 3)) for _ in range(self.deg))

    def power_of_zeta(self, e: int):
        e %= self.order
        return self._reduce([Fraction(0)] * e + [Fraction(1)])

    def embed(self, s):
        if isinstance(s, SymbolicRoot):
            raise IrrationalRoot(f"{s} is not representable in {self}")
        if not isinstance(s, CycloScalar):
            s = CycloScalar(Fraction(s))
        if s.is_zero:
            return self.zero
        n = s.root_order
        if self.order % n:
            raise OrderMismatch(f"root order {n} does not divide {self.order}")
        z = self.power_of_zeta((self.order // n) * s.root_exponent)
        return tuple(s.magnitude * c for c in z)

    def fmt(self, a) -> str:
        terms = [f"{c}*z^{i}" if i else str(c) for i, c in enumerate(a) if c]
        return " + ".join(terms) or "0"


@dataclass(frozen=True)
class FieldCtx:
    """Where the oracle computes: ``cyclotomic(N)`` or ``prime(p)``."""

    mode: str
    order: int = 1
    p: int | None = None

    @classmethod
    def cyclotomic(cls, order: int) -> "FieldCtx":
        return cls("cyclotomic", order)

    @classmethod
    def prime(cls, p: int, order: int = 1) -> "FieldCtx":
        if (p - 1) % order:
            raise OrderMismatch(f"{order} does not divide {p}-1")
        return cls("prime", order, p)

    @classmethod
    def default_prime(cls, order: int = 1, lower: int = 10**6, symbolic=()) -> "FieldCtx":
        """Smallest prime above ``lower`` with ``order | p-1`` where every symbolic root exists."""
        p = lower
        while True:
            p = sympy.nextprime(p)
            if (p - 1) % order:
                continue
            ctx = cls("prime", order, p)
            if all(ctx.field.kth_root(ctx.field.embed(s.base), s.k) is not None for s in symbolic):
                return ctx

    @cached_property
    def field(self):
        if self.mode == "prime":
            return PrimeField(self.p, self.order)
        return CyclotomicField(self.order)

    def __str__(self) -> str:
        return f"F_{self.p}" if self.mode == "prime" else f"Q(z{self.order})"


def embed(s: CycloScalar, ctx: FieldCtx):
    return ctx.field.embed(s)


def required_order(scalars) -> int:
    n = 1
    for s in scalars:
        if isinstance(s, SymbolicRoot):
            n = math.lcm(n, s.base.root_order * s.k, s.k)
        elif isinstance(s, CycloScalar) and not s.is_zero:
            n = math.lcm(n, s.root_order)
    return n
