"""Maximal imaginary quadratic orders: exact element, ideal and class
group arithmetic.

The order R = Z[w] of Q(sqrt(D)) is described by the trace t and norm n
of w (w^2 - t*w + n = 0).  Elements a + b*w keep exact Fraction
coordinates; fractional ideals are stored as a denominator plus the
column HNF (a, b, c) of the integer module Z*a + Z*(b + c*w), which is
canonical, so ideal equality is tuple equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, lcm

from .linalg import hnf, short_vectors_gram, solve_left_int


def is_fundamental_discriminant(d: int) -> bool:
    if d >= 0:
        return False
    if d % 4 == 1:
        return _squarefree(-d)
    if d % 4 == 0:
        q = d // 4
        return q % 4 != 1 and _squarefree(-q)
    return False


def _squarefree(n: int) -> bool:
    assert n > 0
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class Order:
    """The maximal order Z[w] of an imaginary quadratic field."""

    disc: int
    omega_trace: int
    omega_norm: int

    def __post_init__(self):
        t, n = self.omega_trace, self.omega_norm
        assert t * t - 4 * n == self.disc

    @property
    def t(self) -> int:
        return self.omega_trace

    @property
    def n(self) -> int:
        return self.omega_norm

    def k(self, a, b=0) -> "KNumber":
        return KNumber(self, Fraction(a), Fraction(b))

    @property
    def one(self) -> "KNumber":
        return self.k(1)

    @property
    def omega(self) -> "KNumber":
        return self.k(0, 1)

    def units(self) -> tuple["KNumber", ...]:
        """The unit group of R (order 6, 4 or 2)."""
        one, w = self.one, self.omega
        if self.disc == -4:
            return (one, w, -one, -w)
        if self.disc == -3:
            w2 = w * w
            return (one, w, w2, -one, -w, -w2)
        return (one, -one)

    def __repr__(self):
        return f"Order(disc={self.disc})"


def make_order(disc: int) -> Order:
    """Maximal order of Q(sqrt(disc)) for a fundamental discriminant."""
    if disc >= 0:
        raise ValueError(f"discriminant must be negative, got {disc}")
    if disc % 4 not in (0, 1):
        raise ValueError(f"discriminant must be 0 or 1 mod 4, got {disc}")
    if not is_fundamental_discriminant(disc):
        raise ValueError(f"discriminant {disc} is not fundamental")
    if disc % 4 == 0:
        return Order(disc, 0, -disc // 4)
    return Order(disc, 1, (1 - disc) // 4)


@dataclass(frozen=True)
class KNumber:
    """Element a + b*w of K = Q(sqrt(D)), exact rational coordinates."""

    order: Order
    a: Fraction
    b: Fraction

    def __post_init__(self):
        assert isinstance(self.a, Fraction) and isinstance(self.b, Fraction)

    def __bool__(self):
        return bool(self.a or self.b)

    def __add__(self, other):
        other = self._coerce(other)
        return KNumber(self.order, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return KNumber(self.order, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        t, n = self.order.t, self.order.n
        a, b, c, d = self.a, self.b, other.a, other.b
        # (a + bw)(c + dw) with w^2 = t*w - n
        return KNumber(self.order, a * c - n * b * d, a * d + b * c + t * b * d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        nrm = other.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero in K")
        num = self * other.conj()
        return KNumber(self.order, num.a / nrm, num.b / nrm)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def _coerce(self, other) -> "KNumber":
        if isinstance(other, KNumber):
            assert other.order == self.order
            return other
        return KNumber(self.order, Fraction(other), Fraction(0))

    def conj(self) -> "KNumber":
        return KNumber(self.order, self.a + self.b * self.order.t, -self.b)

    def norm(self) -> Fraction:
        t, n = self.order.t, self.order.n
        return self.a * self.a + t * self.a * self.b + n * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a + self.order.t * self.b

    def is_rational(self) -> bool:
        return self.b == 0

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def __repr__(self):
        return f"({self.a}+{self.b}w)"


@dataclass(frozen=True)
class FracIdeal:
    """Nonzero fractional ideal (1/den) * (Z*a + Z*(b + c*w)), in HNF.

    Invariants: c | a, c | b, 0 <= b < a, gcd(a, b, c, den) = 1, and the
    module is w-stable, equivalently a*c | N(b + c*w).
    """

    order: Order
    den: int
    a: int
    b: int
    c: int

    def __post_init__(self):
        o, d, a, b, c = self.order, self.den, self.a, self.b, self.c
        assert d > 0 and a > 0 and c > 0 and 0 <= b < a
        assert a % c == 0 and b % c == 0
        assert gcd(gcd(a, b), gcd(c, d)) == 1
        t, n = o.t, o.n
        assert (b * b + t * b * c + n * c * c) % (a * c) == 0, "module not w-stable"

    @classmethod
    def _normalized(cls, order, den, a, b, c) -> "FracIdeal":
        assert a > 0 and c > 0 and den != 0
        if den < 0:
            den = -den
        b %= a
        g = gcd(gcd(a, b), gcd(c, den))
        return cls(order, den // g, a // g, b // g, c // g)

    @classmethod
    def from_k_generators(cls, order, gens) -> "FracIdeal":
        """HNF of the Z-module spanned by KNumbers (must be w-stable)."""
        gens = [g for g in gens if g]
        assert gens, "zero module is not a fractional ideal"
        den = 1
        for g in gens:
            den = lcm(den, lcm(g.a.denominator, g.b.denominator))
        # w-coefficient first, so the HNF comes out as (c, b), (0, a)
        rows = [[int(g.b * den), int(g.a * den)] for g in gens]
        h = hnf(rows)
        assert len(h) == 2, "module has rank < 2, not a fractional ideal"
        assert h[1][0] == 0
        return cls._normalized(order, den, h[1][1], h[0][1], h[0][0])

    @classmethod
    def principal(cls, x: KNumber) -> "FracIdeal":
        if not x:
            raise ValueError("zero element generates the zero module")
        return cls.from_k_generators(x.order, [x, x * x.order.omega])

    @classmethod
    def unit_ideal(cls, order) -> "FracIdeal":
        return cls(order, 1, 1, 0, 1)

    def generators(self) -> tuple[KNumber, KNumber]:
        o = self.order
        return (KNumber(o, Fraction(self.a, self.den), Fraction(0)),
                KNumber(o, Fraction(self.b, self.den), Fraction(self.c, self.den)))

    def norm(self) -> Fraction:
        return Fraction(self.a * self.c, self.den * self.den)

    def is_integral(self) -> bool:
        return self.den == 1

    def contains(self, x: KNumber) -> bool:
        u = x.a * self.den
        v = x.b * self.den
        if u.denominator != 1 or v.denominator != 1:
            return False
        u, v = int(u), int(v)
        if v % self.c:
            return False
        return (u - (v // self.c) * self.b) % self.a == 0

    def conj(self) -> "FracIdeal":
        o = self.order
        return FracIdeal._normalized(
            o, self.den, self.a, (-self.b - self.c * o.t) % self.a, self.c)

    def inverse(self) -> "FracIdeal":
        # conj(I) / N(I)
        nrm = self.norm()
        cj = self.conj()
        return cj.scale_rational(1 / nrm)

    def scale_rational(self, q: Fraction) -> "FracIdeal":
        q = Fraction(q)
        assert q > 0
        num, den = q.numerator, q.denominator
        return FracIdeal._normalized(
            self.order, self.den * den, self.a * num, self.b * num, self.c * num)

    def scale(self, x: KNumber) -> "FracIdeal":
        g1, g2 = self.generators()
        return FracIdeal.from_k_generators(self.order, [x * g1, x * g2])

    def __mul__(self, other):
        if isinstance(other, KNumber):
            return self.scale(other)
        assert isinstance(other, FracIdeal) and other.order == self.order
        g1, g2 = self.generators()
        h1, h2 = other.generators()
        return FracIdeal.from_k_generators(
            self.order, [g1 * h1, g1 * h2, g2 * h1, g2 * h2])

    def __add__(self, other) -> "FracIdeal":
        assert isinstance(other, FracIdeal) and other.order == self.order
        return FracIdeal.from_k_generators(
            self.order, [*self.generators(), *other.generators()])

    def norm_form_gram(self):
        """2x2 rational Gram of x -> N(x) on the basis (a, b+cw)/den."""
        g1, g2 = self.generators()
        m01 = (g1 * g2.conj()).trace() / 2
        return [[g1.norm(), m01], [m01, g2.norm()]]

    def elements_of_norm_at_most(self, bound):
        """Nonzero elements with N <= bound, one per +-pair, sorted by norm."""
        g1, g2 = self.generators()
        out = []
        for v, nrm in short_vectors_gram(self.norm_form_gram(), bound):
            out.append((nrm, v[0] * g1 + v[1] * g2))
        out.sort(key=lambda p: (p[0], p[1].a, p[1].b))
        return [x for _, x in out]

    def __str__(self):
        return f"[{self.den} | {self.a}, {self.b}, {self.c}]"


# --- spec-facing operation names -------------------------------------------

def ideal_mul(x: FracIdeal, y: FracIdeal) -> FracIdeal:
    return x * y


def ideal_inv(x: FracIdeal) -> FracIdeal:
    return x.inverse()


def ideal_conj(x: FracIdeal) -> FracIdeal:
    return x.conj()


def ideal_norm(x: FracIdeal) -> Fraction:
    return x.norm()


def _gauss_shortest(g1: KNumber, g2: KNumber) -> KNumber:
    """Shortest nonzero vector of Z*g1 + Z*g2 under N (Lagrange-Gauss)."""
    u, v = g1, g2
    if u.norm() > v.norm():
        u, v = v, u
    while True:
        # nearest integer to Tr(v * conj(u)) / (2 N(u))
        m = ((v * u.conj()).trace() / (2 * u.norm()) + Fraction(1, 2)).__floor__()
        if m:
            v = v - m * u
        if v.norm() >= u.norm():
            return u
        u, v = v, u


def canonical_associate(x: KNumber) -> KNumber:
    """Deterministic representative of x among its unit multiples.

    Prefers small |b|, then b >= 0, then a >= 0 (so 5, not -5, and
    1 + w rather than -1 - w).
    """
    cands = [x * u for u in x.order.units()]
    return min(cands, key=lambda z: (abs(z.b), z.b < 0, z.a < 0, z.a, z.b))


def is_principal(x: FracIdeal) -> KNumber | None:
    """A generator of x if x is principal, else None.

    Scales x to a primitive integral ideal and compares its shortest
    vector's norm with the ideal norm; equality certifies principality.
    """
    # x = (c/den) * P with P = (a/c, b/c, 1) primitive integral
    o = x.order
    a1, b1 = x.a // x.c, x.b // x.c
    g1 = KNumber(o, Fraction(a1), Fraction(0))
    g2 = KNumber(o, Fraction(b1), Fraction(1))
    mu = _gauss_shortest(g1, g2)
    if mu.norm() != a1:
        return None
    gen = mu * Fraction(x.c, x.den)
    gen = canonical_associate(gen)
    assert FracIdeal.principal(gen) == x
    return gen


@dataclass(frozen=True)
class IdealClassGroup:
    """Cl(R): reduced representatives, group law table, generators."""

    order: Order
    classes: tuple[FracIdeal, ...]
    table: tuple[tuple[int, ...], ...]
    generators: tuple[int, ...]
    exponent: int

    @property
    def class_number(self) -> int:
        return len(self.classes)

    def class_of(self, x: FracIdeal) -> int:
        for i, rep in enumerate(self.classes):
            if is_principal(x * rep.inverse()) is not None:
                return i
        raise AssertionError(f"ideal {x} matched no class")

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return next(j for j in range(len(self.classes)) if self.table[i][j] == 0)

    def conj_class(self, i: int) -> int:
        # a * conj(a) = N(a) R, so conjugation is inversion on classes
        return self.inv(i)

    def order_of(self, i: int) -> int:
        k, j = 1, i
        while j != 0:
            j = self.table[j][i]
            k += 1
        return k

    def subgroup_generated(self, gens) -> set[int]:
        seen = {0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return seen


@lru_cache(maxsize=None)
def class_group(order: Order) -> IdealClassGroup:
    """Cl(R) by enumeration of primitive ideals up to the Minkowski-type
    bound sqrt(|D|/3) and principality tests on quotients."""
    t, n = order.t, order.n
    bound = isqrt(-order.disc // 3)
    reps: list[FracIdeal] = []
    for a in range(1, bound + 1):
        for b in range(a):
            if (b * b + t * b + n) % a:
                continue
            ideal = FracIdeal._normalized(order, 1, a, b, 1)
            if not any(is_principal(ideal * r.inverse()) for r in reps):
                reps.append(ideal)
    # reps[0] is R (a=1); discovery order sorts by (norm, b), so each rep
    # has least norm in its class
    assert reps and reps[0] == FracIdeal.unit_ideal(order)
    h = len(reps)
    table = []
    for i in range(h):
        row = []
        for j in range(h):
            prod = reps[i] * reps[j]
            row.append(next(k for k in range(h)
                            if is_principal(prod * reps[k].inverse())))
        table.append(tuple(row))
    group = IdealClassGroup(order, tuple(reps), tuple(table), (), 1)
    orders = [group.order_of(i) for i in range(h)]
    exponent = 1
    for k in orders:
        exponent = exponent * k // gcd(exponent, k)
    generators = _minimal_generators(group, h)
    return IdealClassGroup(order, tuple(reps), tuple(table),
                           tuple(generators), exponent)


def _minimal_generators(group: IdealClassGroup, h: int) -> list[int]:
    if h == 1:
        return []
    from itertools import combinations
    idxs = list(range(1, h))
    for size in range(1, h):
        for combo in combinations(idxs, size):
            if len(group.subgroup_generated(combo)) == h:
                return list(combo)
    raise AssertionError("class group not generated by its own elements")


def reduced_form_count(disc: int) -> int:
    """Independent class number oracle: count reduced primitive binary
    quadratic forms (a, b, c) of the given discriminant."""
    count = 0
    bound = isqrt(-disc // 3)
    for a in range(1, bound + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) == 1:
                count += 1
    return count


def idempotents(u: FracIdeal, v: FracIdeal) -> tuple[KNumber, KNumber]:
    """For coprime integral ideals u + v = R, elements x in u, y in v
    with x + y = 1."""
    assert u.is_integral() and v.is_integral()
    gens = [*u.generators(), *v.generators()]
    rows = [[int(g.a), int(g.b)] for g in gens]
    sol = solve_left_int(rows, [1, 0])
    assert sol is not None, "ideals are not coprime"
    x = sol[0] * gens[0] + sol[1] * gens[1]
    y = 1 - x
    assert u.contains(x) and v.contains(y)
    return x, y
