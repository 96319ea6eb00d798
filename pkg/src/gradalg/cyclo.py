"""Exact arithmetic in cyclotomic fields.

A :class:`CycNum` is an element of some Q(zeta_N), stored as a sparse map
from exponents to rationals over the Zumbroich basis of Q(zeta_N).  After
every operation the value is rewritten into that basis and moved to the
smallest cyclotomic field containing it, so equality, hashing and ordering
are purely structural.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache, total_ordering
from math import gcd
from typing import Iterable, Optional, Union

__all__ = [
    "CycNum",
    "zeta",
    "I",
    "SQRT2",
    "SQRT_I",
    "root_of_unity_order",
    "hat_equal",
    "tilde_equal",
    "parse_cyc",
    "sqrt_cyc",
]

Scalar = Union["CycNum", int, Fraction]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


@lru_cache(maxsize=None)
def _prime_data(n: int) -> tuple[tuple[int, int, int, int, int], ...]:
    """Per prime power p^a || n: (p, a, p^a, n / p^a, inverse of n / p^a mod p^a)."""
    out = []
    for p, a in _factor(n):
        q = p**a
        m = n // q
        out.append((p, a, q, m, pow(m, -1, q) if q > 1 else 0))
    return tuple(out)


def _normal_conductor(n: int, coeffs: dict[int, Fraction]) -> tuple[int, dict[int, Fraction]]:
    """Move a value written over zeta_n with n = 2 mod 4 to conductor n/2."""
    if n % 4 != 2:
        return n, coeffs
    h = n // 2
    # zeta_{2h} = -zeta_h^{(h+1)/2} for odd h
    e = (h + 1) // 2
    out: dict[int, Fraction] = {}
    for k, c in coeffs.items():
        kk = (k * e) % h
        out[kk] = out.get(kk, 0) + (-c if k % 2 else c)
    return h, out


def _to_basis(n: int, coeffs: dict[int, Fraction]) -> dict[int, Fraction]:
    """Rewrite a sum of powers of zeta_n into the Zumbroich basis of Q(zeta_n)."""
    cur = {k % n: c for k, c in coeffs.items() if c}
    for p, a, q, m, inv in _prime_data(n):
        top = q // p  # p^(a-1)
        step = top * m % n
        nxt: dict[int, Fraction] = {}
        if p == 2:
            if a == 1:
                continue
            for k, c in cur.items():
                digit = (k * inv) % q
                if digit >= top:
                    kk = (k - step) % n
                    nxt[kk] = nxt.get(kk, 0) - c
                else:
                    nxt[k] = nxt.get(k, 0) + c
        else:
            for k, c in cur.items():
                digit = (k * inv) % q
                if digit < top:
                    for j in range(1, p):
                        kk = (k + j * step) % n
                        nxt[kk] = nxt.get(kk, 0) - c
                else:
                    nxt[k] = nxt.get(k, 0) + c
        cur = {k: c for k, c in nxt.items() if c}
    return cur


def _shrink(n: int, coeffs: dict[int, Fraction]) -> tuple[int, dict[int, Fraction]]:
    """Lower the conductor of a basis representation as far as possible."""
    changed = True
    while changed and n > 1:
        changed = False
        if not coeffs:
            return 1, {}
        for p, a, q, m, inv in _prime_data(n):
            if p == 2 and a == 2:
                if all(k % 4 == 0 for k in coeffs):
                    n //= 4
                    coeffs = {k // 4: c for k, c in coeffs.items()}
                    changed = True
                    break
            elif a >= 2:
                if all(k % p == 0 for k in coeffs):
                    n //= p
                    coeffs = {k // p: c for k, c in coeffs.items()}
                    changed = True
                    break
            elif p != 2:
                groups: dict[int, dict[int, Fraction]] = {}
                for k, c in coeffs.items():
                    digit = (k * inv) % q
                    rest = (k - digit * m) % n
                    groups.setdefault(rest, {})[digit] = c
                ok = True
                for g in groups.values():
                    if len(g) != p - 1 or len(set(g.values())) != 1:
                        ok = False
                        break
                if ok:
                    new: dict[int, Fraction] = {}
                    for rest, g in groups.items():
                        c = next(iter(g.values()))
                        new[rest // p] = -c
                    n //= p
                    coeffs = new
                    changed = True
                    break
    return n, coeffs


def _canon(n: int, coeffs: dict[int, Fraction]) -> tuple[int, dict[int, Fraction]]:
    n, coeffs = _normal_conductor(n, coeffs)
    coeffs = _to_basis(n, coeffs)
    if not coeffs:
        return 1, {}
    return _shrink(n, coeffs)


def _as_cyc(x: Scalar) -> "CycNum":
    if isinstance(x, CycNum):
        return x
    if isinstance(x, (int, Fraction)):
        return CycNum._raw(1, {0: Fraction(x)} if x else {})
    raise TypeError(f"cannot convert {type(x).__name__} to CycNum")


@total_ordering
class CycNum:
    """Element of a cyclotomic field in canonical form."""

    __slots__ = ("conductor", "_items", "_hash")

    def __init__(self, value: Union[int, Fraction, str] = 0) -> None:
        if isinstance(value, str):
            other = parse_cyc(value)
            n, items = other.conductor, other._items
        else:
            v = Fraction(value)
            n, items = 1, (((0, v),) if v else ())
        self.conductor = n
        self._items = items
        self._hash = None

    @classmethod
    def _raw(cls, n: int, coeffs: dict[int, Fraction]) -> "CycNum":
        obj = cls.__new__(cls)
        obj.conductor = n
        obj._items = tuple(sorted((k, Fraction(c)) for k, c in coeffs.items()))
        obj._hash = None
        return obj

    @classmethod
    def from_powers(cls, n: int, coeffs: dict[int, Scalar]) -> "CycNum":
        """Build sum(c_k * zeta_n^k) from an arbitrary (non-canonical) map."""
        if n < 1:
            raise ValueError("conductor must be positive")
        fr = {int(k): Fraction(c) for k, c in coeffs.items()}
        return cls._raw(*_canon(n, fr))

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._items)

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self._items

    def is_rational(self) -> bool:
        return self.conductor == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._items[0][1] if self._items else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self._items)

    # -- arithmetic -----------------------------------------------------
    def _lift(self, n: int) -> dict[int, Fraction]:
        f = n // self.conductor
        return {k * f: c for k, c in self._items}

    def __add__(self, other: Scalar) -> "CycNum":
        try:
            o = _as_cyc(other)
        except TypeError:
            return NotImplemented
        if not o._items:
            return self
        if not self._items:
            return o
        if self.conductor == 1 and o.conductor == 1:
            return CycNum(self._items[0][1] + o._items[0][1])
        n = _lcm(self.conductor, o.conductor)
        acc = self._lift(n)
        for k, c in o._lift(n).items():
            acc[k] = acc.get(k, 0) + c
        return CycNum._raw(*_canon(n, acc))

    __radd__ = __add__

    def __neg__(self) -> "CycNum":
        return CycNum._raw(self.conductor, {k: -c for k, c in self._items})

    def __sub__(self, other: Scalar) -> "CycNum":
        try:
            o = _as_cyc(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Scalar) -> "CycNum":
        return _as_cyc(other) + (-self)

    def __mul__(self, other: Scalar) -> "CycNum":
        try:
            o = _as_cyc(other)
        except TypeError:
            return NotImplemented
        if not self._items or not o._items:
            return ZERO
        if o.conductor == 1:
            c = o._items[0][1]
            if c == 1:
                return self
            return CycNum._raw(self.conductor, {k: v * c for k, v in self._items})
        if self.conductor == 1:
            return o * self
        n = _lcm(self.conductor, o.conductor)
        a = self._lift(n)
        b = o._lift(n)
        acc: dict[int, Fraction] = {}
        for k1, c1 in a.items():
            for k2, c2 in b.items():
                k = (k1 + k2) % n
                acc[k] = acc.get(k, 0) + c1 * c2
        return CycNum._raw(*_canon(n, acc))

    __rmul__ = __mul__

    def galois(self, a: int) -> "CycNum":
        """Apply the automorphism zeta_N -> zeta_N^a (a coprime to N)."""
        n = self.conductor
        if gcd(a, n) != 1:
            raise ValueError("Galois exponent must be coprime to the conductor")
        return CycNum.from_powers(n, {k * a: c for k, c in self._items})

    def conjugate(self) -> "CycNum":
        return self.galois(-1)

    def inv(self) -> "CycNum":
        if not self._items:
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        n = self.conductor
        if n == 1:
            return CycNum(1 / self._items[0][1])
        if len(self._items) == 1:
            k, c = self._items[0]
            return CycNum._raw(*_canon(n, {-k: 1 / c}))
        # x^{-1} = (prod of other conjugates) / norm
        prod = ONE
        for a in range(2, n):
            if gcd(a, n) == 1:
                prod = prod * self.galois(a)
        norm = self * prod
        return prod * (1 / norm.to_fraction())

    def __truediv__(self, other: Scalar) -> "CycNum":
        try:
            o = _as_cyc(other)
        except TypeError:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other: Scalar) -> "CycNum":
        return _as_cyc(other) * self.inv()

    def __pow__(self, e: int) -> "CycNum":
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inv() ** (-e)
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparison -----------------------------------------------------
    def _key(self) -> tuple:
        return (self.conductor, self._items)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = _as_cyc(other)
        if not isinstance(other, CycNum):
            return NotImplemented
        return self.conductor == other.conductor and self._items == other._items

    def __lt__(self, other: Scalar) -> bool:
        return self._key() < _as_cyc(other)._key()

    def __hash__(self) -> int:
        if self._hash is None:
            if self.conductor == 1:
                self._hash = hash(self.to_fraction())
            else:
                self._hash = hash(self._key())
        return self._hash

    # -- text form ------------------------------------------------------
    def __str__(self) -> str:
        if not self._items:
            return "0"
        parts = []
        for k, c in self._items:
            if k == 0:
                body = str(abs(c))
            elif abs(c) == 1:
                body = f"z({self.conductor},{k})"
            else:
                body = f"{abs(c)}*z({self.conductor},{k})"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"CycNum('{self}')"

    def __complex__(self) -> complex:
        import cmath

        n = self.conductor
        return sum(float(c) * cmath.exp(2j * cmath.pi * k / n) for k, c in self._items) + 0j


ZERO = CycNum(0)
ONE = CycNum(1)


def zeta(n: int, k: int = 1) -> CycNum:
    """Return zeta_n^k, with zeta_n = exp(2*pi*i/n)."""
    if n < 1:
        raise ValueError("order must be positive")
    return CycNum.from_powers(n, {k % n: 1})


I = zeta(4, 1)
SQRT_I = zeta(8, 1)
SQRT2 = zeta(8, 1) + zeta(8, 7)


def root_of_unity_order(x: Scalar) -> Optional[int]:
    """Multiplicative order of ``x`` if it is a root of unity, else ``None``."""
    x = _as_cyc(x)
    if x.is_zero():
        raise ValueError("zero is not a unit")
    bound = _lcm(2, x.conductor)
    if x**bound != ONE:
        return None
    for d in _divisors(bound):
        if x**d == ONE:
            return d
    return bound  # pragma: no cover


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def hat_equal(a: Scalar, b: Scalar, l: int) -> bool:
    """True when a/b is an l-th root of unity."""
    a, b = _as_cyc(a), _as_cyc(b)
    if a.is_zero() or b.is_zero():
        raise ValueError("class comparison needs nonzero scalars")
    return (a / b) ** l == ONE


def tilde_equal(a: Scalar, b: Scalar, l: int) -> bool:
    """True when a/b is a 2l-th root of unity."""
    return hat_equal(a, b, 2 * l)


# --------------------------------------------------------------------- parsing

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
    (?:(?P<coef>\d+(?:/\d+)?)\s*(?P<star>\*)?\s*)?
    (?P<root>z\(\s*(?P<n>\d+)\s*,\s*(?P<k>-?\d+)\s*\)|i\b)?\s*""",
    re.VERBOSE,
)


def parse_cyc(text: str) -> CycNum:
    """Parse ``"c0 + c1*z(N,k1) + ..."``; ``i`` is accepted for z(4,1)."""
    s = text.strip()
    if not s:
        raise ValueError("empty cyclotomic literal")
    pos, total, first = 0, ZERO, True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse cyclotomic literal {text!r} at {pos}")
        if not first and not m.group("sign"):
            raise ValueError(f"missing operator in {text!r} at {pos}")
        coef, root = m.group("coef"), m.group("root")
        if coef is None and root is None:
            raise ValueError(f"dangling sign in {text!r}")
        if m.group("star") and root is None:
            raise ValueError(f"missing root after '*' in {text!r}")
        if coef is not None and root is not None and not m.group("star"):
            raise ValueError(f"missing '*' in {text!r}")
        c = Fraction(coef) if coef is not None else Fraction(1)
        if m.group("sign") == "-":
            c = -c
        if root is None:
            term = CycNum(c)
        elif root == "i":
            term = I * c
        else:
            term = zeta(int(m.group("n")), int(m.group("k"))) * c
        total = total + term
        pos, first = m.end(), False
    return total


# --------------------------------------------------------------------- roots

def _sqrt_prime(p: int) -> CycNum:
    """Square root of a positive prime via quadratic Gauss sums."""
    if p == 2:
        return SQRT2
    g = CycNum.from_powers(p, {a: (1 if pow(a, (p - 1) // 2, p) == 1 else -1) for a in range(1, p)})
    # g^2 = (-1)^((p-1)/2) p
    return g if p % 4 == 1 else g / I


def _sqrt_rational(q: Fraction) -> CycNum:
    if q == 0:
        return ZERO
    out = I if q < 0 else ONE
    q = abs(q)
    for part, sign in ((q.numerator, 1), (q.denominator, -1)):
        for p, e in _factor(part):
            if e // 2:
                out = out * (Fraction(p ** (e // 2)) ** sign)
            if e % 2:
                out = out * (_sqrt_prime(p) if sign > 0 else _sqrt_prime(p).inv())
    return out


def sqrt_cyc(x: Scalar) -> CycNum:
    """A square root of ``x`` when ``x`` is a rational times a root of unity.

    Raises ``ValueError`` for other inputs, whose square roots need not be
    cyclotomic.
    """
    x = _as_cyc(x)
    if x.is_zero():
        return ZERO
    if x.is_rational():
        return _sqrt_rational(x.to_fraction())
    n = x.conductor
    for k in range(n):
        r = x * zeta(n, -k)
        if r.is_rational():
            return _sqrt_rational(r.to_fraction()) * zeta(2 * n, k)
    raise ValueError(f"square root of {x} is not supported")


def as_cyc(x: Scalar) -> CycNum:
    return _as_cyc(x)


def cyc_sum(values: Iterable[Scalar]) -> CycNum:
    total = ZERO
    for v in values:
        total = total + v
    return total
