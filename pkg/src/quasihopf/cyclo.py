"""Exact arithmetic in the cyclotomic field Q(zeta), zeta a primitive 8th root of unity.

Every structure constant in this package lives here.  Elements are stored on
the canonical basis {1, zeta, zeta^2, zeta^3} with the reduction zeta^4 = -1,
as four integer numerators over a common positive denominator, kept in lowest
terms so that equality is tuple equality.  The imaginary unit is i = zeta^2.
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class DivisionByZero(ZeroDivisionError):
    """Inversion of the zero element of Q(zeta)."""


def _gcd4(n0: int, n1: int, n2: int, n3: int, d: int) -> int:
    g = gcd(gcd(abs(n0), abs(n1)), gcd(abs(n2), abs(n3)))
    return gcd(g, d)


class CycNum:
    """An element q0 + q1*zeta + q2*zeta^2 + q3*zeta^3 of Q(zeta), zeta^4 = -1."""

    __slots__ = ("num", "den")

    def __init__(self, num: tuple[int, int, int, int], den: int = 1):
        if den == 1:  # already canonical: gcd(nums, 1) = 1
            self.num = num
            self.den = 1
            return
        if den == 0:
            raise ZeroDivisionError("denominator must be nonzero")
        if den < 0:
            num = (-num[0], -num[1], -num[2], -num[3])
            den = -den
        g = _gcd4(*num, den)
        if g > 1:
            num = (num[0] // g, num[1] // g, num[2] // g, num[3] // g)
            den //= g
        if num == (0, 0, 0, 0):
            den = 1
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_int(cls, n: int) -> CycNum:
        return cls((n, 0, 0, 0))

    @classmethod
    def from_rational(cls, q: Fraction | int) -> CycNum:
        q = Fraction(q)
        return cls((q.numerator, 0, 0, 0), q.denominator)

    @classmethod
    def zeta_power(cls, k: int) -> CycNum:
        k %= 8
        sign = 1 if k < 4 else -1
        num = [0, 0, 0, 0]
        num[k % 4] = sign
        return cls(tuple(num))

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: CycNum) -> CycNum:
        if not isinstance(other, CycNum):
            return NotImplemented
        a, b = self, other
        return CycNum(
            (
                a.num[0] * b.den + b.num[0] * a.den,
                a.num[1] * b.den + b.num[1] * a.den,
                a.num[2] * b.den + b.num[2] * a.den,
                a.num[3] * b.den + b.num[3] * a.den,
            ),
            a.den * b.den,
        )

    def __neg__(self) -> CycNum:
        n = self.num
        return CycNum((-n[0], -n[1], -n[2], -n[3]), self.den)

    def __sub__(self, other: CycNum) -> CycNum:
        return self + (-other)

    def __mul__(self, other: CycNum) -> CycNum:
        if not isinstance(other, CycNum):
            return NotImplemented
        a, b = self.num, other.num
        # convolution mod zeta^4 = -1
        c0 = a[0] * b[0] - a[1] * b[3] - a[2] * b[2] - a[3] * b[1]
        c1 = a[0] * b[1] + a[1] * b[0] - a[2] * b[3] - a[3] * b[2]
        c2 = a[0] * b[2] + a[1] * b[1] + a[2] * b[0] - a[3] * b[3]
        c3 = a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0]
        return CycNum((c0, c1, c2, c3), self.den * other.den)

    def galois(self, k: int) -> CycNum:
        """Image under the field automorphism zeta -> zeta^k, k odd."""
        if k % 2 == 0:
            raise ValueError("Galois exponent must be odd")
        num = [0, 0, 0, 0]
        for j, q in enumerate(self.num):
            m = (j * k) % 8
            if m < 4:
                num[m] += q
            else:
                num[m - 4] -= q
        return CycNum(tuple(num), self.den)

    def inv(self) -> CycNum:
        """Exact inverse: product of Galois conjugates over the rational norm."""
        if not self:
            raise DivisionByZero("cannot invert 0 in Q(zeta)")
        cofactor = self.galois(3) * self.galois(5) * self.galois(7)
        norm = self * cofactor
        assert norm.num[1] == norm.num[2] == norm.num[3] == 0
        n, d = norm.num[0], norm.den
        return cofactor * CycNum((d, 0, 0, 0), n)

    def __truediv__(self, other: CycNum) -> CycNum:
        return self * other.inv()

    def __pow__(self, n: int) -> CycNum:
        if n < 0:
            return self.inv() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison / hashing -------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CycNum):
            return self.num == other.num and self.den == other.den
        if isinstance(other, int):
            return self.num == (other, 0, 0, 0) and self.den == 1
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return self.num != (0, 0, 0, 0)

    # -- views ----------------------------------------------------------------

    def coeffs(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return tuple(Fraction(n, self.den) for n in self.num)

    def is_rational(self) -> bool:
        return self.num[1] == self.num[2] == self.num[3] == 0

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def embed_complex(self) -> complex:
        """Double-precision image under zeta -> exp(2*pi*i/8).  Display only."""
        z = cmath.exp(1j * cmath.pi / 4)
        return sum(
            (Fraction(n, self.den) * z**j for j, n in enumerate(self.num)),
            start=complex(0),
        )

    def to_strings(self) -> list[str]:
        """Serialize as four exact 'p/q' strings (JSON wire format)."""
        return [str(q) for q in self.coeffs()]

    @classmethod
    def from_strings(cls, parts: list[str]) -> CycNum:
        qs = [Fraction(p) for p in parts]
        den = 1
        for q in qs:
            den = den * q.denominator // gcd(den, q.denominator)
        return cls(tuple(int(q * den) for q in qs), den)

    def __repr__(self) -> str:
        return f"CycNum({self})"

    def __str__(self) -> str:
        if not self:
            return "0"
        parts = []
        for j, q in enumerate(self.coeffs()):
            if q == 0:
                continue
            mag = str(abs(q))
            if j == 0:
                body = mag
            else:
                pw = "zeta" if j == 1 else f"zeta^{j}"
                body = pw if abs(q) == 1 else f"{mag}*{pw}"
            sign = "-" if q < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


ZERO = CycNum((0, 0, 0, 0))
ONE = CycNum((1, 0, 0, 0))
ZETA = CycNum((0, 1, 0, 0))
I_UNIT = CycNum((0, 0, 1, 0))


def rational(p: int | Fraction, q: int = 1) -> CycNum:
    return CycNum.from_rational(Fraction(p, q))


def i_power(k: int) -> CycNum:
    """i^k with i = zeta^2."""
    return CycNum.zeta_power(2 * k)


@dataclass(frozen=True)
class BetaChoice:
    """Choice of beta = zeta^exponent with beta^4 = -1 (exponent odd)."""

    exponent: int = 1

    def __post_init__(self):
        if self.exponent % 8 not in (1, 3, 5, 7):
            raise ValueError("beta exponent must be odd (a primitive 8th root)")

    @property
    def beta(self) -> CycNum:
        return CycNum.zeta_power(self.exponent)

    def beta_power(self, m: int) -> CycNum:
        return CycNum.zeta_power(self.exponent * m)

    def quadratic_form(self, k: int) -> CycNum:
        """Q(k) = beta^(k^2) on the cyclic group of order 4."""
        return self.beta_power(k * k)


_TERM_RE = re.compile(
    r"^(?P<coef>[0-9]+(?:/[0-9]+)?)?(?P<star>\*)?(?P<atom>zeta|i)?(?:\^(?P<pow>[0-9]+))?$"
)


def parse_cyc(text: str) -> CycNum:
    """Parse exact scalar syntax: '1/2', '-i', 'zeta^3', '2*zeta', '1 + zeta^2'."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    # split into signed terms
    chunks: list[tuple[int, str]] = []
    sign, buf = 1, ""
    for idx, ch in enumerate(s):
        if ch in "+-" and idx > 0:
            chunks.append((sign, buf))
            sign, buf = (1 if ch == "+" else -1), ""
        elif ch == "-" and idx == 0:
            sign = -1
        elif ch == "+" and idx == 0:
            continue
        else:
            buf += ch
    chunks.append((sign, buf))
    total = ZERO
    for sgn, term in chunks:
        m = _TERM_RE.match(term)
        if not m or (m.group("pow") and not m.group("atom")) or not term:
            raise ValueError(f"cannot parse scalar term {term!r} in {text!r}")
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        atom = m.group("atom")
        power = int(m.group("pow")) if m.group("pow") else 1
        value = CycNum.from_rational(coef)
        if atom == "zeta":
            value = value * CycNum.zeta_power(power)
        elif atom == "i":
            value = value * I_UNIT**power
        if sgn < 0:
            value = -value
        total = total + value
    return total
