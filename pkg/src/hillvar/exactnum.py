"""Exact rational scalars, rational interval enclosures, and tagged decimal rendering.

Everything in this module is exact: decimals parse to rationals over powers of
ten, roots are enclosed by two-sided rational bounds with a caller-chosen
tolerance, and no value ever passes through binary floating point.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

_DECIMAL_RE = re.compile(
    r"""^(?P<sign>[+-]?)
        (?P<int>\d+)?
        (?:\.(?P<frac>\d+))?
        (?:[eE](?P<exp>[+-]?\d+))?$""",
    re.VERBOSE,
)


def parse_rational(text: str) -> Rational:
    """Parse "p/q", a decimal literal, or scientific notation into an exact Rational.

    Decimals are exact rationals over a power of ten; they never round-trip
    through floats.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty rational literal")
    if "/" in s:
        num_s, _, den_s = s.partition("/")
        num = _parse_int(num_s)
        den = _parse_int(den_s)
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(num, den)
    m = _DECIMAL_RE.match(s)
    if m is None or (m.group("int") is None and m.group("frac") is None):
        raise ValueError(f"malformed rational literal {text!r}")
    sign = -1 if m.group("sign") == "-" else 1
    int_part = m.group("int") or "0"
    frac_part = m.group("frac") or ""
    exp = int(m.group("exp") or 0)
    digits = int(int_part + frac_part) if (int_part + frac_part) else 0
    value = Fraction(digits, 10 ** len(frac_part)) * Fraction(10) ** exp
    return sign * value


def _parse_int(s: str) -> int:
    if not re.fullmatch(r"[+-]?\d+", s):
        raise ValueError(f"malformed integer {s!r}")
    return int(s)


@dataclass(frozen=True)
class TaggedDecimal:
    """A decimal string with a fixed digit count plus a direction tag.

    The tag records how the exact value compares with the printed one in
    absolute value: "-" means the exact value is smaller in absolute value
    than the printed text, "+" means larger, "=" means equal.
    """

    text: str
    tag: str

    def __str__(self) -> str:
        return self.text if self.tag == "=" else f"{self.text}({self.tag})"


def render_tagged(x: Rational, digits: int) -> TaggedDecimal:
    """Render x to `digits` fractional digits, nearest (ties away from zero).

    The direction tag then states whether |x| is below ("-"), above ("+"),
    or equal to ("=") the absolute value of the printed decimal.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    ax = abs(x)
    scaled = ax * 10**digits
    units = scaled.numerator // scaled.denominator
    if 2 * (scaled - units) >= 1:
        units += 1
    printed = Fraction(units, 10**digits)
    if ax < printed:
        tag = "-"
    elif ax > printed:
        tag = "+"
    else:
        tag = "="
    s = str(units).rjust(digits + 1, "0")
    return TaggedDecimal(text=f"{sign}{s[:-digits]}.{s[-digits:]}", tag=tag)


@dataclass(frozen=True)
class RationalInterval:
    """A closed interval [lo, hi] with exact rational endpoints."""

    lo: Rational
    hi: Rational

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")

    @classmethod
    def point(cls, x: Rational) -> "RationalInterval":
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Rational:
        return self.hi - self.lo

    @property
    def mid(self) -> Rational:
        return (self.lo + self.hi) / 2

    def __contains__(self, x: Rational) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "RationalInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __neg__(self) -> "RationalInterval":
        return RationalInterval(-self.hi, -self.lo)

    def __add__(self, other) -> "RationalInterval":
        other = _as_interval(other)
        return RationalInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other) -> "RationalInterval":
        return self + (-_as_interval(other))

    def __rsub__(self, other) -> "RationalInterval":
        return _as_interval(other) + (-self)

    def __mul__(self, other) -> "RationalInterval":
        other = _as_interval(other)
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return RationalInterval(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalInterval":
        other = _as_interval(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval divisor straddles zero")
        recips = (1 / other.lo, 1 / other.hi)
        return self * RationalInterval(min(recips), max(recips))

    def __rtruediv__(self, other) -> "RationalInterval":
        return _as_interval(other) / self

    def squared(self) -> "RationalInterval":
        if self.lo >= 0:
            return RationalInterval(self.lo**2, self.hi**2)
        if self.hi <= 0:
            return RationalInterval(self.hi**2, self.lo**2)
        return RationalInterval(Fraction(0), max(self.lo**2, self.hi**2))


def _as_interval(x) -> RationalInterval:
    if isinstance(x, RationalInterval):
        return x
    return RationalInterval.point(Fraction(x))


def round_interval(iv: RationalInterval, bits: int) -> RationalInterval:
    """Outward-round endpoints onto the grid of multiples of 2**-bits.

    Keeps denominators bounded in iterative enclosures; always a superset.
    """
    scale = 1 << bits
    lo = Fraction(math.floor(iv.lo * scale), scale)
    hi = Fraction(-math.floor(-iv.hi * scale), scale)
    return RationalInterval(lo, hi)


def _iroot_floor(n: int, k: int) -> int:
    """Exact floor of the k-th root of a nonnegative integer."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0
    if k == 2:
        return math.isqrt(n)
    x = 1 << (n.bit_length() // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    return x


def _root_down(x: Rational, k: int, bits: int) -> Rational:
    """Largest grid rational r = t/2^bits with r^k <= x (x >= 0)."""
    scale = 1 << bits
    # floor(root(x * scale^k)) / scale underestimates the root.
    t = _iroot_floor(x.numerator * scale**k // x.denominator, k)
    r = Fraction(t, scale)
    while r**k > x:  # guard against the floor-division slack
        t -= 1
        r = Fraction(t, scale)
    return r


def _root_up(x: Rational, k: int, bits: int) -> Rational:
    r = _root_down(x, k, bits)
    step = Fraction(1, 1 << bits)
    while r**k < x:
        r += step
    return r


def _tol_bits(tol: Rational) -> int:
    if tol <= 0:
        raise ValueError("tol must be > 0")
    bits = 1
    while Fraction(1, 1 << bits) > tol:
        bits += 1
    return bits + 2


def interval_sqrt(x: RationalInterval, tol: Rational) -> RationalInterval:
    """Enclosure of sqrt over every point of x; width <= tol for point inputs."""
    x = _as_interval(x)
    if x.lo < 0:
        raise ValueError("interval_sqrt requires a nonnegative interval")
    bits = _tol_bits(Fraction(tol))
    return RationalInterval(_root_down(x.lo, 2, bits), _root_up(x.hi, 2, bits))


def interval_cbrt(x: RationalInterval, tol: Rational) -> RationalInterval:
    """Enclosure of the real cube root (odd, so negative inputs are allowed)."""
    x = _as_interval(x)
    bits = _tol_bits(Fraction(tol))

    def cbrt_down(v: Rational) -> Rational:
        if v >= 0:
            return _root_down(v, 3, bits)
        return -_root_up(-v, 3, bits)

    def cbrt_up(v: Rational) -> Rational:
        if v >= 0:
            return _root_up(v, 3, bits)
        return -_root_down(-v, 3, bits)

    return RationalInterval(cbrt_down(x.lo), cbrt_up(x.hi))


_PI_CACHE: dict = {}


def interval_pi(tol: Rational) -> RationalInterval:
    """Enclosure of pi from Machin's identity with alternating-series bounds."""
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be > 0")
    bits = _tol_bits(tol)
    cached = _PI_CACHE.get(bits)
    if cached is not None:
        return cached

    def atan_inv(x: int, term_tol: Fraction) -> RationalInterval:
        # arctan(1/x) = sum (-1)^k / ((2k+1) x^(2k+1)), alternating, decreasing.
        # Fixed-point integers scaled by 2^work_bits; each floor division is
        # at most 1 ulp low, so pad the final enclosure by one ulp per term.
        work = bits + 16
        scale = 1 << work
        x2 = x * x
        total = 0
        power = scale // x  # magnitude of 1/x^(2k+1), scaled
        k = 0
        while True:
            term = power // (2 * k + 1)
            if term == 0:
                break
            total += -term if k % 2 else term
            power //= x2
            k += 1
        pad = 3 * k + 8
        return RationalInterval(
            Fraction(total - pad, scale), Fraction(total + pad, scale)
        )

    part = Fraction(tol, 64)
    result = round_interval(
        16 * atan_inv(5, part) - 4 * atan_inv(239, part), bits
    )
    _PI_CACHE[bits] = result
    return result


# cos(r*pi) is rational exactly when r reduces to denominator 1, 2 or 3.
_EXACT_COS = {
    Fraction(0): Fraction(1),
    Fraction(1, 3): Fraction(1, 2),
    Fraction(1, 2): Fraction(0),
    Fraction(2, 3): Fraction(-1, 2),
    Fraction(1): Fraction(-1),
    Fraction(4, 3): Fraction(-1, 2),
    Fraction(3, 2): Fraction(0),
    Fraction(5, 3): Fraction(1, 2),
}


def cos_pi_times(r: Rational, tol: Rational = Fraction(1, 10**30)) -> RationalInterval:
    """Enclosure of cos(r*pi) for rational r; exact point interval when rational."""
    r = Fraction(r) % 2
    if r in _EXACT_COS:
        return RationalInterval.point(_EXACT_COS[r])
    if r > 1:
        return cos_pi_times(2 - r, tol)
    if r > Fraction(1, 2):
        return -cos_pi_times(1 - r, tol)
    # now r in (0, 1/2): theta = r*pi in (0, pi/2)
    tol = Fraction(tol)
    bits = _tol_bits(tol)
    pi_iv = interval_pi(Fraction(1, 1 << (bits + 16)))
    theta0 = r * pi_iv.mid
    slack = r * pi_iv.width / 2
    total_iv = _cos_fixed_point(theta0, bits + 16)
    return round_interval(
        RationalInterval(total_iv.lo - slack, total_iv.hi + slack), bits
    )


def _cos_fixed_point(theta0: Rational, work: int) -> RationalInterval:
    """Rigorous cos at a rational point via scaled-integer Taylor summation.

    All arithmetic is on integers scaled by 2^work; every floor division is
    at most one ulp low, so the result is padded by a per-term ulp budget
    plus the alternating-series remainder.
    """
    scale = 1 << work
    t_int = (theta0 * scale).__floor__()  # |t_int/scale - theta0| <= 1 ulp
    t2 = t_int * t_int  # scaled by 2^(2 work)
    total = 0
    term = scale
    sign = 1
    k = 0
    while term:
        total += sign * term
        k += 1
        term = term * t2 // ((2 * k - 1) * (2 * k)) >> (2 * work)
        sign = -sign
    pad = 3 * k + 8  # ulp budget: rounding per term plus the tail bound
    return RationalInterval(Fraction(total - pad, scale), Fraction(total + pad, scale))


def sin_pi_times(r: Rational, tol: Rational = Fraction(1, 10**30)) -> RationalInterval:
    """Enclosure of sin(r*pi) for rational r; exact when rational (denominator 1, 2, 6)."""
    return cos_pi_times(Fraction(1, 2) - Fraction(r), tol)


def render_interval(iv: RationalInterval, digits: int) -> TaggedDecimal:
    """Render an enclosure: both endpoints must print identically at `digits`.

    The tag is "-"/"+" when the whole interval sits below/above the printed
    value in absolute value, "=" when the printed value is enclosed.
    """
    lo_r = render_tagged(iv.lo, digits)
    hi_r = render_tagged(iv.hi, digits)
    if lo_r.text != hi_r.text:
        raise ValueError(
            f"interval too wide to render at {digits} digits: "
            f"{lo_r.text} .. {hi_r.text}"
        )
    printed = abs(parse_rational(lo_r.text))
    alo, ahi = abs(iv.lo), abs(iv.hi)
    if iv.lo < 0 < iv.hi:
        alo, ahi = Fraction(0), max(alo, ahi)
    elif iv.hi <= 0:
        alo, ahi = abs(iv.hi), abs(iv.lo)
    if ahi < printed:
        tag = "-"
    elif alo > printed:
        tag = "+"
    else:
        tag = "="
    return TaggedDecimal(text=lo_r.text, tag=tag)
