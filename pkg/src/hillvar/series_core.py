"""Truncated bivariate series in the grading variable and the oscillation variable.

A FourierSlice of order r holds the coefficients of e^{2*sigma*i*tau} for
sigma = -r, -r+2, ..., r (the support/parity law: only frequencies of the
same parity as the order occur, and only even multiples of tau, so sigma is
stored in units of 2*tau).  A GradedSeries maps each grade j to a slice of
order <= j with matching parity; grade 0 is permitted internally so that
units such as (1-S)^e can be represented.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactnum import Rational

_ZERO = Fraction(0)


@dataclass(frozen=True)
class FourierSlice:
    """Dense coefficient vector: coeffs[i] multiplies e^{2*(2i-order)*i*tau}."""

    order: int
    coeffs: tuple

    def __post_init__(self) -> None:
        if self.order < 0:
            raise ValueError("slice order must be >= 0")
        if len(self.coeffs) != self.order + 1:
            raise ValueError(
                f"order-{self.order} slice needs {self.order + 1} coefficients, "
                f"got {len(self.coeffs)}"
            )

    @classmethod
    def zero(cls, order: int) -> "FourierSlice":
        return cls(order, (_ZERO,) * (order + 1))

    @classmethod
    def unit(cls) -> "FourierSlice":
        return cls(0, (Fraction(1),))

    @classmethod
    def from_dict(cls, order: int, entries: dict) -> "FourierSlice":
        coeffs = [_ZERO] * (order + 1)
        for sigma, c in entries.items():
            if abs(sigma) > order or (sigma - order) % 2 != 0:
                raise ValueError(f"frequency {sigma} outside order-{order} support")
            coeffs[(sigma + order) // 2] = Fraction(c)
        return cls(order, tuple(coeffs))

    def frequencies(self):
        return range(-self.order, self.order + 1, 2)

    def coeff(self, sigma: int) -> Rational:
        if abs(sigma) > self.order or (sigma - self.order) % 2 != 0:
            return _ZERO
        return self.coeffs[(sigma + self.order) // 2]

    def to_dict(self) -> dict:
        return {s: self.coeff(s) for s in self.frequencies() if self.coeff(s) != 0}

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def scale(self, factor: Rational) -> "FourierSlice":
        f = Fraction(factor)
        return FourierSlice(self.order, tuple(c * f for c in self.coeffs))

    def embed(self, order: int) -> "FourierSlice":
        """Re-express in a larger order of the same parity (zero padding)."""
        if order == self.order:
            return self
        if order < self.order or (order - self.order) % 2 != 0:
            raise ValueError(f"cannot embed order {self.order} into order {order}")
        pad = (order - self.order) // 2
        return FourierSlice(order, (_ZERO,) * pad + self.coeffs + (_ZERO,) * pad)

    def map_coeffs(self, fn) -> "FourierSlice":
        """Apply fn(sigma, coeff) -> coeff to every stored coefficient."""
        return FourierSlice(
            self.order,
            tuple(fn(2 * i - self.order, c) for i, c in enumerate(self.coeffs)),
        )

    def abs_coeffs(self) -> "FourierSlice":
        return FourierSlice(self.order, tuple(abs(c) for c in self.coeffs))


def slice_add(a: FourierSlice, b: FourierSlice) -> FourierSlice:
    if (a.order - b.order) % 2 != 0:
        raise ValueError("cannot add slices of opposite parity")
    order = max(a.order, b.order)
    a, b = a.embed(order), b.embed(order)
    return FourierSlice(order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def slice_mul(a: FourierSlice, b: FourierSlice) -> FourierSlice:
    """Convolution: the coefficient at sigma is the sum over sigma1+sigma2=sigma."""
    out = [_ZERO] * (a.order + b.order + 1)
    for i, ca in enumerate(a.coeffs):
        if ca == 0:
            continue
        for j, cb in enumerate(b.coeffs):
            if cb != 0:
                out[i + j] += ca * cb
    return FourierSlice(a.order + b.order, tuple(out))


def slice_shift(a: FourierSlice, k: int) -> FourierSlice:
    """Multiply by e^{2k*i*tau}: frequencies shift by k, order grows by |k|."""
    if k == 0:
        return a
    return slice_mul(a, FourierSlice.from_dict(abs(k), {k: Fraction(1)}))


def reflect(s: FourierSlice) -> FourierSlice:
    """Replace tau by -tau: the coefficient at sigma moves to -sigma."""
    return FourierSlice(s.order, tuple(reversed(s.coeffs)))


class GradedSeries:
    """Map grade j -> FourierSlice, truncated at grade `truncation`."""

    __slots__ = ("truncation", "slices")

    def __init__(self, truncation: int, slices: dict | None = None):
        if truncation < 0:
            raise ValueError("truncation must be >= 0")
        self.truncation = truncation
        self.slices: dict = {}
        for j, s in (slices or {}).items():
            self._set(j, s)

    def _set(self, j: int, s: FourierSlice) -> None:
        if not 0 <= j <= self.truncation:
            raise ValueError(f"grade {j} outside [0, {self.truncation}]")
        if s.order > j or (s.order - j) % 2 != 0:
            raise ValueError(
                f"grade-{j} slice must have order <= {j} of the same parity, "
                f"got order {s.order}"
            )
        if s.is_zero():
            self.slices.pop(j, None)
        else:
            self.slices[j] = s

    @classmethod
    def zero(cls, truncation: int) -> "GradedSeries":
        return cls(truncation)

    @classmethod
    def one(cls, truncation: int) -> "GradedSeries":
        return cls(truncation, {0: FourierSlice.unit()})

    def grade(self, j: int) -> FourierSlice:
        return self.slices.get(j, FourierSlice.zero(j % 2))

    def grades(self):
        return sorted(self.slices)

    def is_zero(self) -> bool:
        return not self.slices

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedSeries):
            return NotImplemented
        js = set(self.slices) | set(other.slices)
        return all(
            slice_add(self.grade(j), other.grade(j).scale(-1)).is_zero() for j in js
        )

    def add(self, other: "GradedSeries") -> "GradedSeries":
        out = GradedSeries(max(self.truncation, other.truncation))
        for j in set(self.slices) | set(other.slices):
            a = self.slices.get(j)
            b = other.slices.get(j)
            out._set(j, slice_add(a, b) if a and b else (a or b))
        return out

    def scale(self, factor: Rational) -> "GradedSeries":
        return GradedSeries(
            self.truncation, {j: s.scale(factor) for j, s in self.slices.items()}
        )

    def map_slices(self, fn) -> "GradedSeries":
        return GradedSeries(
            self.truncation, {j: fn(j, s) for j, s in self.slices.items()}
        )

    def reflected(self) -> "GradedSeries":
        return self.map_slices(lambda j, s: reflect(s))

    def truncated(self, J: int) -> "GradedSeries":
        return GradedSeries(J, {j: s for j, s in self.slices.items() if j <= J})


def graded_mul(a: GradedSeries, b: GradedSeries, J: int) -> GradedSeries:
    out: dict = {}
    for j1, s1 in a.slices.items():
        for j2, s2 in b.slices.items():
            j = j1 + j2
            if j > J:
                continue
            prod = slice_mul(s1, s2)
            out[j] = slice_add(out[j], prod) if j in out else prod
    return GradedSeries(J, out)


def binomial_power(s: GradedSeries, e: Rational, J: int) -> GradedSeries:
    """Truncation of (1 - S)^e for a series S with no grade-0 part.

    Uses the differential recurrence (1-S) * W' = -e * S' * W, which needs
    only O(J^2) slice products; tests pin exact agreement with the direct
    multinomial expansion.
    """
    if 0 in s.slices:
        raise ValueError("binomial_power requires a series with no grade-0 part")
    e = Fraction(e)
    w: dict = {0: FourierSlice.unit()}
    for j in range(1, J + 1):
        acc = None
        for k in range(1, j + 1):
            sk = s.slices.get(k)
            wk = w.get(j - k)
            if sk is None or wk is None:
                continue
            coef = Fraction(j - k) - e * k
            if coef == 0:
                continue
            term = slice_mul(sk, wk).scale(coef)
            acc = term if acc is None else slice_add(acc, term)
        if acc is not None:
            w[j] = acc.scale(Fraction(1, j))
    return GradedSeries(J, {j: sl for j, sl in w.items() if not sl.is_zero()})


def remainder_series(p: GradedSeries, q: GradedSeries, J: int):
    """Above-linear parts P, Q of the two binomial products driving the system.

    P is (1-p)^{-1/2} (1-q)^{-3/2} - 1 - p/2 - 3q/2 truncated at J; Q is the
    same with p and q exchanged.  Both start at grade 2.
    """
    if 0 in p.slices or 0 in q.slices:
        raise ValueError("remainder_series expects series starting at grade 1")

    def tail(x: GradedSeries, y: GradedSeries) -> GradedSeries:
        full = graded_mul(
            binomial_power(x, Fraction(-1, 2), J),
            binomial_power(y, Fraction(-3, 2), J),
            J,
        )
        linear = (
            GradedSeries.one(J)
            .add(x.scale(Fraction(1, 2)))
            .add(y.scale(Fraction(3, 2)))
        )
        return full.add(linear.scale(-1))

    return tail(p, q), tail(q, p)


# ---------------------------------------------------------------------------
# Univariate truncated power series (lists of Rationals, index = grade).
# Shared by the majorant root expansion and the refined-bound machinery.
# ---------------------------------------------------------------------------


def poly_trim(a: list, J: int) -> list:
    out = list(a[: J + 1])
    out += [_ZERO] * (J + 1 - len(out))
    return out


def poly_add(a: list, b: list, J: int) -> list:
    a, b = poly_trim(a, J), poly_trim(b, J)
    return [x + y for x, y in zip(a, b)]


def poly_mul(a: list, b: list, J: int) -> list:
    out = [_ZERO] * (J + 1)
    for i, x in enumerate(a[: J + 1]):
        if x == 0:
            continue
        for j, y in enumerate(b[: J + 1 - i]):
            if y != 0:
                out[i + j] += x * y
    return out


def poly_div(a: list, b: list, J: int) -> list:
    """Series quotient a/b with b[0] != 0."""
    a, b = poly_trim(a, J), poly_trim(b, J)
    if b[0] == 0:
        raise ZeroDivisionError("series division needs a unit constant term")
    out = [_ZERO] * (J + 1)
    for j in range(J + 1):
        acc = a[j]
        for k in range(1, j + 1):
            acc -= b[k] * out[j - k]
        out[j] = acc / b[0]
    return out


def cubic_gain_series(z: list, J: int) -> list:
    """Series of (3 - 2z) z^2 / (1 - z)^2 for a series z with z[0] = 0."""
    z = poly_trim(z, J)
    if z[0] != 0:
        raise ValueError("gain series expects a series vanishing at grade 0")
    num = poly_mul(poly_add([Fraction(3)], [x * -2 for x in z], J), poly_mul(z, z, J), J)
    one_minus = poly_add([Fraction(1)], [-x for x in z], J)
    return poly_div(num, poly_mul(one_minus, one_minus, J), J)
