"""Order-by-order recursion for the periodic-orbit coefficient table.

The deviation series p = sum_j p_j(tau) lam^j (q its tau-reflection) solves a
pair of second-order equations whose grade-j component is linear with a
known forcing assembled from all lower grades.  Each grade-j slice holds the
exact rational coefficients a[j][sigma]; the table never depends on the
grading parameter, which enters only at evaluation time.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .exactnum import (
    Rational,
    RationalInterval,
    interval_pi,
    interval_sqrt,
    round_interval,
    sin_pi_times,
)
from .series_core import (
    FourierSlice,
    GradedSeries,
    graded_mul,
    binomial_power,
    remainder_series,
    slice_add,
    slice_shift,
)

_HALF3 = Fraction(3, 2)


def l_constant(m: Rational) -> Rational:
    """The constant relating the orbit scale to the gravity parameter: 1 + 2m + 3m^2/2."""
    m = Fraction(m)
    return 1 + 2 * m + _HALF3 * m * m


@dataclass(frozen=True)
class ModelParams:
    """Problem constants for a given mean-motion ratio m.

    m is the ratio of the two mean motions, lam the homotopy weight of the
    forcing (m^2 recovers the physical problem), a the circular-orbit radius,
    k = a^3 * l the derived gravity parameter.
    """

    m: Rational
    l: Rational
    lam: Rational
    a: Rational
    k: Rational

    @classmethod
    def from_m(cls, m: Rational, lam: Rational | None = None, a: Rational = Fraction(1)) -> "ModelParams":
        m = Fraction(m)
        a = Fraction(a)
        l = l_constant(m)
        lam_val = m * m if lam is None else Fraction(lam)
        return cls(m=m, l=l, lam=lam_val, a=a, k=a**3 * l)


def first_order(m: Rational) -> tuple:
    """Exact closed forms of the two grade-1 coefficients (a[1][1], a[1][-1])."""
    m = Fraction(m)
    den = 6 - 4 * m + m * m
    a11 = -Fraction(9, 16) * (2 + 4 * m + 3 * m * m) / den
    a1m1 = Fraction(3, 16) * (38 + 28 * m + 9 * m * m) / den
    return a11, a1m1


@dataclass(frozen=True)
class CoeffTable:
    """Triangular exact table: grade-j slice holds a[j][sigma] for |sigma| <= j."""

    params: ModelParams
    J: int
    p_slices: tuple  # tuple[FourierSlice], index j-1 holds the grade-j slice

    def slice(self, j: int) -> FourierSlice:
        if not 1 <= j <= self.J:
            raise IndexError(f"grade {j} outside table range 1..{self.J}")
        return self.p_slices[j - 1]

    def entry(self, j: int, sigma: int) -> Rational:
        return self.slice(j).coeff(sigma)

    def p_series(self, J: int | None = None) -> GradedSeries:
        J = self.J if J is None else J
        if J > self.J:
            raise ValueError(f"table holds only {self.J} grades")
        return GradedSeries(J, {j: self.p_slices[j - 1] for j in range(1, J + 1)})

    def q_series(self, J: int | None = None) -> GradedSeries:
        return self.p_series(J).reflected()


def forcing_order(table: CoeffTable, r: int) -> FourierSlice:
    """Grade-r forcing slice.

    Sign convention: the solved per-frequency system reads
    [4*sigma^2 + 4(1+m)*sigma + 3l/2] a[r][sigma] + (3l/2) a[r][-sigma]
    = -A[r][sigma], so the degenerate r = 1 seed is {-1: -3/2, +1: 0}.
    For r >= 2 the slice collects (3/2) q_{r-1} e^{-2 i tau} plus l times the
    grade-r part of the above-linear remainder of the binomial product.
    """
    if r == 1:
        return FourierSlice.from_dict(1, {-1: -_HALF3, 1: Fraction(0)})
    if table.J < r - 1:
        raise ValueError(f"need a complete table through grade {r - 1}")
    p = table.p_series(r - 1)
    q = p.reflected()
    remainder_p, _ = remainder_series(p, q, r)
    q_prev = q.slices.get(r - 1, FourierSlice.zero((r - 1) % 2))
    forcing = slice_shift(q_prev, -1).scale(_HALF3)
    rem_r = remainder_p.slices.get(r)
    if rem_r is not None:
        forcing = slice_add(forcing, rem_r.scale(table.params.l))
    return forcing.embed(r)


def solve_order(forcing: FourierSlice, m: Rational, r: int) -> FourierSlice:
    """Solve the grade-r per-frequency pairs exactly.

    For each frequency the paired system couples sigma with -sigma; its
    determinant is 2 sigma^2 [2(4 sigma^2 - 1) - 4m + m^2], positive for
    every real m, and the zero frequency decouples to a[r][0] = -A[r][0]/(3l).
    """
    if forcing.order != r:
        raise ValueError(f"forcing slice must have order {r}")
    m = Fraction(m)
    l = l_constant(m)
    out = {}
    for sigma in forcing.frequencies():
        a_s = forcing.coeff(sigma)
        a_ms = forcing.coeff(-sigma)
        if sigma == 0:
            out[0] = -a_s / (3 * l)
        else:
            det = 2 * sigma * sigma * (2 * (4 * sigma * sigma - 1) - 4 * m + m * m)
            c_other = 4 * sigma * sigma - 4 * (1 + m) * sigma + _HALF3 * l
            out[sigma] = (_HALF3 * l * a_ms - c_other * a_s) / det
    return FourierSlice.from_dict(r, out)


def build_table(m: Rational, J: int, lam: Rational | None = None, a: Rational = Fraction(1)) -> CoeffTable:
    """Full triangular table through grade J; deterministic and lam-independent."""
    if J < 1:
        raise ValueError("J must be >= 1")
    params = ModelParams.from_m(m, lam=lam, a=a)
    a11, a1m1 = first_order(params.m)
    slices = [FourierSlice.from_dict(1, {1: a11, -1: a1m1})]
    table = CoeffTable(params=params, J=1, p_slices=tuple(slices))
    for r in range(2, J + 1):
        forcing = forcing_order(table, r)
        slices.append(solve_order(forcing, params.m, r))
        table = CoeffTable(params=params, J=r, p_slices=tuple(slices))
    return table


def closed_form_order2(m: Rational) -> tuple:
    """Grade-2 coefficients (a20, a22, a2m2) via the classical bracket route.

    The two sigma = +-2 entries come from the bracket combinations
    a[2][+-2] = -(2 * bracket * alpha1 + pair_bracket * alpha1 * alpha(-1))
    with alpha(+-1) = -a[1][+-1]; published reproductions of these formulas
    drop the alpha product, which breaks them (they then disagree both with
    the recursion and with the reference decimals), so the product is
    restored here.
    """
    m = Fraction(m)
    a11, a1m1 = first_order(m)
    l = l_constant(m)
    a20 = -Fraction(1, 4) * (a1m1 - a11) ** 2 - (2 * a11 + 1 / (2 * l)) * a1m1
    a22 = -(2 * hill_bracket_sq(2, m) * (-a11) + hill_bracket(2, 1, m) * a11 * a1m1)
    a2m2 = -(2 * hill_bracket_rd(-2, m) * (-a11) + hill_bracket(-2, -1, m) * a11 * a1m1)
    return a20, a22, a2m2


def hill_bracket(j: int, s: int, m: Rational) -> Rational:
    """Hill's paired-frequency combination coefficient [j, s]."""
    if j == 0:
        raise ValueError("bracket undefined for j = 0")
    m = Fraction(m)
    den = 2 * (4 * j * j - 1) - 4 * m + m * m
    num = 4 * s * (j - 1) + 4 * j * j + 4 * j - 2 - 4 * (s - j + 1) * m + m * m
    return -Fraction(s, j) * num / den


def hill_bracket_sq(j: int, m: Rational) -> Rational:
    """Hill's square-bracket coefficient with the m^2 factor stripped."""
    if j == 0:
        raise ValueError("bracket undefined for j = 0")
    m = Fraction(m)
    den = 2 * (4 * j * j - 1) - 4 * m + m * m
    num = 4 * j * j - 8 * j - 2 - 4 * (j + 2) * m - 9 * m * m
    return -Fraction(3, 16 * j * j) * num / den


def hill_bracket_rd(j: int, m: Rational) -> Rational:
    """Hill's round-bracket coefficient with the m^2 factor stripped."""
    if j == 0:
        raise ValueError("bracket undefined for j = 0")
    m = Fraction(m)
    den = 2 * (4 * j * j - 1) - 4 * m + m * m
    num = 20 * j * j - 16 * j + 2 - 4 * (5 * j - 2) * m + 9 * m * m
    return -Fraction(3, 16 * j * j) * num / den


def fourier_coefficients(table: CoeffTable, lam: Rational) -> dict:
    """Fourier coefficients a_s of the orbit, truncated at the table order.

    a_0 = a (1 - sum over even grades of a[2s][0] lam^(2s));
    a_(+-sigma) = -a sum_s a[sigma+2s][+-sigma] lam^(sigma+2s).
    """
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("lam must be >= 0")
    a = table.params.a
    out = {0: a * (1 - sum(
        table.entry(j, 0) * lam**j for j in range(2, table.J + 1, 2)
    ))}
    for sigma in range(1, table.J + 1):
        for sign in (1, -1):
            total = Fraction(0)
            for j in range(sigma, table.J + 1, 2):
                total += table.entry(j, sign * sigma) * lam**j
            out[sign * sigma] = -a * total
    return out


def ode_residual(table: CoeffTable, J: int) -> tuple:
    """Residual of the governing pair after substituting the truncated series.

    Works on the raw equations (full binomial product, not the split
    remainder), so it is an independent check of the builder.  Returns the
    graded residuals of the two equations; a correct table makes every grade
    <= J exactly zero.
    """
    if table.J < J:
        raise ValueError(f"table order {table.J} < requested residual grade {J}")
    m, l = table.params.m, table.params.l
    p = table.p_series(J)
    q = p.reflected()
    product_p = graded_mul(
        binomial_power(p, Fraction(-1, 2), J),
        binomial_power(q, Fraction(-3, 2), J),
        J,
    )

    def lhs(series: GradedSeries, rotation_sign: int) -> GradedSeries:
        # second derivative plus rotational first-derivative term:
        # coefficient at sigma picks up -4 sigma^2 -+ 4(1+m) sigma.
        return series.map_slices(
            lambda j, s: s.map_coeffs(
                lambda sigma, c: (-4 * sigma * sigma - rotation_sign * 4 * (1 + m) * sigma) * c
            )
        )

    # l(1 - p) - l * (1-p)^(-1/2) (1-q)^(-3/2): grade-0 parts cancel exactly.
    def gravity(series: GradedSeries, product: GradedSeries) -> GradedSeries:
        const = GradedSeries(J, {0: FourierSlice.unit().scale(l)})
        return const.add(series.scale(-l)).add(product.scale(-l))

    # forcing (3/2) lam (q - 1) e^{-2 i tau}: shift frequency first, then grade.
    def forcing(series: GradedSeries, freq_shift: int) -> GradedSeries:
        shifted = GradedSeries(J)
        unit_term = FourierSlice.from_dict(1, {freq_shift: Fraction(-1)})
        shifted._set(1, unit_term.scale(_HALF3))
        for j, s in series.slices.items():
            if j + 1 <= J:
                moved = slice_shift(s, freq_shift).scale(_HALF3)
                existing = shifted.slices.get(j + 1)
                shifted._set(j + 1, slice_add(existing, moved) if existing else moved)
        return shifted

    res_p = (
        lhs(p, +1)
        .add(gravity(p, product_p))
        .add(forcing(q, -1).scale(-1))
    )
    product_q = product_p.reflected()
    res_q = (
        lhs(q, -1)
        .add(gravity(q, product_q))
        .add(forcing(p, +1).scale(-1))
    )
    return res_p, res_q


def defining_system_residual(table: CoeffTable, r: int) -> FourierSlice:
    """Exact residual slice of the grade-r per-frequency linear system.

    Zero everywhere iff the stored grade-r entries solve
    [4 sigma^2 + 4(1+m) sigma + 3l/2] a[r][sigma] + (3l/2) a[r][-sigma]
    + A[r][sigma] = 0 for every frequency.
    """
    m, l = table.params.m, table.params.l
    forcing = forcing_order(table, r)
    residual = {}
    for sigma in forcing.frequencies():
        lhs = (4 * sigma * sigma + 4 * (1 + m) * sigma + _HALF3 * l) * table.entry(r, sigma)
        lhs += _HALF3 * l * table.entry(r, -sigma)
        residual[sigma] = lhs + forcing.coeff(sigma)
    return FourierSlice.from_dict(r, residual)


class DeterminantCheck(NamedTuple):
    value: RationalInterval
    verdict: str  # "zero", "nonzero", or "indeterminate"


def periodicity_determinant(m: Rational, tol: Rational = Fraction(1, 10**12)) -> DeterminantCheck:
    """Enclosure of the periodicity determinant; certifies it zero or nonzero.

    The determinant is -16 pi (1+m) chi (chi + 2(1+m))^2 sin^2(pi chi) with
    chi = sqrt(1 + 2m - m^2/2); the solution family is well posed wherever it
    does not vanish.
    """
    m = Fraction(m)
    tol = Fraction(tol)
    radicand = 1 + 2 * m - m * m / 2
    if radicand < 0:
        raise ValueError("negative radicand: no real frequency chi")
    # chi rational (perfect-square radicand) makes exact zero detection possible.
    num_root = _exact_sqrt(radicand.numerator)
    den_root = _exact_sqrt(radicand.denominator)
    if num_root is not None and den_root is not None:
        chi_exact = Fraction(num_root, den_root)
        chi = RationalInterval.point(chi_exact)
        if chi_exact.denominator == 1:
            return DeterminantCheck(RationalInterval.point(Fraction(0)), "zero")
        sin_iv = sin_pi_times(chi_exact, tol)
    else:
        chi = interval_sqrt(RationalInterval.point(radicand), tol / 64)
        pi_iv = interval_pi(tol / 64)
        theta = chi * pi_iv
        sin_iv = _interval_sin(theta, tol / 64)
    pi_iv = interval_pi(tol / 64)
    value = (
        RationalInterval.point(Fraction(-16))
        * pi_iv
        * (1 + m)
        * chi
        * (chi + 2 * (1 + m)).squared()
        * sin_iv.squared()
    )
    value = round_interval(value, 220)
    if value.lo > 0 or value.hi < 0:
        verdict = "nonzero"
    elif value.lo == value.hi == 0:
        verdict = "zero"
    else:
        verdict = "indeterminate"
    return DeterminantCheck(value, verdict)


def _exact_sqrt(n: int):
    import math

    r = math.isqrt(n)
    return r if r * r == n else None


def _interval_sin(theta: RationalInterval, tol: Fraction) -> RationalInterval:
    """Taylor enclosure of sin on an interval argument (Lipschitz widening)."""
    mid = theta.mid
    half_width = theta.width / 2
    total = Fraction(0)
    term = mid
    k = 0
    t2 = mid * mid
    while True:
        total += term
        k += 1
        term = -term * t2 / ((2 * k) * (2 * k + 1))
        if abs(term) <= tol and (2 * k) * (2 * k + 1) > t2:
            break
    rem = abs(term)
    lo = max(Fraction(-1), total - rem - half_width)
    hi = min(Fraction(1), total + rem + half_width)
    return RationalInterval(lo, hi)


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------


def table_to_dict(table: CoeffTable) -> dict:
    entries = []
    for j in range(1, table.J + 1):
        for sigma in table.slice(j).frequencies():
            entries.append(
                {"j": j, "sigma": sigma, "value": _frac_str(table.entry(j, sigma))}
            )
    return {"m": _frac_str(table.params.m), "J": table.J, "entries": entries}


def table_to_json(table: CoeffTable) -> str:
    return json.dumps(table_to_dict(table), indent=2, sort_keys=False) + "\n"


def table_to_csv(table: CoeffTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["j", "sigma", "value"])
    for entry in table_to_dict(table)["entries"]:
        writer.writerow([entry["j"], entry["sigma"], entry["value"]])
    return buf.getvalue()


def _frac_str(x: Rational) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
