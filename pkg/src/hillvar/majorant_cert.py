"""Convergence certification for the coefficient series.

The signed recursion is dominated termwise by a nonnegative majorant
recursion whose row sums solve a cubic fixed-point equation in the reduced
parameters (epsilon, h).  Three conditions of increasing sharpness certify
that the majorant root series converges: a linear sufficient bound, a
quadratic-majorant bound, and the exact cube-root criterion.  All verdicts
are decided by exact rational comparisons; enclosures only report margins.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactnum import (
    Rational,
    RationalInterval,
    interval_cbrt,
    interval_sqrt,
)
from .hill_coeffs import (
    CoeffTable,
    ModelParams,
    first_order,
    forcing_order,
    l_constant,
)
from .series_core import FourierSlice, cubic_gain_series, poly_trim

_HALF3 = Fraction(3, 2)


@dataclass(frozen=True)
class ConvergenceParams:
    """Reduced parameters collapsing (m, lam) for the majorant cubic.

    epsilon = 3 (22 + 20m + 9m^2) lam / (8 (6 - 4m + m^2)), which also equals
    the exact first-order magnitude (|a[1][-1]| + |a[1][1]|) lam;
    h = (22 + 20m + 9m^2) l / (4 (6 - 4m + m^2)).
    """

    m: Rational
    lam: Rational
    epsilon: Rational
    h: Rational


def reduce_params(m: Rational, lam: Rational) -> ConvergenceParams:
    m = Fraction(m)
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("lam must be >= 0")
    den = 6 - 4 * m + m * m
    core = (22 + 20 * m + 9 * m * m) / den
    return ConvergenceParams(
        m=m,
        lam=lam,
        epsilon=Fraction(3, 8) * core * lam,
        h=Fraction(1, 4) * core * l_constant(m),
    )


@dataclass(frozen=True)
class Certificate:
    """Outcome of one convergence condition with its exact slack enclosure."""

    condition: str  # "sufficient", "quadratic", "exact", or "complex_disc"
    verdict: str  # "pass", "fail", or "indeterminate"
    margin: RationalInterval
    inputs: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def _inputs(p: ConvergenceParams, **extra) -> dict:
    out = {"m": p.m, "lam": p.lam, "epsilon": p.epsilon, "h": p.h}
    out.update(extra)
    return out


def sufficient_check(p: ConvergenceParams) -> Certificate:
    """Linear sufficient condition: epsilon <= 1 / (6 (1 + 2h)); exact comparison."""
    threshold = 1 / (6 * (1 + 2 * p.h))
    margin = threshold - p.epsilon
    return Certificate(
        condition="sufficient",
        verdict="pass" if margin >= 0 else "fail",
        margin=RationalInterval.point(margin),
        inputs=_inputs(p),
    )


def quadratic_majorant(
    p: ConvergenceParams, tol: Rational = Fraction(1, 10**12)
) -> tuple:
    """Quadratic-majorant condition and its closed-form root enclosure.

    The quadratic dominates the cubic termwise, so its branch-point condition
    epsilon <= 3 / (7 + 18h + sqrt((7 + 18h)^2 - 49)) is sufficient.  The
    verdict is decided exactly: pass iff the discriminant
    9 - 6 (7 + 18h) epsilon + 49 epsilon^2 is >= 0 on the near branch
    (epsilon (7 + 18h) <= 3).  On pass, the root enclosure of
    [3 + epsilon - sqrt(disc)] / (2 (4 + 9h - 4 epsilon)) is returned.
    """
    eps, h = p.epsilon, p.h
    s = 7 + 18 * h
    disc = 9 - 6 * s * eps + 49 * eps * eps
    passed = disc >= 0 and s * eps <= 3
    # margin: threshold - epsilon, threshold = 3 / (s + sqrt(s^2 - 49));
    # exact when the radicand is a perfect rational square, else an
    # enclosure refined until its sign agrees with the exact verdict
    radicand = s * s - 49
    exact_root = _rational_sqrt(radicand)
    if exact_root is not None:
        margin = RationalInterval.point(3 / (s + exact_root) - eps)
    else:
        step = Fraction(tol) / 8
        while True:
            sqrt_iv = interval_sqrt(RationalInterval.point(radicand), step)
            margin = 3 / (s + sqrt_iv) - eps
            if (margin.lo > 0) == passed and (margin.hi < 0) == (not passed):
                break
            step /= 2**8
    cert = Certificate(
        condition="quadratic",
        verdict="pass" if passed else "fail",
        margin=margin,
        inputs=_inputs(p),
    )
    if not passed:
        return None, cert
    root_iv = (3 + eps - interval_sqrt(RationalInterval.point(disc), Fraction(tol) / 8)) / (
        2 * (4 + 9 * h - 4 * eps)
    )
    return root_iv, cert


def _rational_sqrt(x: Rational):
    """Exact square root when x is a perfect rational square, else None."""
    import math

    x = Fraction(x)
    if x < 0:
        return None
    num = math.isqrt(x.numerator)
    den = math.isqrt(x.denominator)
    if num * num == x.numerator and den * den == x.denominator:
        return Fraction(num, den)
    return None


def _exact_condition_holds(p: ConvergenceParams) -> bool:
    """Exact rational decision of the cube-root criterion.

    With omega = (2h / (1 - epsilon + 2h))^(1/3) the condition
    epsilon <= (2 - omega - omega^2) / (4 + omega + omega^2) is equivalent to
    u <= t for u = omega + omega^2 and t = (2 - 4 epsilon) / (1 + epsilon)
    (requiring t >= 0).  u is the unique positive root of
    u^3 - 3 c u - c (c + 1) with c = omega^3 rational, so u <= t iff the
    cleared cubic is >= 0 at t.  No irrational arithmetic is needed.
    """
    eps, h = p.epsilon, p.h
    if eps >= 1:
        raise ValueError("exact condition needs epsilon < 1")
    t = (2 - 4 * eps) / (1 + eps)
    if t < 0:
        return False
    c = 2 * h / (1 - eps + 2 * h)
    return t**3 - 3 * c * t - c * (c + 1) >= 0


def exact_condition(
    p: ConvergenceParams, tol: Rational = Fraction(1, 10**12), max_refine: int = 12
) -> Certificate:
    """Exact cube-root criterion with an interval-safe margin report.

    The verdict comes from the exact cleared-cubic comparison; the margin
    enclosure (bound - epsilon) is refined until its sign confirms the
    verdict, so a straddling margin is never silently reported as decisive.
    """
    if p.epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    holds = _exact_condition_holds(p)
    eps, h = p.epsilon, p.h
    c = 2 * h / (1 - eps + 2 * h)
    step_tol = Fraction(tol)
    margin = None
    for _ in range(max_refine):
        omega = interval_cbrt(RationalInterval.point(c), step_tol)
        if omega.lo < 0:
            omega = RationalInterval(Fraction(0), omega.hi)
        bound = (2 - omega - omega.squared()) / (4 + omega + omega.squared())
        margin = bound - eps
        if (margin.lo > 0) == holds and (margin.hi < 0) == (not holds):
            break
        if margin.lo <= 0 <= margin.hi and _boundary_case(p, c):
            margin = RationalInterval.point(Fraction(0))
            break
        step_tol /= 2**8
    else:
        return Certificate(
            condition="exact",
            verdict="indeterminate",
            margin=margin,
            inputs=_inputs(p),
        )
    return Certificate(
        condition="exact",
        verdict="pass" if holds else "fail",
        margin=margin,
        inputs=_inputs(p),
    )


def _boundary_case(p: ConvergenceParams, c: Rational) -> bool:
    t = (2 - 4 * p.epsilon) / (1 + p.epsilon)
    return t >= 0 and t**3 - 3 * c * t - c * (c + 1) == 0


@dataclass(frozen=True)
class MajorantTable:
    """Nonnegative termwise upper bounds on the coefficient table entries."""

    m: Rational
    J: int
    slices: tuple  # tuple[FourierSlice]

    def slice(self, r: int) -> FourierSlice:
        if not 1 <= r <= self.J:
            raise IndexError(f"order {r} outside 1..{self.J}")
        return self.slices[r - 1]

    def entry(self, r: int, sigma: int) -> Rational:
        return self.slice(r).coeff(sigma)

    def row_sum(self, r: int) -> Rational:
        return sum(self.slice(r).coeffs)


def majorant_table(m_or_M: Rational, J: int) -> MajorantTable:
    """Worst-case recursion on absolute values.

    Seeds are the exact first-order magnitudes; each later order applies
    bound[r][sigma] = [(3l/2) F[r][-sigma] + (8 + 4m + 3l/2) F[r][sigma]]
    / (2 (6 - 4m + m^2)) where F is the forcing evaluated on the
    absolute-value table (every remainder coefficient is positive, so the
    substitution preserves domination).  For a complex-disc radius M the
    same formula applies once M is separately certified small enough.
    """
    m = Fraction(m_or_M)
    if m <= 0:
        raise ValueError("majorant recursion needs a positive ratio or radius")
    if J < 1:
        raise ValueError("J must be >= 1")
    l = l_constant(m)
    den = 2 * (6 - 4 * m + m * m)
    a11, a1m1 = first_order(m)
    slices = [FourierSlice.from_dict(1, {1: abs(a11), -1: abs(a1m1)})]
    params = ModelParams.from_m(m)
    for r in range(2, J + 1):
        proxy = CoeffTable(params=params, J=r - 1, p_slices=tuple(slices))
        forcing = forcing_order(proxy, r)
        bounds = {}
        for sigma in forcing.frequencies():
            f_s = forcing.coeff(sigma)
            f_ms = forcing.coeff(-sigma)
            bounds[sigma] = (_HALF3 * l * f_ms + (8 + 4 * m + _HALF3 * l) * f_s) / den
        slices.append(FourierSlice.from_dict(r, bounds))
    return MajorantTable(m=m, J=J, slices=tuple(slices))


def majorant_root_series(m: Rational, J: int) -> list:
    """Grading-variable series of the majorant cubic's vanishing root.

    The coefficient at grade r equals the majorant table's order-r row sum;
    tests pin that identity exactly.
    """
    p = reduce_params(m, Fraction(1))
    eps_hat, h = p.epsilon, p.h  # epsilon at lam = 1 is the linear coefficient
    z = [Fraction(0)] * (J + 1)
    for j in range(1, J + 1):
        gain = cubic_gain_series(z, j)
        z[j] = eps_hat * (Fraction(1) if j == 1 else z[j - 1]) + h * gain[j]
    return poly_trim(z, J)


def _vanishing_cubic(eps: Rational, h: Rational, z: Rational) -> Rational:
    """Cleared form of z = eps (1 + z) + h (3 - 2z) z^2 / (1 - z)^2."""
    return (
        (1 + 2 * h - eps) * z**3
        - (2 + 3 * h - eps) * z**2
        + (1 + eps) * z
        - eps
    )


def _poly_eval(poly, x):
    total = Fraction(0)
    for c in reversed(poly):
        total = total * x + c
    return total


def _poly_trimmed(poly):
    poly = list(poly)
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _poly_rem(a, b):
    """Remainder of a / b over the rationals; ascending coefficients."""
    a, b = _poly_trimmed(a), _poly_trimmed(b)
    while len(a) >= len(b):
        factor = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[i + shift] -= factor * c
        a = _poly_trimmed(a)
        if not a:
            break
    return a


def _poly_div_exact(a, b):
    """Exact quotient when b divides a."""
    a, b = _poly_trimmed(a), _poly_trimmed(b)
    out = [Fraction(0)] * (len(a) - len(b) + 1)
    while len(a) >= len(b):
        factor = a[-1] / b[-1]
        shift = len(a) - len(b)
        out[shift] = factor
        for i, c in enumerate(b):
            a[i + shift] -= factor * c
        a = _poly_trimmed(a)
        if not a:
            break
    return out


def unit_interval_root_count(p: ConvergenceParams) -> int:
    """Distinct roots of the cleared majorant cubic in (0, 1], by Sturm's rule.

    Entirely exact rational arithmetic (the squarefree part is taken first,
    so boundary double roots are counted once).  The exact condition is
    stated to be equivalent to this count being positive; the property suite
    checks that equivalence on parameter grids instead of assuming it.
    """
    eps, h = p.epsilon, p.h
    if h <= 0:
        raise ValueError("root counting needs h > 0 (z = 1 degenerates at h = 0)")
    if eps == 0:
        # F = z ((1+2h) z^2 - (2+3h) z + 1) and the quadratic has exactly one
        # root in (0, 1) since it is negative at z = 1
        return 1
    poly = [-eps, 1 + eps, -(2 + 3 * h - eps), 1 + 2 * h - eps]  # ascending
    deriv = _poly_trimmed([k * c for k, c in enumerate(poly)][1:])
    # gcd(F, F') via Euclid, then the squarefree part F / gcd
    a, b = _poly_trimmed(poly), deriv
    while b:
        a, b = b, _poly_rem(a, b)
    if len(a) > 1:
        poly = _poly_div_exact(poly, a)

    chain = [_poly_trimmed(poly), _poly_trimmed([k * c for k, c in enumerate(poly)][1:])]
    while len(chain[-1]) > 1:
        rem = _poly_rem(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])

    def variations(x):
        signs = [s for s in (_poly_eval(q, x) for q in chain) if s != 0]
        return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))

    count = variations(Fraction(0)) - variations(Fraction(1))
    # Sturm counts roots in (0, 1]; a root exactly at 0 (eps = 0) is excluded
    # by construction, but guard the degenerate constant chain anyway.
    return max(count, 0)


def majorant_root(p: ConvergenceParams, tol: Rational = Fraction(1, 10**12)) -> RationalInterval:
    """Enclosure of the smallest root in [0, 1) of the majorant cubic.

    Requires the exact condition to hold (otherwise the root sought need not
    exist); brackets by sign bisection on the cleared cubic and verifies the
    final enclosure with exact sign checks.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be > 0")
    cert = exact_condition(p, tol)
    if not cert.passed:
        raise ValueError("convergence not certified; no enclosed root is guaranteed")
    eps, h = p.epsilon, p.h
    if eps == 0:
        return RationalInterval.point(Fraction(0))
    lo = Fraction(0)
    hi = (1 + 2 * eps / (1 - eps)) / (3 * (1 + 2 * h / (1 - eps)))
    f_lo, f_hi = _vanishing_cubic(eps, h, lo), _vanishing_cubic(eps, h, hi)
    if not (f_lo <= 0 <= f_hi):
        raise ArithmeticError("initial bracket fails the sign test")
    bits = 8
    while Fraction(1, 1 << bits) > tol:
        bits += 1
    bits += 8
    grid = 1 << bits
    while hi - lo > tol:
        mid = Fraction(((lo + hi) * grid).__floor__(), 2 * grid)
        if mid <= lo or mid >= hi:
            break
        if _vanishing_cubic(eps, h, mid) <= 0:
            lo = mid
        else:
            hi = mid
    assert _vanishing_cubic(eps, h, lo) <= 0 <= _vanishing_cubic(eps, h, hi)
    return RationalInterval(lo, hi)


def critical_m(tol: Rational = Fraction(1, 10**4)) -> RationalInterval:
    """Bracket the largest certified ratio with lam = m^2.

    Bisects the exact condition between the certified 1/7 and the failing
    1/6; only the bracket is reported.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be > 0")
    lo, hi = Fraction(1, 7), Fraction(1, 6)
    if not _exact_condition_holds(reduce_params(lo, lo * lo)):
        raise ArithmeticError("lower anchor unexpectedly fails certification")
    if _exact_condition_holds(reduce_params(hi, hi * hi)):
        raise ArithmeticError("upper anchor unexpectedly passes certification")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if _exact_condition_holds(reduce_params(mid, mid * mid)):
            lo = mid
        else:
            hi = mid
    return RationalInterval(lo, hi)


def quad_min_lower(a: Rational, b: Rational, c: Rational, M: Rational) -> Rational:
    """Lower bound of |a - 2bx + cx^2| over complex |x| <= M.

    Valid for positive a, b, c with ac - b^2 > 0 whenever M does not exceed
    the smaller root of (bc) x^2 - 2 (ac) x + (ab) = 0; the minimum is then
    attained on the real axis and equals a - 2bM + cM^2.
    """
    a, b, c, M = Fraction(a), Fraction(b), Fraction(c), Fraction(M)
    if not (a > 0 and b > 0 and c > 0):
        raise ValueError("coefficients must be positive")
    if a * c - b * b <= 0:
        raise ValueError("requires ac - b^2 > 0")
    if M < 0:
        raise ValueError("radius must be >= 0")
    q_at_m = b * c * M * M - 2 * a * c * M + a * b
    if not (q_at_m >= 0 and M <= a / b):
        raise ValueError("radius exceeds the validity threshold")
    return a - 2 * b * M + c * M * M


def disc_radius_ok(sigma: int, M: Rational) -> bool:
    """Exact test that M stays below the per-frequency denominator threshold.

    The threshold is the smaller root tied to 2(4 sigma^2 - 1) - 4m + m^2;
    it exceeds 1 for every frequency and decreases toward 1.
    """
    A = 2 * (4 * sigma * sigma - 1)
    M = Fraction(M)
    try:
        quad_min_lower(Fraction(A), Fraction(2), Fraction(1), M)
    except ValueError:
        return False
    return True


def complex_disc_certify(M: Rational, lam: Rational) -> Certificate:
    """Certify absolute convergence for every complex ratio with |m| <= M.

    Passes iff (i) 3 (1 - M)^2 >= 1 (so the scale constant l stays bounded
    away from zero on the disc and every denominator threshold holds) and
    (ii) the exact condition holds for the reduced parameters at M.
    """
    M = Fraction(M)
    lam = Fraction(lam)
    if M <= 0:
        raise ValueError("disc radius must be > 0")
    radius_margin_sq = 3 * (1 - M) ** 2 - 1  # sign matches (1 - 1/sqrt(3)) - M
    disc_ok = M <= 1 and radius_margin_sq >= 0
    sqrt3 = interval_sqrt(RationalInterval.point(Fraction(3)), Fraction(1, 10**12))
    radius_margin = (1 - 1 / sqrt3) - M
    if not disc_ok:
        return Certificate(
            condition="complex_disc",
            verdict="fail",
            margin=radius_margin,
            inputs={"M": M, "lam": lam},
        )
    inner = exact_condition(reduce_params(M, lam))
    margin = inner.margin if inner.margin.lo <= radius_margin.lo else radius_margin
    return Certificate(
        condition="complex_disc",
        verdict=inner.verdict,
        margin=margin,
        inputs={"M": M, "lam": lam, "epsilon": inner.inputs["epsilon"], "h": inner.inputs["h"]},
    )


def certificate_to_dict(cert: Certificate) -> dict:
    def fs(x) -> str:
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"

    out = {
        "condition": cert.condition,
        "verdict": cert.verdict,
        "margin_lo": fs(cert.margin.lo),
        "margin_hi": fs(cert.margin.hi),
    }
    for key in ("m", "M", "lam", "epsilon", "h"):
        if key in cert.inputs:
            out_key = {"lam": "lambda"}.get(key, key)
            out[out_key] = fs(cert.inputs[key])
    return out
