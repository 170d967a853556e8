"""Orbit evaluation: deviations (xi, eta) and planar coordinates (x, y).

Phases are rational multiples of pi; trigonometric values are exact where
they are rational and two-sided enclosures otherwise, so exported decimals
always carry honest direction tags.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import (
    Rational,
    RationalInterval,
    cos_pi_times,
    render_interval,
    round_interval,
    sin_pi_times,
)
from .hill_coeffs import CoeffTable

_TRIG_TOL = Fraction(1, 2**120)
_ROUND_BITS = 192


def worker_count() -> int:
    """Parallelism cap from HILLVAR_THREADS (defaults to sequential)."""
    raw = os.environ.get("HILLVAR_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, min(n, os.cpu_count() or 1))


def cosine_profiles(table: CoeffTable, lam: Rational, n_max: int) -> tuple:
    """Collect xi and eta as single cosine/sine profiles over frequencies >= 0.

    xi = -sum a[j][j-2s] lam^j cos(2(j-2s)tau) folds into
    sum_nu xi_c[nu] cos(2 nu tau) with nu >= 0 (cosine is even); eta folds
    likewise into sum_nu eta_s[nu] sin(2 nu tau).
    """
    if n_max > table.J:
        raise ValueError(f"n_max {n_max} exceeds table order {table.J}")
    lam = Fraction(lam)
    xi_c: dict = {}
    eta_s: dict = {}
    for j in range(1, n_max + 1):
        scale = lam**j
        s = table.slice(j)
        for sigma in s.frequencies():
            c = s.coeff(sigma) * scale
            if c == 0:
                continue
            nu = abs(sigma)
            xi_c[nu] = xi_c.get(nu, Fraction(0)) - c
            if sigma != 0:
                sign = 1 if sigma > 0 else -1
                eta_s[nu] = eta_s.get(nu, Fraction(0)) - sign * c
    return xi_c, eta_s


def _round_keep_exact(iv: RationalInterval) -> RationalInterval:
    # exact trig values have tiny denominators; preserve them as points
    if iv.lo == iv.hi:
        return iv
    return round_interval(iv, _ROUND_BITS)


def _trig_powers(tau: Rational, max_nu: int) -> tuple:
    """Enclosures of cos(2 nu tau), sin(2 nu tau) for nu = 0..max_nu, tau = r*pi.

    Uses the double-angle recurrences on the base enclosures; non-exact
    intermediates are directed-rounded to keep denominators bounded, exact
    rational values stay exact points.
    """
    two_tau = 2 * Fraction(tau)
    cos1 = cos_pi_times(two_tau, _TRIG_TOL)
    sin1 = sin_pi_times(two_tau, _TRIG_TOL)
    cos_list = [RationalInterval.point(Fraction(1)), cos1]
    sin_list = [RationalInterval.point(Fraction(0)), sin1]
    for _ in range(2, max_nu + 1):
        cos_list.append(_round_keep_exact(2 * cos1 * cos_list[-1] - cos_list[-2]))
        sin_list.append(_round_keep_exact(2 * cos1 * sin_list[-1] - sin_list[-2]))
    return cos_list, sin_list


@dataclass(frozen=True)
class OrbitSample:
    """One phase sample; tau is stored as the rational multiple of pi."""

    tau: Rational
    xi: RationalInterval
    eta: RationalInterval
    x: RationalInterval
    y: RationalInterval


def evaluate_xi_eta(table: CoeffTable, lam: Rational, tau_grid, n_max: int) -> list:
    """Enclosures of (xi, eta) at each grid phase (rational multiples of pi)."""
    xi_c, eta_s = cosine_profiles(table, lam, n_max)
    max_nu = max([0, *xi_c.keys(), *eta_s.keys()])
    # Exact table coefficients can be thousands of bits wide; snap each to a
    # narrow enclosing interval once so per-point arithmetic stays small.
    xi_iv = {
        nu: round_interval(RationalInterval.point(c), _ROUND_BITS)
        for nu, c in sorted(xi_c.items())
    }
    eta_iv = {
        nu: round_interval(RationalInterval.point(c), _ROUND_BITS)
        for nu, c in sorted(eta_s.items())
    }

    def at_tau(tau: Rational) -> tuple:
        cos_list, sin_list = _trig_powers(Fraction(tau), max_nu)
        exact = all(iv.lo == iv.hi for iv in cos_list) and all(
            iv.lo == iv.hi for iv in sin_list
        )
        xi = RationalInterval.point(Fraction(0))
        eta = RationalInterval.point(Fraction(0))
        for nu in xi_iv:
            xi = xi + cos_list[nu] * (xi_c[nu] if exact else xi_iv[nu])
        for nu in eta_iv:
            eta = eta + sin_list[nu] * (eta_s[nu] if exact else eta_iv[nu])
        if exact:
            return xi, eta
        return round_interval(xi, _ROUND_BITS), round_interval(eta, _ROUND_BITS)

    taus = list(tau_grid)
    workers = worker_count()
    if workers > 1 and len(taus) > 8:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(at_tau, taus))
    return [at_tau(t) for t in taus]


def evaluate_xy(
    table: CoeffTable,
    lam: Rational,
    tau: Rational,
    n_max: int,
    a: Rational | None = None,
) -> tuple:
    """Planar coordinates x = a(1+xi)cos(tau) - a eta sin(tau), y mirrored."""
    a = table.params.a if a is None else Fraction(a)
    tau = Fraction(tau)
    (xi, eta), = evaluate_xi_eta(table, lam, [tau], n_max)
    cos_t = cos_pi_times(tau, _TRIG_TOL)
    sin_t = sin_pi_times(tau, _TRIG_TOL)
    one_plus_xi = xi + 1
    x = (one_plus_xi * cos_t - eta * sin_t) * a
    y = (one_plus_xi * sin_t + eta * cos_t) * a
    return _round_keep_exact(x), _round_keep_exact(y)


def sample_orbit(
    table: CoeffTable,
    lam: Rational,
    samples: int,
    n_max: int,
    a: Rational | None = None,
) -> list:
    """Evaluate `samples` equally spaced phases over one full turn."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    a = table.params.a if a is None else Fraction(a)
    grid = [Fraction(2 * k, samples) for k in range(samples)]
    pairs = evaluate_xi_eta(table, lam, grid, n_max)
    out = []
    for tau, (xi, eta) in zip(grid, pairs):
        cos_t = cos_pi_times(tau, _TRIG_TOL)
        sin_t = sin_pi_times(tau, _TRIG_TOL)
        one_plus_xi = xi + 1
        x = _round_keep_exact((one_plus_xi * cos_t - eta * sin_t) * a)
        y = _round_keep_exact((one_plus_xi * sin_t + eta * cos_t) * a)
        out.append(OrbitSample(tau=tau, xi=xi, eta=eta, x=x, y=y))
    return out


def export_orbit(
    table: CoeffTable,
    lam: Rational,
    samples: int,
    n_max: int,
    fmt: str = "csv",
    digits: int = 10,
    path: str | None = None,
) -> str:
    """Render sampled trajectory as CSV or JSON; optionally write it to path."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"unsupported format {fmt!r}")
    rows = sample_orbit(table, lam, samples, n_max)

    def cell(iv: RationalInterval) -> str:
        return str(render_interval(iv, digits))

    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["tau", "xi", "eta", "x", "y"])
        for s in rows:
            writer.writerow(
                [f"{s.tau.numerator}/{s.tau.denominator}*pi", cell(s.xi), cell(s.eta), cell(s.x), cell(s.y)]
            )
        content = buf.getvalue()
    else:
        records = [
            {
                "tau": f"{s.tau.numerator}/{s.tau.denominator}*pi",
                "xi": {"text": render_interval(s.xi, digits).text, "tag": render_interval(s.xi, digits).tag},
                "eta": {"text": render_interval(s.eta, digits).text, "tag": render_interval(s.eta, digits).tag},
                "x": {"text": render_interval(s.x, digits).text, "tag": render_interval(s.x, digits).tag},
                "y": {"text": render_interval(s.y, digits).text, "tag": render_interval(s.y, digits).tag},
            }
            for s in rows
        ]
        content = json.dumps(records, indent=2) + "\n"
    if path is not None:
        tmp = f"{path}.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(content)
        os.replace(tmp, path)
    return content
