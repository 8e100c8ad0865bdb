"""Closed-form worst-case lower bounds on two-sample ERM revenue, as fractions of OPT.

The sample square is split by the revenue-maximizing quantile q* into
R (both samples at or above q*), L (both below) and B (one on each side).
Each region has its own bound; :func:`combined_bound` weighs them by the
region probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundViolated, OutOfRange

DELTA = 0.15117
# constant for region L as used in the final combination (bound_L(DELTA) rounded down)
L_CONSTANT = 0.528
THEOREM_CONSTANT = 0.509
GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class BoundReport:
    q_star: float
    delta: float
    gamma: float
    bound_R: float
    bound_L: float
    bound_B: float
    combined: float


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise OutOfRange(msg)


# -- region R ------------------------------------------------------------------


def _bound_R_high(q_star: float) -> float:
    # 1/3 + (1/2) * sum_{n>=3} h^(n-3) / n with h = 1 - q*; the closed form
    # 1/3 - 1/(4h) - 1/(2h^2) - log(q*)/(2h^3) cancels badly as h -> 0
    h = 1.0 - q_star
    total, term, n = 0.0, 1.0, 3
    while True:
        add = term / n
        total += add
        if add < 1e-18 * total:
            break
        term *= h
        n += 1
    return 1.0 / 3.0 + 0.5 * total


def bound_R_closed_form(q_star: float) -> float:
    """Unsimplified branch formulas, kept for cross-checking the series evaluation."""
    h = 1.0 - q_star
    if q_star >= 2 / 3:
        return 1 / 3 - 1 / (4 * h) - 1 / (2 * h**2) - math.log(q_star) / (2 * h**3)
    return _bound_R_low(q_star)


def _bound_R_low(q_star: float) -> float:
    h = 1.0 - q_star
    inner = 2 / 9 - (q_star / 4) ** 2 + (q_star / 2) ** 3 / 3 + math.log(2 / 3) / 2
    return 2 / 3 - inner / h**3


def bound_R(q_star: float) -> float:
    _require(0 <= q_star < 1, f"bound_R needs 0 <= q* < 1, got {q_star}")
    if q_star >= 2 / 3:
        return _bound_R_high(q_star)
    return _bound_R_low(q_star)


def cdec_bound(q: float, r_q: float) -> float:
    """Lower bound on E[e2 | min(q1, q2) = q] for a pair in region R, given r(q)."""
    _require(0 < q < 1, f"cdec_bound needs 0 < q < 1, got {q}")
    _require(r_q >= 0, f"revenue must be nonnegative, got {r_q}")
    if q <= 2 / 3:
        return r_q * (1 - q / (16 * (1 - q)))
    return r_q * (0.5 + 1 / (4 * q))


# -- region L ------------------------------------------------------------------


def _far_from_linear(delta: float) -> float:
    return 0.5 + 3 * delta / 16


def _far_from_constant(delta: float) -> float:
    g = delta / (1 + delta)
    return 64 / 3 * g**5 - 8 * g**4 + 8 / 3 * g**3 - 2 / 3 * g**2 - g + 2 / 3


def bound_L(delta: float) -> float:
    _require(0 <= delta <= 1, f"delta must lie in [0, 1], got {delta}")
    return min(_far_from_linear(delta), _far_from_constant(delta))


def parab_factor(t: float, q: float) -> float:
    """``(t/q)^2 - t/q + 1``: lower bound on E[e2 | max = q] / r(q) given the lower threshold t."""
    y = t / q
    return y * y - y + 1


# -- region B ------------------------------------------------------------------


def trr_bound(m: float) -> float:
    _require(0 <= m <= 1, f"m must lie in [0, 1], got {m}")
    h = (1 + m) / 2
    return h - 0.5 * h * h


def bound_B(q_star: float) -> float:
    _require(0 <= q_star <= 1, f"bound_B needs 0 <= q* <= 1, got {q_star}")
    return trr_bound(1 / (1 + q_star))


# -- combination ---------------------------------------------------------------


def combined_bound(q_star: float, delta: float = DELTA, l_constant: float = L_CONSTANT) -> BoundReport:
    _require(0 <= q_star < 1, f"combined_bound needs 0 <= q* < 1, got {q_star}")
    bR, bB = bound_R(q_star), bound_B(q_star)
    total = (1 - q_star) ** 2 * bR + q_star**2 * l_constant + 2 * q_star * (1 - q_star) * bB
    return BoundReport(q_star, delta, delta / (1 + delta), bR, l_constant, bB, total)


def golden_section(f, lo: float, hi: float, tol: float = 1e-7, maximize: bool = False):
    """Golden-section search on [lo, hi]; returns ``(x, f(x))``."""
    sign = -1.0 if maximize else 1.0
    a, b = lo, hi
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = sign * f(x1), sign * f(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = sign * f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = sign * f(x2)
    # the endpoints may beat the interior (monotone objectives)
    cands = [(sign * f(x), x) for x in (lo, 0.5 * (a + b), hi)]
    best = min(cands, key=lambda t: t[0])
    return best[1], sign * best[0]


def grid_golden(f, lo: float, hi: float, grid: int = 10_000, tol: float = 1e-7, maximize: bool = False):
    """Grid scan to find a bracket, then golden-section refinement inside it."""
    xs = np.linspace(lo, hi, grid + 1)
    ys = np.array([f(x) for x in xs])
    i = int(np.argmax(ys) if maximize else np.argmin(ys))  # first index breaks exact ties
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, grid)]
    x, y = golden_section(f, a, b, tol=tol, maximize=maximize)
    better = y > ys[i] if maximize else y < ys[i]
    return (float(x), float(y)) if better or y == ys[i] else (float(xs[i]), float(ys[i]))


def optimize_delta(lo: float = 0.0, hi: float = 1.0, grid: int = 1000):
    return grid_golden(bound_L, lo, hi, grid=grid, maximize=True)


def minimize_combined(lo: float = 0.0, hi: float | None = None, grid: int = 10_000, check: bool = True):
    """Minimise the combined bound over q*; raises BoundViolated if it falls to 0.509 or below."""
    if hi is None:
        hi = 1.0 - 1e-9
    q, value = grid_golden(lambda x: combined_bound(x).combined, lo, hi, grid=grid)
    if check and value <= THEOREM_CONSTANT:
        raise BoundViolated(f"combined bound {value} at q*={q} is not above {THEOREM_CONSTANT}")
    return q, value


# -- order statistics of two uniform quantiles --------------------------------


def order_stat(kind: str, q: float, m: float = 0.0) -> float:
    """Densities and conditional means of min/max of two uniform quantiles.

    ``min-density``: density of min(q1, q2) for a pair uniform on [m, 1]^2.
    ``max-density``: density of max(q1, q2) for a pair uniform on [0, 1]^2.
    ``max-cond-below``: E[max | max <= q]. ``max-cond-above``: E[max | max >= q].
    """
    if kind == "min-density":
        _require(0 <= m < 1 and m <= q <= 1, f"need 0 <= m <= q <= 1 and m < 1, got q={q}, m={m}")
        return 2 * (1 - q) / (1 - m) ** 2
    _require(0 <= q <= 1, f"q must lie in [0, 1], got {q}")
    if kind == "max-density":
        return 2 * q
    if kind == "max-cond-below":
        return 2 / 3 * q
    if kind == "max-cond-above":
        if q == 1:
            return 1.0
        # (1 - q^3) / (1 - q^2) = (1 + q + q^2) / (1 + q)
        return 2 / 3 * (1 + q + q * q) / (1 + q)
    raise OutOfRange(f"unknown order statistic {kind!r}")
