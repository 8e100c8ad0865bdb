"""Empirical Revenue Maximization: the pricing rule and its revenue, exact or by Monte Carlo."""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import quadrature
from .curve import RevenueCurve, _check_range, opt
from .errors import DegenerateRegion, EmptySample, OutOfRange

DEFAULT_TOL = 1e-9
SHARD_SIZE = 1 << 16


class Region(enum.Enum):
    R = "R"  # both quantiles >= q*
    L = "L"  # both quantiles < q*
    B = "B"  # one on each side


@dataclass(frozen=True)
class ErmEstimate:
    value: float
    method: str  # "exact-1", "exact-2" or "monte-carlo"
    std_error: float = 0.0
    trials: int = 0
    n_samples: int = 0

    @property
    def exact(self) -> bool:
        return self.method != "monte-carlo"


# -- pricing rules -------------------------------------------------------------


def e2(curve: RevenueCurve, q1: float, q2: float) -> float:
    """Expected revenue of the two-sample ERM price given sample quantiles ``q1``, ``q2``."""
    _check_range([q1, q2])
    v1, v2 = float(curve.v(q1)), float(curve.v(q2))
    if v1 == v2:
        return float(curve.r(max(q1, q2)))
    (q_hi, v_hi), (q_lo, v_lo) = sorted([(q1, v1), (q2, v2)], key=lambda t: -t[1])
    if v_hi >= 2 * v_lo:
        return float(curve.r(q_hi))
    return float(curve.r(q_lo))


def erm_price(values: Sequence[float]) -> float:
    """Sample value maximizing revenue against the empirical distribution.

    Ties in empirical revenue go to the higher price, which is the two-sample
    rule "post the max iff max >= 2 * min".
    """
    vals = np.sort(np.asarray(values, dtype=float))[::-1]
    if vals.size == 0:
        raise EmptySample("ERM needs at least one sample")
    # number of samples >= each candidate, counting equal values
    counts = vals.size - np.searchsorted(vals[::-1], vals, side="left")
    emp = vals * counts
    return float(vals[int(np.argmax(emp))])


def _chosen_quantile(curve: RevenueCurve, q: np.ndarray) -> np.ndarray:
    """Quantile of the sample whose value ERM posts, one row of ``q`` per trial."""
    qs = np.sort(q, axis=1)
    p = curve.v(qs)
    n = qs.shape[1]
    k = np.arange(n)
    is_end = np.ones_like(p, dtype=bool)
    is_end[:, :-1] = p[:, 1:] < p[:, :-1]
    # last index of each equal-price group; equal prices favour the larger quantile
    end = np.where(is_end, k, n)
    end = np.minimum.accumulate(end[:, ::-1], axis=1)[:, ::-1]
    emp = p * (end + 1)
    best = np.argmax(emp, axis=1)
    rows = np.arange(qs.shape[0])
    return qs[rows, end[rows, best]]


# -- thresholds ----------------------------------------------------------------


def _tau_upper(curve: RevenueCurve, q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    k = curve.n_pieces
    w = 0.5 * curve.v(q)
    j = np.searchsorted(-curve.prices, -w, side="left")
    j = np.maximum(j, curve.piece_index(q) + 1)
    piece = np.clip(j, 1, k) - 1
    x = np.nan_to_num(curve.solve_price(w, piece), nan=0.0, posinf=1.0, neginf=0.0)
    x = np.clip(x, np.maximum(q, curve.qs[piece]), curve.qs[piece + 1])
    return np.where(j <= k, x, 1.0)


def _tau_lower(curve: RevenueCurve, q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    k = curve.n_pieces
    w = 2.0 * curve.v(q)
    j = np.searchsorted(-curve.prices, -w, side="right") - 1
    piece = np.clip(j, 0, k - 1)
    x = np.nan_to_num(curve.solve_price(w, piece), nan=0.0, posinf=1.0, neginf=0.0)
    x = np.clip(x, curve.qs[piece], curve.qs[piece + 1])
    x = np.where(j >= k, 1.0, x)
    return np.where(j < 0, 0.0, np.minimum(x, q))


def _as_output(x):
    return float(x) if np.ndim(x) == 0 else x


def threshold_upper(curve: RevenueCurve, q):
    """``min(1, sup{x >= q : 2 v(x) > v(q)})``: above it ERM posts the price of ``q``."""
    _check_range(q)
    return _as_output(_tau_upper(curve, q))


def threshold_lower(curve: RevenueCurve, q):
    """``sup{x <= q : v(x) >= 2 v(q)}`` (0 when empty): below it ERM posts the higher price."""
    _check_range(q)
    return _as_output(_tau_lower(curve, q))


def quantile_at_price(curve: RevenueCurve, p: float) -> float:
    """Largest quantile whose price is at least ``p`` (0 if none)."""
    P = curve.prices
    k = curve.n_pieces
    j = int(np.searchsorted(-P, -p, side="right")) - 1
    if j < 0:
        return 0.0
    if j >= k:
        return 1.0
    if curve.flat[j]:
        return float(curve.qs[j])
    x = float(curve.solve_price(p, j))
    return min(max(x, float(curve.qs[j])), float(curve.qs[j + 1]))


# -- exact expectations -------------------------------------------------------


def erm1_exact(curve: RevenueCurve) -> ErmEstimate:
    return ErmEstimate(float(curve.cumulative[-1]), "exact-1", n_samples=1)


def _split_points(curve: RevenueCurve, lo: float, hi: float) -> np.ndarray:
    # quantiles where the upper threshold passes through a breakpoint
    pre = [quantile_at_price(curve, 2 * p) for p in curve.prices[1:]]
    pts = np.concatenate((curve.qs, pre, [lo, hi]))
    return pts[(pts >= lo) & (pts <= hi)]


def _pair_integral(curve, q_lo, q_hi, x_lo, x_hi, tol):
    """Integral over lower quantile q in [q_lo, q_hi] of the integral of e2 over upper quantile
    x in [max(q, x_lo), x_hi]."""

    def inner(q):
        lo = np.maximum(q, x_lo) if x_lo is not None else q
        tau = _tau_upper(curve, q)
        c = np.clip(tau, lo, x_hi)
        return curve.integral(lo, c) + (x_hi - c) * curve.r(q)

    value, _ = quadrature.integrate(inner, _split_points(curve, q_lo, q_hi), tol=tol)
    return value


def erm2_exact(curve: RevenueCurve, tol: float = DEFAULT_TOL) -> ErmEstimate:
    """ERM(F, 2) as twice the integral of e2 over ordered pairs q < x."""
    if not tol > 0:
        raise OutOfRange("tol must be positive")
    value = 2.0 * _pair_integral(curve, 0.0, 1.0, None, 1.0, tol / 2.0)
    return ErmEstimate(value, "exact-2", n_samples=2)


def erm2_region_exact(curve: RevenueCurve, region: Region | str, tol: float = DEFAULT_TOL) -> ErmEstimate:
    """Expected e2 conditioned on the sample pair lying in ``region``."""
    region = Region(region)
    if not tol > 0:
        raise OutOfRange("tol must be positive")
    qs = opt(curve).q_star
    if region is Region.R:
        if qs >= 1:
            raise DegenerateRegion("region R is empty when q* = 1")
        factor = 2.0 / (1 - qs) ** 2
        raw = _pair_integral(curve, qs, 1.0, None, 1.0, tol / factor)
    elif region is Region.L:
        if qs <= 0:
            raise DegenerateRegion("region L is empty when q* = 0")
        factor = 2.0 / qs**2
        raw = _pair_integral(curve, 0.0, qs, None, qs, tol / factor)
    else:
        if not 0 < qs < 1:
            raise DegenerateRegion(f"region B is empty when q* = {qs}")
        factor = 1.0 / (qs * (1 - qs))
        raw = _pair_integral(curve, 0.0, qs, qs, 1.0, tol / factor)
    return ErmEstimate(factor * raw, "exact-2", n_samples=2)


def cond_given_min(curve: RevenueCurve, q):
    """E[e2 | min(q1, q2) = q] for a pair uniform on [0, 1]^2."""
    q = np.asarray(q, dtype=float)
    tau = _tau_upper(curve, q)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (curve.integral(q, tau) + (1 - tau) * curve.r(q)) / (1 - q)
    return _as_output(np.where(q >= 1, curve.r(q), out))


def cond_given_max(curve: RevenueCurve, q):
    """E[e2 | max(q1, q2) = q] for a pair uniform on [0, 1]^2."""
    q = np.asarray(q, dtype=float)
    t = _tau_lower(curve, q)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (curve.integral(0.0, t) + (q - t) * curve.r(q)) / q
    return _as_output(np.where(q <= 0, 0.0, out))


# -- Monte Carlo -------------------------------------------------------------


def _worker_count() -> int | None:
    env = os.environ.get("ERM2_THREADS")
    if env:
        return max(1, int(env))
    return None


def erm_mc(curve: RevenueCurve, n: int, trials: int, seed: int) -> ErmEstimate:
    """Monte Carlo estimate of ERM(F, n).

    The fresh buyer is integrated out: each trial contributes the revenue
    ``r(q)`` of the posted sample's quantile. Trials are split into fixed-size
    shards seeded from ``(seed, shard index)`` and reduced in shard order, so
    the result does not depend on the number of worker threads.
    """
    if n < 1 or trials < 1:
        raise OutOfRange("n and trials must be at least 1")
    children = np.random.SeedSequence(seed).spawn(math.ceil(trials / SHARD_SIZE))

    def shard(i):
        size = min(SHARD_SIZE, trials - i * SHARD_SIZE)
        q = np.random.default_rng(children[i]).random((size, n))
        rev = curve.r(_chosen_quantile(curve, q))
        mean = rev.mean()
        return size, mean, float(np.sum((rev - mean) ** 2))

    idx = range(len(children))
    if len(children) > 1:
        with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
            parts = list(pool.map(shard, idx))
    else:
        parts = [shard(0)]

    count, mean, m2 = 0, 0.0, 0.0
    for size, m, s in parts:
        delta = m - mean
        total = count + size
        mean += delta * size / total
        m2 += s + delta * delta * count * size / total
        count = total
    var = m2 / (count - 1) if count > 1 else 0.0
    return ErmEstimate(float(mean), "monte-carlo", math.sqrt(var / count), trials, n)
