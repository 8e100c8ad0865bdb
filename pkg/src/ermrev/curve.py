"""Regular distributions as concave piecewise-linear revenue curves in quantile space.

A curve is stored as its breakpoints ``(q_i, r_i)`` with ``q_0 = 0``,
``q_k = 1`` and ``r_0 = 0``. Lower quantiles are higher prices: the price at
quantile ``q`` is ``v(q) = r(q) / q``, the slope of the ray from the origin.

The first linear piece passes through the origin, so ``v`` is constant on it.
That piece stands for an atom at the top of the support that has been spread
over a vanishing interval; ties between equal prices on it are resolved in
favour of the larger quantile by the ERM code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CurveParseError,
    InfeasibleBump,
    NegativeRevenue,
    NonConcave,
    NonMonotoneQuantiles,
    NonPositiveScale,
    NonzeroOrigin,
    OutOfRange,
)

CONCAVITY_TOL = 1e-12
# pieces whose tangent line misses the origin by less than this are collinear
# with the first piece and share its (constant) price
_FLAT_TOL = 1e-14


@dataclass(frozen=True)
class OptPoint:
    q_star: float
    opt: float


@dataclass(frozen=True, eq=False)
class RevenueCurve:
    """Immutable, validated revenue curve. Build it with :func:`make_curve`."""

    qs: np.ndarray
    rs: np.ndarray
    slopes: np.ndarray = field(init=False, repr=False)
    intercepts: np.ndarray = field(init=False, repr=False)
    flat: np.ndarray = field(init=False, repr=False)
    prices: np.ndarray = field(init=False, repr=False)
    cumulative: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        qs = np.array(self.qs, dtype=float)
        rs = np.array(self.rs, dtype=float)
        slopes = np.diff(rs) / np.diff(qs)
        intercepts = rs[:-1] - slopes * qs[:-1]
        intercepts[0] = 0.0
        flat = np.abs(intercepts) <= _FLAT_TOL * np.maximum(1.0, np.abs(rs[:-1]))
        flat[0] = True
        intercepts[flat] = 0.0

        # price at each breakpoint; q=0 takes the right limit (first slope)
        prices = np.empty_like(qs)
        prices[0] = slopes[0]
        prices[1:] = rs[1:] / qs[1:]
        # a breakpoint closing a flat piece carries the exact flat price
        prices[1:][flat] = slopes[0]
        prices = np.minimum.accumulate(prices)

        cumulative = np.concatenate(([0.0], np.cumsum(0.5 * np.diff(qs) * (rs[1:] + rs[:-1]))))
        for name, arr in (
            ("qs", qs),
            ("rs", rs),
            ("slopes", slopes),
            ("intercepts", intercepts),
            ("flat", flat),
            ("prices", prices),
            ("cumulative", cumulative),
        ):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def breakpoints(self) -> list[tuple[float, float]]:
        return [(float(q), float(r)) for q, r in zip(self.qs, self.rs)]

    @property
    def n_pieces(self) -> int:
        return len(self.qs) - 1

    def __eq__(self, other):
        if not isinstance(other, RevenueCurve):
            return NotImplemented
        return np.array_equal(self.qs, other.qs) and np.array_equal(self.rs, other.rs)

    def __hash__(self):
        return hash((self.qs.tobytes(), self.rs.tobytes()))

    def __repr__(self):
        return f"RevenueCurve({self.breakpoints!r})"

    # -- vectorised evaluation -------------------------------------------------

    def piece_index(self, q):
        """Index of the piece containing ``q``; a breakpoint belongs to the piece on its left."""
        idx = np.searchsorted(self.qs, q, side="left") - 1
        return np.clip(idx, 0, self.n_pieces - 1)

    def r(self, q):
        return np.interp(q, self.qs, self.rs)

    def v(self, q):
        q = np.asarray(q, dtype=float)
        i = self.piece_index(q)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(self.flat[i], self.slopes[0], self.r(q) / q)
        return out[()] if out.ndim == 0 else out

    def integral(self, a, b):
        """Exact integral of r over [a, b] (vectorised, a <= b)."""
        return self._antiderivative(b) - self._antiderivative(a)

    def _antiderivative(self, x):
        x = np.asarray(x, dtype=float)
        i = self.piece_index(x)
        rx = self.r(x)
        return self.cumulative[i] + 0.5 * (x - self.qs[i]) * (self.rs[i] + rx)

    def solve_price(self, w, piece):
        """Quantile on ``piece`` where the price equals ``w`` (piece must not be flat)."""
        a = self.slopes[piece]
        b = self.intercepts[piece]
        with np.errstate(divide="ignore", invalid="ignore"):
            return b / (w - a)


def _check_range(q) -> None:
    arr = np.asarray(q, dtype=float)
    if np.any(~(arr >= 0.0)) or np.any(~(arr <= 1.0)):
        raise OutOfRange(f"quantile outside [0, 1]: {q!r}")


def make_curve(breakpoints: Iterable[Sequence[float]]) -> RevenueCurve:
    pts = [(float(q), float(r)) for q, r in breakpoints]
    if len(pts) < 2:
        raise NonMonotoneQuantiles("a curve needs at least two breakpoints")
    qs = np.array([p[0] for p in pts])
    rs = np.array([p[1] for p in pts])
    if not np.all(np.isfinite(qs)) or not np.all(np.isfinite(rs)):
        raise NonMonotoneQuantiles("breakpoints must be finite")
    if qs[0] != 0.0 or qs[-1] != 1.0:
        raise NonMonotoneQuantiles(f"quantiles must run from 0 to 1, got {qs[0]}..{qs[-1]}")
    if np.any(np.diff(qs) <= 0):
        raise NonMonotoneQuantiles("quantiles must be strictly increasing")
    if rs[0] != 0.0:
        raise NonzeroOrigin(f"r(0) must be 0, got {rs[0]}")
    if np.any(rs < 0):
        raise NegativeRevenue("revenues must be nonnegative")
    slopes = np.diff(rs) / np.diff(qs)
    rise = np.diff(slopes)
    allowed = CONCAVITY_TOL * np.maximum(1.0, np.abs(slopes[:-1]))
    if np.any(rise > allowed):
        j = int(np.argmax(rise - allowed))
        raise NonConcave(f"slope increases after breakpoint {j + 1} (q={qs[j + 1]})")
    return RevenueCurve(qs, rs)


def value_at(curve: RevenueCurve, q):
    _check_range(q)
    out = curve.r(q)
    return float(out) if np.ndim(out) == 0 else out


def price_at(curve: RevenueCurve, q):
    _check_range(q)
    out = curve.v(q)
    return float(out) if np.ndim(out) == 0 else out


def opt(curve: RevenueCurve) -> OptPoint:
    i = int(np.argmax(curve.rs))  # first occurrence = smallest maximiser
    return OptPoint(float(curve.qs[i]), float(curve.rs[i]))


def scale(curve: RevenueCurve, alpha: float) -> RevenueCurve:
    if not alpha > 0:
        raise NonPositiveScale(f"scale factor must be positive, got {alpha}")
    return RevenueCurve(curve.qs, curve.rs * alpha)


def normalize(curve: RevenueCurve) -> RevenueCurve:
    """Rescale so that OPT = 1."""
    return scale(curve, 1.0 / opt(curve).opt)


def sample_values(curve: RevenueCurve, n: int, seed: int | np.random.Generator):
    """Draw ``n`` values; returns ``(values, quantiles)``."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    qs = rng.random(n)
    return curve.v(qs), qs


# -- canned constructors -----------------------------------------------------


def triangular(q_star: float) -> RevenueCurve:
    if not 0 < q_star <= 1:
        raise OutOfRange(f"triangular peak must lie in (0, 1], got {q_star}")
    if q_star == 1:
        return make_curve([(0, 0), (1, 1)])
    return make_curve([(0, 0), (q_star, 1), (1, 0)])


def truncated_equal_revenue(v_max: float) -> RevenueCurve:
    if not v_max > 1:
        raise OutOfRange(f"truncation value must exceed 1, got {v_max}")
    return make_curve([(0, 0), (1 / v_max, 1), (1, 1)])


def bumped_triangular(q_star: float, q_b: float, r_b: float) -> RevenueCurve:
    """Triangular curve peaking at ``(q_star, 1)`` with an extra vertex ``(q_b, r_b)`` on its left edge."""
    if not 0 < q_b < q_star <= 1:
        raise InfeasibleBump(f"bump quantile must lie in (0, {q_star}), got {q_b}")
    if not r_b / q_b > (1 - r_b) / (q_star - q_b):
        raise InfeasibleBump(f"bump ({q_b}, {r_b}) breaks concavity")
    if r_b > 1:
        raise InfeasibleBump(f"bump height {r_b} exceeds the peak")
    pts = [(0, 0), (q_b, r_b), (q_star, 1)]
    if q_star < 1:
        pts.append((1, 0))
    return make_curve(pts)


def quadrilateral(q_b: float, r_b: float) -> RevenueCurve:
    if not 0 < q_b < 1:
        raise InfeasibleBump(f"bump quantile must lie in (0, 1), got {q_b}")
    if not r_b / q_b > (1 - r_b) / (1 - q_b):
        raise InfeasibleBump(f"bump ({q_b}, {r_b}) breaks concavity")
    return make_curve([(0, 0), (q_b, r_b), (1, 1)])


# -- text format -------------------------------------------------------------


def parse_curve(text: str) -> RevenueCurve:
    pts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise CurveParseError(f"expected 'q r', got {raw!r}", lineno)
        try:
            q, r = float(parts[0]), float(parts[1])
        except ValueError:
            raise CurveParseError(f"not a number in {raw!r}", lineno) from None
        if not (math.isfinite(q) and math.isfinite(r)):
            raise CurveParseError(f"non-finite number in {raw!r}", lineno)
        if pts and q <= pts[-1][0]:
            raise CurveParseError("breakpoints must be ascending in q", lineno)
        pts.append((q, r))
    if len(pts) < 2:
        raise CurveParseError("a curve needs at least two breakpoints")
    return make_curve(pts)


def format_curve(curve: RevenueCurve, comment: str | None = None) -> str:
    lines = [f"# {comment}"] if comment else []
    lines += [f"{q!r} {r!r}" for q, r in curve.breakpoints]
    return "\n".join(lines) + "\n"


def read_curve(path: str | Path) -> RevenueCurve:
    return parse_curve(Path(path).read_text(encoding="utf-8"))


def write_curve(curve: RevenueCurve, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(format_curve(curve, comment), encoding="utf-8")
