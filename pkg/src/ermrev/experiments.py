"""Reproductions of the negative examples and the two-sample guarantee, plus curve searches."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .curve import (
    RevenueCurve,
    bumped_triangular,
    make_curve,
    opt,
    quadrilateral,
    triangular,
    truncated_equal_revenue,
)
from .engine import Region, erm1_exact, erm2_exact, erm2_region_exact
from .errors import InfeasibleBump, SearchFailed

MAX_PIECES = 64
MIN_WIDTH = 1e-4
REGION_TOL = 1e-7


@dataclass
class Target:
    label: str
    value: float
    tolerance: float
    note: str = ""
    # "eq": |computed - value| <= tolerance; "lt"/"gt": strict comparison with value
    kind: str = "eq"

    def met(self, computed: float) -> bool:
        if self.kind == "lt":
            return computed < self.value
        if self.kind == "gt":
            return computed > self.value
        if self.kind == "ge":
            return computed >= self.value - self.tolerance
        return abs(computed - self.value) <= self.tolerance


@dataclass
class ExperimentReport:
    name: str
    computed: list[tuple[str, float]] = field(default_factory=list)
    targets: list[Target] = field(default_factory=list)

    @property
    def values(self) -> dict[str, float]:
        return dict(self.computed)

    @property
    def pass_(self) -> bool:
        vals = self.values
        return all(t.met(vals[t.label]) for t in self.targets)

    def failures(self) -> list[str]:
        vals = self.values
        return [t.label for t in self.targets if not t.met(vals[t.label])]

    def add(self, label: str, value: float, target: Target | None = None) -> None:
        self.computed.append((label, float(value)))
        if target is not None:
            self.targets.append(target)


def reproduce_prop1(tol: float = 1e-9) -> ExperimentReport:
    F = truncated_equal_revenue(10)
    rep = ExperimentReport("prop1")
    one = erm1_exact(F).value
    two = erm2_exact(F, tol).value
    rep.add("ERM(F,1)", one, Target("ERM(F,1)", 19 / 20, 1e-9, "19/20"))
    rep.add("ERM(F,2)", two, Target("ERM(F,2)", 11 / 12, 1e-6, "11/12"))
    rep.add("ERM(F,1)-ERM(F,2)", one - two, Target("ERM(F,1)-ERM(F,2)", 0.0, 0, "two samples do worse", "gt"))
    return rep


def reproduce_prop3(tol: float = 1e-9, grid: int = 10_000) -> ExperimentReport:
    F, G = quadrilateral(0.1, 0.22), triangular(1)
    rep = ExperimentReport("prop3")
    q = np.linspace(0, 1, grid + 2)[1:-1]
    gap = float(np.min(F.r(q) - G.r(q)))
    rep.add("min r_F-r_G on (0,1)", gap, Target("min r_F-r_G on (0,1)", 0.0, 0, "pointwise dominance", "gt"))
    f1, g1 = erm1_exact(F).value, erm1_exact(G).value
    f2, g2 = erm2_exact(F, tol).value, erm2_exact(G, tol).value
    rep.add("ERM(F,1)", f1, Target("ERM(F,1)", 0.56, 1e-9, "trapezoid area"))
    rep.add("ERM(G,1)", g1, Target("ERM(G,1)", 0.5, 1e-9, "1/2"))
    rep.add("ERM(F,2)", f2, Target("ERM(F,2)", 0.651, 0, "below 0.651", "lt"))
    rep.add("ERM(G,2)", g2, Target("ERM(G,2)", 2 / 3, 1e-9, "2/3"))
    return rep


def find_switch_pair(tol: float = 1e-9):
    """A pair with ERM(F,1) > ERM(G,1) but ERM(F,2) < ERM(G,2)."""
    F, G = quadrilateral(0.1, 0.22), triangular(1)
    rep = ExperimentReport("switch")
    d1 = erm1_exact(F).value - erm1_exact(G).value
    d2 = erm2_exact(G, tol).value - erm2_exact(F, tol).value
    rep.add("ERM(F,1)-ERM(G,1)", d1, Target("ERM(F,1)-ERM(G,1)", 0.0, 0, "F better with one sample", "gt"))
    rep.add("ERM(G,2)-ERM(F,2)", d2, Target("ERM(G,2)-ERM(F,2)", 0.0, 0, "G better with two samples", "gt"))
    if not rep.pass_:
        raise SearchFailed(f"switch inequalities fail: {rep.computed}")
    return F, G, rep


def random_regular_curve(seed: int, pieces: int) -> RevenueCurve:
    """Random concave piecewise-linear curve with ``pieces`` pieces, normalised to OPT = 1."""
    if not 1 <= pieces <= MAX_PIECES:
        raise ValueError(f"pieces must lie in [1, {MAX_PIECES}], got {pieces}")
    rng = np.random.default_rng(seed)
    widths = MIN_WIDTH + (1 - pieces * MIN_WIDTH) * rng.dirichlet(np.ones(pieces))
    qs = np.concatenate(([0.0], np.cumsum(widths)))
    qs[-1] = 1.0
    # decrements on a random scale: from almost straight to sharply kinked
    spread = np.exp(rng.uniform(np.log(0.05), np.log(20.0)))
    slopes = 1.0 - np.concatenate(([0.0], np.cumsum(rng.exponential(spread, pieces - 1) + 1e-3)))
    rs = np.concatenate(([0.0], np.cumsum(slopes * np.diff(qs))))
    if rs[-1] < 0:
        # tilt by a multiple of r(q) = q so the curve ends at zero
        slopes = slopes - rs[-1]
        rs = np.concatenate(([0.0], np.cumsum(slopes * np.diff(qs))))
    rs = np.maximum(rs, 0.0)
    rs[0] = 0.0
    rs /= rs.max()
    return make_curve(zip(qs, rs))


def random_curve_family(count: int, seed: int, max_pieces: int = 16) -> list[RevenueCurve]:
    """``count`` reproducible random curves with piece counts drawn from 1..max_pieces."""
    ss = np.random.SeedSequence(seed)
    out = []
    for child in ss.spawn(count):
        pieces = int(np.random.default_rng(child.spawn(1)[0]).integers(1, max_pieces + 1))
        out.append(random_regular_curve(int(child.generate_state(1)[0]), pieces))
    return out


def erm2_ratio(curve: RevenueCurve, tol: float = 1e-9) -> float:
    return erm2_exact(curve, tol).value / opt(curve).opt


def triangular_worst_case(grid: int = 200, tol: float = 1e-7):
    """Triangular curve minimising ERM(F,2)/OPT; returns ``(q_star, ratio)``."""
    if grid < 10:
        raise ValueError("grid must be at least 10")
    f = lambda q: erm2_ratio(triangular(q))
    return bounds.grid_golden(f, 1.0 / grid, 1.0, grid=grid - 1, tol=tol)


def quadrilateral_improves(q_star_tri: float, grid: int = 24, max_lift: float = 0.5, tol: float = 1e-9) -> ExperimentReport:
    """Search bumps on the left edge of triangular(q_star_tri) for a smaller ERM(F,2)/OPT."""
    base = erm2_ratio(triangular(q_star_tri), tol)
    best, best_at, skipped, lowest = base, None, 0, np.inf
    for q_b in np.linspace(0, q_star_tri, grid + 2)[1:-1]:
        edge = q_b / q_star_tri
        for lift in np.linspace(0, max_lift, grid + 1):
            # lift = 0 puts the vertex on the edge itself: not strictly concave, rejected
            r_b = edge + lift * (1 - edge)
            try:
                c = bumped_triangular(q_star_tri, q_b, r_b)
            except InfeasibleBump:
                skipped += 1
                continue
            ratio = erm2_ratio(c, tol)
            lowest = min(lowest, ratio)
            if ratio < best:
                best, best_at = ratio, (q_b, r_b)
    rep = ExperimentReport("quadrilateral")
    rep.add("triangular ratio", base)
    rep.add("best bumped ratio", best, Target("best bumped ratio", base, 0, "a bump lowers the ratio", "lt"))
    rep.add("lowest ratio seen", lowest, Target("lowest ratio seen", bounds.THEOREM_CONSTANT, 0, "above 0.509", "gt"))
    rep.add("skipped infeasible", skipped)
    if best_at is not None:
        rep.add("bump q", best_at[0])
        rep.add("bump r", best_at[1])
    return rep


def theorem_check(curves: int = 500, seed: int = 0, tol: float = 1e-9, max_pieces: int = 16) -> ExperimentReport:
    """ERM(F,2)/OPT and the per-region lemmas on random curves."""
    worst_ratio = np.inf
    worst_one = np.inf
    slack = {"R": np.inf, "L": np.inf, "B": np.inf}
    for c in random_curve_family(curves, seed, max_pieces):
        qs = opt(c).q_star
        worst_ratio = min(worst_ratio, erm2_exact(c, tol).value)
        worst_one = min(worst_one, erm1_exact(c).value)
        if qs < 1:
            slack["R"] = min(slack["R"], erm2_region_exact(c, Region.R, tol).value - bounds.bound_R(qs))
        if qs > 0:
            slack["L"] = min(slack["L"], erm2_region_exact(c, Region.L, tol).value - bounds.L_CONSTANT)
        if 0 < qs < 1:
            slack["B"] = min(slack["B"], erm2_region_exact(c, Region.B, tol).value - bounds.bound_B(qs))
    rep = ExperimentReport("theorem")
    rep.add("curves", curves)
    rep.add("min ERM(F,2)/OPT", worst_ratio, Target("min ERM(F,2)/OPT", bounds.THEOREM_CONSTANT, 0, "above 0.509", "gt"))
    rep.add("min ERM(F,1)/OPT", worst_one, Target("min ERM(F,1)/OPT", 0.5, 0, "at least 1/2", "ge"))
    for name, s in slack.items():
        label = f"min slack region {name}"
        rep.add(label, s, Target(label, 0.0, REGION_TOL, "lemma holds", "ge"))
    return rep
