import numpy as np
import pytest
from hypothesis import given, strategies as st

from ermrev import curve as cv
from ermrev.curve import (
    make_curve,
    opt,
    price_at,
    quadrilateral,
    sample_values,
    scale,
    triangular,
    truncated_equal_revenue,
    value_at,
)
from ermrev.errors import (
    CurveParseError,
    InfeasibleBump,
    NegativeRevenue,
    NonConcave,
    NonMonotoneQuantiles,
    NonPositiveScale,
    NonzeroOrigin,
    OutOfRange,
)

from ermrev.experiments import random_regular_curve

from conftest import curves


class TestMakeCurve:
    def test_identity(self):
        c = make_curve([(0, 0), (1, 1)])
        assert c.breakpoints == [(0.0, 0.0), (1.0, 1.0)]

    def test_truncated_equal_revenue(self):
        c = make_curve([(0, 0), (0.1, 1), (1, 1)])
        assert c == truncated_equal_revenue(10)

    @pytest.mark.parametrize(
        "pts, exc",
        [
            ([(0, 0), (0.5, 1), (0.4, 1.2)], NonMonotoneQuantiles),
            ([(0, 0), (0.5, 1), (0.9, 1)], NonMonotoneQuantiles),
            ([(0.1, 0), (1, 1)], NonMonotoneQuantiles),
            ([(0, 0)], NonMonotoneQuantiles),
            ([(0, 0), (0.5, 0.2), (1, 1)], NonConcave),
            ([(0, 0), (0.5, 1), (1, -0.1)], NegativeRevenue),
            ([(0, 0.1), (1, 1)], NonzeroOrigin),
        ],
    )
    def test_rejects(self, pts, exc):
        with pytest.raises(exc):
            make_curve(pts)

    def test_concavity_tolerance(self):
        # collinear pieces up to rounding are accepted
        make_curve([(0, 0), (1 / 3, 1 / 3), (1, 1)])
        with pytest.raises(NonConcave):
            make_curve([(0, 0), (0.5, 0.5), (1, 1 + 1e-9)])

    def test_immutable(self, ter):
        with pytest.raises(ValueError):
            ter.rs[1] = 3.0


class TestEvaluation:
    @pytest.mark.parametrize("q, r", [(0.05, 0.5), (0.5, 1.0), (0.1, 1.0), (0.0, 0.0), (1.0, 1.0)])
    def test_value_at_ter(self, ter, q, r):
        assert value_at(ter, q) == pytest.approx(r, abs=1e-15)

    def test_value_at_identity(self, ident):
        assert value_at(ident, 0.25) == 0.25

    @pytest.mark.parametrize("q, p", [(0.5, 2.0), (0.05, 10.0), (0.0, 10.0)])
    def test_price_at_ter(self, ter, q, p):
        assert price_at(ter, q) == pytest.approx(p, rel=1e-15)

    def test_flat_prices_tie_exactly(self, ter):
        # every quantile on the first piece has exactly the same price
        assert np.all(price_at(ter, np.linspace(0, 0.1, 101)) == 10.0)

    def test_price_at_zero_is_first_slope(self, ident):
        assert price_at(ident, 0) == 1.0

    @pytest.mark.parametrize("q", [-0.1, 1.1, float("nan")])
    def test_out_of_range(self, ter, q):
        with pytest.raises(OutOfRange):
            value_at(ter, q)
        with pytest.raises(OutOfRange):
            price_at(ter, q)

    def test_integral_matches_trapezoids(self, quad):
        assert quad.integral(0.0, 1.0) == pytest.approx(0.011 + 0.549, abs=1e-15)
        assert quad.integral(0.05, 0.3) == pytest.approx(
            0.5 * 0.05 * (0.11 + 0.22) + 0.5 * 0.2 * (0.22 + (0.22 + 0.78 * 0.2 / 0.9)), abs=1e-15
        )


class TestOpt:
    def test_ter_smallest_maximiser(self, ter):
        assert opt(ter) == cv.OptPoint(0.1, 1.0)

    def test_identity(self, ident):
        assert opt(ident) == cv.OptPoint(1.0, 1.0)

    def test_triangle(self):
        assert opt(triangular(0.5)) == cv.OptPoint(0.5, 1.0)


class TestScale:
    def test_doubles_opt(self, ident):
        assert opt(scale(ident, 2)) == cv.OptPoint(1.0, 2.0)

    def test_identity_scaling(self, ter):
        assert scale(ter, 1) == ter

    @pytest.mark.parametrize("alpha", [0, -1])
    def test_rejects_nonpositive(self, ter, alpha):
        with pytest.raises(NonPositiveScale):
            scale(ter, alpha)

    @given(curves(), st.sampled_from([0.5, 2.0, 7.0]))
    def test_opt_homogeneous(self, c, alpha):
        o, s = opt(c), opt(scale(c, alpha))
        assert s.q_star == o.q_star
        assert s.opt == alpha * o.opt

    @given(curves())
    def test_halving_halves_prices(self, c):
        q = np.linspace(0, 1, 101)
        assert np.allclose(price_at(scale(c, 0.5), q), 0.5 * price_at(c, q), rtol=1e-14, atol=0)


class TestSampling:
    def test_identity_prices_are_one(self, ident):
        values, qs = sample_values(ident, 3, seed=7)
        assert list(values) == [1.0, 1.0, 1.0]
        assert qs.shape == (3,)

    def test_empty(self, ter):
        values, qs = sample_values(ter, 0, seed=1)
        assert len(values) == 0 and len(qs) == 0

    def test_deterministic(self, ter):
        a, _ = sample_values(ter, 100, seed=3)
        b, _ = sample_values(ter, 100, seed=3)
        assert np.array_equal(a, b)

    def test_price_two_has_quantile_half(self, ter):
        # P(value >= 2) = 0.5; binomial sd at n = 1e6 is 5e-4, so 0.002 is 4 sd
        values, _ = sample_values(ter, 10**6, seed=11)
        assert abs(np.mean(values >= 2) - 0.5) <= 0.002


class TestConstructors:
    def test_truncated_equal_revenue(self):
        assert truncated_equal_revenue(10).breakpoints == [(0, 0), (0.1, 1), (1, 1)]

    def test_quadrilateral(self):
        assert quadrilateral(0.1, 0.22).breakpoints == [(0, 0), (0.1, 0.22), (1, 1)]

    def test_triangular(self):
        assert triangular(1).breakpoints == [(0, 0), (1, 1)]
        assert triangular(0.3).breakpoints == [(0, 0), (0.3, 1), (1, 0)]

    @pytest.mark.parametrize("q_b, r_b", [(0.1, 0.1), (0.5, 0.4), (0.1, 0.05)])
    def test_infeasible_bump(self, q_b, r_b):
        with pytest.raises(InfeasibleBump):
            quadrilateral(q_b, r_b)

    def test_bad_parameters(self):
        with pytest.raises(OutOfRange):
            triangular(0)
        with pytest.raises(OutOfRange):
            truncated_equal_revenue(1)


class TestTextFormat:
    @given(curves())
    def test_round_trip_bit_exact(self, c):
        assert cv.parse_curve(cv.format_curve(c, "random")) == c

    def test_file_round_trip(self, tmp_path, quad):
        path = tmp_path / "q.curve"
        cv.write_curve(quad, path)
        assert cv.read_curve(path) == quad

    def test_comments_and_blank_lines(self):
        c = cv.parse_curve("# header\n\n0 0\n  # indented comment\n0.1 1\n1 1\n")
        assert c == truncated_equal_revenue(10)

    @pytest.mark.parametrize(
        "text, line",
        [("0 0\n0.5\n1 1\n", 2), ("0 0\n0.5 x\n1 1\n", 2), ("0 0\n1 1\n0.5 0.5\n", 3)],
    )
    def test_parse_errors_carry_line(self, text, line):
        with pytest.raises(CurveParseError) as info:
            cv.parse_curve(text)
        assert info.value.line == line


class TestInvariants:
    @given(curves())
    def test_price_nonincreasing(self, c):
        p = price_at(c, np.linspace(1e-3, 1, 1000))
        assert np.all(np.diff(p) <= 1e-12 * np.maximum(1.0, p[:-1]))

    @given(curves())
    def test_value_is_price_times_quantile(self, c):
        q = np.linspace(1e-3, 1, 997)
        r = value_at(c, q)
        assert np.allclose(price_at(c, q) * q, r, rtol=1e-14, atol=1e-300)

    @given(st.integers(0, 2**32 - 1), st.integers(1, 64))
    def test_random_curves_validate(self, seed, pieces):
        c = random_regular_curve(seed, pieces)
        assert make_curve(c.breakpoints) == c
        assert opt(c).opt == 1.0
