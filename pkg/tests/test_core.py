import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extsum.core import (
    ConvergenceTrace,
    ExplicitSchedule,
    IterationState,
    PowerSchedule,
    TraceRow,
    as_point,
    average_update,
    schedule_at,
    validate_passty_schedule,
    validate_schedule,
)
from extsum.errors import (
    DimensionMismatchError,
    InvalidParameterError,
    ScheduleRangeError,
)


def accumulate(xs, lams):
    state = IterationState.initial(np.zeros(np.size(xs[0])))
    for x, lam in zip(xs, lams):
        state = average_update(state, np.atleast_1d(x), lam)
    return state


class TestAsPoint:
    def test_scalar_is_promoted(self):
        p = as_point(3.0)
        assert p.shape == (1,)
        assert not p.flags.writeable

    def test_copy_is_independent(self):
        src = np.array([1.0, 2.0])
        p = as_point(src)
        src[0] = 9.0
        assert p[0] == 1.0

    @pytest.mark.parametrize("bad", [[np.nan], [1.0, np.inf], []])
    def test_rejects_non_finite_or_empty(self, bad):
        with pytest.raises((InvalidParameterError, DimensionMismatchError)):
            as_point(bad)

    def test_dimension_check(self):
        with pytest.raises(DimensionMismatchError):
            as_point([1.0, 2.0], dim=3)


class TestSchedule:
    def test_remark_example(self):
        assert schedule_at(PowerSchedule(1, 1, "1/3"), 8) == pytest.approx((0.125, 0.5), abs=1e-15)

    def test_first_index(self):
        assert schedule_at(PowerSchedule(1, 1, 1 / 3), 1) == (1.0, 1.0)

    def test_zero_index_reuses_first(self):
        s = PowerSchedule(2, 0.9, 0.3)
        assert schedule_at(s, 0) == schedule_at(s, 1)

    def test_scaled(self):
        lam, eps = schedule_at(PowerSchedule(2, 1, "1/3"), 4)
        assert lam == 0.5
        # cube root of 1/4 by an independent route
        assert eps == pytest.approx(float(np.cbrt(0.25)), rel=1e-15)
        assert eps == pytest.approx(0.62996, abs=1e-5)

    @given(p=st.floats(0.05, 3.0), n=st.integers(1, 10**7))
    def test_cube_root_identity(self, p, n):
        lam, eps = schedule_at(PowerSchedule.canonical(p), n)
        assert lam > 0 and eps > 0
        assert eps ** 3 == pytest.approx(lam, rel=1e-13)

    @pytest.mark.parametrize("args", [(0, 1, 1), (1, -1, 0.3), (1, 1, 0), (-2, 1, 1)])
    def test_non_positive_parameters(self, args):
        with pytest.raises(InvalidParameterError):
            PowerSchedule(*args)

    def test_explicit_out_of_range(self):
        s = ExplicitSchedule([1.0, 0.5], [1.0, 0.8])
        assert schedule_at(s, 2) == (0.5, 0.8)
        assert schedule_at(s, 0) == (1.0, 1.0)
        with pytest.raises(ScheduleRangeError):
            schedule_at(s, 3)


class TestValidateSchedule:
    def test_canonical_valid(self):
        report = validate_schedule(PowerSchedule(1, 1, "1/3"))
        assert report.valid and not report.reasons and not report.heuristic

    def test_ratio_series_diverges(self):
        report = validate_schedule(PowerSchedule(1, 0.7, 0.7 / 3))
        assert not report.valid
        assert not report.relations["sum_ratio_sq_converges"]
        assert any("(lambda_n/eps_n)^2" in r for r in report.reasons)

    def test_step_series_converges(self):
        report = validate_schedule(PowerSchedule(1, 1.2, 0.4))
        assert not report.valid
        assert report.reasons == ("sum lambda_n = inf violated",)

    def test_grid_against_analytic_window(self):
        for p in np.round(np.arange(0.30, 1.60, 0.01), 10):
            assert validate_schedule(PowerSchedule.canonical(p)).valid == (0.75 < p <= 1.0), p

    def test_explicit_list_is_heuristic(self):
        n = np.arange(1, 20001)
        good = ExplicitSchedule(1.0 / n, n ** (-1 / 3))
        report = validate_schedule(good)
        assert report.heuristic and report.valid
        bad = ExplicitSchedule(n ** -1.5, n ** -0.5)
        assert not validate_schedule(bad).relations["sum_lambda_diverges"]

    def test_passty_window(self):
        assert validate_passty_schedule(PowerSchedule(1, 1, 1)).valid
        assert not validate_passty_schedule(PowerSchedule(1, 0.4, 0.1)).valid
        assert not validate_passty_schedule(PowerSchedule(1, 1.1, 0.1)).valid


class TestAverage:
    def test_uniform_weights(self):
        assert accumulate([0.0, 3.0, 6.0], [1, 1, 1]).xbar[0] == 3.0

    def test_weighted(self):
        state = accumulate([0.0, 3.0], [1.0, 0.5])
        assert state.xbar[0] == pytest.approx((0 * 1 + 3 * 0.5) / 1.5, abs=1e-15)
        assert state.sigma == 1.5 and state.n == 2

    def test_single_point(self):
        assert accumulate([5.0], [0.3]).xbar[0] == 5.0

    def test_dimension_mismatch(self):
        state = IterationState.initial([0.0, 0.0])
        with pytest.raises(DimensionMismatchError):
            average_update(state, [1.0], 1.0)

    def test_non_positive_weight(self):
        with pytest.raises(InvalidParameterError):
            average_update(IterationState.initial([0.0]), [1.0], 0.0)

    def test_sigma_strictly_increasing(self):
        state = IterationState.initial([0.0])
        prev = 0.0
        for n in range(1, 200):
            state = average_update(state, [float(n)], 1.0 / n)
            assert state.sigma > prev
            prev = state.sigma

    def test_incremental_matches_direct_sum_over_1e5_steps(self):
        rng = np.random.default_rng(7)
        N = 100_000
        xs = rng.uniform(1.0, 2.0, size=(N, 2))
        lams = 1.0 / np.arange(1, N + 1)
        state = IterationState.initial(np.zeros(2))
        for x, lam in zip(xs, lams):
            state = average_update(state, x, lam)
        sigma = math.fsum(lams)
        direct = np.array([math.fsum(lams * xs[:, j]) for j in range(2)]) / sigma
        assert state.sigma == pytest.approx(sigma, rel=1e-15)
        assert np.max(np.abs(state.xbar - direct) / np.abs(direct)) <= 1e-10

    @settings(max_examples=50)
    @given(st.lists(st.tuples(st.floats(-1e3, 1e3), st.floats(1e-3, 10.0)), min_size=1, max_size=60))
    def test_matches_direct_sum(self, pairs):
        xs, lams = zip(*pairs)
        state = accumulate(list(xs), list(lams))
        direct = math.fsum(l * x for x, l in pairs) / math.fsum(lams)
        assert state.xbar[0] == pytest.approx(direct, rel=1e-9, abs=1e-9)


class TestTrace:
    def test_from_rows_and_back(self):
        rows = [TraceRow(n, 1.0 / n, n ** (-1 / 3), np.array([0.0]), np.array([0.0]), 0.25, None)
                for n in range(1, 5)]
        trace = ConvergenceTrace.from_rows(rows)
        assert len(trace) == 4 and trace.dim == 1
        assert trace.h1_sup == 0.25
        assert list(trace.rows())[2].n == 3
        assert trace.row(0).dist_to_solution is None
        assert trace.is_unthinned()
