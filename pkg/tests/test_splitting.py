import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extsum.core import ExplicitSchedule, IterationState, PowerSchedule
from extsum.errors import (
    BaselineInapplicableError,
    DimensionMismatchError,
    DomainError,
    InvalidParameterError,
    InvalidScheduleError,
    SpecializationMismatchError,
)
from extsum.oracles import Abs, Box, Indicator, NegSqrt, Quadratic, SelectionStrategy, Singleton
from extsum.problems import builtin
from extsum.splitting import (
    AlgorithmConfig,
    ProblemSpec,
    efb_step,
    run_efb,
    run_passty_fb,
    run_projected_eps_subgradient,
)

from helpers import bit_identical, projected_gradient_baseline

BOUNDARY = SelectionStrategy.boundary()
MIN_NORM = SelectionStrategy.min_norm()


def paper():
    return builtin("paper-example").spec


class TestStep:
    def test_first_step_of_example(self):
        state, u = efb_step(paper(), IterationState.initial([4.0]), 1.0, 1.0, MIN_NORM)
        assert u.tolist() == [-0.25]
        assert state.x.tolist() == [0.0]

    @pytest.mark.parametrize("lam, eps", [(1.0, 1.0), (0.01, 0.2), (1e-6, 1e-2)])
    def test_steady_state_of_example(self, lam, eps):
        state = IterationState.initial([0.0])
        state, u = efb_step(paper(), state, lam, eps, BOUNDARY)
        assert u[0] == pytest.approx(-1 / (4 * eps), rel=1e-15)
        assert state.x.tolist() == [0.0]

    def test_plain_gradient_step(self):
        whole_line = Indicator(Box([-np.inf], [np.inf]))
        spec = ProblemSpec(whole_line, Quadratic([0.0]), [1.0])
        state, u = efb_step(spec, IterationState.initial([1.0]), 0.5, 0.0, MIN_NORM)
        assert u.tolist() == [1.0] and state.x.tolist() == [0.5]

    def test_rejects_bad_step(self):
        with pytest.raises(InvalidParameterError):
            efb_step(paper(), IterationState.initial([0.0]), 0.0, 1.0, BOUNDARY)


class TestProblemSpec:
    def test_x0_outside_domain(self):
        with pytest.raises(DomainError):
            ProblemSpec(Indicator(Singleton([0.0])), NegSqrt(), [-1.0])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            ProblemSpec(Indicator(Singleton([0.0])), Quadratic([0.0, 0.0]), [1.0])


class TestConfig:
    @pytest.mark.parametrize("kw", [{"max_iter": 0}, {"max_iter": -3}, {"record_every": 0}, {"tol": 0.0}])
    def test_rejected(self, kw):
        with pytest.raises(InvalidParameterError):
            AlgorithmConfig(**kw)

    def test_invalid_schedule_refused_unless_unsafe(self):
        bad = PowerSchedule(1, 0.7, 0.7 / 3)
        with pytest.raises(InvalidScheduleError):
            run_efb(paper(), AlgorithmConfig(schedule=bad, max_iter=5))
        trace = run_efb(paper(), AlgorithmConfig(schedule=bad, max_iter=5, unsafe_schedule=True))
        assert trace.unsafe and trace.schedule_valid is False


class TestRunEfb:
    def test_paper_example_pinned(self):
        trace = run_efb(paper(), AlgorithmConfig(strategy=BOUNDARY, max_iter=1000))
        assert len(trace) == 1000 and trace.n[0] == 1 and trace.n[-1] == 1000
        assert np.all(trace.x == 0.0) and np.all(trace.xbar == 0.0)
        assert np.all(trace.dist == 0.0)

    def test_quad_halfspace_against_baseline(self):
        N = 20_000
        trace = run_efb(builtin("quad-halfspace").spec, AlgorithmConfig(max_iter=N))
        xs, xbar = projected_gradient_baseline(
            lambda x: x - 2.0, lambda z: np.minimum(z, 1.0), [-3.0], N)
        np.testing.assert_array_equal(trace.x[:, 0], xs[:, 0])
        assert abs(trace.xbar[-1, 0] - xbar[0]) <= 1e-12
        assert trace.dist[-1] <= 1e-3

    def test_abs_box_near_one(self):
        trace = run_projected_eps_subgradient(builtin("abs-box").spec, AlgorithmConfig(max_iter=2000))
        assert abs(trace.xbar[-1, 0] - 1.0) <= 1e-3

    def test_thinning_keeps_last_row_and_running_sup(self):
        trace = run_efb(paper(), AlgorithmConfig(strategy=BOUNDARY, max_iter=1000, record_every=7))
        assert trace.n.tolist() == list(range(7, 1000, 7)) + [1000]
        assert trace.h1_sup == 0.25
        assert not trace.is_unthinned()

    def test_running_sup_sees_unrecorded_steps(self):
        # eps jumps at n = 3 only; the row for n = 3 is thinned away
        lam = [1.0, 0.5, 0.4, 0.3, 0.2]
        eps = [0.1, 0.1, 0.1, 0.09, 0.01]
        spec = builtin("quad-halfspace").spec
        trace = run_efb(spec, AlgorithmConfig(schedule=ExplicitSchedule(lam, eps), max_iter=4,
                                              record_every=4, unsafe_schedule=True))
        assert trace.n.tolist() == [4]
        assert trace.h1_sup >= trace.eps_u_norm.max()

    def test_early_stop(self):
        trace = run_efb(builtin("quad-halfspace").spec, AlgorithmConfig(max_iter=1000, tol=1e-2))
        assert len(trace) < 1000 and trace.dist[-1] < 1e-2

    def test_oracle_failure_gives_partial_trace(self):
        # boundary selection on the indicator of a singleton has no closed form
        spec = ProblemSpec(Indicator(Box([-1.0], [1.0])), Indicator(Singleton([0.0])), [0.0])
        trace = run_efb(spec, AlgorithmConfig(strategy=BOUNDARY, max_iter=10))
        assert trace.error is not None and trace.error_n == 0 and len(trace) == 0

    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1), pid=st.sampled_from(["abs-box", "quad-box-2d", "quad-halfspace"]))
    def test_deterministic(self, seed, pid):
        cfg = AlgorithmConfig(strategy=SelectionStrategy.random(seed), max_iter=200)
        spec = builtin(pid).spec
        a, b = run_efb(spec, cfg), run_efb(spec, cfg)
        assert bit_identical(a, b) and a == b


class TestSpecialization:
    @pytest.mark.parametrize("pid, strategy", [
        ("paper-example", BOUNDARY),
        ("abs-box", MIN_NORM),
        ("abs-box", SelectionStrategy.random(4)),
        ("quad-box-2d", BOUNDARY),
    ])
    def test_identical_to_efb(self, pid, strategy):
        cfg = AlgorithmConfig(strategy=strategy, max_iter=500)
        spec = builtin(pid).spec
        assert bit_identical(run_efb(spec, cfg), run_projected_eps_subgradient(spec, cfg))

    def test_requires_indicator(self):
        spec = ProblemSpec(Quadratic([0.0]), Abs(), [1.0])
        with pytest.raises(SpecializationMismatchError):
            run_projected_eps_subgradient(spec, AlgorithmConfig(max_iter=3))


class TestPassty:
    def test_paper_example_inapplicable(self):
        with pytest.raises(BaselineInapplicableError) as info:
            run_passty_fb(paper(), AlgorithmConfig(max_iter=100))
        assert info.value.n == 1
        assert "exact subdifferential empty at x=0" in str(info.value)
        assert len(info.value.trace) == 0

    @pytest.mark.parametrize("pid", ["quad-halfspace", "quad-box-2d"])
    def test_coincides_with_efb_min_norm(self, pid):
        spec = builtin(pid).spec
        cfg = AlgorithmConfig(max_iter=2000)
        efb, passty = run_efb(spec, cfg), run_passty_fb(spec, cfg)
        assert efb.x.tobytes() == passty.x.tobytes()
        assert efb.xbar.tobytes() == passty.xbar.tobytes()
        assert np.all(passty.eps_u_norm == 0.0)

    def test_converges_on_quad_halfspace(self):
        trace = run_passty_fb(builtin("quad-halfspace").spec, AlgorithmConfig(max_iter=100_000))
        assert trace.dist[-1] <= 1e-3

    def test_schedule_rejected(self):
        with pytest.raises(InvalidScheduleError):
            run_passty_fb(builtin("quad-halfspace").spec,
                          AlgorithmConfig(schedule=PowerSchedule(1, 0.4, 0.1), max_iter=10))
