"""Sharpness and necessity experiments: verdicts, guards, constructions."""

import math

import pytest

from hardyops.experiments import (
    SHARP_CONFIRMED,
    cesaro_sharpness_sweep,
    commutator_pointwise_check,
    counterexample_report,
    duality_check,
    lebesgue_sharpness_sweep,
    morrey_sharpness_check,
    oscillation_decay_check,
)
from hardyops.numerics import gamma
from hardyops.spaces import ExponentConfig, cutoff_power
from hardyops.weights import (
    constant_weight,
    multilinear_riesz_weight,
    riemann_liouville_weight,
    weyl_weight,
)

ONE = constant_weight(1, 1)
ONE2 = constant_weight(1, 2)


def cfg(n, *p, lam=None, q=None):
    return ExponentConfig(n, tuple(p), tuple(lam) if lam else (), q)


class TestLebesgueSweep:
    def test_bilinear_flat_weight(self):
        rep = lebesgue_sharpness_sweep(ONE2, cfg(1, 4.0, 4.0))
        assert rep.verdict == SHARP_CONFIRMED
        assert rep.target == pytest.approx(16.0 / 9.0, rel=1e-10)
        ratios = {eps: v / rep.target for eps, v in rep.sweep}
        assert ratios[1e-3] >= 0.95
        # monotone in shrinking eps, never past the target
        ordered = sorted(rep.sweep)
        assert all(
            ordered[k][1] >= ordered[k + 1][1] for k in range(len(ordered) - 1)
        )
        assert all(v <= rep.target * (1 + 1e-6) for _, v in rep.sweep)

    def test_zero_weight_trivial(self):
        rep = lebesgue_sharpness_sweep(constant_weight(0, 2), cfg(1, 4.0, 4.0))
        assert rep.verdict == SHARP_CONFIRMED
        assert rep.target == 0.0

    def test_fractional_weight_extrapolates(self):
        rep = lebesgue_sharpness_sweep(riemann_liouville_weight(0.5), cfg(1, 2.0))
        assert rep.verdict == SHARP_CONFIRMED
        assert rep.target == pytest.approx(math.sqrt(math.pi), rel=1e-10)
        assert rep.relative_gap <= 0.02

    def test_eps_range_validated(self):
        with pytest.raises(ValueError):
            lebesgue_sharpness_sweep(ONE2, cfg(1, 4.0, 4.0), eps_sequence=(0.7,))


class TestMorreyCheck:
    def test_balanced_flat_weight(self):
        rep = morrey_sharpness_check(ONE2, cfg(1, 4.0, 4.0, lam=(-0.125, -0.125)))
        assert rep.verdict == SHARP_CONFIRMED
        assert rep.target == pytest.approx(64.0 / 49.0, rel=1e-10)
        assert rep.relative_gap <= 1e-8

    def test_boundary_exponents_rejected(self):
        with pytest.raises(ValueError):
            morrey_sharpness_check(ONE2, cfg(1, 4.0, 4.0))

    def test_unbalanced_rejected(self):
        with pytest.raises(ValueError):
            morrey_sharpness_check(
                ONE2, cfg(2, 4.0, 4.0, lam=(-0.125, -0.2))
            )

    def test_riesz_weight_self_consistency(self):
        w = multilinear_riesz_weight(1.0, 2)
        rep = morrey_sharpness_check(w, cfg(1, 4.0, 4.0, lam=(-0.125, -0.125)))
        assert rep.verdict == SHARP_CONFIRMED
        assert rep.relative_gap <= 1e-6


class TestCommutatorCheck:
    def test_bilinear_flat_weight(self):
        rep = commutator_pointwise_check(
            ONE2, cfg(1, 4.0, 4.0, lam=(-0.125, -0.125))
        )
        assert rep.verdict == SHARP_CONFIRMED
        assert rep.target == pytest.approx((64.0 / 49.0) ** 2, rel=1e-9)
        assert rep.relative_gap <= 1e-6
        assert len(rep.sweep) == 3  # three decades of radius

    def test_fractional_weight_m1(self):
        rep = commutator_pointwise_check(
            riemann_liouville_weight(0.5), cfg(1, 3.0, lam=(-0.25,))
        )
        assert rep.verdict == SHARP_CONFIRMED

    def test_strictness_enforced(self):
        with pytest.raises(ValueError):
            commutator_pointwise_check(ONE2, cfg(1, 4.0, 4.0))


class TestCounterexampleReport:
    def test_standard_case(self):
        rep = counterexample_report(0.5, 1, 2)
        assert rep.verdict == SHARP_CONFIRMED
        assert rep.target == pytest.approx(4.0)
        assert rep.relative_gap <= 1e-2
        values = [v for _, v in rep.sweep]
        assert values == sorted(values)  # deltas shrink, moments grow

    @pytest.mark.parametrize("alpha", [0.25, 0.75])
    def test_other_orders(self, alpha):
        rep = counterexample_report(alpha, 1, 2, delta_sequence=(1e-2, 1e-4))
        assert rep.verdict == SHARP_CONFIRMED
        assert rep.target == pytest.approx(2.0 / alpha)

    def test_growth_law_value(self):
        # A log2 + 1/(1+a) + (sqrt(log 1e4) - 1)/(1 - a) at a = 1/2
        rep = counterexample_report(0.5, 1, 2, delta_sequence=(1e-4,))
        c_val = rep.sweep[0][1]
        law = 4.0 * math.log(2.0) + 2.0 / 3.0 + 2.0 * (
            math.sqrt(math.log(1e4)) - 1.0
        )
        assert c_val == pytest.approx(law, rel=1e-6)

    def test_delta_validation(self):
        with pytest.raises(ValueError):
            counterexample_report(0.5, 1, 2, delta_sequence=(0.9,))


class TestOscillationDecay:
    def test_unary_flat_weight(self):
        rep = oscillation_decay_check(ONE, (1,))
        assert rep.verdict == SHARP_CONFIRMED
        # closed form (1 - cos(pi r))/(pi r) is bounded by 2/(pi r)
        assert dict(rep.sweep)[1000.0] <= 2.0 / (math.pi * 1000.0)

    def test_bilinear_flat_weight(self):
        rep = oscillation_decay_check(ONE2, (1, 2), r_sequence=(10.0, 100.0),
                                      tol=1e-4, quad_tol=1e-8)
        assert rep.verdict == SHARP_CONFIRMED
        assert dict(rep.sweep)[100.0] <= (2.0 / (math.pi * 100.0)) ** 2

    def test_odd_r_nonzero_values(self):
        # at odd r the closed form is 2/(pi r): a genuine decay chain
        rep = oscillation_decay_check(ONE, (1,), r_sequence=(11.0, 101.0, 1001.0))
        assert rep.verdict == SHARP_CONFIRMED
        vals = dict(rep.sweep)
        assert vals[11.0] == pytest.approx(2.0 / (math.pi * 11.0), rel=1e-8)
        assert vals[1001.0] == pytest.approx(2.0 / (math.pi * 1001.0), rel=1e-6)

    def test_empty_axes_rejected(self):
        with pytest.raises(ValueError):
            oscillation_decay_check(ONE, ())

    def test_fractional_weight(self):
        # the (1-t)^(-1/2) endpoint slows the decay to ~ r^(-1/2)
        rep = oscillation_decay_check(
            riemann_liouville_weight(0.5), (1,), r_sequence=(10.0, 100.0),
            tol=5e-2, quad_tol=1e-8,
        )
        assert rep.verdict == SHARP_CONFIRMED
        vals = dict(rep.sweep)
        assert vals[100.0] < vals[10.0]


class TestCesaroSweep:
    def test_classical_copson_constant(self):
        rep = cesaro_sharpness_sweep(ONE, cfg(1, 2.0))
        assert rep.verdict == SHARP_CONFIRMED
        assert rep.target == pytest.approx(2.0, rel=1e-10)
        assert dict(rep.sweep)[1e-3] >= 0.95 * 2.0
        assert "reconstructed" in rep.note

    def test_zero_weight_trivial(self):
        rep = cesaro_sharpness_sweep(constant_weight(0, 1), cfg(1, 2.0))
        assert rep.verdict == SHARP_CONFIRMED

    def test_weyl_weight_target(self):
        # Beta closed form Gamma(1+1/p-a)/Gamma(1+1/p) = 2/sqrt(pi)
        rep = cesaro_sharpness_sweep(weyl_weight(0.5), cfg(1, 2.0))
        assert rep.verdict == SHARP_CONFIRMED
        assert rep.target == pytest.approx(
            gamma(1.5 - 0.5) / gamma(1.5), rel=1e-10
        )
        assert rep.relative_gap <= 0.02

    def test_vanishing_weight_extrapolates(self):
        # the weight's own t^(m-a) zero shifts the deficit rate; the
        # Richardson exponent must account for it
        from hardyops.weights import multilinear_cesaro_weight

        w = multilinear_cesaro_weight(1.2, 2)
        rep = cesaro_sharpness_sweep(
            w, cfg(1, 4.0, 4.0), eps_sequence=(1e-1, 1e-2, 1e-3)
        )
        assert rep.verdict == SHARP_CONFIRMED
        assert rep.relative_gap <= 0.02


class TestDuality:
    def test_flat_weight_n1(self):
        lhs, rhs = duality_check(ONE, cutoff_power(-0.8, 1.0), cutoff_power(-0.8, 0.5))
        assert lhs == pytest.approx(rhs, rel=1e-6)

    def test_arity_validated(self):
        with pytest.raises(ValueError):
            duality_check(ONE2, cutoff_power(-0.8, 1.0), cutoff_power(-0.8, 0.5))


class TestSweepWorkers:
    def test_threaded_matches_serial(self):
        serial = lebesgue_sharpness_sweep(ONE2, cfg(1, 4.0, 4.0), workers=1)
        threaded = lebesgue_sharpness_sweep(ONE2, cfg(1, 4.0, 4.0), workers=4)
        assert serial.sweep == threaded.sweep
        assert serial.verdict == threaded.verdict
