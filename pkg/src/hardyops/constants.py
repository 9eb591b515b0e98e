"""Sharp operator-norm constants as weighted moment integrals.

Every constant in this package is a cube integral of the form

    int_{(0,1)^m} prod_i t_i**e_i * w(t) * prod_{i in E} log(shift/t_i) dt

for a family-specific exponent vector:

* ``lebesgue_constant``:        e_i = -n/p_i        (L^p operator norm)
* ``morrey_constant``:          e_i = n*lambda_i    (central Morrey norm)
* ``log_moment_constant``:      e_i = n*lambda_i, log factors on E
* ``cesaro_lebesgue_constant``: e_i = -n(1 - 1/p_i)
* ``cesaro_log_constant``:      e_i = -n*lambda_i - n, log factors on all axes

A per-axis exponent at or below -1 (after adding the weight's endpoint
exponent) makes the integral diverge; such calls return a structured
divergent verdict rather than a float infinity.  Exactly-borderline
exponents are settled by a truncation-growth probe (the integral over
(delta, 1) versus (delta/100, 1)), and weights carrying a logarithmic
substitution form are integrated in ``s = log(1/t)`` where the borderline
case is decided by the branch tail exponent.

`truncation` restricts every axis to (delta, 1); this is how divergent
log moments are reported as growing families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .numerics import (
    CornerBehavior,
    EndpointBehavior,
    QuadratureResult,
    gamma,
    integrate_halfline,
    integrate_unit_cube,
    integrate_unit_interval,
)
from .spaces import ExponentConfig
from .weights import Weight

__all__ = [
    "ConstantSpec",
    "lebesgue_constant",
    "morrey_constant",
    "log_moment_constant",
    "cesaro_lebesgue_constant",
    "cesaro_log_constant",
    "closed_form",
    "weighted_moment",
]

_BORDER_EPS = 1e-12


def weighted_moment(
    weight: Weight,
    exponents: Sequence[float],
    log_axes: Sequence[int] = (),
    log_shift: float = 1.0,
    truncation: float = 0.0,
    tol: float = 1e-10,
    seed: int = 0,
) -> QuadratureResult:
    """The moment integral underlying every constant (axes are 1-based in E)."""
    m = weight.arity
    exponents = [float(e) for e in exponents]
    if len(exponents) != m:
        raise ValueError("one exponent per weight coordinate is required")
    log_axes = tuple(sorted(set(int(i) for i in log_axes)))
    if log_axes and (log_axes[0] < 1 or log_axes[-1] > m):
        raise ValueError(f"log axes must lie in 1..{m}")
    if not 0.0 <= truncation < 1.0:
        raise ValueError("truncation must lie in [0, 1)")
    if log_shift not in (1.0, 2.0):
        raise ValueError("log shift must be 1 or 2")

    if weight.log_form is not None and m == 1:
        return _log_substituted_moment(
            weight, exponents[0], bool(log_axes), log_shift, truncation, tol
        )

    if truncation == 0.0:
        for i in range(m):
            eff = exponents[i] + weight.behaviors[i].exponent_at_zero
            if eff < -1.0 - _BORDER_EPS:
                return QuadratureResult.divergent(
                    f"axis {i + 1} exponent {eff:g} is not integrable at 0"
                )
            if abs(eff + 1.0) <= _BORDER_EPS:
                return _truncation_growth_probe(
                    weight, exponents, log_axes, log_shift, tol
                )

    return _plain_moment(
        weight, exponents, log_axes, log_shift, truncation, tol, seed
    )


def _log_factors(ts, ss, log_axes, log_shift):
    acc = None
    for i in log_axes:
        # log(c/t) = log(c) - log(t), with log(t) = log1p(-s) exact near 1
        term = math.log(log_shift) - np.log1p(-ss[i - 1])
        acc = term if acc is None else acc * term
    return acc


def _plain_moment(weight, exponents, log_axes, log_shift, truncation, tol, seed=0):
    m = weight.arity
    w_pair = weight.pair

    def integrand_pair(ts, ss):
        acc = ts[0] ** exponents[0]
        for t, e in zip(ts[1:], exponents[1:]):
            acc = acc * t**e
        acc = acc * w_pair(ts, ss)
        if log_axes:
            acc = acc * _log_factors(ts, ss, log_axes, log_shift)
        return acc

    corner = None
    if weight.corner is not None:
        w_smooth = weight.corner.smooth_factor

        def smooth(*ss):
            acc = w_smooth(*ss)
            for s, e in zip(ss, exponents):
                acc = acc * (1.0 - s) ** e
            if log_axes:
                acc = acc * _log_factors(None, ss, log_axes, log_shift)
            return acc

        corner = CornerBehavior(weight.corner.exponent, smooth)

    # under truncation the zero end is outside the domain, so its declared
    # exponent is irrelevant (and may be <= -1 for deliberately divergent
    # truncated families)
    behaviors = [
        EndpointBehavior(
            exponents[i] + weight.behaviors[i].exponent_at_zero
            if truncation == 0.0
            else 0.0,
            weight.behaviors[i].exponent_at_one,
        )
        for i in range(m)
    ]
    box = None
    if truncation > 0.0:
        box = ([truncation] * m, [1.0] * m)
    return integrate_unit_cube(
        None, behaviors, tol=tol, seed=seed, corner=corner, box=box,
        f_pair=integrand_pair,
    )


def _truncation_growth_probe(weight, exponents, log_axes, log_shift, tol):
    """Settle a borderline exponent by comparing truncations delta, delta/100."""
    delta = 1e-5
    near = _plain_moment(weight, exponents, log_axes, log_shift, delta, tol)
    far = _plain_moment(weight, exponents, log_axes, log_shift, delta / 100.0, tol)
    growth = far.value - near.value
    evals = near.evaluations + far.evaluations
    if growth > 10.0 * max(tol, 1e-12 * abs(far.value)):
        return QuadratureResult.divergent(
            f"borderline exponent: truncated value grows by {growth:g} "
            f"from delta={delta:g} to delta={delta / 100:g}",
            evaluations=evals,
        )
    return QuadratureResult(
        far.value,
        max(far.abs_error_estimate, abs(growth)),
        evals,
        far.converged,
        "borderline exponent settled by truncation probe",
    )


def _log_substituted_moment(weight, exponent, with_log, log_shift, truncation, tol):
    """Moment of a log-form weight, integrated in s = log(1/t).

    With w(t) = exp(-s*rate_shift) branch(s) the moment becomes

        int_0^S exp(-rate*s) * branch(s) * extra(s) ds,

    rate = exponent + 1 + rate_shift, S = log(1/truncation), and
    extra(s) = log(shift) + s for a log factor.  At rate = 0 and S = inf
    convergence is read off the branch tail exponent.
    """
    lf = weight.log_form
    rate = exponent + 1.0 + lf.rate_shift
    shift_log = math.log(log_shift)

    def integrand(s):
        vals = np.exp(-rate * s) * lf.branch(s)
        if with_log:
            vals = vals * (shift_log + s)
        return vals

    if truncation == 0.0:
        if rate < -_BORDER_EPS:
            return QuadratureResult.divergent(
                "exponentially growing substituted integrand"
            )
        if abs(rate) <= _BORDER_EPS:
            tail = lf.tail_exponent + (1.0 if with_log else 0.0)
            if tail >= -1.0:
                return QuadratureResult.divergent(
                    f"substituted tail exponent {tail:g} is not integrable"
                )
            return integrate_halfline(
                integrand,
                tol=tol,
                zero_exponent=lf.zero_exponent,
                tail_exponent=tail,
                breakpoints=[1.0],
            )
        return integrate_halfline(
            integrand,
            tol=tol,
            zero_exponent=lf.zero_exponent,
            breakpoints=[1.0],
        )

    s_max = math.log(1.0 / truncation)

    def scaled(u):
        return integrand(s_max * u) * s_max

    return integrate_unit_interval(
        scaled,
        EndpointBehavior(lf.zero_exponent, 0.0),
        tol=tol,
        breakpoints=[1.0 / s_max] if s_max > 1.0 else (),
    )


def _check_arity(weight: Weight, config: ExponentConfig) -> None:
    if weight.arity != config.m:
        raise ValueError(
            f"weight arity {weight.arity} does not match config m={config.m}"
        )


def lebesgue_constant(
    weight: Weight,
    config: ExponentConfig,
    truncation: float = 0.0,
    tol: float = 1e-10,
    seed: int = 0,
) -> QuadratureResult:
    """L^p-product operator norm: int prod t_i**(-n/p_i) w(t) dt."""
    _check_arity(weight, config)
    e = [-config.n / p for p in config.p_i]
    return weighted_moment(weight, e, truncation=truncation, tol=tol, seed=seed)


def morrey_constant(
    weight: Weight,
    config: ExponentConfig,
    truncation: float = 0.0,
    tol: float = 1e-10,
    seed: int = 0,
) -> QuadratureResult:
    """Central-Morrey operator norm: int prod t_i**(n*lambda_i) w(t) dt."""
    _check_arity(weight, config)
    e = [config.n * lam for lam in config.lambda_i]
    return weighted_moment(weight, e, truncation=truncation, tol=tol, seed=seed)


def log_moment_constant(
    weight: Weight,
    config: ExponentConfig,
    log_axes: Sequence[int],
    log_shift: float = 1.0,
    truncation: float = 0.0,
    tol: float = 1e-10,
    seed: int = 0,
) -> QuadratureResult:
    """Morrey moment with log(shift/t_i) factors on the axes in `log_axes`.

    Realizes the commutator constants: shift 1 on all axes gives the
    plain log moment, shift 2 the shifted one; a single axis gives the
    mixed moments that appear in the bilinear expansion.
    """
    _check_arity(weight, config)
    e = [config.n * lam for lam in config.lambda_i]
    return weighted_moment(
        weight, e, log_axes=log_axes, log_shift=log_shift,
        truncation=truncation, tol=tol, seed=seed,
    )


def cesaro_lebesgue_constant(
    weight: Weight,
    config: ExponentConfig,
    truncation: float = 0.0,
    tol: float = 1e-10,
    seed: int = 0,
) -> QuadratureResult:
    """Cesaro-side L^p operator norm: int prod t_i**(-n(1-1/p_i)) w(t) dt."""
    _check_arity(weight, config)
    e = [-config.n * (1.0 - 1.0 / p) for p in config.p_i]
    return weighted_moment(weight, e, truncation=truncation, tol=tol, seed=seed)


def cesaro_log_constant(
    weight: Weight,
    config: ExponentConfig,
    truncation: float = 0.0,
    tol: float = 1e-10,
    seed: int = 0,
) -> QuadratureResult:
    """Cesaro commutator constant: int prod t_i**(-n*lambda_i-n) w log(2/t_i)."""
    _check_arity(weight, config)
    e = [-config.n * lam - config.n for lam in config.lambda_i]
    return weighted_moment(
        weight,
        e,
        log_axes=range(1, config.m + 1),
        log_shift=2.0,
        truncation=truncation,
        tol=tol,
        seed=seed,
    )


def closed_form(kind: str, *, p: Optional[float] = None,
                alpha: Optional[float] = None) -> float:
    """Exact reference values for the classically known cases.

    kinds: ``hardy`` -> p/(p-1); ``riemann_liouville`` ->
    Gamma(1-1/p)/Gamma(1+alpha-1/p); ``counterexample_A`` -> 2/alpha.
    """
    if kind == "hardy":
        if p is None or not p > 1.0:
            raise ValueError("hardy closed form requires p > 1")
        return p / (p - 1.0)
    if kind == "riemann_liouville":
        if p is None or not p > 1.0:
            raise ValueError("riemann_liouville closed form requires p > 1")
        if alpha is None or not 0.0 < alpha < 1.0:
            raise ValueError("riemann_liouville closed form requires alpha in (0,1)")
        return gamma(1.0 - 1.0 / p) / gamma(1.0 + alpha - 1.0 / p)
    if kind == "counterexample_A":
        if alpha is None or not 0.0 < alpha < 1.0:
            raise ValueError("counterexample_A closed form requires alpha in (0,1)")
        return 2.0 / alpha
    raise ValueError(f"unknown closed form kind {kind!r}")


_FAMILIES = ("lebesgue", "morrey", "log-moment", "cesaro-lebesgue", "cesaro-log")


@dataclass(frozen=True)
class ConstantSpec:
    """A fully described constant computation (used by the CLI)."""

    weight: Weight
    config: ExponentConfig
    family: str
    log_axes: tuple[int, ...] = ()
    log_shift: float = 1.0
    truncation: float = 0.0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"family must be one of {_FAMILIES}")
        _check_arity(self.weight, self.config)
        if self.family == "log-moment" and not self.log_axes:
            raise ValueError("log-moment family requires at least one log axis")

    def compute(self, tol: float = 1e-10, seed: int = 0) -> QuadratureResult:
        if self.family == "lebesgue":
            return lebesgue_constant(
                self.weight, self.config, self.truncation, tol, seed
            )
        if self.family == "morrey":
            return morrey_constant(
                self.weight, self.config, self.truncation, tol, seed
            )
        if self.family == "log-moment":
            return log_moment_constant(
                self.weight, self.config, self.log_axes, self.log_shift,
                self.truncation, tol, seed,
            )
        if self.family == "cesaro-lebesgue":
            return cesaro_lebesgue_constant(
                self.weight, self.config, self.truncation, tol, seed
            )
        return cesaro_log_constant(
            self.weight, self.config, self.truncation, tol, seed
        )
