"""Pointwise evaluation of the weighted averaging operators on radial inputs.

For radial inputs every operator value depends on ``r = |x|`` alone:

* Hardy type:   ``int_{(0,1)^m} prod_i f_i(t_i r) w(t) dt``
* Cesaro type:  ``int_{(0,1)^m} prod_i f_i(r/t_i) t_i^{-n} w(t) dt``
* commutators:  the same integrals with the extra factor
  ``prod_i (b_i(r) - b_i(t_i r))`` (resp. ``b_i(r) - b_i(r/t_i)``)

plus the unary fractional integrals

* left-sided:   ``I_a f(x) = Gamma(a)^-1 int_0^x f(t) (x-t)^(a-1) dt``
* right-sided:  ``J_a f(x) = Gamma(a)^-1 int_x^inf f(t) (t-x)^(a-1) dt/t``

evaluated by the same singular quadrature after mapping onto (0,1).

Cutoff supports of the inputs are turned into box restrictions of the
integration domain (never integrated across as jumps), and piecewise
power descriptors feed the per-axis endpoint exponents.  Products whose
per-axis exponent reaches -1 are reported as divergent, not ground
through the quadrature.
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
from .spaces import RadialFunction
from .weights import Weight

__all__ = [
    "OperatorRequest",
    "hardy_apply",
    "cesaro_apply",
    "hardy_commutator_apply",
    "cesaro_commutator_apply",
    "riemann_liouville_apply",
    "weyl_apply",
]


@dataclass(frozen=True)
class OperatorRequest:
    """One pointwise operator evaluation at radius r = |x|."""

    weight: Weight
    functions: tuple[RadialFunction, ...]
    radius: float
    n: int = 1
    symbols: Optional[tuple[RadialFunction, ...]] = None
    tol: float = 1e-10

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple(self.functions))
        if len(self.functions) != self.weight.arity:
            raise ValueError("need one input function per weight coordinate")
        if self.symbols is not None:
            object.__setattr__(self, "symbols", tuple(self.symbols))
            if len(self.symbols) != self.weight.arity:
                raise ValueError("need one symbol per weight coordinate")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.n < 1:
            raise ValueError("dimension n must be >= 1")


class _Axis:
    """Integration data for one t_i axis: box edges, exponents, kinks.

    `certain` marks exponents derived from a descriptor; only those are
    allowed to short-circuit the evaluation as divergent (a custom input
    with unknown decay gets the benefit of the doubt and fails through
    quadrature non-convergence instead).
    """

    def __init__(self, lo, hi, zero_exp, one_exp, breakpoints=(), certain=True):
        self.lo = lo
        self.hi = hi
        self.zero_exp = zero_exp
        self.one_exp = one_exp
        self.breakpoints = tuple(breakpoints)
        self.certain = certain


def _hardy_axis(f: RadialFunction, r: float, weight_beh: EndpointBehavior) -> _Axis:
    """Support and endpoint exponents of t -> f(t r) against the weight axis."""
    d = f.descriptor
    if d is None:
        return _Axis(
            0.0,
            1.0,
            weight_beh.exponent_at_zero,
            weight_beh.exponent_at_one,
            tuple(b / r for b in f.breakpoints if 0.0 < b / r < 1.0),
        )
    lo = min(d.r_min / r, 1.0)
    hi = min(d.r_max / r, 1.0)
    zero = weight_beh.exponent_at_zero + (d.exponent if lo == 0.0 else 0.0)
    return _Axis(lo, hi, zero, weight_beh.exponent_at_one if hi == 1.0 else 0.0)


def _cesaro_axis(
    f: RadialFunction, r: float, n: int, weight_beh: EndpointBehavior
) -> _Axis:
    """Support and exponents of t -> f(r/t) t^-n against the weight axis."""
    d = f.descriptor
    if d is None:
        # unknown decay of f at infinity: hint the raw t^-n growth capped
        # at an integrable exponent, and let the quadrature decide
        bps = tuple(r / b for b in f.breakpoints if 0.0 < r / b < 1.0)
        return _Axis(
            0.0,
            1.0,
            max(weight_beh.exponent_at_zero - n, -0.9),
            weight_beh.exponent_at_one,
            bps,
            certain=False,
        )
    lo = min(r / d.r_max, 1.0)  # r/t < r_max  <=>  t > r/r_max
    hi = min(r / d.r_min, 1.0) if d.r_min > 0.0 else 1.0
    zero = weight_beh.exponent_at_zero + (-d.exponent - n if lo == 0.0 else 0.0)
    return _Axis(lo, hi, zero, weight_beh.exponent_at_one if hi == 1.0 else 0.0)


def _integrate_log_axis(weight: Weight, ax: _Axis, factor, tol: float) -> QuadratureResult:
    """Unary log-form weights integrate in s = log(1/t).

    The weight's natural variable makes its slowly varying (logarithmic)
    structure a plain power in s, which the endpoint machinery then
    handles at full accuracy.
    """
    lf = weight.log_form
    s_lo = -math.log(ax.hi) if ax.hi < 1.0 else 0.0
    s_hi = -math.log(ax.lo) if ax.lo > 0.0 else math.inf
    decay = 1.0 + lf.rate_shift

    def g(s):
        # the clamp keeps log-type factors finite at samples deep enough
        # for exp(-s) to underflow; their true contribution there is
        # exponentially negligible
        t = np.maximum(np.exp(-s), 1e-300)
        return factor(t) * lf.branch(s) * np.exp(-decay * s)

    bps = [1.0] + [-math.log(b) for b in ax.breakpoints if 0.0 < b < 1.0]
    if s_hi == math.inf:

        def shifted(u):
            return g(u + s_lo)

        return integrate_halfline(
            shifted,
            tol=tol,
            zero_exponent=lf.zero_exponent if s_lo == 0.0 else 0.0,
            breakpoints=[b - s_lo for b in bps if b > s_lo],
        )

    span = s_hi - s_lo

    def scaled(u):
        return g(s_lo + span * u) * span

    return integrate_unit_interval(
        scaled,
        EndpointBehavior(lf.zero_exponent if s_lo == 0.0 else 0.0, 0.0),
        tol=tol,
        breakpoints=[(b - s_lo) / span for b in bps if s_lo < b < s_hi],
    )


def _integrate_axes(
    weight: Weight,
    axes: Sequence[_Axis],
    factor,
    factor_near_one,
    tol: float,
) -> QuadratureResult:
    """Integrate factor(t) * w(t) over the product of axis boxes.

    `factor_near_one(s...)` evaluates factor at t = 1 - s for the corner
    route (None disables corner handling even if the weight has one).
    """
    for ax in axes:
        if ax.lo >= ax.hi:
            return QuadratureResult(0.0, 0.0, 1, True, "empty support")
        if ax.certain and ax.lo == 0.0 and not ax.zero_exp > -1.0:
            return QuadratureResult.divergent(
                f"axis exponent {ax.zero_exp:g} at t=0 is not integrable"
            )
    if weight.arity == 1 and weight.log_form is not None:
        return _integrate_log_axis(weight, axes[0], factor, tol)

    w_pair = weight.pair

    def integrand_pair(ts, ss):
        return factor(*ts) * w_pair(ts, ss)

    corner = None
    if weight.corner is not None and factor_near_one is not None:
        w_smooth = weight.corner.smooth_factor

        def smooth(*ss):
            return factor_near_one(*ss) * w_smooth(*ss)

        corner = CornerBehavior(weight.corner.exponent, smooth)

    behaviors = [EndpointBehavior(ax.zero_exp, ax.one_exp) for ax in axes]
    box = ([ax.lo for ax in axes], [ax.hi for ax in axes])
    if all(ax.lo == 0.0 and ax.hi == 1.0 for ax in axes):
        box = None
    return integrate_unit_cube(
        None,
        behaviors,
        tol=tol,
        corner=corner,
        box=box,
        axis_breakpoints=[ax.breakpoints for ax in axes],
        f_pair=integrand_pair,
    )


def _symbol_factor(symbols, r, arguments):
    """prod_i (b_i(r) - b_i(argument_i)) as a pointwise array factor."""

    def factor(*ts):
        acc = None
        for b, arg in zip(symbols, arguments):
            diff = b.fn(np.asarray(r, dtype=float)) - b.fn(arg(*ts))
            acc = diff if acc is None else acc * diff
        return acc

    return factor


def hardy_apply(req: OperatorRequest) -> QuadratureResult:
    """Weighted multilinear Hardy average at radius r.

    Returns ``int prod_i f_i(t_i r) w(t) dt`` over the unit cube.
    """
    if req.symbols is not None:
        raise ValueError("symbols present; use hardy_commutator_apply")
    r = req.radius
    axes = [
        _hardy_axis(f, r, b) for f, b in zip(req.functions, req.weight.behaviors)
    ]

    def factor(*ts):
        acc = req.functions[0].fn(ts[0] * r)
        for f, t in zip(req.functions[1:], ts[1:]):
            acc = acc * f.fn(t * r)
        return acc

    def factor_near_one(*ss):
        acc = req.functions[0].fn((1.0 - ss[0]) * r)
        for f, s in zip(req.functions[1:], ss[1:]):
            acc = acc * f.fn((1.0 - s) * r)
        return acc

    return _integrate_axes(req.weight, axes, factor, factor_near_one, req.tol)


def cesaro_apply(req: OperatorRequest) -> QuadratureResult:
    """Weighted multilinear Cesaro average at radius r.

    Returns ``int prod_i f_i(r/t_i) t_i^-n w(t) dt`` over the unit cube.
    """
    if req.symbols is not None:
        raise ValueError("symbols present; use cesaro_commutator_apply")
    r, n = req.radius, req.n
    axes = [
        _cesaro_axis(f, r, n, b)
        for f, b in zip(req.functions, req.weight.behaviors)
    ]

    def factor(*ts):
        acc = req.functions[0].fn(r / ts[0]) * ts[0] ** (-float(n))
        for f, t in zip(req.functions[1:], ts[1:]):
            acc = acc * f.fn(r / t) * t ** (-float(n))
        return acc

    def factor_near_one(*ss):
        acc = None
        for f, s in zip(req.functions, ss):
            t = 1.0 - s
            term = f.fn(r / t) * t ** (-float(n))
            acc = term if acc is None else acc * term
        return acc

    return _integrate_axes(req.weight, axes, factor, factor_near_one, req.tol)


def hardy_commutator_apply(req: OperatorRequest) -> QuadratureResult:
    """Hardy average with symbol factors prod_i (b_i(r) - b_i(t_i r))."""
    if req.symbols is None:
        raise ValueError("commutator evaluation requires symbols")
    r = req.radius
    axes = []
    for f, b, wb in zip(req.functions, req.symbols, req.weight.behaviors):
        ax = _hardy_axis(f, r, wb)
        sym_bps = tuple(x / r for x in b.breakpoints if ax.lo < x / r < ax.hi)
        axes.append(_Axis(ax.lo, ax.hi, ax.zero_exp, ax.one_exp,
                          ax.breakpoints + sym_bps, ax.certain))

    def plain(*ts):
        acc = req.functions[0].fn(ts[0] * r)
        for f, t in zip(req.functions[1:], ts[1:]):
            acc = acc * f.fn(t * r)
        return acc

    args = [
        (lambda *ts, _i=i: ts[_i] * r) for i in range(len(req.functions))
    ]
    sym = _symbol_factor(req.symbols, r, args)

    def factor(*ts):
        return plain(*ts) * sym(*ts)

    def factor_near_one(*ss):
        ts = tuple(1.0 - s for s in ss)
        return plain(*ts) * sym(*ts)

    return _integrate_axes(req.weight, axes, factor, factor_near_one, req.tol)


def cesaro_commutator_apply(req: OperatorRequest) -> QuadratureResult:
    """Cesaro average with symbol factors prod_i (b_i(r) - b_i(r/t_i))."""
    if req.symbols is None:
        raise ValueError("commutator evaluation requires symbols")
    r, n = req.radius, req.n
    axes = []
    for f, b, wb in zip(req.functions, req.symbols, req.weight.behaviors):
        ax = _cesaro_axis(f, r, n, wb)
        sym_bps = tuple(
            r / x for x in b.breakpoints if ax.lo < r / x < ax.hi
        )
        axes.append(_Axis(ax.lo, ax.hi, ax.zero_exp, ax.one_exp,
                          ax.breakpoints + sym_bps, ax.certain))

    def plain(*ts):
        acc = None
        for f, t in zip(req.functions, ts):
            term = f.fn(r / t) * t ** (-float(n))
            acc = term if acc is None else acc * term
        return acc

    args = [
        (lambda *ts, _i=i: r / ts[_i]) for i in range(len(req.functions))
    ]
    sym = _symbol_factor(req.symbols, r, args)

    def factor(*ts):
        return plain(*ts) * sym(*ts)

    def factor_near_one(*ss):
        ts = tuple(1.0 - s for s in ss)
        return plain(*ts) * sym(*ts)

    return _integrate_axes(req.weight, axes, factor, factor_near_one, req.tol)


def riemann_liouville_apply(
    alpha: float, f: RadialFunction, x: float, tol: float = 1e-10
) -> QuadratureResult:
    """Left-sided fractional integral of order alpha at x > 0.

    Mapped as ``x**a / Gamma(a) * int_0^1 f(x u) (1-u)**(a-1) du``; the
    value satisfies ``I_a f(x) = x**a * (Hardy average with the
    fractional weight)``.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0,1)")
    if not x > 0.0:
        raise ValueError("x must be positive")
    ga = gamma(alpha)
    d = f.descriptor
    lo, hi, zero_exp = 0.0, 1.0, 0.0
    bps: tuple[float, ...] = tuple(b / x for b in f.breakpoints if 0.0 < b / x < 1.0)
    if d is not None:
        lo, hi = min(d.r_min / x, 1.0), min(d.r_max / x, 1.0)
        zero_exp = d.exponent if lo == 0.0 else 0.0
        bps = ()
    if lo >= hi:
        return QuadratureResult(0.0, 0.0, 1, True, "empty support")
    if not zero_exp > -1.0:
        return QuadratureResult.divergent("input not integrable at the origin")

    def integrand_pair(ts, ss):
        return f.fn(x * ts[0]) * ss[0] ** (alpha - 1.0) / ga

    res = integrate_unit_cube(
        None,
        [EndpointBehavior(zero_exp, alpha - 1.0 if hi == 1.0 else 0.0)],
        tol=tol,
        box=([lo], [hi]) if (lo, hi) != (0.0, 1.0) else None,
        axis_breakpoints=[bps],
        f_pair=integrand_pair,
    )
    scale = x**alpha
    return QuadratureResult(
        res.value * scale,
        res.abs_error_estimate * scale,
        res.evaluations,
        res.converged,
        res.diagnosis,
    )


def weyl_apply(
    alpha: float, f: RadialFunction, x: float, tol: float = 1e-10
) -> QuadratureResult:
    """Right-sided fractional integral (dt/t measure) at x > 0.

    Substituting t = x/u maps it onto the unit interval:

        J_a f(x) = x**(a-1)/Gamma(a) * int_0^1 f(x/u) (1-u)**(a-1) u**(-a) du

    so that ``(.)**(1-a) J_a f`` is the Cesaro average with the
    complementary fractional weight.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0,1)")
    if not x > 0.0:
        raise ValueError("x must be positive")
    ga = gamma(alpha)
    d = f.descriptor
    lo, hi, zero_extra = 0.0, 1.0, 0.0
    bps: tuple[float, ...] = tuple(x / b for b in f.breakpoints if 0.0 < x / b < 1.0)
    if d is not None:
        lo = min(x / d.r_max, 1.0)
        hi = min(x / d.r_min, 1.0) if d.r_min > 0.0 else 1.0
        zero_extra = -d.exponent if lo == 0.0 else 0.0
        bps = ()
    if lo >= hi:
        return QuadratureResult(0.0, 0.0, 1, True, "empty support")
    zero_exp = zero_extra - alpha
    if not zero_exp > -1.0:
        return QuadratureResult.divergent("input tail not integrable against the kernel")

    def integrand_pair(ts, ss):
        u = ts[0]
        return f.fn(x / u) * ss[0] ** (alpha - 1.0) * u ** (-alpha) / ga

    res = integrate_unit_cube(
        None,
        [EndpointBehavior(zero_exp, alpha - 1.0 if hi == 1.0 else 0.0)],
        tol=tol,
        box=([lo], [hi]) if (lo, hi) != (0.0, 1.0) else None,
        axis_breakpoints=[bps],
        f_pair=integrand_pair,
    )
    scale = x ** (alpha - 1.0)
    return QuadratureResult(
        res.value * scale,
        res.abs_error_estimate * scale,
        res.evaluations,
        res.converged,
        res.diagnosis,
    )
