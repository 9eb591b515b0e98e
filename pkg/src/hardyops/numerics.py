"""Quadrature engines for endpoint-singular integrands.

Everything in this package reduces to integrals of three shapes:

* the open unit interval, with power-law behavior ``t**b0`` near 0 and
  ``(1-t)**b1`` near 1 (``b0, b1 > -1``),
* the open unit cube ``(0,1)**m``, with per-axis endpoint powers and,
  optionally, a single integrable corner singularity at ``(1,...,1)``,
* the half line ``(0, inf)``, reached through the compactifying
  substitution ``r = u/(1-u)``.

Endpoint singularities are removed *before* any quadrature rule sees the
integrand.  On the half of the interval adjacent to an endpoint with
nonzero exponent ``b`` we substitute

    t = (1/2) * (2u)**g,      g = 1/(1+b),

which turns ``t**b dt`` into ``g * du`` exactly: a pure power endpoint,
whether a singularity or a fractional zero, becomes a constant, and
``t**b * (smooth)`` becomes bounded with mild fractional remainders that
panel refinement mops up.

The interval and half-line integrators are adaptive: each panel is scored
by comparing its 15-point Gauss-Legendre value against the sum over its
two halves, worst panels are bisected in deterministic batches, and the
final sum is compensated (``math.fsum``) in left-to-right panel order, so
repeated calls are bit-identical.

The cube integrator is a deterministic tensor product of per-axis
composite Gauss-Legendre rules on panels graded geometrically toward both
endpoints (after the same substitutions), escalated through two or three
refinement levels; the reported error is the difference between the last
two levels.  For ``m >= 4`` it switches to Latin-hypercube Monte Carlo in
the substituted coordinates, which plays the role of importance sampling:
the map density matches the declared endpoint powers, so the weighted
integrand is bounded and the estimator has finite variance.

Integrands must accept numpy arrays (one per coordinate) and evaluate
elementwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as _iter_product
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = [
    "EndpointBehavior",
    "CornerBehavior",
    "QuadratureResult",
    "QuadratureError",
    "gamma",
    "integrate_unit_interval",
    "integrate_unit_cube",
    "integrate_halfline",
]


class QuadratureError(ValueError):
    """Raised when an integrand returns NaN/inf at an interior point."""


@dataclass(frozen=True)
class EndpointBehavior:
    """Declared power-law exponents of an integrand at 0 and 1.

    ``exponent_at_zero = b0`` means the integrand behaves like ``t**b0``
    as ``t -> 0+`` (up to slowly varying factors such as logarithms), and
    similarly ``exponent_at_one = b1`` for ``(1-t)**b1``.  Integrability
    requires both exponents to exceed -1.
    """

    exponent_at_zero: float = 0.0
    exponent_at_one: float = 0.0

    def __post_init__(self):
        if not (self.exponent_at_zero > -1.0):
            raise ValueError(
                f"exponent_at_zero must be > -1, got {self.exponent_at_zero}"
            )
        if not (self.exponent_at_one > -1.0):
            raise ValueError(
                f"exponent_at_one must be > -1, got {self.exponent_at_one}"
            )


@dataclass(frozen=True)
class CornerBehavior:
    """Integrable singularity of a cube integrand at the corner (1,...,1).

    The integrand factors near the corner as ``|s|**exponent * smooth``
    where ``s = (1-t_1, ..., 1-t_m)`` and ``|s|`` is the Euclidean norm.
    ``smooth_factor(*s)`` must return ``f(1-s) * |s|**(-exponent)``,
    bounded near ``s = 0``; supplying it in the ``s`` coordinates avoids
    the catastrophic cancellation of computing ``1 - t`` deep in the
    corner.  Integrability requires ``exponent > -m``.
    """

    exponent: float
    smooth_factor: Callable[..., np.ndarray]


@dataclass(frozen=True)
class QuadratureResult:
    """Value, error estimate and cost of a numerical integration."""

    value: float
    abs_error_estimate: float
    evaluations: int
    converged: bool
    diagnosis: Optional[str] = None

    def __post_init__(self):
        if self.abs_error_estimate < 0:
            raise ValueError("abs_error_estimate must be >= 0")
        if self.evaluations < 1:
            raise ValueError("evaluations must be >= 1")

    @staticmethod
    def divergent(diagnosis: str, evaluations: int = 1) -> "QuadratureResult":
        """Structured verdict for an integral diagnosed as divergent."""
        return QuadratureResult(
            value=math.inf,
            abs_error_estimate=math.inf,
            evaluations=evaluations,
            converged=False,
            diagnosis=diagnosis,
        )


# ---------------------------------------------------------------------------
# gamma function
# ---------------------------------------------------------------------------

# Lanczos approximation, g = 7, 9 coefficients (Godfrey's tabulation).
# Relative error is a few 1e-15 over the positive real axis, comfortably
# below the 1e-12 this package relies on for weight normalizations.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(x: float) -> float:
    """Gamma function on the positive real axis.

    Raises ValueError for x <= 0 (poles and the negative axis are not
    supported; nothing here needs them).
    """
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"gamma requires x > 0, got {x}")
    if x < 0.5:
        # reflection keeps the Lanczos series in its accurate range
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    x -= 1.0
    acc = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        acc += c / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


# ---------------------------------------------------------------------------
# Gauss-Legendre building blocks
# ---------------------------------------------------------------------------

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on (0,1), cached."""
    rule = _GL_CACHE.get(order)
    if rule is None:
        x, w = np.polynomial.legendre.leggauss(order)
        rule = ((x + 1.0) / 2.0, w / 2.0)
        _GL_CACHE[order] = rule
    return rule


def _check_finite(values: np.ndarray, where: str) -> None:
    if not np.all(np.isfinite(values)):
        raise QuadratureError(f"integrand returned a non-finite value ({where})")


# nodes mapped closer to an endpoint than these clamps carry negligible
# quadrature weight; clamping keeps integrands evaluable in (0,1)
_T_FLOOR = 1e-300
_T_CEIL = float(np.nextafter(1.0, 0.0))


class _UnitMap:
    """Two-sided desingularizing map u -> t on (0,1).

    Left half:  t = (1/2)(2u)^g0, right half: t = 1 - (1/2)(2(1-u))^g1,
    with g = 1/(1+b) for a nonzero endpoint exponent b (the map turns a
    pure power endpoint, singular or fractional zero alike, into a
    constant) and g = 1 for b = 0.  `pullback` maps t-space breakpoints
    to u-space so panel edges can be aligned with them.
    """

    def __init__(self, behavior: EndpointBehavior):
        b0 = behavior.exponent_at_zero
        b1 = behavior.exponent_at_one
        self.g0 = 1.0 / (1.0 + b0) if b0 != 0.0 else 1.0
        self.g1 = 1.0 / (1.0 + b1) if b1 != 0.0 else 1.0
        self.identity = self.g0 == 1.0 and self.g1 == 1.0

    def forward(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Map u-nodes to (t, s, dt/du) with s = 1 - t computed exactly.

        Near t = 1 the complement s = (1/2)(2(1-u))**g1 is formed
        directly, never as 1 - t: pair-form integrands keep full
        relative precision where 1 - t itself is no longer resolvable
        in double precision.
        """
        if self.identity:
            return u, 1.0 - u, np.ones_like(u)
        t = np.empty_like(u)
        s = np.empty_like(u)
        dt = np.empty_like(u)
        left = u <= 0.5
        ul = u[left]
        t[left] = 0.5 * (2.0 * ul) ** self.g0
        s[left] = 1.0 - t[left]  # exact: t <= 1/2
        dt[left] = self.g0 * (2.0 * ul) ** (self.g0 - 1.0)
        ur = u[~left]
        v = 2.0 * (1.0 - ur)
        s[~left] = 0.5 * v ** self.g1
        t[~left] = 1.0 - s[~left]
        dt[~left] = self.g1 * v ** (self.g1 - 1.0)
        return (
            np.clip(t, _T_FLOOR, _T_CEIL),
            np.clip(s, _T_FLOOR, _T_CEIL),
            dt,
        )

    def pullback(self, t: float) -> float:
        if self.identity:
            return float(t)
        if t <= 0.5:
            return 0.5 * (2.0 * t) ** (1.0 / self.g0)
        return 1.0 - 0.5 * (2.0 * (1.0 - t)) ** (1.0 / self.g1)

    def max_depth_at_zero(self) -> int:
        # under/overflow is the only limit: t itself is exact at this end
        return max(1, int(900.0 / self.g0))

    def max_depth_at_one(self) -> int:
        # s is exact too (pair-form integrands), but plain integrands
        # recompute 1 - t, which saturates at the 2^-53 cancellation
        # cliff; stay above it
        return max(3, int(48.0 / self.g1) - 2)


def _adaptive_panels(
    F: Callable[[np.ndarray], np.ndarray],
    tol: float,
    rtol: float,
    max_evals: int,
    edges: Sequence[float],
) -> tuple[float, float, int, bool]:
    """Adaptive bisection on (0,1) for a vectorized integrand F.

    Panels start at `edges`; each refinement pass bisects every panel in
    the current worst tier (error above half the maximum), re-scoring by
    |GL15(panel) - GL15(left half) - GL15(right half)|.
    """
    base_x, base_w = _gl(15)

    def score(lefts: np.ndarray, rights: np.ndarray):
        # nodes for whole panel + both halves, one batched evaluation
        mids = 0.5 * (lefts + rights)
        seg_l = np.concatenate([lefts, lefts, mids])
        seg_r = np.concatenate([rights, mids, rights])
        widths = seg_r - seg_l
        nodes = seg_l[:, None] + widths[:, None] * base_x[None, :]
        vals = F(nodes.ravel()).reshape(nodes.shape)
        _check_finite(vals, "unit interval")
        integrals = (vals * base_w[None, :]).sum(axis=1) * widths
        k = lefts.size
        whole = integrals[:k]
        halves = integrals[k : 2 * k] + integrals[2 * k :]
        err = np.abs(whole - halves)
        return halves, err, nodes.size

    lefts = np.asarray(edges[:-1], dtype=float)
    rights = np.asarray(edges[1:], dtype=float)
    values, errors, used = score(lefts, rights)

    while True:
        total = float(np.sum(values))
        total_err = float(np.sum(errors))
        goal = max(tol, rtol * abs(total))
        if total_err <= goal:
            break
        if used >= max_evals:
            break
        # never bisect below the width floor: the map cannot resolve the
        # endpoint distance there anyway
        wide = (rights - lefts) > 2.0**-48
        if not np.any(wide):
            break
        cut = 0.5 * float(np.max(errors[wide]))
        worst = wide & (errors >= cut)
        keep = ~worst
        mids = 0.5 * (lefts[worst] + rights[worst])
        split_l = np.concatenate([lefts[worst], mids])
        split_r = np.concatenate([mids, rights[worst]])
        new_vals, new_errs, cost = score(split_l, split_r)
        lefts = np.concatenate([lefts[keep], split_l])
        rights = np.concatenate([rights[keep], split_r])
        values = np.concatenate([values[keep], new_vals])
        errors = np.concatenate([errors[keep], new_errs])
        used += cost

    order = np.argsort(lefts, kind="stable")
    value = math.fsum(values[order].tolist())
    total_err = float(np.sum(errors))
    converged = total_err <= max(tol, rtol * abs(value))
    return value, total_err, used, converged


def integrate_unit_interval(
    f: Optional[Callable[[np.ndarray], np.ndarray]],
    behavior: Optional[EndpointBehavior] = None,
    tol: float = 1e-10,
    rtol: float = 1e-8,
    max_evals: int = 400_000,
    breakpoints: Sequence[float] = (),
    f_pair: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None,
) -> QuadratureResult:
    """Integrate f over (0,1) with declared endpoint power behavior.

    The interior rule is 15-point Gauss-Legendre per panel (exact for
    polynomials up to degree 29 when both exponents are 0), wrapped in
    the desingularizing substitution described in the module docstring.
    `breakpoints` lists interior points (kinks, jumps) where panel edges
    are pinned.  Raises QuadratureError on NaN/inf at interior samples.

    An integrand singular at t = 1 evaluated through plain f(t) cannot
    see the mass within ~1e-16 of that endpoint (1 - t is no longer
    resolvable); that truncation is charged to the error estimate.
    Supplying `f_pair(t, s)` with the exact complement s = 1 - t removes
    the limitation entirely.
    """
    behavior = behavior or EndpointBehavior()
    umap = _UnitMap(behavior)

    if f_pair is not None:

        def F(u: np.ndarray) -> np.ndarray:
            t, s, dt = umap.forward(u)
            return np.asarray(f_pair(t, s), dtype=float) * dt

    else:

        def F(u: np.ndarray) -> np.ndarray:
            t, _, dt = umap.forward(u)
            return np.asarray(f(t), dtype=float) * dt

    edges = {0.0, 0.5, 1.0}
    for bp in breakpoints:
        if 0.0 < bp < 1.0:
            edges.add(umap.pullback(float(bp)))
    value, err, used, converged = _adaptive_panels(
        F, tol, rtol, max_evals, sorted(edges)
    )
    b1 = behavior.exponent_at_one
    if f_pair is None and b1 < 0.0:
        # honest bound on the unresolvable endpoint mass: with the local
        # model c*(1-t)**b1, the region 1 - t < 2^-53 contributes about
        # c * (2^-53)**(1+b1) / (1+b1)
        s_probe = 2.0**-40
        sample = np.asarray(f(np.array([1.0 - s_probe])), dtype=float)
        coeff = abs(float(sample[0])) * s_probe ** (-b1)
        err += coeff * (2.0**-53) ** (1.0 + b1) / (1.0 + b1)
        converged = err <= max(tol, rtol * abs(value))
    return QuadratureResult(value, err, used, converged)


def integrate_halfline(
    g: Callable[[np.ndarray], np.ndarray],
    tol: float = 1e-10,
    rtol: float = 1e-8,
    zero_exponent: float = 0.0,
    tail_exponent: Optional[float] = None,
    max_evals: int = 500_000,
    breakpoints: Sequence[float] = (),
) -> QuadratureResult:
    """Integrate g over (0, inf) via the substitution r = u/(1-u).

    `zero_exponent` declares g ~ r**b near 0; `tail_exponent` declares
    g ~ r**b at infinity (requires b < -1) and sharpens the u -> 1
    endpoint handling.  Leave `tail_exponent` as None for integrands
    that decay faster than any power.  The transformed integrand is
    evaluated from the exact complement 1 - u, so slow tails lose no
    precision however deep the rule samples.
    """
    if tail_exponent is not None and not tail_exponent < -1.0:
        raise ValueError("tail_exponent must be < -1 for an integrable tail")
    # a tail r**b maps to (1-u)**(-b-2) at u = 1
    b1 = 0.0 if tail_exponent is None else -tail_exponent - 2.0
    behavior = EndpointBehavior(zero_exponent, b1)

    def h_pair(u: np.ndarray, om: np.ndarray) -> np.ndarray:
        r = u / om
        return np.asarray(g(r), dtype=float) / (om * om)

    bps = [r / (1.0 + r) for r in breakpoints if r > 0.0]
    return integrate_unit_interval(
        None, behavior, tol=tol, rtol=rtol, max_evals=max_evals,
        breakpoints=bps, f_pair=h_pair,
    )


# ---------------------------------------------------------------------------
# tensor-product cube integration (m <= 3)
# ---------------------------------------------------------------------------


def _axis_rule(
    behavior: EndpointBehavior,
    depth: int,
    order: int,
    uniform_panels: int,
    breakpoints: Sequence[float] = (),
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Composite GL rule on (0,1) for one axis, after substitution.

    Panels are graded geometrically toward both endpoints in u-space
    (edges at 2^-j down to 2^-(depth+1), mirrored), optionally unioned
    with a uniform grid when the integrand oscillates.  Returns nodes t,
    exact complements s = 1 - t, and weights that already contain the
    substitution Jacobian.
    """
    umap = _UnitMap(behavior)
    edges = {0.0, 0.5, 1.0}
    # deeper grading than the map's cancellation floor is wasted: past it,
    # 1 - t (resp. t) is no longer resolvable in double precision
    depth0 = min(depth, umap.max_depth_at_zero())
    depth1 = min(depth, umap.max_depth_at_one())
    for j in range(1, depth0 + 2):
        edges.add(0.5 ** (j + 1))
    for j in range(1, depth1 + 2):
        edges.add(1.0 - 0.5 ** (j + 1))
    if uniform_panels > 1:
        edges.update(np.linspace(0.0, 1.0, uniform_panels + 1).tolist())
    for bp in breakpoints:
        if 0.0 < bp < 1.0:
            edges.add(umap.pullback(float(bp)))
    e = np.asarray(sorted(edges))
    lefts, widths = e[:-1], np.diff(e)
    x, w = _gl(order)
    u = (lefts[:, None] + widths[:, None] * x[None, :]).ravel()
    uw = (widths[:, None] * w[None, :]).ravel()
    t, s, dt = umap.forward(u)
    return t, s, uw * dt


_TENSOR_LEVELS = {
    1: ((16, 12), (24, 16), (30, 20)),
    2: ((14, 12), (20, 16), (26, 20)),
    3: ((8, 8), (12, 10), (15, 12)),
}


def _tensor_value(
    fp: Callable[[tuple, tuple], np.ndarray],
    rules: Sequence[tuple[np.ndarray, np.ndarray, np.ndarray]],
) -> tuple[float, int]:
    """Weighted tensor sum of a pair-form integrand fp(ts, ss).

    Evaluated in slabs to bound memory for m = 3.
    """
    m = len(rules)
    nodes = [r[0] for r in rules]
    comps = [r[1] for r in rules]
    weights = [r[2] for r in rules]
    if m == 1:
        vals = np.asarray(fp((nodes[0],), (comps[0],)), dtype=float)
        _check_finite(vals, "axis 1")
        return float(vals @ weights[0]), nodes[0].size
    if m == 2:
        ts = (nodes[0][:, None], nodes[1][None, :])
        ss = (comps[0][:, None], comps[1][None, :])
        vals = np.asarray(fp(ts, ss), dtype=float)
        _check_finite(vals, "unit square")
        return float(weights[0] @ vals @ weights[1]), vals.size
    # m == 3: loop chunks of the first axis
    total = 0.0
    count = 0
    shape23 = (1, nodes[1].size, nodes[2].size)
    t2 = np.broadcast_to(nodes[1][None, :, None], shape23)
    t3 = np.broadcast_to(nodes[2][None, None, :], shape23)
    s2 = np.broadcast_to(comps[1][None, :, None], shape23)
    s3 = np.broadcast_to(comps[2][None, None, :], shape23)
    w23 = weights[1][:, None] * weights[2][None, :]
    chunk = max(1, int(2**22 / (nodes[1].size * nodes[2].size)))
    for start in range(0, nodes[0].size, chunk):
        t1 = nodes[0][start : start + chunk][:, None, None]
        s1 = comps[0][start : start + chunk][:, None, None]
        vals = np.asarray(fp((t1, t2, t3), (s1, s2, s3)), dtype=float)
        _check_finite(vals, "unit cube")
        count += vals.size
        total += float(weights[0][start : start + chunk] @ (vals * w23).sum(axis=(1, 2)))
    return total, count


def _tensor_integrate(
    fp: Callable[[tuple, tuple], np.ndarray],
    behaviors: Sequence[EndpointBehavior],
    tol: float,
    rtol: float,
    budget: int,
    uniform_panels: int,
    axis_breakpoints: Optional[Sequence[Sequence[float]]] = None,
) -> QuadratureResult:
    m = len(behaviors)
    bps = axis_breakpoints or [()] * m
    levels = _TENSOR_LEVELS[m]
    prev = None
    value = math.nan
    err = math.inf
    used = 0
    converged = False
    for depth, order in levels:
        rules = [
            _axis_rule(b, depth, order, uniform_panels, bp)
            for b, bp in zip(behaviors, bps)
        ]
        cost = 1
        for r in rules:
            cost *= r[0].size
        if used > 0 and used + cost > budget:
            break
        value, n = _tensor_value(fp, rules)
        used += n
        if prev is not None:
            err = abs(value - prev)
            if err <= max(tol, rtol * abs(value)):
                converged = True
                break
        prev = value
    return QuadratureResult(value, err if math.isfinite(err) else abs(value), used, converged)


# ---------------------------------------------------------------------------
# box restriction
# ---------------------------------------------------------------------------


def _euclid_arrays(vs) -> np.ndarray:
    acc = vs[0] * vs[0]
    for v in vs[1:]:
        acc = acc + v * v
    return np.sqrt(acc)


def _apply_box(fp, behaviors, corner, axis_breakpoints, lows, highs):
    """Restrict a pair-form integrand to a sub-box on the unit cube.

    Endpoint behaviors survive only on axes whose box edge coincides
    with the original endpoint; a corner at (1,...,1) survives only if
    every upper edge is 1, with its smooth factor rescaled for the
    anisotropic change of variables.
    """
    m = len(behaviors)
    lows = [float(x) for x in lows]
    highs = [float(x) for x in highs]
    for lo, hi in zip(lows, highs):
        if not (0.0 <= lo < hi <= 1.0):
            raise ValueError(f"invalid box edge ({lo}, {hi})")
    widths = [hi - lo for lo, hi in zip(lows, highs)]
    gaps = [1.0 - hi for hi in highs]
    scale = math.prod(widths)

    def fb(us, sus):
        # rounding of lo + w*u can land exactly on a singular endpoint,
        # and s is propagated exactly: 1 - (lo + w*u) = gap + w*(1 - u)
        ts = tuple(
            np.clip(lo + w * u, _T_FLOOR, _T_CEIL)
            for lo, w, u in zip(lows, widths, us)
        )
        ss = tuple(
            np.clip(gap + w * su, _T_FLOOR, _T_CEIL)
            for gap, w, su in zip(gaps, widths, sus)
        )
        return fp(ts, ss) * scale

    new_beh = tuple(
        EndpointBehavior(
            behaviors[i].exponent_at_zero if lows[i] == 0.0 else 0.0,
            behaviors[i].exponent_at_one if highs[i] == 1.0 else 0.0,
        )
        for i in range(m)
    )
    new_corner = None
    if corner is not None and all(h == 1.0 for h in highs):
        ce = corner.exponent
        old_smooth = corner.smooth_factor

        def smooth(*ss):
            s_orig = tuple(w * s for w, s in zip(widths, ss))
            ratio = _euclid_arrays(s_orig) / _euclid_arrays(ss)
            return old_smooth(*s_orig) * ratio**ce * scale

        new_corner = CornerBehavior(ce, smooth)
    bps = axis_breakpoints or [()] * m
    new_bps = [
        [(bp - lo) / w for bp in bp_i if lo < bp < hi]
        for bp_i, lo, w, hi in zip(bps, lows, widths, highs)
    ]
    # integrands steep at the original endpoints vary on the u-scale
    # lo/w near u=0 (resp. (1-hi)/w near u=1) inside the box; pin a
    # dyadic ladder of panel edges down to that scale so the graded
    # rule resolves it
    def _ladder(scale):
        edges = []
        edge = max(scale, 2.0**-50)
        while edge < 0.25:
            edges.append(edge)
            edge *= 2.0
        return edges

    for i in range(m):
        extra = []
        lo_scale = lows[i] / widths[i]
        hi_scale = (1.0 - highs[i]) / widths[i]
        if 0.0 < lo_scale < 0.25:
            extra.extend(_ladder(lo_scale))
        if 0.0 < hi_scale < 0.25:
            extra.extend(1.0 - e for e in _ladder(hi_scale))
        if extra:
            new_bps[i] = list(new_bps[i]) + extra
    return fb, new_beh, new_corner, new_bps


# ---------------------------------------------------------------------------
# corner decomposition (Duffy)
# ---------------------------------------------------------------------------


def _integrate_with_corner(
    fp,
    behaviors,
    corner: CornerBehavior,
    tol,
    rtol,
    budget,
    uniform_panels,
    axis_breakpoints=None,
) -> QuadratureResult:
    """Split the cube at 1/2 per axis; Duffy pieces cover the corner box.

    On the all-(1/2,1) box, the substitution s_i = 1 - t_i followed by the
    Duffy split (pivot coordinate rho = max s_i, others rho*sigma_j) turns
    the |s|**exponent corner into a one-dimensional rho**(exponent+m-1)
    endpoint power, which the per-axis machinery already handles.
    """
    m = len(behaviors)
    if not corner.exponent > -m:
        return QuadratureResult.divergent("corner exponent <= -m is not integrable")
    sub_tol = tol / (2**m + m - 1)
    parts: list[QuadratureResult] = []

    # off-corner boxes: at least one axis in (0, 1/2)
    for mask in _iter_product((0, 1), repeat=m):
        if all(mask):
            continue
        lows = [0.0 if v == 0 else 0.5 for v in mask]
        highs = [0.5 if v == 0 else 1.0 for v in mask]
        fb, beh, _, bps = _apply_box(fp, behaviors, None, axis_breakpoints, lows, highs)
        # the corner is excluded from every one of these boxes
        beh = tuple(EndpointBehavior(b.exponent_at_zero, 0.0) for b in beh)
        parts.append(
            _tensor_integrate(fb, beh, sub_tol, rtol, budget, uniform_panels, bps)
        )

    # corner box via Duffy pieces, one per pivot axis
    ce = corner.exponent
    for pivot in range(m):

        def piece(ts, ss, _pivot=pivot):
            v, sigmas = ts[0], ts[1:]
            rho = 0.5 * v
            s = [None] * m
            s[_pivot] = rho
            others = [i for i in range(m) if i != _pivot]
            norm_sq = np.ones_like(v)
            for i, sg in zip(others, sigmas):
                s[i] = rho * sg
                norm_sq = norm_sq + sg * sg
            unit_norm = np.sqrt(norm_sq)
            smooth = corner.smooth_factor(*s)
            # |s|**ce * rho**(m-1) * drho/dv, with |s| = rho * unit_norm
            return smooth * unit_norm**ce * rho ** (ce + m - 1) * 0.5

        beh = [EndpointBehavior(ce + m - 1.0, 0.0)] + [EndpointBehavior()] * (m - 1)
        parts.append(
            _tensor_integrate(piece, beh, sub_tol, rtol, budget, uniform_panels)
        )

    value = math.fsum(p.value for p in parts)
    err = math.fsum(p.abs_error_estimate for p in parts)
    evals = sum(p.evaluations for p in parts)
    converged = all(p.converged for p in parts)
    return QuadratureResult(value, err, evals, converged)


# ---------------------------------------------------------------------------
# Monte Carlo (m >= 4)
# ---------------------------------------------------------------------------


def _monte_carlo(
    fp,
    behaviors,
    tol,
    rtol,
    budget,
    seed,
) -> QuadratureResult:
    m = len(behaviors)
    n = max(16, int(budget))
    rng = np.random.Generator(np.random.PCG64(seed))
    maps = [_UnitMap(b) for b in behaviors]
    ts = []
    ss = []
    jac = np.ones(n)
    for axis in range(m):
        # Latin hypercube stratification per axis
        u = (rng.permutation(n) + rng.random(n)) / n
        u = np.clip(u, 1e-15, 1.0 - 1e-15)
        t, s, dt = maps[axis].forward(u)
        ts.append(t)
        ss.append(s)
        jac = jac * dt
    vals = np.asarray(fp(tuple(ts), tuple(ss)), dtype=float) * jac
    _check_finite(vals, "hypercube sample")
    value = float(np.mean(vals))
    err = float(np.std(vals) / math.sqrt(n))
    converged = err <= max(tol, rtol * abs(value))
    return QuadratureResult(value, err, n, converged)


def integrate_unit_cube(
    f: Optional[Callable[..., np.ndarray]],
    behaviors: Sequence[EndpointBehavior],
    tol: float = 1e-10,
    rtol: float = 1e-8,
    budget: Optional[int] = None,
    seed: int = 0,
    corner: Optional[CornerBehavior] = None,
    uniform_panels: int = 0,
    box: Optional[tuple[Sequence[float], Sequence[float]]] = None,
    axis_breakpoints: Optional[Sequence[Sequence[float]]] = None,
    f_pair: Optional[Callable[[tuple, tuple], np.ndarray]] = None,
    interior_singularity: bool = False,
) -> QuadratureResult:
    """Integrate f over (0,1)**m with per-axis endpoint powers.

    f receives m broadcastable arrays.  For m <= 3 the deterministic
    tensor rule is used (per-axis substitutions, geometrically graded
    panels, level escalation for the error estimate); `corner` routes an
    additional (1,...,1) singularity through a Duffy split.  For m >= 4
    a seeded Latin-hypercube Monte Carlo estimate is returned; two calls
    with identical arguments are bit-identical.

    `f_pair(ts, ss)`, when supplied, replaces f and receives both the
    nodes and their exact complements ``ss = 1 - ts``: integrands
    singular at t = 1 should use it, because recomputing ``1 - t`` from
    a double t cannot resolve the mass within ~1e-16 of the endpoint
    (for (1-t)**(-3/4) that truncates a full ~1e-4 of the integral).

    `box = (lows, highs)` restricts integration to a sub-box (useful for
    integrands supported there); `axis_breakpoints` pins panel edges at
    interior kinks, one list per axis; `uniform_panels` enforces at
    least that many equal panels per axis, for integrands with interior
    oscillation of known scale.  Integrands that blow up on an interior
    manifold are out of contract and must be declared via
    `interior_singularity`, which is rejected here.
    """
    if interior_singularity:
        raise ValueError(
            "interior (diagonal) singularities are not supported by this rule"
        )
    m = len(behaviors)
    if m < 1:
        raise ValueError("need at least one axis")
    fp = f_pair if f_pair is not None else (lambda ts, ss: f(*ts))
    if box is not None:
        fp, behaviors, corner, axis_breakpoints = _apply_box(
            fp, behaviors, corner, axis_breakpoints, box[0], box[1]
        )
    if m >= 4:
        if corner is not None:
            raise ValueError("corner handling is only implemented for m <= 3")
        return _monte_carlo(fp, behaviors, tol, rtol, budget or 2**20, seed)
    budget = budget or (2**23 if m <= 2 else 2**26)
    if corner is not None:
        return _integrate_with_corner(
            fp, behaviors, corner, tol, rtol, budget, uniform_panels, axis_breakpoints
        )
    return _tensor_integrate(
        fp, behaviors, tol, rtol, budget, uniform_panels, axis_breakpoints
    )
