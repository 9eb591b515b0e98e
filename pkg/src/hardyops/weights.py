"""Weight functions on the open unit cube, with singularity metadata.

A `Weight` bundles a nonnegative vectorized evaluator on ``(0,1)**m``
with the machine-readable facts the quadrature layer needs: per-axis
endpoint exponents, an optional corner singularity at ``(1,...,1)``, and
an optional logarithmic substitution form for weights whose natural
variable is ``s = log(1/t)``.

Constructors cover the families used throughout the package:

* ``constant_weight(c, m)``
* ``riemann_liouville_weight(alpha)``: ``1 / (Gamma(a) (1-t)**(1-a))``
* ``multilinear_riesz_weight(alpha, m)``:
  ``1 / (Gamma(a) |(1-t_1, ..., 1-t_m)|**(m-a))``
* ``weyl_weight(alpha)``: ``1 / (Gamma(a) (1/t - 1)**(1-a))`` and its
  multilinear counterpart ``multilinear_cesaro_weight(alpha, m)``
* ``counterexample_weight(alpha, n, p)``: the log-substituted weight
  with a finite plain-power moment but a divergent log moment.

Vector norms inside the multilinear Riesz and Cesaro weights are
Euclidean; the choice is recorded in the label.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from .numerics import CornerBehavior, EndpointBehavior, gamma

__all__ = [
    "Weight",
    "LogSubstitution",
    "constant_weight",
    "riemann_liouville_weight",
    "multilinear_riesz_weight",
    "weyl_weight",
    "multilinear_cesaro_weight",
    "counterexample_weight",
    "parse_weight_spec",
]


@dataclass(frozen=True)
class LogSubstitution:
    """Weight written as ``w(t) = exp(-s*rate_shift) * branch(s)``, s = log(1/t).

    Moments ``int t**e w(t) dt`` become half-line integrals of
    ``exp(-s*(e + 1 + rate_shift)) * branch(s)``; `zero_exponent` and
    `tail_exponent` describe ``branch`` at ``s -> 0`` and ``s -> inf``.
    """

    rate_shift: float
    branch: Callable[[np.ndarray], np.ndarray]
    zero_exponent: float
    tail_exponent: float


@dataclass(frozen=True)
class Weight:
    """Nonnegative weight on (0,1)**m with declared endpoint behavior.

    `fn_pair(ts, ss)` evaluates the weight from nodes and their exact
    complements ``ss = 1 - ts``; weights singular at t = 1 provide it so
    quadrature keeps full precision arbitrarily close to that endpoint.
    """

    arity: int
    fn: Callable[..., np.ndarray]
    behaviors: tuple[EndpointBehavior, ...]
    label: str
    closed_forms: Mapping[str, object] = field(default_factory=dict)
    corner: Optional[CornerBehavior] = None
    log_form: Optional[LogSubstitution] = None
    fn_pair: Optional[Callable[[tuple, tuple], np.ndarray]] = None

    def __call__(self, *ts) -> np.ndarray:
        if len(ts) != self.arity:
            raise TypeError(f"{self.label} takes {self.arity} coordinates, got {len(ts)}")
        return self.fn(*(np.asarray(t, dtype=float) for t in ts))

    @property
    def pair(self) -> Callable[[tuple, tuple], np.ndarray]:
        if self.fn_pair is not None:
            return self.fn_pair
        return lambda ts, ss: self.fn(*ts)

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("arity must be >= 1")
        if len(self.behaviors) != self.arity:
            raise ValueError("one EndpointBehavior per axis is required")
        if self.corner is not None and not self.corner.exponent > -self.arity:
            raise ValueError("corner exponent must exceed -m for integrability")
        self._coarse_check()

    def _coarse_check(self):
        # build-time sanity: finite and nonnegative on an interior probe grid
        pts = np.linspace(0.05, 0.95, 7)
        grids = list(np.meshgrid(*([pts] * min(self.arity, 3))))
        if self.arity > 3:
            grids += [np.full_like(grids[0], 0.5)] * (self.arity - 3)
        vals = self.fn(*grids)
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"{self.label}: non-finite value on probe grid")
        if np.any(vals < 0):
            raise ValueError(f"{self.label}: negative value on probe grid")


def _euclid(*vs) -> np.ndarray:
    acc = vs[0] * vs[0]
    for v in vs[1:]:
        acc = acc + v * v
    return np.sqrt(acc)


def constant_weight(c: float, m: int = 1) -> Weight:
    """w == c on (0,1)**m; all endpoint exponents are 0."""
    if c < 0:
        raise ValueError("constant weight must be nonnegative")
    if m < 1:
        raise ValueError("m must be >= 1")
    c = float(c)

    def fn(*ts):
        return np.full(np.broadcast_shapes(*(np.shape(t) for t in ts)), c)

    return Weight(
        arity=m,
        fn=fn,
        behaviors=(EndpointBehavior(0.0, 0.0),) * m,
        label=f"const:{c:g}",
    )


def riemann_liouville_weight(alpha: float) -> Weight:
    """w(t) = 1 / (Gamma(a) (1-t)**(1-a)), 0 < a < 1.

    Against the moment ``t**(-n/p)`` this weight reproduces the sharp
    fractional-averaging constant Gamma(1-1/p) / Gamma(1+a-1/p) (n = 1),
    stored in `closed_forms` as a function of p.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    ga = gamma(alpha)

    def fn(t):
        return (1.0 - t) ** (alpha - 1.0) / ga

    def lebesgue_closed_form(p: float) -> float:
        if not p > 1.0:
            raise ValueError("p must exceed 1")
        return gamma(1.0 - 1.0 / p) / gamma(1.0 + alpha - 1.0 / p)

    return Weight(
        arity=1,
        fn=fn,
        behaviors=(EndpointBehavior(0.0, alpha - 1.0),),
        label=f"rl:{alpha:g}",
        closed_forms={"lebesgue_constant": lebesgue_closed_form},
        fn_pair=lambda ts, ss: ss[0] ** (alpha - 1.0) / ga,
    )


def multilinear_riesz_weight(alpha: float, m: int) -> Weight:
    """w(t) = 1 / (Gamma(a) |(1-t_1,...,1-t_m)|_2**(m-a)), 0 < a < m.

    For m = 1 this coincides pointwise with the Riemann-Liouville
    weight.  For m >= 2 the singularity lives at the single corner
    (1,...,1) with homogeneity a - m; per-axis slopes away from the
    corner are flat, so the declared axis exponents are 0 and the
    corner is carried separately.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0.0 < alpha < m:
        raise ValueError(f"alpha must lie in (0,{m}), got {alpha}")
    if m == 1:
        w = riemann_liouville_weight(alpha)
        return Weight(
            arity=1,
            fn=w.fn,
            behaviors=w.behaviors,
            label=f"riesz:{alpha:g}:1",
            closed_forms=w.closed_forms,
            fn_pair=w.fn_pair,
        )
    ga = gamma(alpha)
    expo = alpha - float(m)

    def fn(*ts):
        return _euclid(*(1.0 - t for t in ts)) ** expo / ga

    corner = None
    if expo < 0.0:

        def smooth(*ss):
            # w(1-s) * |s|**(m-a) is exactly 1/Gamma(a)
            return np.full(np.broadcast_shapes(*(np.shape(s) for s in ss)), 1.0 / ga)

        corner = CornerBehavior(expo, smooth)

    return Weight(
        arity=m,
        fn=fn,
        behaviors=(EndpointBehavior(0.0, 0.0),) * m,
        label=f"riesz:{alpha:g}:{m} (euclidean)",
        corner=corner,
        fn_pair=lambda ts, ss: _euclid(*ss) ** expo / ga,
    )


def weyl_weight(alpha: float) -> Weight:
    """w(t) = 1 / (Gamma(a) (1/t - 1)**(1-a)), 0 < a < 1.

    Vanishes like t**(1-a) at 0 and blows up like (1-t)**(a-1) at 1.
    The Cesaro-side sharp constant against ``t**(-(1-1/p))`` (n = 1) has
    the Beta closed form Gamma(1+1/p-a) / Gamma(1+1/p), stored in
    `closed_forms` as a function of p.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    ga = gamma(alpha)

    def fn(t):
        return (1.0 / t - 1.0) ** (alpha - 1.0) / ga

    def cesaro_closed_form(p: float) -> float:
        if not p > 1.0:
            raise ValueError("p must exceed 1")
        return gamma(1.0 + 1.0 / p - alpha) / gamma(1.0 + 1.0 / p)

    return Weight(
        arity=1,
        fn=fn,
        behaviors=(EndpointBehavior(1.0 - alpha, alpha - 1.0),),
        label=f"weyl:{alpha:g}",
        closed_forms={"cesaro_lebesgue_constant": cesaro_closed_form},
        fn_pair=lambda ts, ss: (ss[0] / ts[0]) ** (alpha - 1.0) / ga,
    )


def multilinear_cesaro_weight(alpha: float, m: int) -> Weight:
    """w(t) = 1 / (Gamma(a) |(1/t_1 - 1, ..., 1/t_m - 1)|_2**(m-a)).

    Same corner structure at (1,...,1) as the multilinear Riesz weight
    (1/t - 1 ~ 1 - t there); near any t_i = 0 the norm blows up, so the
    weight vanishes like t_i**(m-a) per axis.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0.0 < alpha < m:
        raise ValueError(f"alpha must lie in (0,{m}), got {alpha}")
    if m == 1:
        w = weyl_weight(alpha)
        return Weight(
            arity=1,
            fn=w.fn,
            behaviors=w.behaviors,
            label=f"cesaro:{alpha:g}:1",
            closed_forms=w.closed_forms,
            fn_pair=w.fn_pair,
        )
    ga = gamma(alpha)
    expo = alpha - float(m)

    def fn(*ts):
        return _euclid(*(1.0 / t - 1.0 for t in ts)) ** expo / ga

    def fn_pair(ts, ss):
        # 1/t - 1 = s/t, formed from the exact complement
        return _euclid(*(s / t for s, t in zip(ss, ts))) ** expo / ga

    corner = None
    if expo < 0.0:

        def smooth(*ss):
            # (|s| / |(s_i/(1-s_i))_i|)**(m-a) / Gamma(a), bounded near s=0
            ratio = _euclid(*ss) / _euclid(*(s / (1.0 - s) for s in ss))
            return ratio ** (-expo) / ga

        corner = CornerBehavior(expo, smooth)

    return Weight(
        arity=m,
        fn=fn,
        behaviors=(EndpointBehavior(float(m) - alpha, 0.0),) * m,
        label=f"cesaro:{alpha:g}:{m} (euclidean)",
        corner=corner,
        fn_pair=fn_pair,
    )


def counterexample_weight(alpha: float, n: int, p: float) -> Weight:
    """Log-substituted weight separating plain and log moments.

    With ``s = log(1/t)``::

        w(t) = exp(-s (n/p - 1)) * s**(-1+a)   for 0 < s <= 1
               exp(-s (n/p - 1)) * s**(-1-a)   for s > 1

    (the boundary s = 1 uses the first branch; the value at t = 1 is 0).
    The moment against ``t**(-n/p)`` collapses to
    ``int_0^1 s**(a-1) ds + int_1^inf s**(-1-a) ds = 2/a`` and is stored
    in `closed_forms`, while the corresponding log moment diverges like
    ``(log 1/delta)**(1-a)`` under truncation at delta.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    if n < 1:
        raise ValueError("n must be >= 1")
    if not p > 1.0:
        raise ValueError("p must exceed 1")
    rate = n / p - 1.0

    def branch(s):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore"):
            lo = np.where(s > 0, s, 1.0) ** (alpha - 1.0)
            hi = s ** (-1.0 - alpha)
        return np.where(s == 0.0, 0.0, np.where(s <= 1.0, lo, hi))

    def fn(t):
        t = np.asarray(t, dtype=float)
        s = -np.log(t)
        return np.exp(-s * rate) * branch(s)

    def fn_pair(ts, ss):
        # log(1/t) = -log1p(-s): exact however close t is to 1
        s_log = -np.log1p(-np.asarray(ss[0], dtype=float))
        return np.exp(-s_log * rate) * branch(s_log)

    return Weight(
        arity=1,
        fn=fn,
        behaviors=(EndpointBehavior(rate, alpha - 1.0),),
        label=f"counter:{alpha:g}:{n}:{p:g}",
        closed_forms={"lebesgue_constant": 2.0 / alpha},
        log_form=LogSubstitution(
            rate_shift=rate,
            branch=branch,
            zero_exponent=alpha - 1.0,
            tail_exponent=-1.0 - alpha,
        ),
        fn_pair=fn_pair,
    )


def parse_weight_spec(spec: str, default_m: Optional[int] = None) -> Weight:
    """Build a weight from its CLI grammar.

    Grammar: ``const:c[:m]``, ``rl:alpha``, ``riesz:alpha:m``,
    ``weyl:alpha``, ``cesaro:alpha:m``, ``counter:alpha:n:p``.
    `default_m` supplies the arity of a bare ``const:c``.
    """
    parts = spec.split(":")
    kind, args = parts[0], parts[1:]
    try:
        if kind == "const" and len(args) in (1, 2):
            m = int(args[1]) if len(args) == 2 else (default_m or 1)
            return constant_weight(float(args[0]), m)
        if kind == "rl" and len(args) == 1:
            return riemann_liouville_weight(float(args[0]))
        if kind == "riesz" and len(args) == 2:
            return multilinear_riesz_weight(float(args[0]), int(args[1]))
        if kind == "weyl" and len(args) == 1:
            return weyl_weight(float(args[0]))
        if kind == "cesaro" and len(args) == 2:
            return multilinear_cesaro_weight(float(args[0]), int(args[1]))
        if kind == "counter" and len(args) == 3:
            return counterexample_weight(float(args[0]), int(args[1]), float(args[2]))
    except ValueError as exc:
        raise ValueError(f"invalid weight spec {spec!r}: {exc}") from exc
    raise ValueError(f"unrecognized weight spec {spec!r}")
