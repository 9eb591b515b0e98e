"""Radial function model and numerical norms on R^n.

All functions here are radial, so every n-dimensional integral reduces
to one dimension against the surface measure ``w_n r**(n-1) dr`` with
``w_n = n pi^(n/2) / Gamma(1 + n/2)``.

Three norms are provided:

* ``lebesgue_norm``: plain L^p, closed-form for piecewise powers,
  half-line quadrature otherwise;
* ``central_morrey_norm``: sup over R > 0 of the ball average
  ``(|B(0,R)|**-(1+lam*p) * int_{B(0,R)} |f|^p)**(1/p)``, exact for pure
  powers ``r**(n*lam)`` and otherwise estimated as a certified lower
  bound by a log-spaced R grid with golden-section refinement;
* ``cmo_norm``: sup over R of the central mean oscillation
  ``(|B|**-1 int_B |b - b_B|^q)**(1/q)``; for ``b = log|x|`` the bracket
  is R-invariant and collapses to a single integral.

Divergent norms are reported as ``math.inf``, never NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .numerics import (
    EndpointBehavior,
    gamma,
    integrate_halfline,
    integrate_unit_interval,
)

__all__ = [
    "ExponentConfig",
    "PiecewisePower",
    "RadialFunction",
    "power",
    "cutoff_power",
    "indicator_ball",
    "log_radial",
    "oscillatory_cutoff",
    "radial_from_callable",
    "parse_function_spec",
    "unit_sphere_volume",
    "lebesgue_norm",
    "central_morrey_norm",
    "central_morrey_profile",
    "cmo_norm",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# exponent bookkeeping
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentConfig:
    """Exponent tuple (n, p_i, lambda_i, optional q_i) with admissibility checks.

    The target exponent p is derived from ``1/p = sum 1/p_i`` (plus
    ``sum 1/q_i`` when symbol exponents are present), and
    ``lam = sum lambda_i``.  When `lambda_i` is omitted it defaults to
    the Lebesgue boundary ``-1/p_i``.
    """

    n: int
    p_i: tuple[float, ...]
    lambda_i: tuple[float, ...] = ()
    q_i: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension n must be >= 1")
        if not self.p_i:
            raise ValueError("at least one integrability exponent p_i is required")
        object.__setattr__(self, "p_i", tuple(float(p) for p in self.p_i))
        if any(not p > 1.0 for p in self.p_i):
            raise ValueError("every p_i must lie in (1, inf)")
        if not self.lambda_i:
            object.__setattr__(self, "lambda_i", tuple(-1.0 / p for p in self.p_i))
        else:
            object.__setattr__(self, "lambda_i", tuple(float(l) for l in self.lambda_i))
        if len(self.lambda_i) != len(self.p_i):
            raise ValueError("lambda_i and p_i must have equal length")
        for lam, p in zip(self.lambda_i, self.p_i):
            if not (-1.0 / p <= lam <= 0.0):
                raise ValueError(f"lambda_i={lam} outside [-1/p_i, 0] for p_i={p}")
        if self.q_i is not None:
            object.__setattr__(self, "q_i", tuple(float(q) for q in self.q_i))
            if len(self.q_i) != len(self.p_i):
                raise ValueError("q_i must match p_i in length")
            if any(not q > 1.0 for q in self.q_i):
                raise ValueError("every q_i must lie in (1, inf)")
        if not self.p > 1.0:
            raise ValueError("derived p must exceed 1; exponents too large")

    @property
    def m(self) -> int:
        return len(self.p_i)

    @property
    def p(self) -> float:
        inv = sum(1.0 / p for p in self.p_i)
        if self.q_i is not None:
            inv += sum(1.0 / q for q in self.q_i)
        return 1.0 / inv

    @property
    def lam(self) -> float:
        return sum(self.lambda_i)

    @property
    def balanced(self) -> bool:
        """True iff lambda_1 p_1 = ... = lambda_m p_m (within 1e-12)."""
        prods = [l * p for l, p in zip(self.lambda_i, self.p_i)]
        return max(prods) - min(prods) <= 1e-12

    def require_strict_morrey(self) -> None:
        """Enforce -1/p_i < lambda_i < 0, and p < p_i where that can hold.

        For m = 1 without symbol exponents p equals p_1 by definition, so
        the strict ordering only binds for m >= 2 or when q_i is present.
        """
        for lam, p in zip(self.lambda_i, self.p_i):
            if not (-1.0 / p < lam < 0.0):
                raise ValueError(
                    f"strict regime needs -1/p_i < lambda_i < 0, got lambda_i={lam}, p_i={p}"
                )
        if self.m > 1 or self.q_i is not None:
            if any(not self.p < p for p in self.p_i):
                raise ValueError("strict regime needs p < p_i for every i")


# ---------------------------------------------------------------------------
# radial functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PiecewisePower:
    """r**exponent on (r_min, r_max), zero outside."""

    exponent: float
    r_min: float = 0.0
    r_max: float = math.inf

    def __post_init__(self):
        if self.r_min < 0 or self.r_max <= self.r_min:
            raise ValueError("need 0 <= r_min < r_max")


@dataclass(frozen=True)
class RadialFunction:
    """Scalar radial function r -> f(r) on (0, inf)."""

    fn: Callable[[np.ndarray], np.ndarray]
    kind: str = "custom"
    descriptor: Optional[PiecewisePower] = None
    breakpoints: tuple[float, ...] = ()
    label: str = ""

    def __call__(self, r) -> np.ndarray:
        return self.fn(np.asarray(r, dtype=float))


def _power_eval(d: PiecewisePower) -> Callable[[np.ndarray], np.ndarray]:
    def fn(r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        mask = (r > d.r_min) & (r < d.r_max)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            vals = np.where(mask, r, 1.0) ** d.exponent
        return np.where(mask, vals, 0.0)

    return fn


def power(a: float) -> RadialFunction:
    """Pure power r**a on all of (0, inf)."""
    d = PiecewisePower(a)
    return RadialFunction(_power_eval(d), "power", d, (), f"power:{a:g}")


def cutoff_power(a: float, r0: float) -> RadialFunction:
    """r**a for r > r0, zero on (0, r0]."""
    d = PiecewisePower(a, r_min=r0)
    return RadialFunction(_power_eval(d), "cutoff-power", d, (r0,), f"cutpow:{a:g}:{r0:g}")


def indicator_ball(r1: float = 1.0, a: float = 0.0) -> RadialFunction:
    """r**a inside the ball of radius r1, zero outside."""
    d = PiecewisePower(a, r_max=r1)
    return RadialFunction(_power_eval(d), "cutoff-power", d, (r1,), f"ball:{a:g}:{r1:g}")


def log_radial() -> RadialFunction:
    return RadialFunction(np.log, "log", None, (), "log")


def oscillatory_cutoff(freq: float, big_r: float) -> RadialFunction:
    """sin(pi * freq * r) outside the ball of radius big_r / 2, zero inside."""
    cut = big_r / 2.0

    def fn(r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return np.where(r > cut, np.sin(math.pi * freq * r), 0.0)

    return RadialFunction(fn, "oscillatory-cutoff", None, (cut,), f"osccut:{freq:g}:{big_r:g}")


def radial_from_callable(
    fn,
    vectorized: bool = True,
    label: str = "custom",
    breakpoints: Sequence[float] = (),
) -> RadialFunction:
    """Wrap a plain callable; declare its jump/kink radii as breakpoints."""
    if not vectorized:
        fn = np.vectorize(fn, otypes=[float])
    return RadialFunction(fn, "custom", None, tuple(breakpoints), label)


def parse_function_spec(spec: str) -> RadialFunction:
    """Build a radial function from its CLI grammar.

    Grammar: ``power:a``, ``cutpow:a:r0``, ``log``, ``osccut:r:R``.
    A trailing ``@chi`` (or ``@chi:R``) modifier restricts a power to
    the ball of radius 1 (or R), e.g. ``power:0@chi`` is the indicator
    of the unit ball.
    """
    spec, _, modifier = spec.partition("@")
    parts = spec.split(":")
    kind, args = parts[0], parts[1:]
    try:
        if kind == "power" and len(args) == 1:
            f = power(float(args[0]))
        elif kind == "cutpow" and len(args) == 2:
            f = cutoff_power(float(args[0]), float(args[1]))
        elif kind == "log" and not args:
            f = log_radial()
        elif kind == "osccut" and len(args) == 2:
            f = oscillatory_cutoff(float(args[0]), float(args[1]))
        else:
            raise ValueError("unknown function kind")
    except ValueError as exc:
        raise ValueError(f"invalid function spec {spec!r}: {exc}") from exc
    if modifier:
        mparts = modifier.split(":")
        if mparts[0] != "chi" or len(mparts) > 2:
            raise ValueError(f"unknown function modifier {modifier!r}")
        r1 = float(mparts[1]) if len(mparts) == 2 else 1.0
        if f.descriptor is None:
            raise ValueError("@chi applies to power-type functions only")
        d = PiecewisePower(f.descriptor.exponent, f.descriptor.r_min, r1)
        f = RadialFunction(
            _power_eval(d), "cutoff-power", d, f.breakpoints + (r1,), f"{f.label}@chi:{r1:g}"
        )
    return f


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------


def unit_sphere_volume(n: int) -> float:
    """w_n = n pi^(n/2) / Gamma(1 + n/2), the measure of the unit sphere.

    This is the constant with ``int_{R^n} f(|x|) dx = w_n int_0^inf
    f(r) r^(n-1) dr``; w_1 = 2, w_2 = 2 pi, w_3 = 4 pi.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return n * math.pi ** (n / 2.0) / gamma(1.0 + n / 2.0)


def _power_mass(kappa: float, r_min: float, r_max: float) -> float:
    """int_{r_min}^{r_max} r**(kappa-1) dr, inf if divergent."""
    if r_max == math.inf:
        if kappa >= 0.0 or r_min <= 0.0:
            return math.inf
        return -(r_min**kappa) / kappa
    if r_min == 0.0:
        if kappa <= 0.0:
            return math.inf
        return r_max**kappa / kappa
    if kappa == 0.0:
        return math.log(r_max / r_min)
    return (r_max**kappa - r_min**kappa) / kappa


def lebesgue_norm(f: RadialFunction, p: float, n: int) -> float:
    """||f||_{L^p(R^n)} for radial f; math.inf when divergent."""
    if not p > 0:
        raise ValueError("p must be positive")
    wn = unit_sphere_volume(n)
    d = f.descriptor
    if d is not None:
        mass = _power_mass(p * d.exponent + n, d.r_min, d.r_max)
        return math.inf if math.isinf(mass) else (wn * mass) ** (1.0 / p)

    def integrand(r):
        return np.abs(f.fn(r)) ** p * r ** (n - 1)

    res = integrate_halfline(
        integrand, tol=1e-12, rtol=1e-10, breakpoints=f.breakpoints
    )
    if not res.converged:
        return math.inf
    return (wn * max(res.value, 0.0)) ** (1.0 / p)


def _ball_average(
    f: RadialFunction, p: float, n: int, radius: float, force_quadrature: bool = False
) -> float:
    """(n / R^n) int_0^R |f|^p r^(n-1) dr, by exact power mass or quadrature."""
    d = f.descriptor
    if d is not None and not force_quadrature:
        if d.r_min >= radius:
            return 0.0
        mass = _power_mass(p * d.exponent + n, d.r_min, min(d.r_max, radius))
        return math.inf if math.isinf(mass) else n * mass / radius**n

    def integrand(u):
        r = radius * u
        return np.abs(f.fn(r)) ** p * u ** (n - 1)

    # descriptor, when present, still informs the endpoint exponent hint
    zero_exp = 0.0
    if d is not None and d.r_min == 0.0:
        zero_exp = min(p * d.exponent + n - 1.0, 0.0)
        if zero_exp <= -1.0:
            return math.inf
    bps = [b / radius for b in f.breakpoints if 0.0 < b < radius]
    res = integrate_unit_interval(
        integrand,
        EndpointBehavior(zero_exp, 0.0),
        tol=1e-13,
        rtol=1e-11,
        breakpoints=bps,
    )
    if not res.converged and res.abs_error_estimate > 1e-6 * max(abs(res.value), 1.0):
        return math.inf
    return n * max(res.value, 0.0)


def _morrey_bracket(
    f: RadialFunction, p: float, lam: float, n: int, radius: float,
    force_quadrature: bool = False,
) -> float:
    """The ball expression ( |B|^-(1+lam p) int_B |f|^p )^(1/p) at one radius."""
    avg = _ball_average(f, p, n, radius, force_quadrature)
    if math.isinf(avg):
        return math.inf
    # int_B |f|^p = |B| * avg, so the bracket is |B|^(-lam) * avg^(1/p)
    ball = unit_sphere_volume(n) / n * radius**n
    return ball ** (-lam) * avg ** (1.0 / p)


def _grid_sup(bracket: Callable[[float], float]) -> float:
    """Sup over R in [1e-3, 1e3]: 61-point log grid + golden refinement."""
    radii = np.logspace(-3.0, 3.0, 61)
    vals = [bracket(float(R)) for R in radii]
    if any(math.isinf(v) for v in vals):
        return math.inf
    k = int(np.argmax(vals))
    lo = math.log(radii[max(k - 1, 0)])
    hi = math.log(radii[min(k + 1, len(radii) - 1)])
    best = vals[k]
    # golden-section refinement on log-radius around the grid argmax
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = bracket(math.exp(x1)), bracket(math.exp(x2))
    for _ in range(40):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = bracket(math.exp(x2))
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = bracket(math.exp(x1))
        best = max(best, f1, f2)
    return best


def central_morrey_norm(
    f: RadialFunction, p: float, lam: float, n: int, method: str = "auto"
) -> float:
    """Central Morrey norm of radial f; a grid-sup lower bound in general.

    Admissible range: -1/p <= lam <= 0 (the boundary lam = -1/p gives
    back the L^p norm).  For a pure power ``r**(n*lam)`` the bracket is
    R-invariant and the value is exactly
    ``(w_n/n)**(-lam) * (1 + lam*p)**(-1/p)``; any other pure power has
    an infinite norm.  `method` is one of "auto", "closed", "grid".
    """
    if not p > 1.0:
        raise ValueError("p must exceed 1")
    if not (-1.0 / p <= lam <= 0.0):
        raise ValueError(f"lam must lie in [-1/p, 0], got {lam}")
    d = f.descriptor
    pure_power = d is not None and d.r_min == 0.0 and d.r_max == math.inf
    if method not in ("auto", "closed", "grid"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed" and not pure_power:
        raise ValueError("closed form requires a pure power")
    if pure_power and method in ("auto", "closed"):
        if abs(d.exponent - n * lam) > 1e-12 * max(1.0, abs(n * lam)):
            return math.inf  # bracket ~ R^(a - n lam) is unbounded on one side
        if 1.0 + lam * p <= 0.0:
            return math.inf  # boundary lam = -1/p: r^(-n/p) is not p-integrable
        wn = unit_sphere_volume(n)
        return (wn / n) ** (-lam) * (1.0 + lam * p) ** (-1.0 / p)
    force = method == "grid"
    return _grid_sup(lambda R: _morrey_bracket(f, p, lam, n, R, force))


def central_morrey_profile(
    f: RadialFunction, p: float, lam: float, n: int, radii: Sequence[float],
    force_quadrature: bool = False,
) -> list[tuple[float, float]]:
    """The Morrey bracket sampled at given radii (diagnostics/CLI)."""
    return [
        (float(R), _morrey_bracket(f, p, lam, n, float(R), force_quadrature))
        for R in radii
    ]


def _radial_ball_mean(b: RadialFunction, n: int, radius: float) -> float:
    """b_B = (n / R^n) int_0^R b(r) r^(n-1) dr."""

    def integrand(u):
        return b.fn(radius * u) * u ** (n - 1)

    bps = [x / radius for x in b.breakpoints if 0.0 < x < radius]
    res = integrate_unit_interval(
        integrand, tol=1e-13, rtol=1e-11, breakpoints=bps
    )
    return n * res.value


def cmo_norm(b: RadialFunction, q: float, n: int) -> float:
    """Central mean oscillation norm, sup over origin-centered balls.

    For ``b = log|x|`` the bracket is independent of R and reduces to
    ``(n int_0^1 u**(n-1) |log u + 1/n|**q du)**(1/q)``, which is what
    is evaluated; other symbols go through the generic R-grid sup.
    """
    if not q > 1.0:
        raise ValueError("q must exceed 1")
    if b.kind == "log":
        kink = math.exp(-1.0 / n)

        def integrand(u):
            return u ** (n - 1) * np.abs(np.log(u) + 1.0 / n) ** q

        res = integrate_unit_interval(
            integrand, tol=1e-13, rtol=1e-11, breakpoints=[kink]
        )
        return (n * res.value) ** (1.0 / q)

    def bracket(radius: float) -> float:
        mean = _radial_ball_mean(b, n, radius)

        def integrand(u):
            return np.abs(b.fn(radius * u) - mean) ** q * u ** (n - 1)

        bps = [x / radius for x in b.breakpoints if 0.0 < x < radius]
        res = integrate_unit_interval(integrand, tol=1e-13, rtol=1e-11, breakpoints=bps)
        return (n * max(res.value, 0.0)) ** (1.0 / q)

    return _grid_sup(bracket)
