"""Singular values, postsingular orbits, hyperbolicity and growth order.

For the atom ``a*exp(b*z) + c*z + d``:

* ``c == 0``: no critical points (``a*b*exp(b*z)`` never vanishes) and the
  single finite asymptotic value ``d``;
* ``c != 0``: critical points ``z_k = (Log(-c/(a*b)) + 2*k*pi*i) / b`` with
  critical values ``f(z_k)``, and no finite asymptotic value.

Composite maps get the over-approximation ``Sing(f o g) in Sing(f) u f(Sing(g))``.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .function import (
    FATOU,
    Affine,
    Compose,
    ExpAffine,
    FunctionExpr,
    Iterate,
    Translate,
    eval_derivative,
    evaluate,
    _eval,
)
from .orbit import (
    BOUNDED,
    ESCAPING,
    Classification,
    EscapeConfig,
    Verdict,
    classify_array,
)


class CompositeNotSupported(TypeError):
    """Analytic singular sets are only available for single atoms."""


class DegenerateRadii(ValueError):
    """Maximum modulus never exceeded 1 on the requested circles."""


@dataclass(frozen=True)
class SingularValue:
    kind: str  # "cv" or "av"
    k: int  # lattice index (0 for asymptotic values)
    value: complex


@dataclass(frozen=True)
class SingularSet:
    values: tuple[SingularValue, ...]
    truncation: int
    over_approximate: bool = False

    @property
    def critical_values(self) -> list[complex]:
        return [s.value for s in self.values if s.kind == "cv"]

    @property
    def asymptotic_values(self) -> list[complex]:
        return [s.value for s in self.values if s.kind == "av"]

    def __len__(self):
        return len(self.values)


def critical_points(f: ExpAffine, K: int) -> list[tuple[int, complex]]:
    """``(k, z_k)`` for ``|k| <= K``; empty when ``c == 0``."""
    if f.c == 0:
        return []
    base = cmath.log(-f.c / (f.a * f.b))
    return [(k, (base + 2j * math.pi * k) / f.b) for k in range(-K, K + 1)]


def singular_set(f: FunctionExpr, K: int = 50) -> SingularSet:
    """Singular values of one atom, critical lattice truncated to ``|k| <= K``."""
    if not isinstance(f, ExpAffine):
        raise CompositeNotSupported(
            "singular_set takes one ExpAffine atom; use singular_superset for composites")
    if K < 0:
        raise ValueError("K must be >= 0")
    if f.c == 0:
        return SingularSet((SingularValue("av", 0, f.d),), K)
    vals = tuple(SingularValue("cv", k, evaluate(f, z)) for k, z in critical_points(f, K))
    return SingularSet(vals, K)


def _image(f: FunctionExpr, sing: SingularSet) -> list[SingularValue]:
    if not sing.values:
        return []
    pts = np.array([s.value for s in sing.values])
    img = _eval(f, pts)
    return [SingularValue(s.kind, s.k, complex(w)) for s, w in zip(sing.values, img)]


def singular_superset(f: FunctionExpr, K: int = 50) -> SingularSet:
    """Singular values of any expression; composites are over-approximated.

    Translation shifts the singular values exactly; affine maps have none.
    """
    if isinstance(f, ExpAffine):
        return singular_set(f, K)
    if isinstance(f, Affine):
        return SingularSet((), K)
    if isinstance(f, Translate):
        inner = singular_superset(f.base, K)
        vals = tuple(SingularValue(s.kind, s.k, s.value + f.tau) for s in inner.values)
        return SingularSet(vals, K, inner.over_approximate)
    if isinstance(f, Compose):
        return singular_set_composite(f.outer, f.inner, K)
    if isinstance(f, Iterate):
        acc = singular_superset(f.base, K)
        for _ in range(f.n - 1):
            acc = _union(singular_superset(f.base, K), _image(f.base, acc), K)
        return acc
    raise TypeError(f"not a function expression: {f!r}")


def _union(a: SingularSet, b_image: list[SingularValue], K: int) -> SingularSet:
    seen, out = set(), []
    for s in list(a.values) + b_image:
        key = (s.kind, s.value)
        if key not in seen:
            seen.add(key)
            out.append(s)
    return SingularSet(tuple(out), K, over_approximate=True)


def singular_set_composite(f: FunctionExpr, g: FunctionExpr, K: int = 50) -> SingularSet:
    """Superset ``Sing(f) u f(Sing(g))`` of the singular values of ``f o g``."""
    return _union(singular_superset(f, K), _image(f, singular_superset(g, K)), K)


def is_bounded_type(f: FunctionExpr, K: int = 50) -> bool:
    """Numerical class-B test on the truncated singular set.

    Unbounded when some singular value exceeds ten times the modulus of the
    ``k = 0`` element (floored at 1).
    """
    sing = singular_superset(f, K)
    if not sing.values:
        return True
    first = next((s for s in sing.values if s.k == 0), sing.values[0])
    base = max(abs(first.value), 1.0)
    return all(abs(s.value) <= 10 * base for s in sing.values)


class Hyperbolicity(enum.Enum):
    HYPERBOLIC = "Hyperbolic"
    NOT_HYPERBOLIC = "NotHyperbolic"
    UNDECIDED = "Undecided"


@dataclass
class PostsingularVerdict:
    verdict: Verdict  # BOUNDED / ESCAPING means postsingularly (un)bounded
    singular: SingularSet
    classifications: list[Classification] = field(default_factory=list)
    bound_witness: float = 0.0
    max_residual: float = 0.0

    @property
    def label(self) -> str:
        return {Verdict.BOUNDED: "Bounded", Verdict.ESCAPING: "Unbounded"}.get(
            self.verdict, "Undecided")


def postsingular_verdict(f: FunctionExpr, sing: SingularSet | None = None,
                         cfg: EscapeConfig | None = None, bound: float = 1e6) -> PostsingularVerdict:
    """Classify the orbit of every singular value under ``f``.

    Bounded: every orbit positively captured (attracting cycle or exact
    cycle) and never left the disk of radius ``bound``.  Unbounded
    (``Verdict.ESCAPING``): some orbit certified Escaping and the singular set
    is exact.  A superset never yields Unbounded.
    """
    cfg = cfg or EscapeConfig()
    sing = singular_superset(f) if sing is None else sing
    if not sing.values:
        return PostsingularVerdict(Verdict.BOUNDED, sing)
    pts = np.array([s.value for s in sing.values])
    res = classify_array(f, pts, cfg)
    cls = [res.item(i) for i in range(len(res))]
    if np.any(res.verdict == ESCAPING):
        verdict = Verdict.UNDECIDED if sing.over_approximate else Verdict.ESCAPING
        return PostsingularVerdict(verdict, sing, cls)
    if np.all(res.verdict == BOUNDED) and np.all(res.max_modulus <= bound):
        resid = np.nan_to_num(res.residual, nan=0.0)
        return PostsingularVerdict(Verdict.BOUNDED, sing, cls,
                                   float(res.max_modulus.max()), float(resid.max()))
    return PostsingularVerdict(Verdict.UNDECIDED, sing, cls)


def hyperbolicity(ps: PostsingularVerdict, cfg: EscapeConfig | None = None) -> Hyperbolicity:
    cfg = cfg or EscapeConfig()
    limit = 1 - cfg.bounded_multiplier_margin
    if ps.verdict == Verdict.ESCAPING:
        return Hyperbolicity.NOT_HYPERBOLIC
    if ps.verdict == Verdict.BOUNDED:
        mults = [c.attractor.multiplier for c in ps.classifications if c.attractor]
        if len(mults) == len(ps.classifications) and all(m <= limit for m in mults):
            return Hyperbolicity.HYPERBOLIC
        if not ps.singular.over_approximate and any(m > 1 for m in mults):
            return Hyperbolicity.NOT_HYPERBOLIC
    return Hyperbolicity.UNDECIDED


def is_hyperbolic(f: FunctionExpr, sing: SingularSet | None = None,
                  cfg: EscapeConfig | None = None, bound: float = 1e6) -> Hyperbolicity:
    """Hyperbolic when every singular orbit is captured by an attracting cycle."""
    return hyperbolicity(postsingular_verdict(f, sing, cfg, bound), cfg)


# -- growth order -----------------------------------------------------------------

def _log_abs(f: FunctionExpr, z: np.ndarray) -> np.ndarray:
    """``log|f(z)|`` without overflow for (translated) atoms."""
    shift = 0j
    while isinstance(f, Translate):
        shift += f.tau
        f = f.base
    if isinstance(f, ExpAffine):
        log_exp = np.log(abs(f.a)) + (f.b * z).real
        phase = cmath.phase(f.a) + (f.b * z).imag
        rest = f.c * z + f.d + shift
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            log_rest_c = np.log(rest + 0j)
            log_rest = log_rest_c.real
            big = log_exp >= log_rest
            # factor out the larger term; the ratio then has modulus <= 1
            ratio_big = np.exp(log_rest_c - log_exp - 1j * phase)
            out_big = log_exp + np.log(np.abs(1 + ratio_big))
            ratio_small = np.exp(log_exp + 1j * phase - log_rest_c)
            out_small = log_rest + np.log(np.abs(1 + ratio_small))
        return np.where(big, out_big, out_small)
    with np.errstate(divide="ignore"):
        v = _eval(Translate(f, shift) if shift else f, z)
        return np.where(np.isfinite(v), np.log(np.abs(v)), np.inf)


def log_max_modulus(f: FunctionExpr, r: float, samples_per_circle: int = 4096) -> float:
    theta = 2 * np.pi * np.arange(samples_per_circle) / samples_per_circle
    return float(np.max(_log_abs(f, r * np.exp(1j * theta))))


def order_estimate(f: FunctionExpr, radii=(1e2, 1e3, 1e4), samples_per_circle: int = 4096) -> float:
    """Slope of ``log log M(r)`` against ``log r`` over the two largest usable radii."""
    radii = np.asarray(radii, dtype=float)
    if radii.size < 2 or np.any(np.diff(radii) <= 0):
        raise ValueError("radii must be increasing with at least two values")
    if samples_per_circle < 256:
        raise ValueError("samples_per_circle must be >= 256")
    logm = np.array([log_max_modulus(f, r, samples_per_circle) for r in radii])
    usable = np.isfinite(logm) & (logm > 0)
    if usable.sum() < 2:
        raise DegenerateRadii("need two radii with finite M(r) > 1")
    r, lm = radii[usable][-2:], logm[usable][-2:]
    return float((np.log(lm[1]) - np.log(lm[0])) / (np.log(r[1]) - np.log(r[0])))


# -- the Fatou map ------------------------------------------------------------------

def fixed_points_fatou(k_range) -> list[complex]:
    """Fixed points ``(2k+1)*pi*i`` of ``z + 1 + exp(-z)``, each residual-checked."""
    out = []
    for k in k_range:
        z = (2 * k + 1) * math.pi * 1j
        r = abs(evaluate(FATOU, z) - z)
        if r > 1e-12 * (1 + abs(z)):
            raise ArithmeticError(f"fixed point residual {r:.3g} too large at k={k}")
        out.append(z)
    return out


# -- report -------------------------------------------------------------------------

AV_FOOTNOTE = (
    "asymptotic values are finite ones only; for z+1+exp(-z) the finite set is empty, "
    "and the 'at most 2 asymptotic values' reading is not used"
)


def singular_report_rows(f: FunctionExpr, K: int = 50, cfg: EscapeConfig | None = None,
                         bound: float = 1e6) -> tuple[list[dict], PostsingularVerdict]:
    """Rows ``kind, k, re, im, verdict, capture_step`` and the aggregate verdict."""
    ps = postsingular_verdict(f, singular_superset(f, K), cfg, bound)
    rows = []
    for s, c in zip(ps.singular.values, ps.classifications):
        rows.append({
            "kind": s.kind, "k": s.k, "re": repr(s.value.real), "im": repr(s.value.imag),
            "verdict": c.verdict.value, "capture_step": c.step,
        })
    return rows, ps


def critical_point_residuals(f: ExpAffine, K: int) -> np.ndarray:
    """``|f'(z_k)|`` at the computed critical points."""
    zs = [z for _, z in critical_points(f, K)]
    return np.abs(eval_derivative(f, np.array(zs, dtype=complex))) if zs else np.zeros(0)
