"""Sampled three-valued checks of the escaping-set theorems.

Every check is a list of clauses ``hypothesis => conclusion`` evaluated per
sample.  A clause instance is

* applicable when the hypothesis is certified true and the conclusion is
  certified either way;
* passed when, in addition, the conclusion is certified true;
* violated when the conclusion is certified false;
* vacuous otherwise (something was Undecided).

So ``applicable == passed + violated`` and an Undecided verdict never turns
into a pass or a violation.
"""
from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .function import (
    FATOU,
    Affine,
    FunctionExpr,
    commutes_numerically,
    compose,
    exp_map,
    format_expr,
    iterate_expr,
    translate,
    _eval,
    _eval_with_derivative,
)
from .orbit import BOUNDED, ESCAPING, VERDICTS, ClassificationArray, EscapeConfig, classify_array
from .sampling import SampleSpec
from .singular import Hyperbolicity, hyperbolicity, postsingular_verdict, singular_superset, fixed_points_fatou

TWO_PI = 2 * math.pi
MAX_WITNESSES = 50
PREIMAGE_TOL = 1e-10

FATOU_G = translate(FATOU, 2j * math.pi)
EXP_QUARTER = exp_map(0.25)
PAIRS = {"fatou": (FATOU, FATOU_G), "exp": (EXP_QUARTER, EXP_QUARTER)}
SEMICONJUGACY_TRIPLE = (exp_map(1), Affine(1, 1), Affine(math.e, 0))


@dataclass
class PropertyReport:
    check_name: str
    functions: list[str]
    sample_spec: dict | None = None
    cfg: dict = field(default_factory=dict)
    applicable: int = 0
    passed: int = 0
    violated: int = 0
    vacuous_undecided: int = 0
    violations: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def total(self) -> int:
        return self.applicable + self.vacuous_undecided

    @property
    def vacuous_fraction(self) -> float:
        return self.vacuous_undecided / self.total if self.total else 0.0

    @property
    def seed(self):
        return (self.sample_spec or {}).get("seed", "")

    def counts(self) -> tuple[int, int, int, int]:
        return self.applicable, self.passed, self.violated, self.vacuous_undecided

    def to_dict(self) -> dict:
        d = asdict(self)
        d["vacuous_fraction"] = self.vacuous_fraction
        return d

    def summary(self) -> str:
        return (f"{self.check_name}: applicable={self.applicable} passed={self.passed} "
                f"violated={self.violated} vacuous={self.vacuous_undecided} "
                f"({100 * self.vacuous_fraction:.1f}% vacuous)")

    # -- tallying --------------------------------------------------------------

    def tally(self, clause: str, points: np.ndarray, hyp: np.ndarray,
              concl_true: np.ndarray, concl_false: np.ndarray, describe: Callable[[int], dict] | None = None):
        n = int(np.size(hyp))
        appl = hyp & (concl_true | concl_false)
        ok = appl & concl_true
        bad = appl & concl_false & ~concl_true
        self.applicable += int(appl.sum())
        self.passed += int(ok.sum())
        self.violated += int(bad.sum())
        self.vacuous_undecided += n - int(appl.sum())
        per = self.details.setdefault("clauses", {})
        per[clause] = {"applicable": int(appl.sum()), "passed": int(ok.sum()),
                       "violated": int(bad.sum()), "vacuous": n - int(appl.sum())}
        for i in np.flatnonzero(bad)[: max(0, MAX_WITNESSES - len(self.violations))]:
            w = {"clause": clause, "z": [float(points[i].real), float(points[i].imag)]}
            if describe is not None:
                w.update(describe(int(i)))
            self.violations.append(w)


def _points(samples) -> tuple[np.ndarray, dict | None]:
    if isinstance(samples, SampleSpec):
        return samples.points(), samples.describe()
    pts = np.atleast_1d(np.asarray(samples, dtype=complex)).ravel()
    return pts, None


def _start(name: str, fns: Sequence[FunctionExpr], spec: dict | None, cfg: EscapeConfig) -> PropertyReport:
    return PropertyReport(name, [format_expr(f) for f in fns], spec, asdict(cfg))


def _permutability(report: PropertyReport, f, g, pts: np.ndarray, tol: float = 1e-8):
    res = commutes_numerically(f, g, pts[: min(pts.size, 2000)], tol)
    report.details["commutes"] = {"ok": res.ok, "max_rel_diff": res.max_rel_diff}
    if not res.ok:
        report.warnings.append(
            f"maps do not commute numerically (witness {res.witness!r}); the theorem assumes f o g = g o f")


def _cls(f, pts, cfg, threads) -> ClassificationArray:
    return classify_array(f, pts, cfg, threads)


def _esc(r: ClassificationArray) -> np.ndarray:
    return r.verdict == ESCAPING


def _bdd(r: ClassificationArray) -> np.ndarray:
    return r.verdict == BOUNDED


def _v(r: ClassificationArray, i: int) -> str:
    return VERDICTS[r.verdict[i]].value


def _finish(report: PropertyReport, t0: float) -> PropertyReport:
    report.wall_time = time.perf_counter() - t0
    return report


# -- checks ---------------------------------------------------------------------

def check_union_containment(f, g, samples, cfg: EscapeConfig | None = None, threads: int = 1) -> PropertyReport:
    """``z in I(f o g)  =>  z in I(f) u I(g)``."""
    cfg = cfg or EscapeConfig()
    t0 = time.perf_counter()
    pts, spec = _points(samples)
    rep = _start("union_containment", (f, g), spec, cfg)
    _permutability(rep, f, g, pts)
    rfg, rf, rg = (_cls(h, pts, cfg, threads) for h in (compose(f, g), f, g))
    rep.tally("I(fg) in I(f)|I(g)", pts, _esc(rfg), _esc(rf) | _esc(rg), _bdd(rf) & _bdd(rg),
              lambda i: {"fg": _v(rfg, i), "f": _v(rf, i), "g": _v(rg, i)})
    return _finish(rep, t0)


def check_complete_invariance(f, g, samples, cfg: EscapeConfig | None = None, threads: int = 1) -> PropertyReport:
    """``I(f o g)`` is forward and backward invariant under ``f`` and ``g``."""
    cfg = cfg or EscapeConfig()
    t0 = time.perf_counter()
    pts, spec = _points(samples)
    rep = _start("complete_invariance", (f, g), spec, cfg)
    _permutability(rep, f, g, pts)
    fg = compose(f, g)
    rz = _cls(fg, pts, cfg, threads)
    for name, m in (("f", f), ("g", g)):
        img = _eval(m, pts)
        rm = _cls(fg, img, cfg, threads)
        rep.tally(f"forward {name}: z in I(fg) => {name}(z) in I(fg)", pts, _esc(rz), _esc(rm), _bdd(rm),
                  lambda i, rm=rm: {"z_fg": _v(rz, i), "image_fg": _v(rm, i)})
        rep.tally(f"backward {name}: {name}(z) in I(fg) => z in I(fg)", pts, _esc(rm), _esc(rz), _bdd(rz),
                  lambda i, rm=rm: {"z_fg": _v(rz, i), "image_fg": _v(rm, i)})
    return _finish(rep, t0)


def check_power_containments(f, g, i: int, j: int, samples, cfg: EscapeConfig | None = None,
                             threads: int = 1) -> PropertyReport:
    """``I(f^i o g^j) in I(f) u I(g)`` and ``I(f^i o g^j) in I(f o g)``.

    For ``i < j`` the roles of ``(f, i)`` and ``(g, j)`` are swapped, so the
    second containment is tested against ``I(g o f)``; the swap is recorded.
    """
    if i < 1 or j < 1:
        raise ValueError("i and j must be positive")
    cfg = cfg or EscapeConfig()
    t0 = time.perf_counter()
    pts, spec = _points(samples)
    rep = _start("power_containments", (f, g), spec, cfg)
    rep.details.update(i=i, j=j, swapped=i < j)
    _permutability(rep, f, g, pts)
    a, b, p, q = (f, g, i, j) if i >= j else (g, f, j, i)
    power = compose(iterate_expr(a, p), iterate_expr(b, q))
    rp, ra, rb, rab = (_cls(h, pts, cfg, threads) for h in (power, a, b, compose(a, b)))
    rep.tally("I(f^i g^j) in I(f)|I(g)", pts, _esc(rp), _esc(ra) | _esc(rb), _bdd(ra) & _bdd(rb),
              lambda k: {"power": _v(rp, k), "f": _v(ra, k), "g": _v(rb, k)})
    rep.tally("I(f^i g^j) in I(fg)", pts, _esc(rp), _esc(rab), _bdd(rab),
              lambda k: {"power": _v(rp, k), "fg": _v(rab, k)})
    return _finish(rep, t0)


def check_backward_invariance(f, g, samples, cfg: EscapeConfig | None = None, threads: int = 1) -> PropertyReport:
    """``I(f)``, ``I(g)`` backward invariant under ``f o g``; ``w not in I(f) => g(w) not in I(f)``."""
    cfg = cfg or EscapeConfig()
    t0 = time.perf_counter()
    pts, spec = _points(samples)
    rep = _start("backward_invariance", (f, g), spec, cfg)
    _permutability(rep, f, g, pts)
    img = _eval(compose(f, g), pts)
    for name, m, other in (("f", f, g), ("g", g, f)):
        rz = _cls(m, pts, cfg, threads)
        ri = _cls(m, img, cfg, threads)
        rep.tally(f"(1) fg(z) in I({name}) => z in I({name})", pts, _esc(ri), _esc(rz), _bdd(rz),
                  lambda i, rz=rz, ri=ri: {"image": _v(ri, i), "z": _v(rz, i)})
        other_name = "g" if name == "f" else "f"
        ro = _cls(m, _eval(other, pts), cfg, threads)
        rep.tally(f"(2) w not in I({name}) => {other_name}(w) not in I({name})", pts, _bdd(rz), _bdd(ro), _esc(ro),
                  lambda i, rz=rz, ro=ro: {"w": _v(rz, i), "image": _v(ro, i)})
    return _finish(rep, t0)


def check_semiconjugacy(f, g, h, samples, cfg: EscapeConfig | None = None, threads: int = 1,
                        tol: float = 1e-10) -> PropertyReport:
    """``f o g = h o f``  =>  ``f^{-1}(I(h)) in I(g)``, sampled as
    ``f(z) in I(h) => z in I(g)``."""
    cfg = cfg or EscapeConfig()
    t0 = time.perf_counter()
    pts, spec = _points(samples)
    rep = _start("semiconjugacy", (f, g, h), spec, cfg)
    lhs, rhs = _eval(compose(f, g), pts), _eval(compose(h, f), pts)
    with np.errstate(all="ignore"):
        rel = np.abs(lhs - rhs) / np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    both = ~np.isfinite(lhs) & ~np.isfinite(rhs)
    rel = np.where(both, 0.0, np.nan_to_num(rel, nan=np.inf))
    hyp_ok = bool(np.all(rel <= tol))
    rep.details["semiconjugacy"] = {"ok": hyp_ok, "max_rel_diff": float(rel.max()), "tol": tol}
    if not hyp_ok:
        rep.warnings.append("f o g = h o f fails on the samples; the theorem's hypothesis does not hold")
    rh = _cls(h, _eval(f, pts), cfg, threads)
    rg = _cls(g, pts, cfg, threads)
    rep.tally("f(z) in I(h) => z in I(g)", pts, _esc(rh), _esc(rg), _bdd(rg),
              lambda i: {"f(z)_h": _v(rh, i), "z_g": _v(rg, i)})
    return _finish(rep, t0)


def check_forward_invariance_pair(samples, cfg: EscapeConfig | None = None, threads: int = 1) -> PropertyReport:
    """For ``f = z + 1 + exp(-z)`` and ``g = f + 2*pi*i``:
    ``g(I(f)) in I(f)`` and ``f(I(g)) in I(g)``."""
    cfg = cfg or EscapeConfig()
    f, g = FATOU, FATOU_G
    t0 = time.perf_counter()
    pts, spec = _points(samples)
    rep = _start("forward_invariance_pair", (f, g), spec, cfg)
    for a_name, a, b_name, b in (("f", f, "g", g), ("g", g, "f", f)):
        rz = _cls(a, pts, cfg, threads)
        ri = _cls(a, _eval(b, pts), cfg, threads)
        rep.tally(f"z in I({a_name}) => {b_name}(z) in I({a_name})", pts, _esc(rz), _esc(ri), _bdd(ri),
                  lambda i, rz=rz, ri=ri: {"z": _v(rz, i), "image": _v(ri, i)})
    return _finish(rep, t0)


def composition_identity_errors(pts: np.ndarray, n_max: int) -> dict[str, np.ndarray]:
    """Relative errors of ``(f o g)^n = f^{2n} + 2n*pi*i`` and the ``g o f`` form.

    Both sides are iterated independently.  Returns arrays of shape
    ``(n_max + 1, len(pts))``; overflowed entries are NaN.
    """
    f, g = FATOU, FATOU_G
    out = {}
    for label, step in (("eq1 (f o g)^n", compose(f, g)), ("eq2 (g o f)^n", compose(g, f))):
        lhs = pts.copy()
        rhs_core = pts.copy()
        err = np.empty((n_max + 1, pts.size))
        for n in range(n_max + 1):
            if n:
                lhs = _eval(step, lhs)
                rhs_core = _eval(f, _eval(f, rhs_core))
            rhs = rhs_core + 2j * n * math.pi
            with np.errstate(all="ignore"):
                e = np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs))
            err[n] = np.where(np.isfinite(lhs) & np.isfinite(rhs), e, np.nan)
        out[label] = err
    return out


def check_composition_identity(samples, n_max: int = 8, tol: float = 1e-9) -> PropertyReport:
    """``(f o g)^n(z) = f^{2n}(z) + 2n*pi*i`` (and for ``g o f``) for ``n <= n_max``."""
    t0 = time.perf_counter()
    pts, spec = _points(samples)
    rep = _start("composition_identity", (FATOU, FATOU_G), spec, EscapeConfig())
    rep.cfg = {"n_max": n_max, "tol": tol}
    worst = 0.0
    for label, err in composition_identity_errors(pts, n_max).items():
        flat_pts = np.tile(pts, n_max + 1)
        e = err.ravel()
        finite = ~np.isnan(e)
        rep.tally(label, flat_pts, finite, finite & (e <= tol), finite & (e > tol),
                  lambda i, e=e: {"n": int(i // pts.size), "rel_err": float(e[i])})
        if finite.any():
            worst = max(worst, float(e[finite].max()))
    rep.details["max_rel_err"] = worst
    return _finish(rep, t0)


def check_fixed_points_escape(k_range=range(-10, 11), n_probe: int = 50,
                              cfg: EscapeConfig | None = None) -> PropertyReport:
    """Each fixed point ``(2k+1)*pi*i`` of ``f`` is Bounded under ``f`` and
    Escaping under ``g`` and ``f o g``: ``I(f o g)`` is not inside ``I(f) n I(g)``."""
    cfg = cfg or EscapeConfig()
    f, g = FATOU, FATOU_G
    t0 = time.perf_counter()
    pts = np.array(fixed_points_fatou(k_range), dtype=complex)
    rep = _start("fixed_points_escape", (f, g), {"k_range": [min(k_range), max(k_range)]}, cfg)
    rf, rg, rfg = (_cls(h, pts, cfg, 1) for h in (f, g, compose(f, g)))
    all_certified = np.ones(pts.size, bool)
    rep.tally("Fix(f) not in I(f)", pts, all_certified, _bdd(rf), _esc(rf))
    rep.tally("Fix(f) in I(g)", pts, all_certified, _esc(rg), _bdd(rg))
    rep.tally("Fix(f) in I(fg)", pts, all_certified, _esc(rfg), _bdd(rfg))
    witness = _esc(rfg) & _bdd(rf)
    rep.details["counterexample_I_fg_not_in_I_f_and_I_g"] = bool(witness.any())
    rep.details["triples"] = [
        {"z": [0.0, float(z.imag)], "f": _v(rf, i), "g": _v(rg, i), "fg": _v(rfg, i)}
        for i, z in enumerate(pts)
    ]
    # g^n(z) = z + 2n*pi*i on Fix(f), iterated directly
    v = pts.copy()
    dev = 0.0
    for n in range(1, n_probe + 1):
        v = _eval(g, v)
        dev = max(dev, float(np.max(np.abs(v - (pts + 2j * n * math.pi)) / (1 + np.abs(v)))))
    rep.details["probe"] = {"n": n_probe, "max_rel_dev": dev,
                            "min_modulus": float(np.min(np.abs(v))), "expected_growth": 2 * math.pi * n_probe}
    return _finish(rep, t0)


def _newton_preimage(g: FunctionExpr, z: np.ndarray, w: np.ndarray, max_steps: int) -> np.ndarray:
    with np.errstate(all="ignore"):
        for _ in range(max_steps):
            val, der = _eval_with_derivative(g, w)
            r = np.abs(val - z)
            step = (val - z) / der
            step = np.where(np.isfinite(step), step, 0)
            best_w, best_r = w.copy(), r.copy()
            lam = 1.0
            improved = np.zeros(z.size, bool)
            for _ in range(12):
                cand = w - lam * step
                rc = np.abs(_eval(g, cand) - z)
                take = ~improved & np.isfinite(rc) & (rc < best_r)
                best_w[take], best_r[take] = cand[take], rc[take]
                improved |= take
                lam *= 0.5
            w = best_w
    return w


def solve_preimage(g: FunctionExpr, z: np.ndarray, tol: float = PREIMAGE_TOL,
                   max_steps: int = 80) -> tuple[np.ndarray, np.ndarray]:
    """Damped Newton for ``g(w) = z``.

    First seeded at ``w0 = 2z - g(z)`` (z minus the local translation), then
    retried from ``w0 = z`` where that fails.  Returns ``(w, converged)``.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))

    def done(w):
        with np.errstate(all="ignore"):
            r = np.abs(_eval(g, w) - z)
        return np.isfinite(r) & (r <= tol * (1 + np.abs(z)))

    with np.errstate(all="ignore"):
        seed = 2 * z - _eval(g, z)
    seed = np.where(np.isfinite(seed), seed, z)
    w = _newton_preimage(g, z, seed, max_steps)
    conv = done(w)
    if not conv.all():
        retry = _newton_preimage(g, z, z.copy(), max_steps)
        fix = ~conv & done(retry)
        w = np.where(fix, retry, w)
        conv |= fix
    return w, conv


def check_preimage_escape(f, g, samples, cfg: EscapeConfig | None = None, threads: int = 1) -> PropertyReport:
    """``g(I(f)) contains I(f)``: for ``z`` escaping under ``f`` one numerical
    root ``w`` of ``g(w) = z`` must escape under ``f`` too."""
    cfg = cfg or EscapeConfig()
    t0 = time.perf_counter()
    pts, spec = _points(samples)
    rep = _start("preimage_escape", (f, g), spec, cfg)
    _permutability(rep, f, g, pts)
    rz = _cls(f, pts, cfg, threads)
    hyp = _esc(rz)
    w, conv = solve_preimage(g, pts)
    rw = _cls(f, np.where(conv, w, 0), cfg, threads)
    rep.tally("z in I(f) => g^{-1}(z) meets I(f)", pts, hyp & conv, _esc(rw) & conv, _bdd(rw) & conv,
              lambda i: {"w": [float(w[i].real), float(w[i].imag)], "w_f": _v(rw, i)})
    n_hyp = int(hyp.sum())
    rep.details["root_search"] = {"attempted": n_hyp, "converged": int((hyp & conv).sum()),
                                  "rate": float((hyp & conv).sum() / n_hyp) if n_hyp else 0.0}
    return _finish(rep, t0)


def _chain(maps: Sequence[FunctionExpr]) -> FunctionExpr:
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = compose(m, out)
    return out


def check_postsingular_closure_nfold(maps: Sequence[FunctionExpr], cfg: EscapeConfig | None = None,
                                     K: int = 50, bound: float = 1e6) -> PropertyReport:
    """Postsingular boundedness and hyperbolicity pass to ``g_1 o ... o g_n``."""
    if len(maps) < 2:
        raise ValueError("need at least two maps")
    cfg = cfg or EscapeConfig()
    t0 = time.perf_counter()
    comp = _chain(maps)
    rep = _start("postsingular_closure", list(maps), None, cfg)
    verdicts = [postsingular_verdict(m, singular_superset(m, K), cfg, bound) for m in maps]
    comp_v = postsingular_verdict(comp, singular_superset(comp, K), cfg, bound)
    hyps = [hyperbolicity(v, cfg) for v in verdicts]
    comp_h = hyperbolicity(comp_v, cfg)
    rep.details.update(
        composite=format_expr(comp),
        factors=[{"postsingular": v.label, "hyperbolic": h.value, "bound_witness": v.bound_witness,
                  "max_residual": v.max_residual} for v, h in zip(verdicts, hyps)],
        composite_postsingular=comp_v.label, composite_hyperbolic=comp_h.value,
        composite_bound_witness=comp_v.bound_witness, composite_max_residual=comp_v.max_residual,
        composite_singular_count=len(comp_v.singular),
    )
    one = np.array([0j])
    pb = np.array([all(v.label == "Bounded" for v in verdicts)])
    rep.tally("postsingularly bounded closed under composition", one, pb,
              np.array([comp_v.label == "Bounded"]), np.array([comp_v.label == "Unbounded"]))
    hy = np.array([all(h is Hyperbolicity.HYPERBOLIC for h in hyps)])
    rep.tally("hyperbolic closed under composition", one, hy,
              np.array([comp_h is Hyperbolicity.HYPERBOLIC]), np.array([comp_h is Hyperbolicity.NOT_HYPERBOLIC]))
    return _finish(rep, t0)


def check_postsingular_closure(f, g, cfg: EscapeConfig | None = None, K: int = 50,
                               bound: float = 1e6) -> PropertyReport:
    return check_postsingular_closure_nfold([f, g], cfg, K, bound)


# -- suites ------------------------------------------------------------------------

GRID_8 = dict(mode="grid", window=(-8.0, 8.0, -8.0, 8.0), resolution=(256, 256))

CHECKS = (
    "union_containment", "complete_invariance", "power_containments", "backward_invariance",
    "semiconjugacy", "forward_invariance_pair", "composition_identity", "fixed_points_escape",
    "preimage_escape", "postsingular_closure",
)
FATOU_ONLY = {"forward_invariance_pair", "composition_identity", "fixed_points_escape"}
POWER_PAIRS = ((2, 1), (1, 2), (3, 2))


def run_check(name: str, pair: str = "fatou", cfg: EscapeConfig | None = None, seed: int = 0,
              threads: int = 1, grid: SampleSpec | None = None, count: int = 1000) -> list[PropertyReport]:
    """Run one named check at its default sampling; returns one or more reports."""
    cfg = cfg or EscapeConfig()
    if pair not in PAIRS:
        raise ValueError(f"unknown pair {pair!r}; choose from {sorted(PAIRS)}")
    f, g = PAIRS[pair]
    grid = grid or SampleSpec(**GRID_8)

    def rnd(window=(-8.0, 8.0, -8.0, 8.0)):
        return SampleSpec("random", window, count=count, seed=seed)

    if name == "union_containment":
        return [check_union_containment(f, g, grid, cfg, threads)]
    if name == "complete_invariance":
        return [check_complete_invariance(f, g, grid, cfg, threads)]
    if name == "backward_invariance":
        return [check_backward_invariance(f, g, grid, cfg, threads)]
    if name == "power_containments":
        out = []
        for i, j in POWER_PAIRS:
            r = check_power_containments(f, g, i, j, rnd(), cfg, threads)
            r.check_name = f"power_containments_{i}_{j}"
            out.append(r)
        return out
    if name == "semiconjugacy":
        return [check_semiconjugacy(*SEMICONJUGACY_TRIPLE, rnd((-3.0, 3.0, -3.0, 3.0)), cfg, threads)]
    if name == "forward_invariance_pair":
        return [check_forward_invariance_pair(rnd((0.0, 5.0, -8.0, 8.0)), cfg, threads)]
    if name == "composition_identity":
        return [check_composition_identity(rnd((-3.0, 3.0, -3.0, 3.0)))]
    if name == "fixed_points_escape":
        return [check_fixed_points_escape(range(-10, 11), 50, cfg)]
    if name == "preimage_escape":
        return [check_preimage_escape(f, g, rnd(), cfg, threads)]
    if name == "postsingular_closure":
        reps = [check_postsingular_closure(f, g, cfg)]
        three = check_postsingular_closure_nfold([f, g, f], cfg)
        three.check_name = "postsingular_closure_3fold"
        return reps + [three]
    raise ValueError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")


def run_suite(names: str | Sequence[str] = "all", pair: str = "fatou", cfg: EscapeConfig | None = None,
              seed: int = 0, threads: int = 1, log: Callable[[str], None] | None = None) -> list[PropertyReport]:
    if names == "all":
        names = [n for n in CHECKS if pair == "fatou" or n not in FATOU_ONLY]
    elif isinstance(names, str):
        names = [n.strip() for n in names.split(",") if n.strip()]
    reports = []
    for n in names:
        for r in run_check(n, pair, cfg, seed, threads):
            reports.append(r)
            if log:
                log(r.summary())
    return reports


REPORT_COLUMNS = ("name", "applicable", "passed", "violated", "vacuous", "seed")


def write_reports(reports: Sequence[PropertyReport], out_dir) -> Path:
    """``reports.csv`` (one row per check) plus one JSON detail file per check."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "reports.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(REPORT_COLUMNS)
        for r in reports:
            w.writerow([r.check_name, r.applicable, r.passed, r.violated, r.vacuous_undecided, r.seed])
    for r in reports:
        (out / f"{r.check_name}.json").write_text(json.dumps(r.to_dict(), indent=2, default=str))
    return path


def read_reports(path) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        for k in ("applicable", "passed", "violated", "vacuous"):
            row[k] = int(row[k])
    return rows
