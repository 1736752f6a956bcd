"""Three-valued orbit classification: Escaping / Bounded / Undecided.

The engine is vectorized: :func:`classify_array` runs every seed of an array
through the same per-step checks, and the scalar :func:`classify` is the
one-element case of it.  Per-seed results never depend on the other seeds in
the batch, so sharding over threads cannot change any verdict.

Checks made at step ``k`` (``v_k`` the current iterate, ``v_{k+1} = f(v_k)``),
first hit wins:

1. ``v_k`` overflowed                                   -> Escaping, OverflowCert
2. Fatou family and ``Re v_k > fatou_re_threshold``      -> Escaping, RealPartCert
3. ``|v_k| > hard_radius`` and ``|v_{k+1}| > |v_k|``     -> Escaping, OverflowCert
4. ``v_{k+1}`` repeats ``v_{k+1-q}`` to 1e-12 (q <= max_period)
                                                        -> Bounded, FixedPointCert
5. pure translation ``z + t`` with ``t != 0`` (step 0), or Fatou family
   ``F^N + 2*pi*i*M`` with ``M != 0`` whose ``F^N`` part is captured by
   check 4 or 6                                         -> Escaping, TranslationCert
6. attracting cycle found by Newton near a near-repeat, orbit within
   ``bounded_capture_eps`` of it                        -> Bounded, AttractorCert

Nothing fired after ``max_iter`` steps -> Undecided, HorizonExhausted.
"""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .function import (
    FATOU,
    FunctionExpr,
    Iterate,
    evaluate,
    fatou_family,
    pure_translation,
    _eval,
    _eval_with_derivative,
)

EXACT_REPEAT_TOL = 1e-12
NEWTON_RESIDUAL_TOL = 1e-11
NEWTON_STEPS = 20  # fixed count: results must not depend on the batch


class Verdict(enum.Enum):
    ESCAPING = "Escaping"
    BOUNDED = "Bounded"
    UNDECIDED = "Undecided"


class Certificate(enum.Enum):
    OVERFLOW = "OverflowCert"
    REAL_PART = "RealPartCert"
    TRANSLATION = "TranslationCert"
    ATTRACTOR = "AttractorCert"
    FIXED_POINT = "FixedPointCert"
    HORIZON = "HorizonExhausted"


# integer codes used in the arrays
ESCAPING, BOUNDED, UNDECIDED = 0, 1, 2
VERDICTS = (Verdict.ESCAPING, Verdict.BOUNDED, Verdict.UNDECIDED)
CERTIFICATES = tuple(Certificate)
_CERT_CODE = {c: i for i, c in enumerate(CERTIFICATES)}
C_OVERFLOW, C_REAL, C_TRANS, C_ATTR, C_FIXED, C_HORIZON = (
    _CERT_CODE[c] for c in CERTIFICATES
)


@dataclass(frozen=True)
class EscapeConfig:
    max_iter: int = 200
    hard_radius: float = 1e15
    fatou_re_threshold: float = 0.05
    bounded_capture_eps: float = 1e-6
    bounded_multiplier_margin: float = 0.01
    attractor_search: bool = True
    max_period: int = 8

    def __post_init__(self):
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError("max_iter must be a positive integer")
        if not self.hard_radius >= 1e10:
            raise ValueError("hard_radius must be >= 1e10")
        if not self.fatou_re_threshold > 0:
            raise ValueError("fatou_re_threshold must be > 0")
        if not self.bounded_capture_eps > 0:
            raise ValueError("bounded_capture_eps must be > 0")
        if not 0 < self.bounded_multiplier_margin < 1:
            raise ValueError("bounded_multiplier_margin must lie in (0, 1)")
        if self.max_period < 1:
            raise ValueError("max_period must be >= 1")


@dataclass(frozen=True)
class Attractor:
    """Cycle that captured an orbit: one cycle point, its period and multiplier."""

    point: complex
    period: int
    multiplier: float
    residual: float


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    certificate: Certificate
    step: int
    max_modulus: float = 0.0
    attractor: Attractor | None = None

    def __str__(self):
        return f"{self.verdict.value} {self.certificate.value} step={self.step}"


@dataclass
class OrbitRecord:
    seed: complex
    values: list[complex]
    classification: Classification


@dataclass
class ClassificationArray:
    """Per-seed results of :func:`classify_array` as parallel arrays."""

    verdict: np.ndarray
    certificate: np.ndarray
    step: np.ndarray
    max_modulus: np.ndarray
    attractor: np.ndarray = field(repr=False)
    period: np.ndarray = field(repr=False)
    multiplier: np.ndarray = field(repr=False)
    residual: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.verdict)

    def item(self, i: int) -> Classification:
        att = None
        if self.period[i] > 0:
            att = Attractor(complex(self.attractor[i]), int(self.period[i]),
                            float(self.multiplier[i]), float(self.residual[i]))
        return Classification(VERDICTS[self.verdict[i]], CERTIFICATES[self.certificate[i]],
                              int(self.step[i]), float(self.max_modulus[i]), att)

    @classmethod
    def empty(cls, n: int) -> "ClassificationArray":
        return cls(
            verdict=np.full(n, UNDECIDED, np.int8),
            certificate=np.full(n, C_HORIZON, np.int8),
            step=np.zeros(n, np.int32),
            max_modulus=np.zeros(n),
            attractor=np.full(n, np.nan + 0j),
            period=np.zeros(n, np.int16),
            multiplier=np.full(n, np.nan),
            residual=np.full(n, np.nan),
        )

    @classmethod
    def concat(cls, parts: list["ClassificationArray"]) -> "ClassificationArray":
        names = ("verdict", "certificate", "step", "max_modulus", "attractor",
                 "period", "multiplier", "residual")
        return cls(**{k: np.concatenate([getattr(p, k) for p in parts]) for k in names})


class _Track:
    """History of one iterated map over the active seeds."""

    def __init__(self, f: FunctionExpr, z: np.ndarray, depth: int):
        self.f = f
        self.hist = [z]  # hist[0] is the newest value
        self.depth = depth

    def push(self, v: np.ndarray):
        self.hist.insert(0, v)
        del self.hist[self.depth + 1:]

    def keep(self, mask: np.ndarray):
        self.hist = [h[mask] for h in self.hist]


def _exact_repeat(track: _Track, max_period: int):
    """Seeds whose newest value repeats one ``q`` steps back (smallest q)."""
    new = track.hist[0]
    n = new.size
    period = np.zeros(n, np.int16)
    resid = np.full(n, np.nan)
    finite = np.isfinite(new)
    for q in range(1, min(max_period, len(track.hist) - 1) + 1):
        with np.errstate(invalid="ignore"):
            d = np.abs(new - track.hist[q])
        hit = finite & (period == 0) & (d <= EXACT_REPEAT_TOL * (1 + np.abs(new)))
        period[hit] = q
        resid[hit] = d[hit]
    return period, resid


def _cycle_multiplier(f: FunctionExpr, p: np.ndarray, period: np.ndarray) -> np.ndarray:
    mult = np.full(p.size, np.nan)
    for q in np.unique(period[period > 0]):
        sel = period == q
        _, der = _eval_with_derivative(Iterate(f, int(q)), p[sel])
        mult[sel] = np.abs(der)
    return mult


def _attractor_search(track: _Track, cfg: EscapeConfig, candidates: np.ndarray):
    """Newton-refine near-repeats into attracting cycles.

    Returns (captured mask, cycle point, period, |multiplier|, residual).
    """
    new = track.hist[0]
    n = new.size
    eps = cfg.bounded_capture_eps
    captured = np.zeros(n, bool)
    point = np.full(n, np.nan + 0j)
    period = np.zeros(n, np.int16)
    mult = np.full(n, np.nan)
    resid = np.full(n, np.nan)
    finite = np.isfinite(new)
    for q in range(1, min(cfg.max_period, len(track.hist) - 1) + 1):
        open_ = candidates & finite & ~captured
        if not open_.any():
            break
        with np.errstate(invalid="ignore"):
            # absolute, like the capture test below: a relative test would
            # send every far-out drifting orbit through Newton at each step
            near = open_ & (np.abs(new - track.hist[q]) <= eps)
        idx = np.flatnonzero(near)
        if idx.size == 0:
            continue
        fq = Iterate(track.f, q)
        p = new[idx].copy()
        with np.errstate(all="ignore"):
            for _ in range(NEWTON_STEPS):
                val, der = _eval_with_derivative(fq, p)
                step = (val - p) / (der - 1)
                step = np.where(np.isfinite(step), step, 0)
                p = p - step
            val, der = _eval_with_derivative(fq, p)
            r = np.abs(val - p)
            m = np.abs(der)
            ok = (
                np.isfinite(p) & (r <= NEWTON_RESIDUAL_TOL * (1 + np.abs(p)))
                & (m <= 1 - cfg.bounded_multiplier_margin)
                & (np.abs(new[idx] - p) <= eps)
            )
        good = idx[ok]
        captured[good] = True
        point[good] = p[ok]
        period[good] = q
        mult[good] = m[ok]
        resid[good] = r[ok]
    return captured, point, period, mult, resid


def _classify_chunk(f: FunctionExpr, seeds: np.ndarray, cfg: EscapeConfig) -> ClassificationArray:
    n = seeds.size
    res = ClassificationArray.empty(n)
    res.step[:] = cfg.max_iter
    family = fatou_family(f)
    shift = pure_translation(f)
    fatou_part = None
    if family is not None and family[1] != 0:
        fatou_part = Iterate(FATOU, family[0])

    active = np.arange(n)
    depth = cfg.max_period
    main = _Track(f, seeds.copy(), depth)
    part = _Track(fatou_part, seeds.copy(), depth) if fatou_part is not None else None
    with np.errstate(invalid="ignore", over="ignore"):
        runmax = np.where(np.isfinite(seeds), np.abs(seeds), np.inf)

    def settle(local_mask, verdict, cert, k, extra=None):
        nonlocal active
        if not local_mask.any():
            return
        glob = active[local_mask]
        res.verdict[glob] = verdict
        res.certificate[glob] = cert
        res.step[glob] = k
        res.max_modulus[glob] = runmax[local_mask]
        if extra is not None:
            pt, per, mu, rr = extra
            res.attractor[glob] = pt[local_mask]
            res.period[glob] = per[local_mask]
            res.multiplier[glob] = mu[local_mask]
            res.residual[glob] = rr[local_mask]

    def drop(local_mask):
        nonlocal active, runmax
        keep = ~local_mask
        active = active[keep]
        runmax = runmax[keep]
        main.keep(keep)
        if part is not None:
            part.keep(keep)

    for k in range(cfg.max_iter):
        if active.size == 0:
            break
        v = main.hist[0]
        done = np.zeros(active.size, bool)

        hit = ~np.isfinite(v)
        settle(hit, ESCAPING, C_OVERFLOW, k)
        done |= hit

        if family is not None:
            with np.errstate(invalid="ignore"):
                hit = ~done & (v.real > cfg.fatou_re_threshold)
            settle(hit, ESCAPING, C_REAL, k)
            done |= hit

        if shift is not None and shift != 0 and k == 0:
            hit = ~done
            settle(hit, ESCAPING, C_TRANS, k)
            done |= hit

        nxt = _eval(f, v)
        main.push(nxt)
        with np.errstate(invalid="ignore", over="ignore"):
            av, an = np.abs(v), np.abs(nxt)
            hit = ~done & (av > cfg.hard_radius) & (~np.isfinite(nxt) | (an > av))
        settle(hit, ESCAPING, C_OVERFLOW, k)
        done |= hit

        period, resid = _exact_repeat(main, cfg.max_period)
        hit = ~done & (period > 0)
        if hit.any():
            mult = np.full(active.size, np.nan)
            mult[hit] = _cycle_multiplier(f, nxt[hit], period[hit])
            settle(hit, BOUNDED, C_FIXED, k, (nxt, period, mult, resid))
            done |= hit

        if part is not None:
            part.push(_eval(part.f, part.hist[0]))
            pperiod, _ = _exact_repeat(part, cfg.max_period)
            bounded_part = pperiod > 0
            if cfg.attractor_search:
                cand = ~done & ~bounded_part
                cap, *_ = _attractor_search(part, cfg, cand)
                bounded_part |= cap
            hit = ~done & bounded_part
            settle(hit, ESCAPING, C_TRANS, k)
            done |= hit

        if cfg.attractor_search:
            cap, pt, per, mu, rr = _attractor_search(main, cfg, ~done)
            settle(cap, BOUNDED, C_ATTR, k, (pt, per, mu, rr))
            done |= cap

        with np.errstate(invalid="ignore", over="ignore"):
            runmax = np.maximum(runmax, np.where(np.isfinite(nxt), an, np.inf))
        if done.any():
            drop(done)

    if active.size:
        res.max_modulus[active] = runmax
    return res


def classify_array(f: FunctionExpr, seeds, cfg: EscapeConfig | None = None,
                   threads: int = 1) -> ClassificationArray:
    """Classify every seed of a 1-D array; see the module docstring."""
    cfg = cfg or EscapeConfig()
    seeds = np.asarray(seeds, dtype=complex).ravel()
    if threads <= 1 or seeds.size < 2048:
        return _classify_chunk(f, seeds, cfg)
    bounds = np.linspace(0, seeds.size, 4 * threads + 1).astype(int)
    chunks = [seeds[a:b] for a, b in zip(bounds[:-1], bounds[1:])]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda c: _classify_chunk(f, c, cfg), chunks))
    return ClassificationArray.concat(parts)


def classify(f: FunctionExpr, z: complex, cfg: EscapeConfig | None = None) -> Classification:
    """Escaping / Bounded / Undecided verdict for the orbit of ``z`` under ``f``."""
    return classify_array(f, np.array([z], dtype=complex), cfg).item(0)


def orbit(f: FunctionExpr, z: complex, n: int, cfg: EscapeConfig | None = None) -> OrbitRecord:
    """The first ``n`` iterates of ``z`` (``n + 1`` values, seed included).

    Iteration stops early once a value overflows.  The classification is
    computed with horizon ``max(n, cfg.max_iter)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    cfg = cfg or EscapeConfig()
    values = [complex(z)]
    for _ in range(n):
        if not np.isfinite(values[-1]):
            break
        values.append(evaluate(f, values[-1]))
    if cfg.max_iter < n:
        cfg = EscapeConfig(**{**cfg.__dict__, "max_iter": n})
    return OrbitRecord(complex(z), values, classify(f, z, cfg))


class EscapingPointNotFound(LookupError):
    """No sampled point of the box was certified Escaping.

    This says the box or the horizon was insufficient, not that the escaping
    set is empty.
    """


def find_escaping_point(f: FunctionExpr, box: tuple[float, float, float, float],
                        cfg: EscapeConfig | None = None, max_level: int = 6) -> complex:
    """First certified-escaping point of a coarse-to-fine scan of ``box``.

    ``box`` is ``(re_min, re_max, im_min, im_max)``.  Level ``L`` scans the
    ``2^L x 2^L`` cell centers row by row (top row first); level 0 is the
    box center.
    """
    x0, x1, y0, y1 = box
    if not (x0 < x1 and y0 < y1):
        raise ValueError("search box is degenerate")
    for level in range(max_level + 1):
        m = 2 ** level
        xs = x0 + (np.arange(m) + 0.5) * (x1 - x0) / m
        ys = y1 - (np.arange(m) + 0.5) * (y1 - y0) / m
        pts = (xs[None, :] + 1j * ys[:, None]).ravel()
        res = classify_array(f, pts, cfg)
        hits = np.flatnonzero(res.verdict == ESCAPING)
        if hits.size:
            return complex(pts[hits[0]])
    raise EscapingPointNotFound(f"no escaping point certified in box {box}")
