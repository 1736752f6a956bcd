"""Expression trees for affine-exponential entire functions.

Every map is built from the atom ``z -> a*exp(b*z) + c*z + d`` with the
structural constructors :func:`compose`, :func:`iterate_expr` and
:func:`translate`.  Evaluation is vectorized over numpy arrays and never
raises on overflow: any intermediate whose modulus exceeds
:data:`OVERFLOW_GUARD` (or is not finite) becomes :data:`OVERFLOW`, which is
absorbing.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

OVERFLOW_GUARD = 1e300
OVERFLOW = complex(math.inf, math.inf)
TWO_PI_I = 2j * math.pi


class ExprError(ValueError):
    """Malformed function expression or expression text."""


@dataclass(frozen=True)
class ExpAffine:
    """``z -> a*exp(b*z) + c*z + d`` with ``a != 0`` and ``b != 0``."""

    a: complex
    b: complex
    c: complex = 0j
    d: complex = 0j

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.a == 0 or self.b == 0:
            raise ExprError("ExpAffine needs a != 0 and b != 0 (otherwise the map is affine)")


@dataclass(frozen=True)
class Affine:
    """``z -> m*z + t``.

    Not transcendental; only meant for the harness triples (the identity and
    the maps ``z + 1`` and ``e*w`` of the semiconjugacy check).
    """

    m: complex = 1 + 0j
    t: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "m", complex(self.m))
        object.__setattr__(self, "t", complex(self.t))
        if self.m == 0:
            raise ExprError("Affine needs m != 0")


@dataclass(frozen=True)
class Compose:
    outer: "FunctionExpr"
    inner: "FunctionExpr"


@dataclass(frozen=True)
class Iterate:
    base: "FunctionExpr"
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ExprError(f"iterate count must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True)
class Translate:
    base: "FunctionExpr"
    tau: complex

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))


FunctionExpr = Union[ExpAffine, Affine, Compose, Iterate, Translate]

FATOU = ExpAffine(1, -1, 1, 1)
IDENTITY = Affine(1, 0)


def exp_map(lam: complex) -> ExpAffine:
    """``z -> lam*exp(z)``."""
    return ExpAffine(lam, 1, 0, 0)


def explus(lam: complex) -> ExpAffine:
    """``z -> exp(z) + lam``."""
    return ExpAffine(1, 1, 0, lam)


def compose(f: FunctionExpr, g: FunctionExpr) -> Compose:
    """``f o g`` (apply ``g`` first)."""
    return Compose(f, g)


def iterate_expr(f: FunctionExpr, n: int) -> Iterate:
    return Iterate(f, n)


def translate(f: FunctionExpr, tau: complex) -> Translate:
    """``z -> f(z) + tau``."""
    return Translate(f, tau)


# -- evaluation ---------------------------------------------------------------

def _guard(v: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore", over="ignore"):
        bad = ~np.isfinite(v) | (np.abs(v) > OVERFLOW_GUARD)
    if bad.any():
        v = np.where(bad, OVERFLOW, v)
    return v


def _exp_term(a: complex, b: complex, z: np.ndarray) -> np.ndarray:
    w = b * z
    with np.errstate(all="ignore"):
        # exp overflows float64 near Re w = 709.8; |a| can still pull it back
        out = a * np.exp(w)
    return out


def _eval(f: FunctionExpr, z: np.ndarray) -> np.ndarray:
    if isinstance(f, ExpAffine):
        dead = ~np.isfinite(z)
        with np.errstate(all="ignore"):
            out = _exp_term(f.a, f.b, z) + f.c * z + f.d
        out = _guard(out)
        if dead.any():
            out[dead] = OVERFLOW
        return out
    if isinstance(f, Affine):
        with np.errstate(all="ignore"):
            return _guard(f.m * z + f.t)
    if isinstance(f, Compose):
        return _eval(f.outer, _eval(f.inner, z))
    if isinstance(f, Iterate):
        for _ in range(f.n):
            z = _eval(f.base, z)
        return z
    if isinstance(f, Translate):
        with np.errstate(all="ignore"):
            return _guard(_eval(f.base, z) + f.tau)
    raise ExprError(f"not a function expression: {f!r}")


def _eval_with_derivative(f: FunctionExpr, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(f, ExpAffine):
        dead = ~np.isfinite(z)
        with np.errstate(all="ignore"):
            e = _exp_term(1.0, f.b, z)
            val = _guard(f.a * e + f.c * z + f.d)
            der = _guard(f.a * f.b * e + f.c)
        if dead.any():
            val[dead] = OVERFLOW
            der[dead] = OVERFLOW
        return val, der
    if isinstance(f, Affine):
        val = _eval(f, z)
        der = np.where(np.isfinite(val), f.m, OVERFLOW).astype(complex)
        return val, der
    if isinstance(f, Compose):
        w, dw = _eval_with_derivative(f.inner, z)
        v, dv = _eval_with_derivative(f.outer, w)
        with np.errstate(all="ignore"):
            return v, _guard(dv * dw)
    if isinstance(f, Iterate):
        der = np.ones_like(z)
        for _ in range(f.n):
            z, d = _eval_with_derivative(f.base, z)
            with np.errstate(all="ignore"):
                der = _guard(der * d)
        return z, der
    if isinstance(f, Translate):
        v, d = _eval_with_derivative(f.base, z)
        with np.errstate(all="ignore"):
            return _guard(v + f.tau), d
    raise ExprError(f"not a function expression: {f!r}")


def _as_array(z) -> tuple[np.ndarray, bool]:
    arr = np.array(z, dtype=complex, copy=True)
    scalar = arr.ndim == 0
    return np.atleast_1d(arr), scalar


def evaluate(f: FunctionExpr, z):
    """Evaluate ``f`` at a point or an array of points.

    Overflowed results are :data:`OVERFLOW`; scalars in, Python complex out.
    """
    arr, scalar = _as_array(z)
    out = _eval(f, arr)
    return complex(out[0]) if scalar else out.reshape(np.shape(z))


def eval_derivative(f: FunctionExpr, z):
    """``f'(z)`` by the chain rule over the expression tree."""
    arr, scalar = _as_array(z)
    _, der = _eval_with_derivative(f, arr)
    return complex(der[0]) if scalar else der.reshape(np.shape(z))


def evaluate_with_derivative(f: FunctionExpr, z) -> tuple[np.ndarray, np.ndarray]:
    arr, _ = _as_array(z)
    return _eval_with_derivative(f, arr)


def is_overflow(z) -> np.ndarray | bool:
    """True where a value carries the overflow flag."""
    out = ~np.isfinite(np.asarray(z, dtype=complex))
    return bool(out) if out.ndim == 0 else out


# -- structure ----------------------------------------------------------------

def depth(f: FunctionExpr) -> int:
    if isinstance(f, (ExpAffine, Affine)):
        return 1
    if isinstance(f, Compose):
        return 1 + max(depth(f.outer), depth(f.inner))
    return 1 + depth(f.base)


def _near_int_multiple(x: complex, unit: complex, tol: float = 1e-12) -> int | None:
    k = round((x / unit).real)
    return k if abs(x - k * unit) <= tol * (1 + abs(x)) else None


def fatou_family(f: FunctionExpr) -> tuple[int, int] | None:
    """Recognize ``f`` as ``F^N + 2*pi*i*M`` (``N >= 1``) for the Fatou map ``F``.

    Purely syntactic: Fatou atoms (with ``d - 1`` an integer multiple of
    ``2*pi*i``), translates and unit affine shifts by integer multiples of
    ``2*pi*i``, iterates and compositions of those.  The reduction uses
    ``F(z + 2*pi*i*p) = F(z) + 2*pi*i*p``.  Returns ``(N, M)`` or None.
    """
    fam = _family(f)
    return fam if fam is not None and fam[0] >= 1 else None


def _family(f: FunctionExpr) -> tuple[int, int] | None:
    if isinstance(f, ExpAffine):
        if abs(f.a - 1) > 1e-12 or abs(f.b + 1) > 1e-12 or abs(f.c - 1) > 1e-12:
            return None
        m = _near_int_multiple(f.d - 1, TWO_PI_I)
        return None if m is None else (1, m)
    if isinstance(f, Affine):
        m = _near_int_multiple(f.t, TWO_PI_I) if f.m == 1 else None
        return None if m is None else (0, m)
    if isinstance(f, Translate):
        inner = _family(f.base)
        m = _near_int_multiple(f.tau, TWO_PI_I)
        if inner is None or m is None:
            return None
        return inner[0], inner[1] + m
    if isinstance(f, Iterate):
        inner = _family(f.base)
        return None if inner is None else (inner[0] * f.n, inner[1] * f.n)
    if isinstance(f, Compose):
        outer, inner = _family(f.outer), _family(f.inner)
        if outer is None or inner is None:
            return None
        return outer[0] + inner[0], outer[1] + inner[1]
    return None


def pure_translation(f: FunctionExpr) -> complex | None:
    """Total shift if ``f`` is syntactically ``z -> z + t``, else None."""
    if isinstance(f, Affine):
        return f.t if f.m == 1 else None
    if isinstance(f, Translate):
        t = pure_translation(f.base)
        return None if t is None else t + f.tau
    if isinstance(f, Iterate):
        t = pure_translation(f.base)
        return None if t is None else t * f.n
    if isinstance(f, Compose):
        a, b = pure_translation(f.outer), pure_translation(f.inner)
        return None if a is None or b is None else a + b
    return None


class CommuteResult(NamedTuple):
    ok: bool
    witness: complex | None
    max_rel_diff: float


def commutes_numerically(f: FunctionExpr, g: FunctionExpr, samples, tol: float = 1e-10) -> CommuteResult:
    """Compare ``f(g(z))`` with ``g(f(z))`` on sample points.

    ``samples`` is an array of points or anything with a ``points()`` method.
    The difference is measured relative to ``max(1, |f(g(z))|, |g(f(z))|)``.
    Points where both sides overflow are skipped; a one-sided overflow is a
    failure.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    pts = samples.points() if hasattr(samples, "points") else np.asarray(samples, dtype=complex)
    pts = np.atleast_1d(pts).ravel()
    fg = _eval(f, _eval(g, pts))
    gf = _eval(g, _eval(f, pts))
    of, og = ~np.isfinite(fg), ~np.isfinite(gf)
    with np.errstate(all="ignore"):
        rel = np.abs(fg - gf) / np.maximum(1.0, np.maximum(np.abs(fg), np.abs(gf)))
    rel = np.where(of & og, 0.0, np.where(of | og, np.inf, rel))
    bad = np.flatnonzero(rel > tol)
    worst = float(rel.max()) if rel.size else 0.0
    if bad.size:
        return CommuteResult(False, complex(pts[bad[0]]), worst)
    return CommuteResult(True, None, worst)


# -- text form ------------------------------------------------------------------

_NUMBER = r"(?:[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)"
_COMPLEX_RE = re.compile(
    rf"^(?:(?P<re>[+-]?{_NUMBER})(?P<im>[+-]{_NUMBER}?)[ij]|(?P<real>[+-]?{_NUMBER})|(?P<imag>[+-]?{_NUMBER}?)[ij])$"
)


def parse_complex(text: str) -> complex:
    """Parse ``x+yi`` (also ``x``, ``yi``, ``i``; ``j`` accepted for ``i``)."""
    s = text.strip()
    m = _COMPLEX_RE.match(s)
    if not m:
        raise ExprError(f"bad complex literal {text!r}")

    def num(tok: str) -> float:
        return float(tok + "1") if tok in ("", "+", "-") else float(tok)

    if m["real"] is not None:
        return complex(float(m["real"]), 0.0)
    if m["imag"] is not None:
        return complex(0.0, num(m["imag"]))
    return complex(float(m["re"]), num(m["im"]))


def format_complex(z: complex) -> str:
    z = complex(z)
    im = repr(z.imag)
    return f"{z.real!r}{'' if im.startswith('-') else '+'}{im}i"


def format_expr(f: FunctionExpr) -> str:
    """Canonical text form; ``parse_expr(format_expr(f)) == f``."""
    if isinstance(f, ExpAffine):
        return "expaffine({})".format(",".join(format_complex(x) for x in (f.a, f.b, f.c, f.d)))
    if isinstance(f, Affine):
        return "identity" if f == IDENTITY else f"affine({format_complex(f.m)},{format_complex(f.t)})"
    if isinstance(f, Compose):
        return f"compose({format_expr(f.outer)},{format_expr(f.inner)})"
    if isinstance(f, Iterate):
        return f"iter({format_expr(f.base)},{f.n})"
    if isinstance(f, Translate):
        return f"translate({format_expr(f.base)},{format_complex(f.tau)})"
    raise ExprError(f"not a function expression: {f!r}")


def _split_args(body: str, text: str) -> list[str]:
    args, level, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            level += 1
        elif ch == ")":
            level -= 1
            if level < 0:
                raise ExprError(f"unbalanced parentheses in {text!r}")
        elif ch == "," and level == 0:
            args.append(body[start:i])
            start = i + 1
    if level != 0:
        raise ExprError(f"unbalanced parentheses in {text!r}")
    args.append(body[start:])
    return [a.strip() for a in args]


_ARITY = {"expaffine": 4, "affine": 2, "compose": 2, "iter": 2, "iterate": 2, "translate": 2, "exp": 1, "explus": 1}


def parse_expr(text: str) -> FunctionExpr:
    """Parse the textual grammar::

        expr := expaffine(a,b,c,d) | compose(expr,expr) | iter(expr,n)  (alias iterate)
              | translate(expr,tau) | fatou | exp(lambda) | explus(lambda)
              | identity | affine(m,t)
    """
    s = "".join(text.split())
    if s == "fatou":
        return FATOU
    if s == "identity":
        return IDENTITY
    m = re.match(r"^([a-z]+)\((.*)\)$", s)
    if not m:
        raise ExprError(f"cannot parse function expression {text!r}")
    name, body = m.groups()
    if name not in _ARITY:
        raise ExprError(f"unknown function {name!r} in {text!r}")
    args = _split_args(body, text)
    if len(args) != _ARITY[name] or any(not a for a in args):
        raise ExprError(f"{name} takes {_ARITY[name]} arguments in {text!r}")
    if name == "expaffine":
        return ExpAffine(*(parse_complex(a) for a in args))
    if name == "affine":
        return Affine(parse_complex(args[0]), parse_complex(args[1]))
    if name == "exp":
        return exp_map(parse_complex(args[0]))
    if name == "explus":
        return explus(parse_complex(args[0]))
    if name == "compose":
        return Compose(parse_expr(args[0]), parse_expr(args[1]))
    if name in ("iter", "iterate"):
        if not re.fullmatch(r"[0-9]+", args[1]):
            raise ExprError(f"iterate count must be a positive integer in {text!r}")
        return Iterate(parse_expr(args[0]), int(args[1]))
    return Translate(parse_expr(args[0]), parse_complex(args[1]))
