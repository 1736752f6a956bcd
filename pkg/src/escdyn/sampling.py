"""Deterministic sample point sets for the property checks."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

RNG_ALGORITHM = "numpy.random.Generator(PCG64)"


@dataclass(frozen=True)
class SampleSpec:
    """``grid`` mode: pixel centers at ``resolution`` (width, height), top row
    first.  ``random`` mode: ``count`` uniform points from a seeded PCG64."""

    mode: str = "random"
    window: tuple[float, float, float, float] = (-3.0, 3.0, -3.0, 3.0)
    count: int = 1000
    resolution: tuple[int, int] = (256, 256)
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("grid", "random"):
            raise ValueError(f"unknown sample mode {self.mode!r}")
        x0, x1, y0, y1 = self.window
        if not (x0 < x1 and y0 < y1):
            raise ValueError(f"degenerate window {self.window}")
        if self.mode == "random" and self.count < 1:
            raise ValueError("count must be positive")
        if self.mode == "grid" and min(self.resolution) < 1:
            raise ValueError("resolution must be positive")

    def points(self) -> np.ndarray:
        x0, x1, y0, y1 = self.window
        if self.mode == "grid":
            w, h = self.resolution
            xs = x0 + (np.arange(w) + 0.5) * (x1 - x0) / w
            ys = y1 - (np.arange(h) + 0.5) * (y1 - y0) / h
            return (xs[None, :] + 1j * ys[:, None]).ravel()
        rng = np.random.default_rng(self.seed)
        u = rng.random((self.count, 2))
        return (x0 + (x1 - x0) * u[:, 0]) + 1j * (y0 + (y1 - y0) * u[:, 1])

    def describe(self) -> dict:
        d = asdict(self)
        d["window"] = list(self.window)
        d["resolution"] = list(self.resolution)
        if self.mode == "random":
            d["rng"] = RNG_ALGORITHM
        return d
