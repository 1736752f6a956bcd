"""Escape-time fields over rectangular windows, with PPM and CSV output."""
from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .function import FunctionExpr
from .orbit import BOUNDED, ESCAPING, UNDECIDED, VERDICTS, EscapeConfig, classify_array

DEFAULT_PIXEL_BUDGET = 2 ** 24


class PixelBudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    window: tuple[float, float, float, float]  # re_min, re_max, im_min, im_max
    width: int
    height: int
    pixel_budget: int = DEFAULT_PIXEL_BUDGET

    def __post_init__(self):
        re_min, re_max, im_min, im_max = self.window
        if not (re_min < re_max and im_min < im_max):
            raise ValueError(f"degenerate window {self.window}")
        if self.width < 1 or self.height < 1:
            raise ValueError("width and height must be positive")
        if self.width * self.height > self.pixel_budget:
            raise PixelBudgetExceeded(
                f"{self.width}x{self.height} exceeds the pixel budget {self.pixel_budget}")

    def row_centers(self, row: int) -> np.ndarray:
        """Pixel centers of one row; row 0 is the top (largest imaginary part)."""
        re_min, re_max, im_min, im_max = self.window
        xs = re_min + (np.arange(self.width) + 0.5) * (re_max - re_min) / self.width
        y = im_max - (row + 0.5) * (im_max - im_min) / self.height
        return xs + 1j * y

    def centers(self) -> np.ndarray:
        """All pixel centers, shape ``(height, width)``."""
        return np.stack([self.row_centers(j) for j in range(self.height)])


@dataclass
class EscapeField:
    grid: GridSpec
    verdict: np.ndarray  # (height, width) int8 codes
    step: np.ndarray  # (height, width) int32
    cfg: EscapeConfig

    def fraction(self, code: int) -> float:
        return float(np.mean(self.verdict == code))


def rasterize(f: FunctionExpr, grid: GridSpec, cfg: EscapeConfig | None = None,
              threads: int = 1) -> EscapeField:
    """Classify the center of every cell.

    Rows are sharded over ``threads`` workers and written into preallocated
    slots, so the field does not depend on the worker count.
    """
    cfg = cfg or EscapeConfig()
    verdict = np.empty((grid.height, grid.width), np.int8)
    step = np.empty((grid.height, grid.width), np.int32)
    n_shards = max(1, min(grid.height, 4 * max(threads, 1)))
    bounds = np.linspace(0, grid.height, n_shards + 1).astype(int)

    def work(shard: int):
        r0, r1 = bounds[shard], bounds[shard + 1]
        if r0 == r1:
            return
        pts = np.concatenate([grid.row_centers(j) for j in range(r0, r1)])
        res = classify_array(f, pts, cfg)
        verdict[r0:r1] = res.verdict.reshape(r1 - r0, grid.width)
        step[r0:r1] = res.step.reshape(r1 - r0, grid.width)

    if threads <= 1:
        for s in range(n_shards):
            work(s)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, range(n_shards)))
    return EscapeField(grid, verdict, step, cfg)


def field_rgb(field: EscapeField) -> np.ndarray:
    """``(height, width, 3)`` uint8 image.

    Bounded is black, Undecided is (128, 0, 0), Escaping at step ``s`` is the
    gray level ``floor(255 * min(s, max_iter) / max_iter)``.
    """
    m = field.cfg.max_iter
    gray = (255 * np.minimum(field.step.astype(np.int64), m)) // m
    rgb = np.zeros(field.verdict.shape + (3,), np.uint8)
    esc = field.verdict == ESCAPING
    rgb[esc] = gray[esc, None].astype(np.uint8)
    rgb[field.verdict == UNDECIDED] = (128, 0, 0)
    rgb[field.verdict == BOUNDED] = (0, 0, 0)
    return rgb


def ppm_bytes(field: EscapeField) -> bytes:
    header = f"P6\n{field.grid.width} {field.grid.height}\n255\n".encode("ascii")
    return header + field_rgb(field).tobytes()


def write_ppm(field: EscapeField, path) -> None:
    Path(path).write_bytes(ppm_bytes(field))


def write_field_csv(field: EscapeField, path) -> None:
    """One row per cell: ``px, py, verdict, step`` (py = 0 is the top row)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["px", "py", "verdict", "step"])
        for py in range(field.grid.height):
            for px in range(field.grid.width):
                w.writerow([px, py, VERDICTS[field.verdict[py, px]].value, int(field.step[py, px])])
