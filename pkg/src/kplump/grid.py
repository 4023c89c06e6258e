"""Numeric grid evaluation, lump detection, and file emission.

The only module that touches floating point.  Evaluation is vectorized
with numpy over cached power arrays; results are bitwise independent of
how rows are partitioned across workers (no cross-point reductions).
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DenominatorVanished, EmptyGrid
from .poly import SparsePoly
from .ratfunc import RationalFunction
from .scalars import ExactScalar, scalar

DEN_FLOOR = 1e-12


@dataclass(frozen=True)
class GridSpec:
    x_range: tuple = (-10.0, 10.0)
    y_range: tuple = (-10.0, 10.0)
    nx: int = 201
    ny: int = 201
    times: tuple = ()

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise EmptyGrid("need at least 2 samples per axis")
        if not (self.x_range[0] < self.x_range[1] and self.y_range[0] < self.y_range[1]):
            raise EmptyGrid("degenerate axis range")
        if not self.times:
            raise EmptyGrid("empty time list")

    def xs(self) -> np.ndarray:
        return np.linspace(self.x_range[0], self.x_range[1], self.nx)

    def ys(self) -> np.ndarray:
        return np.linspace(self.y_range[0], self.y_range[1], self.ny)


def _poly_data(p: SparsePoly):
    """(coefficients, x-, y-, t-exponents) as flat arrays for evaluation."""
    coeffs = []
    ex, ey, et = [], [], []
    ix = p.vars.index("x") if "x" in p.vars else None
    iy = p.vars.index("y") if "y" in p.vars else None
    it = p.vars.index("t") if "t" in p.vars else None
    for e, c in p.sorted_terms():
        if c.im:
            raise ValueError("grid evaluation needs real coefficients")
        coeffs.append(float(c.re))
        ex.append(e[ix] if ix is not None else 0)
        ey.append(e[iy] if iy is not None else 0)
        et.append(e[it] if it is not None else 0)
    return (np.asarray(coeffs), np.asarray(ex), np.asarray(ey), np.asarray(et))


def _eval_poly_block(data, X, Y, t):
    coeffs, ex, ey, et = data
    out = np.zeros_like(X)
    xpow = {0: np.ones_like(X)}
    ypow = {0: np.ones_like(Y)}
    for k in range(1, int(ex.max(initial=0)) + 1):
        xpow[k] = xpow[k - 1] * X
    for k in range(1, int(ey.max(initial=0)) + 1):
        ypow[k] = ypow[k - 1] * Y
    tpow = {0: 1.0}
    for k in range(1, int(et.max(initial=0)) + 1):
        tpow[k] = tpow[k - 1] * t
    for c, a, b, d in zip(coeffs, ex, ey, et):
        out += (c * tpow[int(d)]) * xpow[int(a)] * ypow[int(b)]
    return out


def evaluate_grid(u: RationalFunction, grid: GridSpec, t: float,
                  certified: bool = False, allow_unverified: bool = False,
                  workers: int = 1) -> dict:
    """Sample u on the grid at one time slice.

    Returns {"values", "den_values", "min_abs_den"}.  Requires a
    regularity certificate unless allow_unverified is set; a denominator
    magnitude under 1e-12 at any sample raises DenominatorVanished unless
    allow_unverified.
    """
    if not certified and not allow_unverified:
        raise DenominatorVanished(
            "no regularity certificate; pass allow_unverified to sample anyway"
        )
    num_data = _poly_data(u.num)
    den_data = _poly_data(u.den)
    xs = grid.xs()
    ys = grid.ys()

    def eval_rows(y_slice):
        Y, X = np.meshgrid(ys[y_slice], xs, indexing="ij")
        num = _eval_poly_block(num_data, X, Y, float(t))
        den = _eval_poly_block(den_data, X, Y, float(t))
        return num, den

    nrows = len(ys)
    workers = max(1, min(workers, nrows))
    bounds = [slice(i * nrows // workers, (i + 1) * nrows // workers)
              for i in range(workers)]
    bounds = [b for b in bounds if b.start < b.stop]
    if len(bounds) == 1:
        pieces = [eval_rows(bounds[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
            pieces = list(pool.map(eval_rows, bounds))
    num = np.vstack([p[0] for p in pieces])
    den = np.vstack([p[1] for p in pieces])
    min_abs_den = float(np.min(np.abs(den)))
    if min_abs_den < DEN_FLOOR and not allow_unverified:
        raise DenominatorVanished(f"|denominator| fell to {min_abs_den:g}")
    with np.errstate(divide="ignore", invalid="ignore"):
        values = num / den
    return {"values": values, "den_values": den, "min_abs_den": min_abs_den}


@dataclass
class LumpReport:
    t: float
    maxima: list          # (x, y, height), height descending
    count: int = field(init=False)

    def __post_init__(self):
        self.maxima = sorted(self.maxima, key=lambda m: -m[2])
        self.count = len(self.maxima)

    def to_json_dict(self) -> dict:
        return {
            "t": self.t,
            "count": self.count,
            "maxima": [{"x": x, "y": y, "height": h} for x, y, h in self.maxima],
        }


def detect_lumps(values: np.ndarray, grid: GridSpec, t: float,
                 floor: float = None) -> LumpReport:
    """Strict 8-neighbor local maxima above the floor.

    The default floor is 10% of the global maximum of the slice, which
    suppresses far-field grid noise.
    """
    if floor is None:
        floor = 0.1 * float(np.max(values))
    xs = grid.xs()
    ys = grid.ys()
    core = values[1:-1, 1:-1]
    strict = np.ones_like(core, dtype=bool)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dx == 0 and dy == 0:
                continue
            neigh = values[1 + dy: values.shape[0] - 1 + dy,
                           1 + dx: values.shape[1] - 1 + dx]
            strict &= core > neigh
    strict &= core > floor
    iy, ix = np.nonzero(strict)
    maxima = [(float(xs[j + 1]), float(ys[i + 1]), float(core[i, j]))
              for i, j in zip(iy, ix)]
    return LumpReport(t=float(t), maxima=maxima)


def emit_csv(values: np.ndarray, grid: GridSpec, path):
    """x,y,u rows in row-major order with a header line."""
    xs = grid.xs()
    ys = grid.ys()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "u"])
        for i, y in enumerate(ys):
            for j, x in enumerate(xs):
                writer.writerow([repr(float(x)), repr(float(y)), repr(float(values[i, j]))])


def emit_json(payload, path):
    data = payload.to_json_dict() if hasattr(payload, "to_json_dict") else payload
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def float_exact_agreement(u: RationalFunction, n: int = 100, seed: int = 0,
                          box: float = 10.0, t_values=(-1.375, 0.0, 1.0)) -> float:
    """Max relative error between float and exact evaluation at random
    rational points; used as a cross-check of the float path."""
    import random
    from fractions import Fraction

    rng = random.Random(seed)
    num_data = _poly_data(u.num)
    den_data = _poly_data(u.den)
    worst = 0.0
    for _ in range(n):
        fx = Fraction(rng.randint(-int(box * 16), int(box * 16)), 16)
        fy = Fraction(rng.randint(-int(box * 16), int(box * 16)), 16)
        ft = Fraction(rng.randint(-32, 32), 16)
        point = {"x": ExactScalar(fx), "y": ExactScalar(fy), "t": ExactScalar(ft)}
        den_exact = u.den.evaluate(point)
        if den_exact.is_zero():
            continue
        exact = (u.num.evaluate(point) / den_exact).to_float()
        X = np.array([[float(fx)]])
        Y = np.array([[float(fy)]])
        approx = (_eval_poly_block(num_data, X, Y, float(ft))[0, 0]
                  / _eval_poly_block(den_data, X, Y, float(ft))[0, 0])
        scale = max(abs(exact), 1.0)
        worst = max(worst, abs(approx - exact) / scale)
    return worst
