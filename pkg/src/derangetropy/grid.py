"""Grid densities and quadrature.

A density lives on n uniformly spaced nodes (n odd) spanning [lo, hi], and all
integration is composite Simpson on that grid. The cumulative rule integrates
the same local parabolas, so the running CDF agrees with the plain Simpson
total at the last node. For families whose density diverges at a support
endpoint, the node range is inset by half a step so every sampled value is
finite; for everything else nodes include the endpoints, which keeps exact
node placement at round x values (the transforms are checked pointwise there).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import (
    DistributionSpec,
    effective_support,
    has_singular_endpoint,
    pdf,
)

MIN_NODES = 129


def _check_node_count(n: int) -> None:
    if n < MIN_NODES or n % 2 == 0:
        raise ValueError(f"node count must be odd and >= {MIN_NODES}, got {n}")


def simpson_weights(n: int, step: float) -> np.ndarray:
    """Composite Simpson weights for n nodes (n odd) at spacing `step`."""
    _check_node_count(n)
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-2:2] = 2.0
    return w * (step / 3.0)


def simpson(values: np.ndarray, lo: float, hi: float) -> float:
    """Composite Simpson integral of tabulated values on [lo, hi]."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    step = (hi - lo) / (n - 1)
    # np.dot reduces pairwise, so the sum is reproducible for fixed input.
    return float(np.dot(simpson_weights(n, step), values))


def cumulative_simpson(values: np.ndarray, step: float) -> np.ndarray:
    """Running integral from the first node, Simpson-consistent.

    Even-indexed entries are the composite Simpson partial sums; odd-indexed
    entries integrate the local parabola over its first half panel.
    """
    f = np.asarray(values, dtype=float)
    out = np.zeros_like(f)
    out[2::2] = np.cumsum(step / 3.0 * (f[0:-2:2] + 4.0 * f[1:-1:2] + f[2::2]))
    out[1::2] = out[0:-1:2] + step / 12.0 * (5.0 * f[0:-1:2] + 8.0 * f[1::2] - f[2::2])
    return out


@dataclass(frozen=True)
class GridDensity:
    """Nonnegative values sampled on n uniform nodes over [lo, hi]."""

    lo: float
    hi: float
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        _check_node_count(vals.shape[0])
        if not self.hi > self.lo:
            raise ValueError(f"need hi > lo, got [{self.lo}, {self.hi}]")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise ValueError("density values must be finite and nonnegative")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)


@dataclass(frozen=True)
class GridCdf:
    """Running CDF on the same grid as the density it came from."""

    lo: float
    hi: float
    cumvals: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.cumvals, dtype=float)
        _check_node_count(vals.shape[0])
        if not self.hi > self.lo:
            raise ValueError(f"need hi > lo, got [{self.lo}, {self.hi}]")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "cumvals", vals)

    @property
    def n(self) -> int:
        return self.cumvals.shape[0]

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)

    def at(self, x: float) -> float:
        """CDF value at x by linear interpolation between nodes."""
        return float(np.interp(x, self.xs, self.cumvals))


def from_analytic(spec: DistributionSpec, n: int) -> GridDensity:
    """Sample a reference density on n nodes and renormalize.

    Nodes include the endpoints of the effective support except for families
    with a divergent endpoint density, where they are inset by half a step.
    """
    _check_node_count(n)
    a, b = effective_support(spec)
    if has_singular_endpoint(spec):
        half = 0.5 * (b - a) / n
        lo, hi = a + half, b - half
    else:
        lo, hi = a, b
    x = np.linspace(lo, hi, n)
    f = pdf(spec, x)
    mass = simpson(f, lo, hi)
    return GridDensity(lo, hi, f / mass)


def integrate(g: GridDensity) -> float:
    return simpson(g.values, g.lo, g.hi)


def cdf_of(g: GridDensity) -> GridCdf:
    """Accumulate the density and pin the final value to exactly 1.

    The raw cumulative rule can dip on adversarial (non-smooth) inputs because
    the half-panel parabola is not monotone in its data, so a running maximum
    enforces the CDF monotonicity contract; it is a no-op for smooth densities.
    """
    raw = cumulative_simpson(g.values, g.step)
    raw = np.maximum.accumulate(raw)
    total = raw[-1]
    if not total > 0:
        raise ValueError("cannot build a CDF from a density with zero mass")
    return GridCdf(g.lo, g.hi, raw / total)


def moment(g: GridDensity, k: int) -> float:
    """Raw moment E[X^k] for k in {1, 2}."""
    if k not in (1, 2):
        raise ValueError(f"moment order must be 1 or 2, got {k}")
    x = g.xs
    return float(np.dot(simpson_weights(g.n, g.step), x**k * g.values))


def variance(g: GridDensity) -> float:
    m1 = moment(g, 1)
    return moment(g, 2) - m1 * m1


def median_of(g: GridDensity) -> float:
    """Location where the grid CDF crosses 1/2.

    Inside the bracketing panel the CDF is modeled with a linear density,
    F(x0 + t) = F0 + f0 t + (f1 - f0) t^2 / (2h), and the quadratic is solved
    for t. That keeps the inversion error at O(h^3); plain linear
    interpolation of F is only O(h^2), which is visible in refinement checks.
    """
    c = cdf_of(g)
    i = int(np.searchsorted(c.cumvals, 0.5))
    if i == 0:
        return float(c.xs[0])
    x0, x1 = float(c.xs[i - 1]), float(c.xs[i])
    y0, y1 = float(c.cumvals[i - 1]), float(c.cumvals[i])
    if y1 == y0:
        return x0
    h = x1 - x0
    f0, f1 = float(g.values[i - 1]), float(g.values[i])
    a = 0.5 * (f1 - f0) / h
    b = f0
    cc = y0 - 0.5
    disc = b * b - 4.0 * a * cc
    if disc >= 0.0 and (abs(a) * h > 1e-14 * max(b, 1e-300)):
        # stable quadratic formula; the root moving continuously from the
        # a -> 0 limit -c/b is the one built from -b - sign(b)*sqrt(disc)
        q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
        for t in ((cc / q) if q != 0.0 else math.inf, (q / a)):
            if -1e-12 * h <= t <= h * (1.0 + 1e-12):
                return x0 + min(max(t, 0.0), h)
    return x0 + (0.5 - y0) * h / (y1 - y0)


def format_value(v: float) -> str:
    """Fixed 17-significant-digit rendering used by every CSV writer."""
    return f"{v:.17g}"


def density_csv(g: GridDensity, cdf: GridCdf | None = None) -> str:
    """Rows of `x,f` (or `x,f,F` when a CDF is supplied), one per node."""
    xs = g.xs
    lines = ["x,f,F" if cdf is not None else "x,f"]
    for i in range(g.n):
        cells = [format_value(float(xs[i])), format_value(float(g.values[i]))]
        if cdf is not None:
            cells.append(format_value(float(cdf.cumvals[i])))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
