"""Relay-type distributions, uniform quantization, and type sampling.

A relay's *type* is its relay-destination channel gain on one subcarrier.
The source only ever consumes per-subcarrier marginal distributions; this
module represents those marginals, quantizes their common support onto an
equidistant grid, and draws type vectors for simulation.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "DistributionKind",
    "TypeDistribution",
    "TypeGrid",
    "quantize_types",
    "type_probabilities",
    "sample_type_vector",
]

_PROB_TOL = 1e-12


class DistributionKind(str, Enum):
    UNIFORM = "uniform"
    TRUNCATED_EXPONENTIAL = "truncated_exponential"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class TypeDistribution:
    """A bounded marginal distribution of relay types on [low, high].

    Unbounded supports are refused: callers must truncate at a confidence
    level of their choosing before constructing the distribution.
    """

    kind: DistributionKind
    low: float
    high: float
    rate: float | None = None
    cdf_points: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self) -> None:
        if not np.isfinite(self.low) or not np.isfinite(self.high):
            raise ValueError("support must be bounded and finite")
        if self.low < 0.0:
            raise ValueError("support_low must be non-negative")
        if not self.high > self.low:
            raise ValueError(
                f"degenerate support [{self.low}, {self.high}]: need low < high"
            )
        if self.kind is DistributionKind.TRUNCATED_EXPONENTIAL:
            if self.rate is None or self.rate == 0.0 or not np.isfinite(self.rate):
                raise ValueError("truncated exponential needs a nonzero finite rate")
        if self.kind is DistributionKind.EMPIRICAL:
            self._check_cdf_points()

    def _check_cdf_points(self) -> None:
        pts = self.cdf_points
        if pts is None or len(pts) < 2:
            raise ValueError("empirical distribution needs at least two cdf points")
        gains = np.array([g for g, _ in pts], dtype=float)
        probs = np.array([p for _, p in pts], dtype=float)
        if gains[0] != self.low or gains[-1] != self.high:
            raise ValueError("cdf points must span exactly [low, high]")
        if np.any(np.diff(gains) <= 0.0):
            raise ValueError("cdf point gains must be strictly increasing")
        if abs(probs[0]) > _PROB_TOL or abs(probs[-1] - 1.0) > _PROB_TOL:
            raise ValueError("cdf must run from 0 at low to 1 at high")
        if np.any(np.diff(probs) < -_PROB_TOL):
            raise ValueError("cdf must be non-decreasing")

    # -- constructors ------------------------------------------------------

    @classmethod
    def uniform(cls, low: float, high: float) -> "TypeDistribution":
        return cls(DistributionKind.UNIFORM, float(low), float(high))

    @classmethod
    def truncated_exponential(
        cls, low: float, high: float, rate: float
    ) -> "TypeDistribution":
        return cls(
            DistributionKind.TRUNCATED_EXPONENTIAL, float(low), float(high), float(rate)
        )

    @classmethod
    def empirical(
        cls, cdf_points: Sequence[tuple[float, float]]
    ) -> "TypeDistribution":
        pts = tuple((float(g), float(p)) for g, p in cdf_points)
        return cls(
            DistributionKind.EMPIRICAL, pts[0][0], pts[-1][0], cdf_points=pts
        )

    # -- distribution functions -------------------------------------------

    def cdf(self, theta):
        """Cumulative distribution, clamped to [0, 1] outside the support."""
        x = np.asarray(theta, dtype=float)
        span = self.high - self.low
        if self.kind is DistributionKind.UNIFORM:
            out = (x - self.low) / span
        elif self.kind is DistributionKind.TRUNCATED_EXPONENTIAL:
            a = self.rate
            out = -np.expm1(-a * np.clip(x - self.low, 0.0, span))
            out = out / -np.expm1(-a * span)
        else:
            gains = np.array([g for g, _ in self.cdf_points])
            probs = np.array([p for _, p in self.cdf_points])
            out = np.interp(x, gains, probs)
        out = np.clip(out, 0.0, 1.0)
        return float(out) if np.isscalar(theta) else out

    def pdf(self, theta):
        """Density; zero outside the support."""
        x = np.asarray(theta, dtype=float)
        span = self.high - self.low
        inside = (x >= self.low) & (x <= self.high)
        if self.kind is DistributionKind.UNIFORM:
            out = np.where(inside, 1.0 / span, 0.0)
        elif self.kind is DistributionKind.TRUNCATED_EXPONENTIAL:
            a = self.rate
            out = np.where(
                inside, a * np.exp(-a * (x - self.low)) / -np.expm1(-a * span), 0.0
            )
        else:
            gains = np.array([g for g, _ in self.cdf_points])
            probs = np.array([p for _, p in self.cdf_points])
            slopes = np.diff(probs) / np.diff(gains)
            seg = np.clip(np.searchsorted(gains, x, side="right") - 1, 0, len(slopes) - 1)
            out = np.where(inside, slopes[seg], 0.0)
        return float(out) if np.isscalar(theta) else out

    def ppf(self, u):
        """Inverse CDF on [0, 1]."""
        q = np.asarray(u, dtype=float)
        if np.any(q < 0.0) or np.any(q > 1.0):
            raise ValueError("quantile argument must lie in [0, 1]")
        if self.kind is DistributionKind.UNIFORM:
            out = self.low + q * (self.high - self.low)
        elif self.kind is DistributionKind.TRUNCATED_EXPONENTIAL:
            a = self.rate
            scale = -np.expm1(-a * (self.high - self.low))
            out = self.low - np.log1p(-q * scale) / a
        else:
            gains = np.array([g for g, _ in self.cdf_points])
            probs = np.array([p for _, p in self.cdf_points])
            out = np.interp(q, probs, gains)
        out = np.clip(out, self.low, self.high)
        return float(out) if np.isscalar(u) else out

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        return self.ppf(rng.random(size))


def quantize_types(dist: TypeDistribution, k: int) -> np.ndarray:
    """Equidistant type grid delta_i = low + (i-1)/k * (high - low), i = 1..k."""
    if k < 1:
        raise ValueError(f"quantization factor must be >= 1, got {k}")
    step = (dist.high - dist.low) / k
    return dist.low + step * np.arange(k)


def type_probabilities(
    dist: TypeDistribution | Sequence[TypeDistribution],
    deltas: np.ndarray,
    n_subcarriers: int,
) -> np.ndarray:
    """K x N matrix of forward-difference masses pi_kn = F_n(d_{k+1}) - F_n(d_k).

    The bracket above the top type closes at the support's upper edge.
    Columns sum to 1 exactly when deltas[0] is the lower support edge, as
    `quantize_types` always produces; pass one distribution per subcarrier
    for heterogeneous marginals (all must share the same support).
    """
    if n_subcarriers < 1:
        raise ValueError("need at least one subcarrier")
    if isinstance(dist, TypeDistribution):
        dists = [dist] * n_subcarriers
    else:
        dists = list(dist)
        if len(dists) != n_subcarriers:
            raise ValueError(
                f"got {len(dists)} marginals for {n_subcarriers} subcarriers"
            )
    d = np.asarray(deltas, dtype=float)
    if d.ndim != 1 or d.size < 1:
        raise ValueError("deltas must be a non-empty 1-D grid")
    if np.any(np.diff(d) <= 0.0):
        raise ValueError("deltas must be strictly increasing")
    low, high = dists[0].low, dists[0].high
    if any((f.low, f.high) != (low, high) for f in dists):
        raise ValueError("heterogeneous marginals must share one support")
    if d[0] < low or d[-1] > high:
        raise ValueError("deltas must lie inside the distribution support")
    edges = np.append(d, high)
    cols = [np.diff(f.cdf(edges)) for f in dists]
    return np.column_stack(cols)


def sample_type_vector(
    dist: TypeDistribution, n: int, rng: np.random.Generator
) -> np.ndarray:
    """One relay's private type vector: n independent draws from dist."""
    if n < 0:
        raise ValueError("subcarrier count must be non-negative")
    return dist.sample(n, rng)


@dataclass(frozen=True)
class TypeGrid:
    """Quantized type grid with per-subcarrier probability masses.

    deltas: strictly increasing positive gains, shape (K,).
    probs:  masses pi_kn, shape (K, N); every column sums to 1.
    """

    deltas: np.ndarray
    probs: np.ndarray

    def __post_init__(self) -> None:
        deltas = np.ascontiguousarray(self.deltas, dtype=float)
        probs = np.ascontiguousarray(self.probs, dtype=float)
        if deltas.ndim != 1 or deltas.size < 1:
            raise ValueError("deltas must be a non-empty 1-D array")
        if probs.ndim != 2 or probs.shape[0] != deltas.size:
            raise ValueError("probs must have shape (K, N)")
        if deltas[0] <= 0.0:
            raise ValueError("type grid values must be strictly positive")
        if np.any(np.diff(deltas) <= 0.0):
            raise ValueError("type grid must be strictly increasing")
        if np.any(probs < 0.0):
            raise ValueError("probabilities must be non-negative")
        colsums = probs.sum(axis=0)
        if np.any(np.abs(colsums - 1.0) > _PROB_TOL):
            raise ValueError("each probability column must sum to 1")
        deltas.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "deltas", deltas)
        object.__setattr__(self, "probs", probs)

    @property
    def k(self) -> int:
        return self.deltas.size

    @property
    def n(self) -> int:
        return self.probs.shape[1]

    @classmethod
    def from_distribution(
        cls,
        dist: TypeDistribution | Sequence[TypeDistribution],
        k: int,
        n_subcarriers: int,
    ) -> "TypeGrid":
        base = dist if isinstance(dist, TypeDistribution) else dist[0]
        deltas = quantize_types(base, k)
        probs = type_probabilities(dist, deltas, n_subcarriers)
        return cls(deltas, probs)
