"""Synthetic two-class tabular dataset generators.

Five planar geometries are supported, each producing a balanced dataset
of m points with two informative coordinates plus optional irrelevant
standard-normal columns. The canonical geometries (before the overlap
shrink factor is applied) are:

* ``LINEAR``     -- one Gaussian blob per class, centroids at -(d/2, d/2)
  and +(d/2, d/2) with d = 2.0.
* ``XOR``        -- four Gaussian blobs on the corners of the unit square
  [0, 1]^2, opposite corners sharing a label. The within-class corner
  weights are slightly uneven (0.6/0.4 for the positive class) so the
  checkerboard carries a weak linear component, as real checkerboard-like
  data does.
* ``TWO_MOONS``  -- interleaved half-circles of radius 1; the lower moon
  is flipped and shifted by (1, -0.5).
* ``SANDWICH``   -- a central band of one class at y = 0 flanked by two
  bands of the other class at y = +-d, d = 2.0, with top/bottom weights
  0.6/0.4; x is drawn N(0, 1.5).
* ``QUADRATIC``  -- two opposed parabolas y = +-(x^2 - c), c = 1.0, with
  x drawn N(0, 0.8).

``overlap`` in [0, 1] linearly shrinks the separation constant (d, the
corner scale, the moon offset, or c) toward collision; ``noise_sd`` is
the Gaussian jitter applied to the informative coordinates. Every draw
comes from a Philox substream keyed by (seed, dataset index), so output
is bit-reproducible and corpus generation can be parallelised.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ValidationError
from .rng import derive_seed, substream


class PatternClass(enum.Enum):
    """The five planar geometries, in stable serialization order."""

    LINEAR = "C1"
    XOR = "C2"
    TWO_MOONS = "C3"
    SANDWICH = "C4"
    QUADRATIC = "C5"

    def __lt__(self, other: "PatternClass") -> bool:
        if not isinstance(other, PatternClass):
            return NotImplemented
        return self.value < other.value

    @property
    def index(self) -> int:
        """Zero-based position in serialization order."""
        return list(PatternClass).index(self)


MAX_NOISE_DIMS = 4

# Base separation constants shrunk by (1 - overlap); see module docstring.
_LINEAR_SEP = 2.0
_XOR_SIDE = 1.0
_MOON_OFFSET = 0.5
_SANDWICH_GAP = 2.0
_QUAD_GAP = 1.0

_XOR_POS_WEIGHT = 0.6
_SANDWICH_TOP_WEIGHT = 0.6
_SANDWICH_X_SD = 1.5
_QUAD_X_SD = 0.8


@dataclass(frozen=True)
class PatternSpec:
    """Full description of one generated dataset."""

    pattern: PatternClass
    m: int
    noise_sd: float = 0.25
    overlap: float = 0.0
    noise_dims: int = 0
    seed: int = 0

    def validate(self) -> None:
        if self.m < 4 or self.m % 2 != 0:
            raise ValidationError(f"m must be an even integer >= 4, got {self.m}")
        if not (self.noise_sd > 0) or not math.isfinite(self.noise_sd):
            raise ValidationError(f"noise_sd must be positive, got {self.noise_sd}")
        if not (0.0 <= self.overlap <= 1.0):
            raise ValidationError(f"overlap must lie in [0, 1], got {self.overlap}")
        if not (0 <= self.noise_dims <= MAX_NOISE_DIMS):
            raise ValidationError(
                f"noise_dims must lie in [0, {MAX_NOISE_DIMS}], got {self.noise_dims}"
            )
        if self.seed < 0:
            raise ValidationError(f"seed must be non-negative, got {self.seed}")


@dataclass
class TabularDataset:
    """An m x n feature matrix with a +-1 label vector."""

    features: np.ndarray
    labels: np.ndarray
    pattern: PatternClass | None = None
    name: str = ""

    @property
    def m(self) -> int:
        return self.features.shape[0]

    @property
    def n(self) -> int:
        return self.features.shape[1]

    def validate(self) -> None:
        if self.features.ndim != 2:
            raise ValidationError("features must be a 2-D matrix")
        if self.labels.shape != (self.features.shape[0],):
            raise ValidationError("labels length must equal the feature row count")
        if not np.all(np.isin(self.labels, (-1, 1))):
            raise ValidationError("labels must contain only -1 and +1")
        if not np.all(np.isfinite(self.features)):
            raise ValidationError("features contain non-finite values")


def linear_separation(spec: PatternSpec) -> float:
    """Euclidean distance between the configured LINEAR class centroids."""
    d = _LINEAR_SEP * (1.0 - spec.overlap)
    return d * math.sqrt(2.0)


def _split_counts(total: int, weight: float) -> tuple[int, int]:
    first = int(round(weight * total))
    if total >= 2:
        first = min(max(first, 1), total - 1)
    return first, total - first


def _gen_linear(spec: PatternSpec, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    half = spec.m // 2
    d = _LINEAR_SEP * (1.0 - spec.overlap)
    c = d / 2.0
    neg = rng.normal((-c, -c), spec.noise_sd, size=(half, 2))
    pos = rng.normal((c, c), spec.noise_sd, size=(half, 2))
    return np.vstack([neg, pos]), np.repeat([-1.0, 1.0], half)


def _gen_xor(spec: PatternSpec, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    half = spec.m // 2
    shrink = 1.0 - spec.overlap
    center = np.array([0.5, 0.5])

    def corner(cx: float, cy: float) -> np.ndarray:
        return center + (np.array([cx, cy]) - center) * shrink * _XOR_SIDE

    n_pp, n_p0 = _split_counts(half, _XOR_POS_WEIGHT)
    n_n1, n_n2 = _split_counts(half, 0.5)
    blocks = [
        (corner(0.0, 1.0), n_n1, -1.0),
        (corner(1.0, 0.0), n_n2, -1.0),
        (corner(1.0, 1.0), n_pp, 1.0),
        (corner(0.0, 0.0), n_p0, 1.0),
    ]
    xs, ys = [], []
    for mean, count, label in blocks:
        xs.append(rng.normal(mean, spec.noise_sd, size=(count, 2)))
        ys.append(np.full(count, label))
    return np.vstack(xs), np.concatenate(ys)


def _gen_two_moons(spec: PatternSpec, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    half = spec.m // 2
    offset = _MOON_OFFSET * (1.0 - spec.overlap)
    t_out = rng.uniform(0.0, math.pi, half)
    t_in = rng.uniform(0.0, math.pi, half)
    outer = np.column_stack([np.cos(t_out), np.sin(t_out)])
    # flipped half-circle shifted right by 1 and lowered by `offset`
    inner = np.column_stack([1.0 - np.cos(t_in), 1.0 - np.sin(t_in) - offset])
    pts = np.vstack([outer, inner])
    pts += rng.normal(0.0, spec.noise_sd, size=pts.shape)
    return pts, np.repeat([-1.0, 1.0], half)


def _gen_sandwich(spec: PatternSpec, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    half = spec.m // 2
    d = _SANDWICH_GAP * (1.0 - spec.overlap)
    n_top, n_bot = _split_counts(half, _SANDWICH_TOP_WEIGHT)
    x_neg = rng.normal(0.0, _SANDWICH_X_SD, half)
    y_neg = np.concatenate(
        [rng.normal(d, spec.noise_sd, n_top), rng.normal(-d, spec.noise_sd, n_bot)]
    )
    x_pos = rng.normal(0.0, _SANDWICH_X_SD, half)
    y_pos = rng.normal(0.0, spec.noise_sd, half)
    pts = np.vstack(
        [np.column_stack([x_neg, y_neg]), np.column_stack([x_pos, y_pos])]
    )
    return pts, np.repeat([-1.0, 1.0], half)


def _gen_quadratic(spec: PatternSpec, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    half = spec.m // 2
    c = _QUAD_GAP * (1.0 - spec.overlap)
    x_neg = rng.normal(0.0, _QUAD_X_SD, half)
    y_neg = -(x_neg**2 - c) + rng.normal(0.0, spec.noise_sd, half)
    x_pos = rng.normal(0.0, _QUAD_X_SD, half)
    y_pos = (x_pos**2 - c) + rng.normal(0.0, spec.noise_sd, half)
    pts = np.vstack(
        [np.column_stack([x_neg, y_neg]), np.column_stack([x_pos, y_pos])]
    )
    return pts, np.repeat([-1.0, 1.0], half)


_GENERATORS = {
    PatternClass.LINEAR: _gen_linear,
    PatternClass.XOR: _gen_xor,
    PatternClass.TWO_MOONS: _gen_two_moons,
    PatternClass.SANDWICH: _gen_sandwich,
    PatternClass.QUADRATIC: _gen_quadratic,
}


def gen_pattern(spec: PatternSpec) -> TabularDataset:
    """Generate one balanced dataset for ``spec``.

    The first two columns are the informative coordinates; ``noise_dims``
    standard-normal columns follow. Identical specs produce bit-identical
    output.
    """
    spec.validate()
    rng = substream(spec.seed, "pattern", spec.pattern.index)
    features, labels = _GENERATORS[spec.pattern](spec, rng)
    if spec.noise_dims:
        noise = rng.standard_normal((spec.m, spec.noise_dims))
        features = np.hstack([features, noise])
    ds = TabularDataset(
        features=features,
        labels=labels,
        pattern=spec.pattern,
        name=f"{spec.pattern.value}-m{spec.m}-s{spec.seed}",
    )
    ds.validate()
    return ds


# Per-pattern jitter/overlap ranges used when simulating heterogeneous
# corpora. Ranges differ because the geometries have different intrinsic
# scales; each was chosen so the pattern stays visually recognisable at
# the low end and heavily blurred at the high end.
CORPUS_CONDITIONS: dict[PatternClass, tuple[tuple[float, float], tuple[float, float]]] = {
    PatternClass.LINEAR: ((0.3, 1.1), (0.0, 0.35)),
    PatternClass.XOR: ((0.12, 0.34), (0.0, 0.35)),
    PatternClass.TWO_MOONS: ((0.08, 0.26), (0.0, 0.5)),
    PatternClass.SANDWICH: ((0.3, 0.65), (0.0, 0.35)),
    PatternClass.QUADRATIC: ((0.15, 0.45), (0.0, 0.4)),
}


@dataclass(frozen=True)
class CorpusSpec:
    """Knobs for a heterogeneous multi-pattern corpus."""

    per_class: int
    m_range: tuple[int, int] = (800, 1400)
    noise_dims_range: tuple[int, int] = (0, 4)
    seed: int = 0
    conditions: dict[PatternClass, tuple[tuple[float, float], tuple[float, float]]] = field(
        default_factory=lambda: dict(CORPUS_CONDITIONS)
    )

    def validate(self) -> None:
        if self.per_class < 1:
            raise ValidationError(f"per_class must be >= 1, got {self.per_class}")
        lo, hi = self.m_range
        if not (4 <= lo <= hi <= 10**6):
            raise ValidationError(f"m_range must be a non-empty interval in [4, 1e6], got {self.m_range}")
        dlo, dhi = self.noise_dims_range
        if not (0 <= dlo <= dhi <= MAX_NOISE_DIMS):
            raise ValidationError(
                f"noise_dims_range must be a non-empty interval in [0, {MAX_NOISE_DIMS}], got {self.noise_dims_range}"
            )


def gen_corpus(
    per_class: int,
    m_range: tuple[int, int] = (800, 1400),
    noise_dims_range: tuple[int, int] = (0, 4),
    seed: int = 0,
    conditions: dict | None = None,
) -> list[TabularDataset]:
    """Generate ``5 * per_class`` datasets, ``per_class`` for each pattern.

    Each dataset's sample count is drawn uniformly from the even values of
    ``m_range``, its irrelevant-column count uniformly from
    ``noise_dims_range``, and its jitter/overlap from the per-pattern
    ``conditions`` ranges (``CORPUS_CONDITIONS`` by default). The i-th
    dataset of a pattern depends only on (seed, pattern, i).
    """
    cspec = CorpusSpec(
        per_class=per_class,
        m_range=tuple(m_range),
        noise_dims_range=tuple(noise_dims_range),
        seed=seed,
        conditions=dict(conditions) if conditions is not None else dict(CORPUS_CONDITIONS),
    )
    cspec.validate()

    out: list[TabularDataset] = []
    for pattern in PatternClass:
        (sd_lo, sd_hi), (ov_lo, ov_hi) = cspec.conditions[pattern]
        for i in range(per_class):
            knobs = substream(seed, "corpus", pattern.index, i)
            m = int(knobs.integers(cspec.m_range[0], cspec.m_range[1] + 1))
            m -= m % 2  # generators require even m
            m = max(m, 4)
            noise_dims = int(
                knobs.integers(cspec.noise_dims_range[0], cspec.noise_dims_range[1] + 1)
            )
            spec = PatternSpec(
                pattern=pattern,
                m=m,
                noise_sd=float(knobs.uniform(sd_lo, sd_hi)),
                overlap=float(knobs.uniform(ov_lo, ov_hi)),
                noise_dims=noise_dims,
                seed=derive_corpus_seed(seed, pattern, i),
            )
            ds = gen_pattern(spec)
            ds.name = f"{pattern.value}-{i:05d}"
            out.append(ds)
    return out


def derive_corpus_seed(seed: int, pattern: PatternClass, index: int) -> int:
    """Per-dataset seed for dataset ``index`` of ``pattern`` under ``seed``."""
    return derive_seed(seed, "corpus-ds", pattern.index, index)


def with_seed(spec: PatternSpec, seed: int) -> PatternSpec:
    """Copy of ``spec`` under a different seed."""
    return replace(spec, seed=seed)
