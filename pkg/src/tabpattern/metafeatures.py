"""Dataset-level statistics for the tree-based recommendation baseline.

The vector layout is fixed and documented in ``MF_FIELDS``: eleven
per-column statistics averaged over feature columns, seven whole-matrix
measures, and five class-related measures. Conventions:

* moments use population denominators; kurtosis is the raw fourth
  standardized moment (3 for a normal), not excess;
* quantiles use linear interpolation between order statistics;
* the trimmed mean drops 10% of the sorted values from each tail;
* geometric/harmonic means and the index of dispersion are computed on
  the shifted column x - min(x) + 1 so they are defined for real data;
* entropies and mutual information are in nats; mutual information
  discretizes each feature into (at most) 10 equal-frequency bins;
* undefined statistics (constant column, zero mutual information, a
  single feature column) are emitted as 0 with the matching validity
  flag cleared, so downstream consumers always see a complete vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import pca_project
from .errors import ValidationError
from .patterns import TabularDataset

MF_FIELDS = (
    # means over feature columns
    "mean_skewness",
    "mean_kurtosis",
    "mean_iqr",
    "mean_q90",
    "mean_arith_mean",
    "mean_geo_mean",
    "mean_harm_mean",
    "mean_trimmed_mean",
    "mean_sd",
    "mean_mad",
    "mean_dispersion_index",
    # whole-matrix measures
    "n_rows",
    "n_cols",
    "mean_abs_correlation",
    "canon_corr_first",
    "canon_corr_last",
    "pc1_skewness",
    "pc1_kurtosis",
    # class-related measures
    "class_entropy",
    "mean_mutual_info",
    "equiv_n_vars",
    "noise_signal_ratio",
    "center_of_gravity",
)

MMI_BINS = 10
TRIM_FRACTION = 0.10

COLUMN_STAT_NAMES = (
    "mean",
    "sd",
    "skewness",
    "kurtosis",
    "iqr",
    "q90",
    "geo_mean",
    "harm_mean",
    "trimmed_mean",
    "mad",
    "dispersion_index",
)


@dataclass
class MetaFeatureVector:
    """Fixed-order values plus per-field validity flags."""

    values: np.ndarray
    valid: np.ndarray

    def as_dict(self) -> dict[str, float]:
        return dict(zip(MF_FIELDS, self.values.tolist()))

    def __len__(self) -> int:
        return len(self.values)


def quantile(x: np.ndarray, q: float) -> float:
    """Linear-interpolation quantile (type 7): position q * (n - 1)."""
    xs = np.sort(np.asarray(x, dtype=float))
    pos = q * (len(xs) - 1)
    lo = int(np.floor(pos))
    hi = int(np.ceil(pos))
    frac = pos - lo
    return float(xs[lo] * (1.0 - frac) + xs[hi] * frac)


def column_stats(x: np.ndarray) -> tuple[dict[str, float], set[str]]:
    """Return the per-column statistics and the set of undefined fields.

    Undefined fields (skewness/kurtosis of a constant column, the
    dispersion index of a column whose shifted mean is zero) are emitted
    as 0.0 and listed in the second return value.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) < 2:
        raise ValidationError("column_stats expects a vector of length >= 2")
    if not np.all(np.isfinite(x)):
        raise ValidationError("column_stats input contains non-finite values")

    n = len(x)
    mean = float(x.mean())
    var = float(((x - mean) ** 2).mean())
    sd = float(np.sqrt(var))
    invalid: set[str] = set()

    if sd > 0:
        z = (x - mean) / sd
        skewness = float((z**3).mean())
        kurtosis = float((z**4).mean())
    else:
        skewness = kurtosis = 0.0
        invalid |= {"skewness", "kurtosis"}

    shifted = x - x.min() + 1.0  # strictly positive
    geo_mean = float(np.exp(np.log(shifted).mean()))
    harm_mean = float(1.0 / (1.0 / shifted).mean())
    sh_mean = float(shifted.mean())
    sh_var = float(((shifted - sh_mean) ** 2).mean())
    dispersion = sh_var / sh_mean  # sh_mean >= 1 by construction

    k = int(np.floor(TRIM_FRACTION * n))
    xs = np.sort(x)
    trimmed_mean = float(xs[k : n - k].mean())

    stats = {
        "mean": mean,
        "sd": sd,
        "skewness": skewness,
        "kurtosis": kurtosis,
        "iqr": quantile(x, 0.75) - quantile(x, 0.25),
        "q90": quantile(x, 0.90),
        "geo_mean": geo_mean,
        "harm_mean": harm_mean,
        "trimmed_mean": trimmed_mean,
        "mad": float(np.abs(x - mean).mean()),
        "dispersion_index": dispersion,
    }
    return stats, invalid


def _equal_frequency_bins(x: np.ndarray, bins: int = MMI_BINS) -> np.ndarray:
    """Discretize into at most ``bins`` equal-frequency bins (0-based codes)."""
    edges = np.unique(
        [quantile(x, q) for q in np.linspace(0.0, 1.0, bins + 1)[1:-1]]
    )
    return np.searchsorted(edges, x, side="right")


def _entropy(counts: np.ndarray) -> float:
    p = counts / counts.sum()
    p = p[p > 0]
    return float(-(p * np.log(p)).sum())


def _mutual_info(codes: np.ndarray, labels01: np.ndarray) -> float:
    """I(X; C) in nats from discrete codes and binary labels."""
    n = len(codes)
    vals = np.unique(codes)
    mi = 0.0
    for v in vals:
        mask = codes == v
        pv = mask.sum() / n
        for c in (0, 1):
            joint = np.sum(mask & (labels01 == c)) / n
            if joint > 0:
                pc = np.sum(labels01 == c) / n
                mi += joint * np.log(joint / (pv * pc))
    return float(mi)


def class_overlap_stats(ds: TabularDataset) -> tuple[dict[str, float], set[str]]:
    """Class entropy, mean mutual information, and derived overlap measures."""
    ds.validate()
    labels01 = (ds.labels > 0).astype(int)
    if len(np.unique(labels01)) < 2:
        raise ValidationError("class_overlap_stats requires both classes present")

    invalid: set[str] = set()
    counts = np.bincount(labels01, minlength=2)
    h_c = _entropy(counts)

    mis = [
        _mutual_info(_equal_frequency_bins(ds.features[:, j]), labels01)
        for j in range(ds.n)
    ]
    h_x = [
        _entropy(np.bincount(_equal_frequency_bins(ds.features[:, j])))
        for j in range(ds.n)
    ]
    mmi = float(np.mean(mis))
    mean_h_x = float(np.mean(h_x))

    if mmi > 0:
        env = h_c / mmi
        nsr = (mean_h_x - mmi) / mmi
    else:
        env = nsr = 0.0
        invalid |= {"equiv_n_vars", "noise_signal_ratio"}

    centroid_pos = ds.features[ds.labels > 0].mean(axis=0)
    centroid_neg = ds.features[ds.labels < 0].mean(axis=0)
    cog = float(np.linalg.norm(centroid_pos - centroid_neg))

    stats = {
        "class_entropy": h_c,
        "mean_mutual_info": mmi,
        "equiv_n_vars": env,
        "noise_signal_ratio": nsr,
        "center_of_gravity": cog,
    }
    return stats, invalid


def extract(ds: TabularDataset) -> MetaFeatureVector:
    """Compute the full fixed-order meta-feature vector for ``ds``."""
    ds.validate()
    if ds.m < 10:
        raise ValidationError(f"meta-feature extraction requires m >= 10, got {ds.m}")

    values = np.zeros(len(MF_FIELDS))
    valid = np.ones(len(MF_FIELDS), dtype=bool)

    def put(name: str, value: float, ok: bool = True) -> None:
        i = MF_FIELDS.index(name)
        values[i] = value if ok else 0.0
        valid[i] = ok

    # aggregate each statistic over the columns where it is defined
    per_col: dict[str, list[float]] = {name: [] for name in COLUMN_STAT_NAMES}
    for j in range(ds.n):
        stats, invalid = column_stats(ds.features[:, j])
        for name in COLUMN_STAT_NAMES:
            if name not in invalid:
                per_col[name].append(stats[name])

    agg = {
        "mean_skewness": "skewness",
        "mean_kurtosis": "kurtosis",
        "mean_iqr": "iqr",
        "mean_q90": "q90",
        "mean_arith_mean": "mean",
        "mean_geo_mean": "geo_mean",
        "mean_harm_mean": "harm_mean",
        "mean_trimmed_mean": "trimmed_mean",
        "mean_sd": "sd",
        "mean_mad": "mad",
        "mean_dispersion_index": "dispersion_index",
    }
    for field, stat in agg.items():
        vals = per_col[stat]
        put(field, float(np.mean(vals)) if vals else 0.0, ok=bool(vals))

    put("n_rows", float(ds.m))
    put("n_cols", float(ds.n))

    if ds.n >= 2:
        corr = np.corrcoef(ds.features, rowvar=False)
        # constant columns yield nan correlations; treat pairs as undefined
        iu = np.triu_indices(ds.n, k=1)
        pair_corr = corr[iu]
        finite = np.isfinite(pair_corr)
        if finite.any():
            put("mean_abs_correlation", float(np.abs(pair_corr[finite]).mean()))
        else:
            put("mean_abs_correlation", 0.0, ok=False)
    else:
        put("mean_abs_correlation", 0.0, ok=False)

    X = ds.features
    sd = X.std(axis=0)
    informative = sd > 0
    if informative.sum() >= 1:
        Z = (X[:, informative] - X[:, informative].mean(axis=0)) / sd[informative]
        k = min(Z.shape)
        res = pca_project(Z, k)
        eigen = np.zeros(Z.shape[1])
        eigen[: len(res.eigenvalues)] = res.eigenvalues
        put("canon_corr_first", float(np.sqrt(max(eigen[0], 0.0))))
        put("canon_corr_last", float(np.sqrt(max(eigen[-1], 0.0))))
        pc1 = res.scores[:, 0]
        pc1_stats, pc1_invalid = column_stats(pc1)
        put("pc1_skewness", pc1_stats["skewness"], ok="skewness" not in pc1_invalid)
        put("pc1_kurtosis", pc1_stats["kurtosis"], ok="kurtosis" not in pc1_invalid)
    else:
        for name in ("canon_corr_first", "canon_corr_last", "pc1_skewness", "pc1_kurtosis"):
            put(name, 0.0, ok=False)

    overlap, overlap_invalid = class_overlap_stats(ds)
    for name, value in overlap.items():
        put(name, value, ok=name not in overlap_invalid)

    return MetaFeatureVector(values=values, valid=valid)
