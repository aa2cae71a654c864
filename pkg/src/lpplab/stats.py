"""Statistical utilities: KS tests, variance errors, slope fits, tails."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

__all__ = [
    "KsResult",
    "ks_exponential",
    "ks_uniform",
    "ks_two_sample",
    "mean_se",
    "variance_se",
    "jackknife_variance_se",
    "SlopeFit",
    "loglog_slope",
    "pearson_r",
    "TailCell",
    "weighted_tail_table",
    "bounded_ratio",
    "rule_of_three",
]

MIN_KS_SAMPLES = 8


@dataclass(frozen=True)
class KsResult:
    statistic: float
    pvalue: float

    def passes(self, level: float = 0.01) -> bool:
        return self.pvalue > level


def _check_sample(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size < MIN_KS_SAMPLES:
        raise ValueError(f"need at least {MIN_KS_SAMPLES} samples, got {x.size}")
    return x


def ks_exponential(samples, rate: float) -> KsResult:
    """One-sample KS against the exponential law of the given rate."""
    x = _check_sample(samples)
    if rate <= 0:
        raise ValueError("rate must be positive")
    res = sps.kstest(x, sps.expon(scale=1.0 / rate).cdf, method="asymp")
    return KsResult(float(res.statistic), float(res.pvalue))


def ks_uniform(samples) -> KsResult:
    """One-sample KS against Uniform(0, 1)."""
    x = _check_sample(samples)
    res = sps.kstest(x, sps.uniform.cdf, method="asymp")
    return KsResult(float(res.statistic), float(res.pvalue))


def ks_two_sample(a, b) -> KsResult:
    """Two-sample KS with the asymptotic p-value."""
    x = _check_sample(a)
    y = _check_sample(b)
    res = sps.ks_2samp(x, y, method="asymp")
    return KsResult(float(res.statistic), float(res.pvalue))


def mean_se(x) -> tuple[float, float]:
    """Sample mean and its standard error."""
    x = np.asarray(x, dtype=np.float64)
    return float(x.mean()), float(x.std(ddof=1) / np.sqrt(x.size))


def variance_se(x) -> tuple[float, float]:
    """Unbiased sample variance and its fourth-central-moment standard error.

    ``Var(s^2) = (mu4 - sigma^4 (n-3)/(n-1)) / n`` with plug-in moments.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    if n < 4:
        raise ValueError("need at least 4 samples for a variance standard error")
    centered = x - x.mean()
    s2 = float(centered @ centered / (n - 1))
    mu4 = float(np.mean(centered**4))
    var_of_var = (mu4 - s2 * s2 * (n - 3) / (n - 1)) / n
    return s2, float(np.sqrt(max(var_of_var, 0.0)))


def jackknife_variance_se(x) -> float:
    """Delete-one jackknife standard error of the sample variance."""
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    if n < 4:
        raise ValueError("need at least 4 samples")
    s1 = x.sum()
    s2 = (x * x).sum()
    mean_i = (s1 - x) / (n - 1)
    var_i = (s2 - x * x - (n - 1) * mean_i * mean_i) / (n - 2)
    return float(np.sqrt((n - 1) / n * np.sum((var_i - var_i.mean()) ** 2)))


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    stderr: float
    ci_lo: float
    ci_hi: float

    def ci_intersects(self, lo: float, hi: float) -> bool:
        return self.ci_hi >= lo and self.ci_lo <= hi


def loglog_slope(x, y, confidence: float = 0.95) -> SlopeFit:
    """OLS slope of log y on log x with a t-based confidence interval."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size < 3:
        raise ValueError("need at least 3 points for a slope with error bars")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log fit needs positive data")
    res = sps.linregress(np.log(x), np.log(y))
    df = x.size - 2
    tcrit = float(sps.t.ppf(0.5 + confidence / 2.0, df))
    return SlopeFit(
        slope=float(res.slope),
        intercept=float(res.intercept),
        stderr=float(res.stderr),
        ci_lo=float(res.slope - tcrit * res.stderr),
        ci_hi=float(res.slope + tcrit * res.stderr),
    )


def pearson_r(a, b) -> tuple[float, int]:
    """Pearson correlation and pair count."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size != b.size or a.size < 3:
        raise ValueError("need paired samples")
    return float(np.corrcoef(a, b)[0, 1]), a.size


def rule_of_three(n: int) -> float:
    """95-percent upper bound on a probability after n failure-free trials."""
    return 3.0 / n


@dataclass(frozen=True)
class TailCell:
    """One weighted tail frequency with its binomial uncertainty."""

    a: float
    threshold: float
    count: int
    n: int
    weight: float  # a**exponent
    structural_zero: bool

    @property
    def p_hat(self) -> float:
        return self.count / self.n

    @property
    def weighted(self) -> float:
        return self.weight * self.p_hat

    @property
    def se(self) -> float:
        return self.weight * float(np.sqrt(self.p_hat * (1.0 - self.p_hat) / self.n))

    @property
    def lower(self) -> float:
        return max(self.weighted - 2.0 * self.se, 0.0)

    @property
    def upper(self) -> float:
        if self.count == 0:
            return self.weight * rule_of_three(self.n)
        return self.weighted + 2.0 * self.se


def weighted_tail_table(
    values: np.ndarray,
    a_grid,
    scale: float,
    exponent: float,
    max_possible: float | None = None,
) -> list[TailCell]:
    """Tail frequencies of ``values >= a * scale`` weighted by ``a**exponent``.

    Cells whose threshold exceeds ``max_possible`` are flagged
    structural: the event is impossible by construction, so the bound
    they test holds trivially.
    """
    values = np.asarray(values, dtype=np.float64)
    n = values.size
    cells = []
    for a in a_grid:
        thr = a * scale
        count = int(np.count_nonzero(values >= thr))
        structural = max_possible is not None and thr > max_possible
        cells.append(
            TailCell(
                a=float(a),
                threshold=float(thr),
                count=count,
                n=n,
                weight=float(a**exponent),
                structural_zero=structural,
            )
        )
    return cells


def bounded_ratio(cells: list[TailCell], factor: float) -> tuple[bool, float]:
    """Single-constant boundedness of weighted tails, up to binomial error.

    Passes when the largest lower confidence bound stays within
    ``factor`` times the smallest upper confidence bound, skipping
    structurally impossible cells.
    """
    live = [c for c in cells if not c.structural_zero]
    if len(live) < 2:
        return True, 0.0
    hi = max(c.lower for c in live)
    lo = min(c.upper for c in live)
    if lo <= 0.0:
        ratio = np.inf if hi > 0 else 0.0
    else:
        ratio = hi / lo
    return ratio <= factor, float(ratio)
