"""Catalan moments, semicircular laws and φ-moments of the Clifford character.

For even s the Clifford construction has ``χ(v) = diag(n x_I^2)``, so
``φ(χ(v)^k) = n^k E[x_1^{2k}]`` over the sampling measure. For odd s the top
element is central and ``χ(v)`` has eigenvalues ``n (x_J^2 + x_{J Δ full}^2)``
per pair plus ``n/2`` zeros, giving ``φ(χ(v)^k) = (n^k / 2) E[(x_1^2 + x_2^2)^k]``
for ``k ≥ 1``. Monte Carlo accumulation runs over blocks of sample indices (see
``logic.haar``); per-block sums are merged in block order so results do not
depend on the number of worker threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
import scipy.integrate
import xxhash
from pqdm.threads import pqdm

from logic.clifford import CliffordElement, unitarity_defects
from logic.fusion import clebsch_gordan_moments, poincare_coefficients
from logic.haar import (
    BLOCK_SIZE,
    SeededSampler,
    measure_label,
    pair_moment_exact,
    sphere_batch,
    sphere_moment_exact,
)
from logic.linalg import EXACT_TOL, matrix_power, normalized_trace
from logic.magic import character, character_spectra, clifford_magic
from utils.logger import debug_log

VERDICT_SATISFIED = "hypothesis satisfied"
VERDICT_VIOLATED = "hypothesis violated"
CONCLUSION_NOTE = (
    "Inner faithfulness follows from the square-of-semicircular criterion; "
    "that implication is proved mathematically and is not machine-checked here."
)


def catalan(k: int) -> int:
    """``binom(2k, k) / (k + 1)``."""
    if k < 0:
        raise ValueError(f"Catalan index must be nonnegative, got {k}")
    return math.comb(2 * k, k) // (k + 1)


def semicircle_moment(k: int) -> int:
    """Moments of the standard semicircle on [-2, 2]."""
    if k < 0:
        raise ValueError(f"Moment degree must be nonnegative, got {k}")
    return 0 if k % 2 else catalan(k // 2)


def semicircle_density(t):
    """``(2π)^{-1} √(4 - t²)`` on [-2, 2], else 0."""
    t = np.asarray(t, dtype=float)
    inside = np.abs(t) <= 2.0
    out = np.where(inside, np.sqrt(np.clip(4.0 - t * t, 0.0, None)) / (2.0 * np.pi), 0.0)
    return float(out) if out.ndim == 0 else out


def squared_semicircle_density(t):
    """Law of ``x²`` for semicircular ``x``: ``(2π)^{-1} √((4 - t)/t)`` on (0, 4]."""
    t = np.asarray(t, dtype=float)
    inside = (t > 0.0) & (t <= 4.0)
    safe = np.where(inside, t, 1.0)
    out = np.where(inside, np.sqrt(np.clip((4.0 - safe) / safe, 0.0, None)) / (2.0 * np.pi), 0.0)
    return float(out) if out.ndim == 0 else out


def squared_semicircle_cdf(t):
    """Distribution function of the squared semicircle law."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 4.0)
    out = np.sqrt(t * (4.0 - t)) / (2.0 * np.pi) + (2.0 / np.pi) * np.arcsin(np.sqrt(t) / 2.0)
    return float(out) if out.ndim == 0 else out


def density_moment(k: int, law: str = "squared_semicircle") -> float:
    """k-th moment of a density by quadrature with algebraic endpoint weights."""
    if law == "squared_semicircle":
        # t^k (2π)^{-1} t^{-1/2} (4 - t)^{1/2} on [0, 4]
        value, _ = scipy.integrate.quad(
            lambda t: t ** k / (2.0 * np.pi), 0.0, 4.0, weight="alg", wvar=(-0.5, 0.5)
        )
        return value
    if law == "semicircle":
        # t^k (2π)^{-1} (t + 2)^{1/2} (2 - t)^{1/2} on [-2, 2]
        value, _ = scipy.integrate.quad(
            lambda t: t ** k / (2.0 * np.pi), -2.0, 2.0, weight="alg", wvar=(0.5, 0.5)
        )
        return value
    raise ValueError(f"Unknown law '{law}'")


def _real_unit_coefficients(x: CliffordElement, tol: float) -> np.ndarray:
    if not x.is_real(tol):
        raise ValueError("Character moments need real coefficients")
    return x.real_coefficients()


def character_moment_exact(x: CliffordElement, k: int, tol: float = EXACT_TOL) -> float:
    """``tr(χ(v)^k) = (1/n) Σ λ^k`` over the closed-form spectrum of the character."""
    coeffs = _real_unit_coefficients(x, tol)
    coeffs = coeffs / math.sqrt(float(coeffs @ coeffs))
    n = x.dimension
    return math.fsum(value ** k for value in character_spectra(coeffs, x.rank)[0]) / n


def character_moment_matrix(x: CliffordElement, k: int, tol: float = EXACT_TOL) -> float:
    """Dense-matrix oracle for :func:`character_moment_exact`."""
    chi = character(clifford_magic(x, tol))
    return normalized_trace(matrix_power(chi, k)).real


def character_form(s: int) -> str:
    """``"diagonal"`` for even s, ``"paired"`` for odd s."""
    return "paired" if s % 2 else "diagonal"


def exact_phi_moment(s: int, k: int) -> Fraction:
    """Exact ``E[φ(χ(v)^k)]`` over the unit sphere of ``R^n``, ``n = 2^s``."""
    n = 1 << s
    if s % 2 == 0:
        return n ** k * sphere_moment_exact(n, k)
    if k == 0:
        return Fraction(1)
    return Fraction(n ** k, 2) * pair_moment_exact(n, k)


@dataclass
class MomentRow:
    k: int
    mc_estimate: Optional[float]
    mc_stderr: Optional[float]
    exact_value: Fraction
    catalan_ref: int

    @property
    def z_score(self) -> Optional[float]:
        if self.mc_estimate is None or not self.mc_stderr:
            return None
        return (self.mc_estimate - self.catalan_ref) / self.mc_stderr

    @property
    def matches_catalan(self) -> bool:
        return self.exact_value == self.catalan_ref

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "mc_estimate": self.mc_estimate,
            "mc_stderr": self.mc_stderr,
            "exact_value": str(self.exact_value),
            "exact_float": float(self.exact_value),
            "catalan_ref": self.catalan_ref,
            "z_score": self.z_score,
            "matches_catalan": self.matches_catalan,
        }


@dataclass
class MomentReport:
    """Per-degree φ-moments of the Clifford character."""

    s: int
    sample_count: int
    measure_label: str
    rows: list[MomentRow] = field(default_factory=list)
    unitary_failures: Optional[int] = None
    fingerprint: Optional[str] = None

    @property
    def n(self) -> int:
        return 1 << self.s

    @property
    def unitary_failure_rate(self) -> Optional[float]:
        if self.unitary_failures is None or not self.sample_count:
            return None
        return self.unitary_failures / self.sample_count

    def as_dict(self) -> dict:
        return {
            "s": self.s,
            "n": self.n,
            "sample_count": self.sample_count,
            "measure_label": self.measure_label,
            "character_form": character_form(self.s),
            "unitary_failures": self.unitary_failures,
            "unitary_failure_rate": self.unitary_failure_rate,
            "fingerprint": self.fingerprint,
            "moments": [row.as_dict() for row in self.rows],
        }


def _block_ranges(samples: int) -> list[tuple[int, int]]:
    return [(start, min(BLOCK_SIZE, samples - start)) for start in range(0, samples, BLOCK_SIZE)]


def _moment_block(args: tuple) -> tuple[np.ndarray, np.ndarray, int]:
    s, k_max, sampler, start, count, tol = args
    xs = sphere_batch(s, sampler, start, count)
    values = character_spectra(xs, s)
    powers = np.stack([np.mean(values ** k, axis=1) for k in range(k_max + 1)], axis=1)
    failures = 0
    if s >= 3:
        failures = int(np.count_nonzero(unitarity_defects(xs, s) > tol))
    return powers.sum(axis=0), (powers * powers).sum(axis=0), failures


def _run_blocks(function, tasks: list, workers: int, progress=None, desc: str = "") -> list:
    """Evaluate *tasks* in order, threaded through ``pqdm`` when workers > 1."""
    if workers > 1 and len(tasks) > 1:
        results = pqdm(tasks, function, n_jobs=workers, desc=desc, disable=True)
        for result in results:
            if isinstance(result, Exception):
                raise result
    else:
        results = [function(task) for task in tasks]
    if progress is not None:
        progress.total = len(tasks)
        if hasattr(progress, "update"):
            progress.update(len(tasks))
        else:
            progress.n += len(tasks)
        progress.refresh()
    return results


def estimate_phi_moments(
    s: int,
    k_max: int,
    samples: int,
    sampler: SeededSampler,
    *,
    workers: int = 1,
    tol: float = 1e-9,
    progress=None,
    config: Optional[dict] = None,
) -> MomentReport:
    """Monte Carlo φ-moments with standard errors next to the exact values."""
    if samples < 1:
        raise ValueError(f"samples must be at least 1, got {samples}")
    if k_max < 0:
        raise ValueError(f"k_max must be nonnegative, got {k_max}")

    tasks = [(s, k_max, sampler, start, count, tol) for start, count in _block_ranges(samples)]
    debug_log(
        f"Estimating moments s={s} k_max={k_max} over {len(tasks)} blocks with {workers} workers",
        config,
        level="medium",
    )
    results = _run_blocks(_moment_block, tasks, workers, progress, desc="moment blocks")

    sums = np.zeros(k_max + 1)
    squares = np.zeros(k_max + 1)
    failures = 0
    for block_sum, block_sq, block_failures in results:
        sums += block_sum
        squares += block_sq
        failures += block_failures
    debug_log(f"Moment sums: {sums.tolist()}", config, level="high")

    means = sums / samples
    if samples > 1:
        variances = np.clip((squares - samples * means * means) / (samples - 1), 0.0, None)
        stderrs = np.sqrt(variances / samples)
    else:
        stderrs = np.zeros(k_max + 1)

    rows = [
        MomentRow(
            k=k,
            mc_estimate=float(means[k]),
            mc_stderr=float(stderrs[k]),
            exact_value=exact_phi_moment(s, k),
            catalan_ref=catalan(k),
        )
        for k in range(k_max + 1)
    ]
    digest = xxhash.xxh64()
    digest.update(sums.tobytes())
    digest.update(squares.tobytes())
    return MomentReport(
        s=s,
        sample_count=samples,
        measure_label=measure_label(s),
        rows=rows,
        unitary_failures=failures if s >= 3 else None,
        fingerprint=digest.hexdigest(),
    )


def exact_moment_report(s: int, k_max: int) -> MomentReport:
    """Exact column only, no sampling."""
    rows = [
        MomentRow(k=k, mc_estimate=None, mc_stderr=None, exact_value=exact_phi_moment(s, k), catalan_ref=catalan(k))
        for k in range(k_max + 1)
    ]
    return MomentReport(s=s, sample_count=0, measure_label=measure_label(s), rows=rows)


@dataclass
class SpectralHistogram:
    """Pooled character eigenvalues binned on ``[0, n]``.

    ``pooled_mean`` is 1 for every sample (φ is a normalised trace), so
    ``pooled_stderr`` is taken over per-sample means and only measures rounding.
    ``leading_mean`` follows the eigenvalue attached to ``e_∅``, one value per
    sample: ``n x_∅²`` (mean 1) for even s, ``n (x_∅² + x_full²)`` (mean 2) for odd s.
    """

    s: int
    sample_count: int
    edges: np.ndarray
    counts: np.ndarray
    pooled_mean: float
    pooled_stderr: float
    leading_mean: float
    leading_stderr: float
    measure_label: str
    values: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return 1 << self.s

    @property
    def support(self) -> tuple[float, float]:
        return 0.0, float(self.n)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def density(self) -> np.ndarray:
        total = self.counts.sum()
        widths = np.diff(self.edges)
        return self.counts / (total * widths) if total else np.zeros_like(widths)

    def reference_density(self) -> Optional[np.ndarray]:
        """Bin-averaged squared semicircle density; only defined for s = 2."""
        if self.s != 2:
            return None
        cdf = squared_semicircle_cdf(self.edges)
        return np.diff(cdf) / np.diff(self.edges)

    def sup_deviation(self) -> Optional[float]:
        reference = self.reference_density()
        if reference is None:
            return None
        return float(np.max(np.abs(self.density - reference)))

    def as_dict(self) -> dict:
        return {
            "s": self.s,
            "n": self.n,
            "sample_count": self.sample_count,
            "bins": len(self.counts),
            "support": list(self.support),
            "measure_label": self.measure_label,
            "pooled_mean": self.pooled_mean,
            "pooled_stderr": self.pooled_stderr,
            "leading_mean": self.leading_mean,
            "leading_stderr": self.leading_stderr,
            "sup_deviation": self.sup_deviation(),
            "bin_centers": self.centers.tolist(),
            "density": self.density.tolist(),
        }


def _histogram_block(args: tuple) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    s, bins, sampler, start, count = args
    n = 1 << s
    spectra = character_spectra(sphere_batch(s, sampler, start, count), s)
    counts, _ = np.histogram(spectra.reshape(-1), bins=bins, range=(0.0, float(n)))
    sample_means = spectra.mean(axis=1)
    leading = spectra[:, 0]
    sums = np.array([sample_means.sum(), leading.sum()])
    squares = np.array([(sample_means * sample_means).sum(), (leading * leading).sum()])
    return counts, sums, squares


def _mean_and_stderr(total: float, total_sq: float, size: int) -> tuple[float, float]:
    mean = total / size
    if size < 2:
        return mean, 0.0
    variance = max((total_sq - size * mean * mean) / (size - 1), 0.0)
    return mean, math.sqrt(variance / size)


def spectral_histogram(
    s: int,
    samples: int,
    bins: int,
    sampler: SeededSampler,
    *,
    workers: int = 1,
    keep_values: bool = False,
    progress=None,
    config: Optional[dict] = None,
) -> SpectralHistogram:
    """Equal-width histogram of the pooled exact eigenvalues over ``[0, n]``."""
    if samples < 1:
        raise ValueError(f"samples must be at least 1, got {samples}")
    if bins < 1:
        raise ValueError(f"bins must be at least 1, got {bins}")

    n = 1 << s
    tasks = [(s, bins, sampler, start, count) for start, count in _block_ranges(samples)]
    results = _run_blocks(_histogram_block, tasks, workers, progress, desc="spectrum blocks")

    counts = np.zeros(bins, dtype=np.int64)
    sums = np.zeros(2)
    squares = np.zeros(2)
    for block_counts, block_sums, block_squares in results:
        counts += block_counts
        sums += block_sums
        squares += block_squares
    pooled_mean, pooled_stderr = _mean_and_stderr(sums[0], squares[0], samples)
    leading_mean, leading_stderr = _mean_and_stderr(sums[1], squares[1], samples)
    debug_log(
        f"Spectrum s={s}: pooled mean {pooled_mean:.6f}, leading mean {leading_mean:.6f} "
        f"over {samples} samples",
        config,
        level="medium",
    )

    values = None
    if keep_values:
        values = character_spectra(sphere_batch(s, sampler, 0, samples), s).reshape(-1)
    return SpectralHistogram(
        s=s,
        sample_count=samples,
        edges=np.linspace(0.0, float(n), bins + 1),
        counts=counts,
        pooled_mean=pooled_mean,
        pooled_stderr=pooled_stderr,
        leading_mean=leading_mean,
        leading_stderr=leading_stderr,
        measure_label=measure_label(s),
        values=values,
    )


@dataclass
class HypothesisReport:
    """Verdict on the Catalan-moment hypothesis for the rank-s construction."""

    s: int
    k_max: int
    verdict: str
    witness_degree: Optional[int]
    moments: MomentReport
    fusion_agrees: bool
    clebsch_gordan_agrees: bool
    conclusion_note: str = CONCLUSION_NOTE

    @property
    def satisfied(self) -> bool:
        return self.verdict == VERDICT_SATISFIED

    def as_dict(self) -> dict:
        return {
            "s": self.s,
            "n": 1 << self.s,
            "k_max": self.k_max,
            "verdict": self.verdict,
            "witness_degree": self.witness_degree,
            "fusion_agrees": self.fusion_agrees,
            "clebsch_gordan_agrees": self.clebsch_gordan_agrees,
            "conclusion_note": self.conclusion_note,
            "moments": self.moments.as_dict(),
        }

    def summary(self) -> str:
        lines = [
            f"Clifford construction s={self.s} (n={1 << self.s}), "
            f"{character_form(self.s)} character, degrees 0..{self.k_max}"
        ]
        for row in self.moments.rows:
            lines.append(
                f"  k={row.k}: exact {row.exact_value} vs Catalan {row.catalan_ref}"
                + ("" if row.matches_catalan else "  <- differs")
            )
        if self.satisfied:
            lines.append(f"Verdict: {self.verdict}")
        else:
            lines.append(f"Verdict: {self.verdict} at k={self.witness_degree}")
        lines.append(f"Fusion-ring Poincaré coefficients are Catalan: {self.fusion_agrees}")
        lines.append(f"Clebsch–Gordan moments are Catalan: {self.clebsch_gordan_agrees}")
        lines.append(self.conclusion_note)
        return "\n".join(lines)


def hypothesis_report(
    s: int,
    k_max: int,
    samples: int,
    sampler: SeededSampler,
    *,
    workers: int = 1,
    progress=None,
    config: Optional[dict] = None,
) -> HypothesisReport:
    """Exact rational comparison of φ-moments with Catalan numbers.

    Monte Carlo columns are filled when ``samples > 0`` but never decide the
    verdict.
    """
    if samples > 0:
        moments = estimate_phi_moments(
            s, k_max, samples, sampler, workers=workers, progress=progress, config=config
        )
    else:
        moments = exact_moment_report(s, k_max)
    witness = next((row.k for row in moments.rows if not row.matches_catalan), None)
    targets = [catalan(k) for k in range(k_max + 1)]
    report = HypothesisReport(
        s=s,
        k_max=k_max,
        verdict=VERDICT_SATISFIED if witness is None else VERDICT_VIOLATED,
        witness_degree=witness,
        moments=moments,
        fusion_agrees=poincare_coefficients(k_max) == targets,
        clebsch_gordan_agrees=clebsch_gordan_moments(k_max) == targets,
    )
    debug_log(f"Hypothesis s={s}: {report.verdict} (witness {witness})", config, level="low")
    return report
