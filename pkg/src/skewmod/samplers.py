"""Selection (rejection) and selection-plus-transform (flip) samplers."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .modulated import ModulatedDensity
from .numerics import KSResult, ks_one_sample, ks_two_sample
from .transforms import GenSymTransform, RConditionReport, verify_R_conditions


class RepresentationUnavailable(RuntimeError):
    """The supplied transform does not satisfy the conditions for flip sampling."""

    def __init__(self, message: str, report: RConditionReport):
        super().__init__(message)
        self.report = report


class AcceptanceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SamplerStats:
    draws_attempted: int
    draws_accepted: int
    flips: int = 0
    warning: bool = False

    @property
    def acceptance_rate(self) -> float:
        return self.draws_accepted / self.draws_attempted


def rejection_sample(m: ModulatedDensity, n: int, rng: np.random.Generator,
                     reverse: bool = False, batch: int | None = None):
    """Keep Y ~ f0 whenever X <= w(Y), X ~ G independent.

    With ``reverse=True`` the inequality is reversed (X >= w(Y)), which
    yields the dual density.  Returns an ``(n, d)`` array and SamplerStats;
    the stats flag acceptance rates farther than 5 binomial standard errors
    from 1/2 once at least 10^4 attempts have been made.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    batch = batch or max(2 * n + 64, 1024)
    chunks, got, attempted = [], 0, 0
    while got < n:
        y = m.base.sample(rng, batch)
        x = m.g_cdf.sample(rng, batch)
        w = m.modulation(y)
        keep = (x >= w) if reverse else (x <= w)
        attempted += batch
        acc = y[keep]
        if got + len(acc) >= n:
            # count attempts only up to the n-th acceptance, so that the
            # reported rate does not depend on the batch size
            need = n - got
            last = np.flatnonzero(keep)[need - 1]
            attempted -= batch - (last + 1)
            acc = acc[:need]
        chunks.append(acc)
        got += len(acc)
    out = np.concatenate(chunks)
    rate = n / attempted
    flag = attempted >= 10_000 and abs(rate - 0.5) > 5.0 * math.sqrt(0.25 / attempted)
    if flag:
        warnings.warn(f"acceptance rate {rate:.4f} is inconsistent with 1/2; "
                      "w(Y) is probably not symmetric about 0", AcceptanceWarning, stacklevel=2)
    return out, SamplerStats(attempted, n, 0, flag)


def flip_sample(m: ModulatedDensity, R: GenSymTransform, n: int, rng: np.random.Generator,
                report: Optional[RConditionReport] = None, probes: int = 200, tol: float = 1e-6):
    """Z = Y if X <= w(Y), otherwise R^{-1}(Y); every draw is used.

    R is verified first (unless a passing report is supplied) and a
    RepresentationUnavailable is raised when any condition fails.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if report is None:
        report = verify_R_conditions(m.base, m.w, R, probes=probes, tol=tol,
                                     rng=np.random.default_rng(rng.integers(2 ** 63)))
    if not report.passed:
        raise RepresentationUnavailable(
            f"transform {R.kind} fails {', '.join(report.failures())}; "
            "the flip representation is not available", report)
    y = m.base.sample(rng, n)
    x = m.g_cdf.sample(rng, n)
    keep = x <= m.modulation(y)
    z = np.where(keep[:, None], y, np.asarray(R.inverse(y)))
    flips = int(n - np.count_nonzero(keep))
    return z, SamplerStats(n, n, flips)


@dataclass(frozen=True)
class InvarianceReport:
    ks: KSResult
    mean_modulated: float
    mean_base: float
    reference: Optional[KSResult] = None


def invariance_check(m: ModulatedDensity, R: GenSymTransform, t: Callable, n: int,
                     rng: np.random.Generator, reference_cdf: Callable | None = None,
                     probes: int = 200, atol: float = 1e-9) -> InvarianceReport:
    """Compare t(Z) (flip sampler) with t(Y) (base) by two-sample KS.

    t must be even with respect to R, i.e. t(z) = t(R^{-1}(z)); this is
    spot-checked on base draws first.
    """
    probe = m.base.sample(rng, probes)
    tz = np.asarray(t(probe), dtype=float)
    dev = np.max(np.abs(tz - np.asarray(t(R.inverse(probe)), dtype=float)) / (1.0 + np.abs(tz)))
    if dev > atol:
        raise ValueError(f"statistic is not invariant under {R.kind} (deviation {dev:.3g})")
    z, _ = flip_sample(m, R, n, rng)
    y = m.base.sample(rng, n)
    a, b = np.asarray(t(z), dtype=float), np.asarray(t(y), dtype=float)
    ref = ks_one_sample(a, reference_cdf) if reference_cdf is not None else None
    return InvarianceReport(ks_two_sample(a, b), float(a.mean()), float(b.mean()), ref)
