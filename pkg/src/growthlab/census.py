"""Necessary-condition diagnostics: liminf profiles and coefficient censuses.

liminf_profile tracks the running minimum over j of the normalized magnitude

    growth form:  |a_j| sqrt(n_k(j)) / g(j)
    Bloch form:   |a_j| j w(1 - 1/j) sqrt(n_k(j))

with k(j) the block containing j; a finite-range liminf proxy is the final
running minimum, reported together with dyadic checkpoints (no asymptotic
verdict is implied).  Functions bounded by the weight keep this proxy
finite; sign-flattened extremal examples keep it strictly positive, while
lacunary examples drive it to zero through their empty blocks.

coefficient_census counts, for thresholds p_j increasing to infinity, how
many indices j <= n satisfy

    growth form:  |a_j| <= p_j g(j) / sqrt(j)
    Bloch form:   |a_j| <= p_j / (j w(1 - 1/j) sqrt(j))

and reports N(n)/n at dyadic n.  Indices start at 1 so the fraction stays
in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import fail
from .schemes import CoefficientScheme, NuSequence
from .weights import BlockSequence, Weight, eval_g


@dataclass(frozen=True)
class LiminfRow:
    j: int
    value: float
    running_min: float


@dataclass(frozen=True)
class LiminfReport:
    rows: tuple              # dyadic checkpoints
    proxy: float             # final running minimum
    range_lo: int
    range_hi: int

    def to_rows(self):
        return [(r.j, r.value, r.running_min) for r in self.rows]


LIMINF_CSV_HEADER = ["j", "value", "running_min"]


def liminf_profile(scheme: CoefficientScheme, blocks: BlockSequence, weight: Weight,
                   bloch_w: Optional[Weight] = None) -> LiminfReport:
    """Running minimum of the normalized magnitude over j in (n_0, n_kmax]."""
    if blocks.n[-1] < scheme.max_degree:
        fail("BLOCKS_TOO_SHORT",
             f"blocks reach {blocks.n[-1]} but the scheme has degree {scheme.max_degree}")
    lo = blocks.n[0] + 1
    hi = blocks.n[-1]
    if hi < lo:
        fail("BLOCKS_TOO_SHORT", "no indices beyond n0 to profile")
    j = np.arange(lo, hi + 1, dtype=np.int64)
    mags = scheme.dense_magnitudes(hi)[lo:]
    edges = np.asarray(blocks.n, dtype=np.int64)
    nk = edges[np.searchsorted(edges, j, side="left")].astype(float)
    if bloch_w is None:
        vals = mags * np.sqrt(nk) / eval_g(weight, j.astype(float))
    else:
        # j * w(1 - 1/j) = j / g_w(j) for the reciprocal growth weight
        vals = mags * j.astype(float) * np.sqrt(nk) / eval_g(bloch_w, j.astype(float))
    running = np.minimum.accumulate(vals)
    cps = []
    m = 1
    while m <= hi:
        if m >= lo:
            cps.append(LiminfRow(j=int(m), value=float(vals[m - lo]),
                                 running_min=float(running[m - lo])))
        m *= 2
    if not cps or cps[-1].j != hi:
        cps.append(LiminfRow(j=int(hi), value=float(vals[-1]), running_min=float(running[-1])))
    return LiminfReport(rows=tuple(cps), proxy=float(running[-1]), range_lo=lo, range_hi=hi)


@dataclass(frozen=True)
class CensusRow:
    n: int
    count: int
    fraction: float
    threshold_at_n: float


@dataclass(frozen=True)
class CensusReport:
    rows: tuple

    def fractions(self) -> np.ndarray:
        return np.array([r.fraction for r in self.rows])

    def to_rows(self):
        return [(r.n, r.count, r.fraction, r.threshold_at_n) for r in self.rows]


CENSUS_CSV_HEADER = ["n", "N_n", "fraction", "threshold_at_n"]


def coefficient_census(scheme: CoefficientScheme, weight: Weight, p: NuSequence,
                       n_max: int, bloch_w: Optional[Weight] = None) -> CensusReport:
    """Fractions N(n)/n of indices meeting the threshold, at dyadic n."""
    if n_max < 1:
        fail("EMPTY_RANGE", f"need n_max >= 1, got {n_max}")
    j = np.arange(1, n_max + 1, dtype=np.int64)
    mags = scheme.dense_magnitudes(n_max)[1:]
    pj = p.at(j.astype(float))
    if np.any(np.diff(pj) < 0) or np.any(pj <= 0):
        fail("CONFIG_INVALID", "census thresholds p_j must be positive and non-decreasing")
    jf = j.astype(float)
    if bloch_w is None:
        thresholds = pj * eval_g(weight, jf) / np.sqrt(jf)
    else:
        thresholds = pj * eval_g(bloch_w, jf) / (jf * np.sqrt(jf))
    ok = np.cumsum(mags <= thresholds)
    rows = []
    m = 1
    while m <= n_max:
        rows.append(CensusRow(n=int(m), count=int(ok[m - 1]),
                              fraction=float(ok[m - 1] / m),
                              threshold_at_n=float(thresholds[m - 1])))
        m *= 2
    if rows[-1].n != n_max:
        rows.append(CensusRow(n=int(n_max), count=int(ok[-1]),
                              fraction=float(ok[-1] / n_max),
                              threshold_at_n=float(thresholds[-1])))
    return CensusReport(rows=tuple(rows))
