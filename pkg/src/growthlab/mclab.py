"""Monte Carlo ensembles and brute-force probes.

Everything here is reproducible: configs serialize to canonical JSON, trials
derive independent Philox streams from (seed, trial), and aggregation sorts
by trial id, so shuffling execution order or running trials concurrently
cannot change a single output byte.  Quantiles (q10/median/q90) summarize
the typical behavior that almost-sure statements are about, without
heavy-tail distortion.

Probes:

  run_growth_ensemble     certified sup brackets per trial and radius, with
                          median ratios against candidate growth functions
  salem_zygmund_probe     distribution of max |h_N| / sqrt(R log n_N) for the
                          Cesaro-weighted top block h_N at radius 1 - 1/n_N
  riesz_probe             certified lower bounds of sup / sum|c| for shifted
                          4-power cosine combs, optionally over sign patterns
  cesaro_domination_check batched property test that no Cesaro mean can
                          exceed the function's certified sup
  fit_growth              ranks candidate growth functions by flatness of the
                          log median ratio across radii
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .disk import REAL_HARMONIC, cesaro_mean, randomize, sup_bracket, unit_series
from .errors import fail
from .randomness import RandomModel, SeedSpec, make_model, model_from_json
from .reporting import canonical_json, config_hash
from .schemes import (CoefficientScheme, blocks_from_provenance, clamped_log,
                      hadamard_lacunary_scheme, loglog_energy_scheme, nu_from_json,
                      riesz_lacunary_scheme, rudin_shapiro_scheme, saturating_scheme,
                      scheme_from_arrays, uniform_block_scheme)

# -- named growth candidates ---------------------------------------------------

def _sqrt_log(x):
    return np.sqrt(np.maximum(1.0, np.log(x)))


def _sqrt_log_loglog(x):
    lx = np.maximum(np.e, np.log(np.asarray(x, dtype=float)))
    return np.sqrt(np.maximum(1.0, np.log(x)) * np.log(lx))


GROWTH_CANDIDATES: dict = {
    "sqrt_log": _sqrt_log,
    "sqrt_log_loglog": _sqrt_log_loglog,
    "log": lambda x: np.maximum(1.0, np.log(x)),
    "identity": lambda x: np.asarray(x, dtype=float),
    "sqrt": lambda x: np.sqrt(np.asarray(x, dtype=float)),
}


def resolve_candidate(name: str) -> Callable:
    if name in GROWTH_CANDIDATES:
        return GROWTH_CANDIDATES[name]
    if ":" in name:
        from .weights import parse_weight_spec, eval_g
        w = parse_weight_spec(name)
        return lambda x: eval_g(w, x)
    fail("CONFIG_INVALID", f"unknown growth candidate {name!r}")


# -- scheme regeneration from provenance ---------------------------------------

def scheme_from_provenance(prov: dict) -> CoefficientScheme:
    """Rebuild a scheme bit-exactly from its provenance dict."""
    name = prov.get("name")
    if name == "loglog":
        return loglog_energy_scheme(prov["k_max"])
    if name == "uniform":
        return uniform_block_scheme(blocks_from_provenance(prov["blocks"]),
                                    prov["rule"], prov.get("fill_both", False))
    if name == "saturating":
        return saturating_scheme(blocks_from_provenance(prov["blocks"]),
                                 nu_from_json(prov["nu"]))
    if name == "riesz_lacunary":
        return riesz_lacunary_scheme(blocks_from_provenance(prov["blocks"]),
                                     nu_from_json(prov["nu"]))
    if name == "rudin_shapiro":
        return rudin_shapiro_scheme(blocks_from_provenance(prov["blocks"]))
    if name == "hadamard":
        return hadamard_lacunary_scheme(blocks_from_provenance(prov["blocks"]))
    if name == "random":
        return random_scheme(SeedSpec(prov["seed"]), prov["trial"], prov["degree"],
                             prov.get("density", 1.0), prov.get("both", True))
    fail("CONFIG_INVALID", f"cannot regenerate scheme from provenance {name!r}")


def random_scheme(seed_spec: SeedSpec, trial: int, degree: int,
                  density: float = 1.0, both: bool = True, lane: int = 7) -> CoefficientScheme:
    """Gaussian random scheme for oracles and property tests."""
    rng = seed_spec.generator(trial, lane)
    n_entries = max(1, int(round(density * (degree + 1))))
    support = np.sort(rng.choice(degree + 1, size=n_entries, replace=False))
    cos = rng.standard_normal(n_entries)
    sin = rng.standard_normal(n_entries) if both else np.zeros(n_entries)
    prov = {"name": "random", "seed": seed_spec.master_seed, "trial": trial,
            "degree": degree, "density": density, "both": both}
    return scheme_from_arrays(support, cos, sin, degree, prov)


# -- growth ensembles -----------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    """Fully serializable ensemble description; identical config, identical bytes."""

    scheme: dict
    model: dict
    seed: int
    trials: int
    radii: object = "block"            # "block" or explicit list of floats
    oversample: float = 16.0
    refine: bool = False               # refinement off for bulk Monte Carlo
    candidates: tuple = ("sqrt_log", "sqrt_log_loglog")
    flavor: str = REAL_HARMONIC
    max_evals: float = 1e11
    threads: int = 1

    def to_json(self) -> dict:
        return {"scheme": self.scheme, "model": self.model, "seed": self.seed,
                "trials": self.trials, "radii": self.radii,
                "oversample": self.oversample, "refine": self.refine,
                "candidates": list(self.candidates), "flavor": self.flavor,
                "max_evals": self.max_evals, "threads": self.threads}

    @property
    def hash(self) -> str:
        return config_hash(self.to_json())


def config_from_json(d: dict) -> ExperimentConfig:
    return ExperimentConfig(
        scheme=d["scheme"], model=d["model"], seed=int(d["seed"]),
        trials=int(d["trials"]), radii=d.get("radii", "block"),
        oversample=float(d.get("oversample", 16.0)), refine=bool(d.get("refine", False)),
        candidates=tuple(d.get("candidates", ("sqrt_log", "sqrt_log_loglog"))),
        flavor=d.get("flavor", REAL_HARMONIC), max_evals=float(d.get("max_evals", 1e11)),
        threads=int(d.get("threads", 1)))


@dataclass(frozen=True)
class EnsembleReport:
    config: dict
    config_hash: str
    radii: tuple
    n_of_r: tuple
    lower_q10: tuple
    lower_med: tuple
    lower_q90: tuple
    upper_q10: tuple
    upper_med: tuple
    upper_q90: tuple
    candidate_ratios: dict          # name -> tuple of median lower / candidate(n_of_r)
    wall_time: float = 0.0          # excluded from canonical bytes

    def canonical_payload(self) -> dict:
        return {"config": self.config, "config_hash": self.config_hash,
                "radii": list(self.radii), "n_of_r": list(self.n_of_r),
                "lower_q10": list(self.lower_q10), "lower_med": list(self.lower_med),
                "lower_q90": list(self.lower_q90), "upper_q10": list(self.upper_q10),
                "upper_med": list(self.upper_med), "upper_q90": list(self.upper_q90),
                "candidate_ratios": {k: list(v) for k, v in self.candidate_ratios.items()}}

    def canonical_bytes(self) -> bytes:
        return canonical_json(self.canonical_payload()).encode("utf-8")

    def to_json(self) -> dict:
        d = self.canonical_payload()
        d["wall_time"] = self.wall_time
        return d

    def quantile_rows(self):
        return list(zip(self.radii, self.n_of_r, self.lower_q10, self.lower_med,
                        self.lower_q90, self.upper_q10, self.upper_med, self.upper_q90))


ENSEMBLE_CSV_HEADER = ["r", "n_of_r", "lower_q10", "lower_med", "lower_q90",
                       "upper_q10", "upper_med", "upper_q90"]


def _resolve_radii(cfg: ExperimentConfig, scheme: CoefficientScheme):
    if cfg.radii == "block":
        prov = cfg.scheme
        blocks = prov.get("blocks")
        if blocks is not None:
            ns = blocks["n"]
        elif prov.get("name") == "loglog":
            from .schemes import TOWER_BLOCKS
            ns = TOWER_BLOCKS[:prov["k_max"] + 1]
        else:
            fail("CONFIG_INVALID", "radii rule 'block' needs a block-based scheme")
        return [1.0 - 1.0 / n for n in ns if n >= 2]
    return [float(r) for r in cfg.radii]


def _estimate_evals(cfg, scheme, radii) -> float:
    total = 0.0
    deg = scheme.max_degree
    for r in radii:
        reach = deg if r >= 1.0 else min(deg, 60.0 / max(1e-12, 1.0 - r))
        total += cfg.oversample * math.pi * max(reach, 1.0) * math.log2(max(reach, 2.0))
    return total * cfg.trials


def run_growth_ensemble(config: ExperimentConfig) -> EnsembleReport:
    """Randomize, bracket and aggregate; deterministic given the config."""
    if config.trials < 1:
        fail("DOMAIN", f"need at least one trial, got {config.trials}")
    scheme = scheme_from_provenance(config.scheme)
    model = model_from_json(config.model)
    seed = SeedSpec(config.seed)
    radii = _resolve_radii(config, scheme)
    cost = _estimate_evals(config, scheme, radii)
    if cost > config.max_evals:
        fail("BUDGET_EXCEEDED",
             f"estimated {cost:.3g} evaluations exceed the budget {config.max_evals:.3g}")
    t0 = time.monotonic()

    def one_trial(t: int):
        series = randomize(scheme, model, seed, t, flavor=config.flavor)
        lowers, uppers = [], []
        for r in radii:
            b = sup_bracket(series, r, oversample=config.oversample, refine=config.refine)
            lowers.append(b.lower)
            uppers.append(b.upper)
        return t, lowers, uppers

    results = [None] * config.trials
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as ex:
            for t, lo, up in ex.map(one_trial, range(config.trials)):
                results[t] = (lo, up)
    else:
        for t in range(config.trials):
            _, lo, up = one_trial(t)
            results[t] = (lo, up)
    lowers = np.array([r[0] for r in results])      # (T, R)
    uppers = np.array([r[1] for r in results])
    q10, med, q90 = (np.quantile(lowers, q, axis=0) for q in (0.10, 0.50, 0.90))
    uq10, upmed, uq90 = (np.quantile(uppers, q, axis=0) for q in (0.10, 0.50, 0.90))
    n_of_r = [1.0 / (1.0 - r) if r < 1.0 else math.inf for r in radii]
    ratios = {}
    for name in config.candidates:
        fn = resolve_candidate(name)
        cand = np.atleast_1d(np.asarray(fn(np.asarray(n_of_r, dtype=float)), dtype=float))
        ratios[name] = tuple(float(v) for v in (med / cand))
    return EnsembleReport(
        config=config.to_json(), config_hash=config.hash,
        radii=tuple(radii), n_of_r=tuple(n_of_r),
        lower_q10=tuple(float(v) for v in q10), lower_med=tuple(float(v) for v in med),
        lower_q90=tuple(float(v) for v in q90),
        upper_q10=tuple(float(v) for v in uq10), upper_med=tuple(float(v) for v in upmed),
        upper_q90=tuple(float(v) for v in uq90),
        candidate_ratios=ratios, wall_time=time.monotonic() - t0)


# -- Salem-Zygmund probe ---------------------------------------------------------

@dataclass(frozen=True)
class SzRow:
    n_index: int          # block position N
    n: int                # n_N
    big_r: float          # sum of b_j^2
    t4_ratio: float       # (sum b_j^4) * n / R^2, the flatness hypothesis constant
    q05: float
    q50: float
    q95: float
    frac_below: dict      # candidate constant -> fraction of trials below it


@dataclass(frozen=True)
class SzReport:
    rows: tuple
    trials: int

    def row_for(self, n_index: int) -> SzRow:
        for r in self.rows:
            if r.n_index == n_index:
                return r
        raise KeyError(n_index)


SZ_CSV_HEADER = ["n_index", "n", "big_r", "t4_ratio", "q05", "q50", "q95"]


def salem_zygmund_probe(scheme: CoefficientScheme, blocks, model: RandomModel,
                        seed_spec: SeedSpec, trials: int, n_list: Sequence[int],
                        oversample: float = 16.0,
                        c_grid: Sequence[float] = (0.25, 0.5, 0.75, 1.0)) -> SzReport:
    """Distribution of the normalized top-block max.

    For block position N the probe forms h_N with coefficients
    (1 - j/n_N) a_j r_N^j over n_{N-1} < j <= n_N at r_N = 1 - 1/n_N,
    draws signs per trial, and records max_theta |h_N| / sqrt(R log n_N).
    The flatness ratio (sum b^4) n / R^2 is reported per N so callers can
    confirm the regime where such maxima concentrate.
    """
    edges = list(blocks.n) if hasattr(blocks, "n") else list(blocks)
    rows = []
    for N in n_list:
        if N < 1 or N >= len(edges):
            fail("BLOCKS_TOO_SHORT", f"block position {N} outside 1..{len(edges) - 1}")
        lo, hi = edges[N - 1], edges[N]
        r_N = 1.0 - 1.0 / hi
        mask = (scheme.support > lo) & (scheme.support <= hi)
        js = scheme.support[mask]
        if len(js) == 0:
            fail("EMPTY_BLOCKS", f"scheme has no coefficients in block {N}")
        jf = js.astype(float)
        b = (1.0 - jf / hi) * scheme.magnitudes()[mask] * np.power(r_N, jf)
        big_r = float(np.sum(b * b))
        if big_r == 0.0:
            fail("EMPTY_BLOCKS",
                 f"block {N} carries no Cesaro-weighted mass (support only at j = n_N?)")
        t4 = float(np.sum(b ** 4))
        t4_ratio = t4 * hi / big_r**2 if big_r > 0 else math.inf
        hsch = scheme_from_arrays(js, b, np.zeros_like(b), int(hi),
                                  {"name": "sz_block", "N": int(N)})
        denom = math.sqrt(big_r * float(clamped_log(hi)))
        maxima = np.empty(trials)
        for t in range(trials):
            series = randomize(hsch, model, seed_spec, t, lane=int(N))
            maxima[t] = sup_bracket(series, 1.0, oversample=oversample, refine=False).lower
        normed = maxima / denom
        frac = {c: float(np.mean(normed < c)) for c in c_grid}
        q05, q50, q95 = (float(np.quantile(normed, q)) for q in (0.05, 0.50, 0.95))
        rows.append(SzRow(n_index=int(N), n=int(hi), big_r=big_r, t4_ratio=t4_ratio,
                          q05=q05, q50=q50, q95=q95, frac_below=frac))
    return SzReport(rows=tuple(rows), trials=trials)


# -- Riesz probe ------------------------------------------------------------------

@dataclass(frozen=True)
class RieszRow:
    offset: int
    pattern: tuple
    ratio: float          # certified lower bound of sup / sum |c|


@dataclass(frozen=True)
class RieszReport:
    n_terms: int
    rows: tuple
    c_emp: float          # min ratio over all tested configurations


RIESZ_CSV_HEADER = ["offset", "pattern", "ratio"]


def riesz_probe(n_terms: int, offsets: Sequence[int] = (0,),
                c_values: Optional[Sequence[float]] = None,
                theta_oversample: float = 64.0,
                sign_patterns: bool = False) -> RieszReport:
    """Certified lower bounds for || sum c_j cos((N + 4^j) theta) || / sum |c_j|.

    With all-equal positive coefficients the sup is attained at theta = 0
    and every ratio is exactly 1; scanning sign patterns (first sign fixed
    by symmetry) probes the nontrivial absolute constant.
    """
    if not (1 <= n_terms <= 8):
        fail("DOMAIN", f"n_terms must lie in 1..8, got {n_terms}")
    c = np.ones(n_terms) if c_values is None else np.asarray(c_values, dtype=float)
    if len(c) != n_terms or np.any(c < 0):
        fail("DOMAIN", "need n_terms coefficients with c_j >= 0")
    total = float(np.sum(np.abs(c)))
    if total == 0.0:
        fail("DOMAIN", "coefficients must not all vanish")
    freqs = np.array([4 ** j for j in range(1, n_terms + 1)], dtype=np.int64)
    if sign_patterns and n_terms > 1:
        from itertools import product
        patterns = [(1,) + p for p in product((1, -1), repeat=n_terms - 1)]
    else:
        patterns = [(1,) * n_terms]
    rows = []
    for off in offsets:
        for pat in patterns:
            vals = c * np.asarray(pat, dtype=float)
            sch = scheme_from_arrays(freqs + int(off), vals, np.zeros_like(vals),
                                     int(freqs[-1] + off),
                                     {"name": "riesz_comb", "offset": int(off)})
            b = sup_bracket(unit_series(sch), 1.0, oversample=theta_oversample, refine=True)
            rows.append(RieszRow(offset=int(off), pattern=pat, ratio=b.lower / total))
    c_emp = min(r.ratio for r in rows)
    return RieszReport(n_terms=n_terms, rows=tuple(rows), c_emp=c_emp)


# -- Cesaro domination ---------------------------------------------------------------

@dataclass(frozen=True)
class DominationReport:
    cases: int
    violations: int
    worst_margin: float    # min over cases of upper(u) - lower(sigma_n u)


def cesaro_domination_check(trials: int, seed_spec: SeedSpec,
                            degree: int = 200, radii: Sequence[float] = (0.5, 0.9),
                            n_list: Sequence[int] = (10, 100),
                            oversample: float = 16.0,
                            rel_slack: float = 1e-9) -> DominationReport:
    """No Cesaro mean may exceed the certified sup of the function."""
    cases = 0
    violations = 0
    worst = math.inf
    model = make_model("rademacher")
    for t in range(trials):
        scheme = random_scheme(seed_spec, t, degree)
        series = randomize(scheme, model, seed_spec, t)
        for r in radii:
            full = sup_bracket(series, r, oversample=oversample, refine=False)
            for n in n_list:
                ces = sup_bracket(cesaro_mean(series, n), r,
                                  oversample=oversample, refine=True)
                margin = full.upper - ces.lower
                worst = min(worst, margin)
                cases += 1
                if margin < -rel_slack * max(1.0, full.upper):
                    violations += 1
    return DominationReport(cases=cases, violations=violations, worst_margin=worst)


# -- growth fitting --------------------------------------------------------------------

@dataclass(frozen=True)
class FitRow:
    name: str
    slope: float


@dataclass(frozen=True)
class FitResult:
    rows: tuple           # sorted flattest first

    @property
    def best(self) -> str:
        return self.rows[0].name


def fit_growth(report: EnsembleReport, candidates: Optional[Sequence[str]] = None) -> FitResult:
    """Rank candidates by |slope| of log(median ratio) against checkpoint index."""
    names = list(candidates) if candidates is not None else list(report.candidate_ratios)
    if len(report.radii) < 3:
        fail("INSUFFICIENT_RADII", f"need >= 3 radii, got {len(report.radii)}")
    idx = np.arange(len(report.radii), dtype=float)
    rows = []
    for name in names:
        if name in report.candidate_ratios:
            ratios = np.asarray(report.candidate_ratios[name], dtype=float)
        else:
            fn = resolve_candidate(name)
            ratios = np.asarray(report.lower_med) / fn(np.asarray(report.n_of_r))
        if np.any(ratios <= 0):
            slope = math.inf
        else:
            slope = float(np.polyfit(idx, np.log(ratios), 1)[0])
        rows.append(FitRow(name=name, slope=slope))
    rows.sort(key=lambda r: abs(r.slope))
    return FitResult(rows=tuple(rows))
