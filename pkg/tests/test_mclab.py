import json
import math

import numpy as np
import pytest

from growthlab import (GrowthLabError, NuSequence, SeedSpec, block_sequence,
                       cesaro_domination_check, fit_growth, make_model, make_weight,
                       random_scheme, riesz_probe, run_growth_ensemble,
                       salem_zygmund_probe, saturating_scheme, scheme_from_provenance)
from growthlab.mclab import EnsembleReport, ExperimentConfig, config_from_json

W1 = make_weight("power", 1.0)


def small_config(**kw):
    base = dict(scheme={"name": "loglog", "k_max": 2}, model={"kind": "rademacher"},
                seed=31, trials=16, radii=[0.5, 0.9])
    base.update(kw)
    return ExperimentConfig(**base)


# -- ensembles ---------------------------------------------------------------------

def test_ensemble_zero_scheme():
    cfg = small_config(scheme={"name": "loglog", "k_max": 0}, radii=[0.3, 0.9])
    rep = run_growth_ensemble(cfg)
    assert all(v == 0.0 for v in rep.lower_med)


def test_ensemble_deterministic_bytes():
    cfg = small_config()
    a = run_growth_ensemble(cfg)
    b = run_growth_ensemble(cfg)
    assert a.canonical_bytes() == b.canonical_bytes()


def test_ensemble_thread_count_does_not_change_results():
    r1 = run_growth_ensemble(small_config(threads=1))
    r4 = run_growth_ensemble(small_config(threads=4))
    p1, p4 = r1.canonical_payload(), r4.canonical_payload()
    p1.pop("config"), p4.pop("config")          # configs differ in the threads field
    p1.pop("config_hash"), p4.pop("config_hash")
    assert p1 == p4


def test_ensemble_quantiles_ordered():
    rep = run_growth_ensemble(small_config(trials=40))
    for q10, med, q90 in zip(rep.lower_q10, rep.lower_med, rep.lower_q90):
        assert q10 <= med <= q90


def test_ensemble_budget_guard():
    cfg = small_config(scheme={"name": "loglog", "k_max": 4},
                       radii=[1.0 - 2.0**-16], trials=200, max_evals=1e6)
    with pytest.raises(GrowthLabError) as ei:
        run_growth_ensemble(cfg)
    assert ei.value.code == "BUDGET_EXCEEDED"


def test_ensemble_block_radii_rule():
    cfg = small_config(radii="block")
    rep = run_growth_ensemble(cfg)
    assert rep.radii == (0.5, 0.75, 1.0 - 1.0 / 16.0)


def test_config_json_round_trip():
    cfg = small_config(candidates=("sqrt_log",), oversample=8.0)
    cfg2 = config_from_json(json.loads(json.dumps(cfg.to_json())))
    assert cfg2 == cfg
    assert cfg2.hash == cfg.hash


def test_analytic_flavor_ensemble():
    cfg = small_config(model={"kind": "steinhaus"}, flavor="analytic", trials=8)
    rep = run_growth_ensemble(cfg)
    assert all(v > 0 for v in rep.lower_med)


# -- salem-zygmund probe --------------------------------------------------------------

@pytest.fixture(scope="module")
def sat_scheme():
    blocks = block_sequence(W1, 2.0, 1, 10)
    return saturating_scheme(blocks, NuSequence("sqrt")), blocks


def test_sz_probe_rows(sat_scheme):
    scheme, blocks = sat_scheme
    rep = salem_zygmund_probe(scheme, blocks, make_model("rademacher"), SeedSpec(4),
                              trials=60, n_list=[8, 10])
    assert [r.n for r in rep.rows] == [256, 1024]
    for row in rep.rows:
        assert row.q05 > 0
        assert row.q05 <= row.q50 <= row.q95
        # flatness hypothesis: fourth-moment ratio bounded
        assert row.t4_ratio < 10.0
    assert rep.row_for(8).n == 256


def test_sz_probe_single_mode_degenerate():
    # one interior coefficient: max = |b|, R = b^2, ratio = 1/sqrt(log n)
    blocks = block_sequence(W1, 2.0, 1, 3)
    from growthlab.schemes import scheme_from_arrays
    s = scheme_from_arrays([7], [3.0], [0.0], 7, {"name": "single"})
    rep = salem_zygmund_probe(s, blocks, make_model("rademacher"), SeedSpec(4),
                              trials=5, n_list=[3])
    expect = 1.0 / math.sqrt(math.log(8.0))
    assert rep.rows[0].q50 == pytest.approx(expect, rel=1e-6)


def test_sz_probe_rejects_massless_block():
    # the Cesaro factor vanishes at j = n_N, leaving no weighted mass
    blocks = block_sequence(W1, 2.0, 1, 3)
    from growthlab.schemes import scheme_from_arrays
    s = scheme_from_arrays([8], [3.0], [0.0], 8, {"name": "edge"})
    with pytest.raises(GrowthLabError) as ei:
        salem_zygmund_probe(s, blocks, make_model("rademacher"), SeedSpec(4),
                            trials=5, n_list=[3])
    assert ei.value.code == "EMPTY_BLOCKS" 


def test_sz_probe_determinism(sat_scheme):
    scheme, blocks = sat_scheme
    a = salem_zygmund_probe(scheme, blocks, make_model("rademacher"), SeedSpec(4),
                            trials=10, n_list=[6])
    b = salem_zygmund_probe(scheme, blocks, make_model("rademacher"), SeedSpec(4),
                            trials=10, n_list=[6])
    assert a.rows[0].q50 == b.rows[0].q50


# -- riesz probe -----------------------------------------------------------------------

def test_riesz_single_term_exact():
    rep = riesz_probe(1)
    assert rep.c_emp == pytest.approx(1.0, abs=1e-9)


def test_riesz_all_equal_positive_attained_at_zero():
    for nt in (2, 4, 6):
        rep = riesz_probe(nt)
        assert rep.c_emp == pytest.approx(1.0, abs=1e-9)


def test_riesz_two_terms_certified_half():
    rep = riesz_probe(2, offsets=(0,))
    assert rep.rows[0].ratio >= 0.5


def test_riesz_signed_patterns_positive():
    rep = riesz_probe(3, offsets=(0, 5), sign_patterns=True)
    assert len(rep.rows) == 8
    assert 0.0 < rep.c_emp <= 1.0 + 1e-9


def test_riesz_validation():
    with pytest.raises(GrowthLabError):
        riesz_probe(9)
    with pytest.raises(GrowthLabError):
        riesz_probe(2, c_values=[1.0, -1.0])


# -- cesaro domination ------------------------------------------------------------------

def test_domination_zero_scheme_trivially_passes():
    rep = cesaro_domination_check(2, SeedSpec(8), degree=0, radii=(0.5,), n_list=(1,))
    assert rep.violations == 0


def test_domination_batch():
    rep = cesaro_domination_check(10, SeedSpec(8), degree=150, radii=(0.5, 0.9),
                                  n_list=(10, 100))
    assert rep.cases == 40
    assert rep.violations == 0
    assert rep.worst_margin > -1e-9


# -- fit_growth ---------------------------------------------------------------------------

def synthetic_report(medians, radii):
    m = tuple(medians)
    return EnsembleReport(config={}, config_hash="x", radii=tuple(radii),
                          n_of_r=tuple(1.0 / (1.0 - r) for r in radii),
                          lower_q10=m, lower_med=m, lower_q90=m,
                          upper_q10=m, upper_med=m, upper_q90=m,
                          candidate_ratios={})


def test_fit_growth_exact_candidate_wins():
    radii = [0.9, 0.99, 0.999, 0.9999]
    xs = [1.0 / (1.0 - r) for r in radii]
    meds = [3.0 * math.sqrt(max(1.0, math.log(x))) for x in xs]
    rep = synthetic_report(meds, radii)
    fit = fit_growth(rep, ["sqrt_log", "identity", "sqrt"])
    assert fit.best == "sqrt_log"
    assert abs(fit.rows[0].slope) < 1e-12


def test_fit_growth_single_candidate():
    rep = synthetic_report([1.0, 2.0, 4.0], [0.5, 0.9, 0.99])
    fit = fit_growth(rep, ["identity"])
    assert fit.best == "identity"
    assert len(fit.rows) == 1


def test_fit_growth_needs_radii():
    rep = synthetic_report([1.0, 2.0], [0.5, 0.9])
    with pytest.raises(GrowthLabError) as ei:
        fit_growth(rep, ["identity"])
    assert ei.value.code == "INSUFFICIENT_RADII"


# -- provenance ---------------------------------------------------------------------------

def test_random_scheme_regenerates():
    s = random_scheme(SeedSpec(5), 3, 100, density=0.5)
    s2 = scheme_from_provenance(s.provenance)
    assert np.array_equal(s.support, s2.support)
    assert np.array_equal(s.cos_coeffs, s2.cos_coeffs)
