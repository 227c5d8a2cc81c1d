"""End-to-end acceptance checks; each test reports one PASS/FAIL line in the terminal summary."""
import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from charfun import BACKEND
from charfun import cf as C
from charfun.cli import main
from charfun.inversion import InversionOptions, cf2dist, chi2_quantile, invert_cdf, quantile, resolve_grid
from charfun.oracle import (
    SimulationConfig,
    ks_critical_value,
    ks_distance,
    simulate_bartlett,
    simulate_quadform,
    simulate_wilks,
    simulate_wilks_cs,
)

NU = [1] * 5 + [2] * 5 + [3] * 5
PROBS = [0.9, 0.95, 0.99]
GOLDEN = Path(__file__).parent / "golden"
CLI_BARTLETT = ["bartlett", "--k", "15", "--nu", "1,1,1,1,1,2,2,2,2,2,3,3,3,3,3", "--probs", "0.9,0.95,0.99", "--xmin", "0"]


def test_bartlett_exact_quantiles(criterion):
    criterion(1, "Bartlett k=15 exact quantiles 20.3969/22.8508/27.9221 within 1e-3, runtime < 1 s")
    start = time.perf_counter()
    res = cf2dist(C.bartlett(15, NU), probs=PROBS, opts=InversionOptions(x_min=0))
    elapsed = time.perf_counter() - start
    q = [v for _, v in res.quantiles]
    np.testing.assert_allclose(q, [20.3969, 22.8508, 27.9221], rtol=0, atol=1e-3)
    assert elapsed < 1.0


def test_bartlett_coefficients(criterion):
    criterion(2, "Bartlett coefficients b=1.2175, c=2.6162 within 5e-5")
    co = C.bartlett_coefficients(15, NU)
    assert abs(co.b - 1.2175) < 5e-5
    assert abs(co.c - 2.6162) < 5e-5


def test_chi2_approximate_quantiles(criterion):
    criterion(3, "chi2_quantile(p, 14) = 21.0641/23.6848/29.1412 within 1e-3 by own inversion")
    q = [chi2_quantile(p, 14) for p in PROBS]
    np.testing.assert_allclose(q, [21.0641, 23.6848, 29.1412], rtol=0, atol=1e-3)


def test_closed_form_cdf_oracle(criterion):
    criterion(4, "chi2 CDF oracle: df=2 sup-error < 1e-5 on [0,20]; df=1 < 1e-4 on [0.05,20]")
    opts = InversionOptions(n_nodes=1 << 18, x_min=0, x_max=40)
    x2 = np.linspace(0, 20, 2001)
    c2 = C.chi2(2)
    err2 = np.max(np.abs(invert_cdf(c2, x2, resolve_grid(c2, opts)) - (1 - np.exp(-x2 / 2))))
    x1 = np.linspace(0.05, 20, 2001)
    c1 = C.chi2(1)
    exact1 = np.array([math.erf(math.sqrt(v / 2)) for v in x1])
    err1 = np.max(np.abs(invert_cdf(c1, x1, resolve_grid(c1, opts)) - exact1))
    assert err2 < 1e-5
    assert err1 < 1e-4


def test_closed_forms_vs_truncated_product(criterion):
    criterion(5, "CvM/AD closed form vs product with J=10^4 terms, max |diff| < 1e-6 on t in [-50,50]")
    t = np.linspace(-50, 50, 2001)
    cvm = np.max(np.abs(C.cf_cvm_closed(t) - C.cf_weighted_chi2_product(t, C.cvm_weight, 10_000)))
    ad = np.max(np.abs(C.cf_ad_closed(t) - C.cf_weighted_chi2_product(t, C.ad_weight, 10_000)))
    print(f"max |closed - product|: cvm {cvm:.3e}, ad {ad:.3e}")
    assert cvm < 1e-6
    assert ad < 1e-6


def test_monte_carlo_equivalence(criterion):
    criterion(6, "KS distance vs 10^5 oracle draws < 1.63/sqrt(10^5) for four statistics, runtime < 60 s")
    n = 100_000
    cfg = SimulationConfig(n, seed=20261015)
    cases = [
        (C.bartlett(15, NU), InversionOptions(x_min=0), lambda: simulate_bartlett(15, NU, cfg)),
        (C.wilks_log(10, 23, 6), InversionOptions(), lambda: simulate_wilks(10, 23, 6, cfg)),
        (C.wilks_cs_log(10, 30, 7), InversionOptions(), lambda: simulate_wilks_cs(10, 30, 7, cfg)),
        (C.quadform([2, 1, 0.5]), InversionOptions(x_min=0), lambda: simulate_quadform([2, 1, 0.5], cfg)),
    ]
    start = time.perf_counter()
    distances = []
    for c, opts, draw in cases:
        g = resolve_grid(c, opts)
        distances.append(ks_distance(draw().samples, lambda x: invert_cdf(c, x, g)))
    elapsed = time.perf_counter() - start
    print("KS distances:", ", ".join(f"{d:.3e}" for d in distances))
    assert max(distances) < ks_critical_value(n)
    assert elapsed < 60


SHIPPED = [
    ("chi2", C.chi2(3), InversionOptions(x_min=0)),
    ("quadform", C.quadform([2, 1, 0.5]), InversionOptions(x_min=0)),
    ("cvm", C.cvm(), InversionOptions(x_min=0)),
    ("ad", C.ad(), InversionOptions(x_min=0)),
    ("log_beta", C.log_beta(2, 3, -1), InversionOptions()),
    ("log_means_ratio", C.log_means_ratio(3, [1, 2, 0.5], [0.2, 0.3, 0.5], -1.5), InversionOptions()),
    ("bartlett", C.bartlett(15, NU), InversionOptions(x_min=0)),
    ("wilks", C.wilks_log(10, 23, 6), InversionOptions()),
    ("wilks_cs", C.wilks_cs_log(10, 30, 7), InversionOptions()),
]


def test_quantile_round_trip(criterion):
    criterion(7, "|cdf(quantile(p)) - p| <= 1e-7 for every shipped statistic, p in {.01,.1,.5,.9,.99}")
    probs = [0.01, 0.1, 0.5, 0.9, 0.99]
    worst = {}
    for name, c, opts in SHIPPED:
        g = resolve_grid(c, opts)
        qs = np.array([v for _, v in quantile(c, probs, g, opts)])
        worst[name] = float(np.max(np.abs(invert_cdf(c, qs, g) - probs)))
    print("round-trip errors:", worst)
    assert max(worst.values()) <= 1e-7


def test_invariant_suite(criterion):
    criterion(8, "cf(0)=1, |cf|<=1, Hermitian symmetry; chi2 additivity 1e-14; Wilks p=1; Bartlett decomposition 1e-12")
    rng = np.random.default_rng(8)
    t = rng.uniform(-100, 100, 1000)
    for _, c, _ in SHIPPED + [("cvm_product", C.cvm(terms=1000), None), ("ad_product", C.ad(terms=1000), None)]:
        v = c(t)
        assert c(0.0) == 1
        assert np.all(np.abs(v) <= 1 + 1e-12)
        assert np.max(np.abs(c(-t) - np.conj(v))) <= 1e-12
    grid = np.linspace(-20, 20, 801)
    assert np.max(np.abs(C.product([C.chi2(1), C.chi2(2)])(grid) - C.chi2(3)(grid))) < 1e-14
    np.testing.assert_array_equal(C.cf_wilks_log(grid, 1, 9, 4, -1.0), C.cf_log_beta(grid, 4.5, 2.0, -1.0))
    co = C.bartlett_coefficients(15, NU)
    nu = np.array(NU, dtype=float)
    composed = np.exp(1j * co.c / co.b * grid) * C.cf_log_means_ratio(
        grid, 15, nu / 2, nu / co.nu_total, -co.nu_total / co.b
    )
    assert np.max(np.abs(C.cf_bartlett(grid, 15, NU) - composed)) < 1e-12


def test_grid_refinement(criterion):
    criterion(9, "Bartlett 0.95-quantile moves < 1e-4 when n_nodes doubles 1000 -> 2000")
    c = C.bartlett(15, NU)
    q = []
    for n in (1000, 2000):
        opts = InversionOptions(n_nodes=n, x_min=0)
        q.append(quantile(c, [0.95], resolve_grid(c, opts), opts)[0][1])
    assert abs(q[1] - q[0]) < 1e-4


def test_cli_golden(criterion, capsys):
    criterion(10, "bartlett CLI example reproduces the stored JSON byte-for-byte")
    golden = (GOLDEN / f"bartlett.{BACKEND}.json").read_bytes()
    assert main(CLI_BARTLETT) == 0
    out = capsys.readouterr().out.encode("utf-8")
    assert out == golden
    assert json.loads(out)["quantiles"][0]["q"] == pytest.approx(20.3969, abs=1e-3)
