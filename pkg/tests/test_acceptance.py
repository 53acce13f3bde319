"""Acceptance gate: eight numbered criteria, one printed PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see every line (criterion 6
is in the slow suite; add `-m ""` or run the full suite to include it).

Criteria 3 and 4 encode published targets that the implementation cannot hit
at the stated truncation depth; they run verbatim, report the computed values
next to the targets, and fail. The decision record in the project notes
explains both gaps and the deeper-truncation settings that do reproduce the
targets; those reproductions pass in the module suites.
"""

import time

import numpy as np
import pytest
from conftest import random_valid_spec

from fiegarch import (FiegarchSpec, acvf_ln_sigma2, acvf_ln_x2, delta_coeffs,
                      forecast_ln_sigma2, forecast_mse, forecast_sigma2,
                      k_cov, ks_spectral_test, kurtosis, lambda_asymptote,
                      lambda_coeffs, lambda_oracle, moment_functionals,
                      periodogram, predictor_limits, sample, sigma_g_sq,
                      simulate_path, spectral_density_ln_x2)
from fiegarch._presets import PRESETS, STUDY_DIST
from fiegarch.cli import ExperimentConfig, run_montecarlo
from fiegarch.innovations import GAUSSIAN, InnovationDist, rng_for
from fiegarch.simulate import g_transform

GAU = InnovationDist(GAUSSIAN)
M4 = PRESETS["M4"]


def report(num: int, ok: bool, detail: str) -> str:
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    return line


# ---------------------------------------------------------------- criterion 1

DECAY_KS = (10, 100, 1000, 5000, 10_000, 25_000, 50_000, 100_000)

# frozen decay table: per model, rows lambda_k, Q1(k), Q2(k) at DECAY_KS
DECAY_TABLE = {
    "M1": ((0.26537, 0.07167, 0.02015, 0.00830, 0.00567, 0.00342, 0.00234, 0.00160),
           (0.09426, 0.00904, 0.00090, 0.00018, 0.00009, 0.00004, 0.00002, 0.00001),
           (1.04410, 1.00173, 1.00017, 1.00003, 1.00002, 1.00001, 1.00000, 1.00000)),
    "M2": ((-0.09039, 0.01450, 0.00251, 0.00074, 0.00043, 0.00022, 0.00013, 0.00008),
           (-0.05212, 0.00482, 0.00048, 0.00010, 0.00005, 0.00002, 0.00001, 0.00000),
           (-1.08434, 1.00292, 1.00027, 1.00005, 1.00003, 1.00001, 1.00001, 1.00000)),
    "M3": ((0.31434, 0.07844, 0.02106, 0.00843, 0.00568, 0.00337, 0.00227, 0.00153),
           (0.11647, 0.01077, 0.00107, 0.00021, 0.00011, 0.00004, 0.00002, 0.00001),
           (1.08789, 1.00576, 1.00056, 1.00011, 1.00006, 1.00002, 1.00001, 1.00001)),
    "M4": ((0.36874, 0.06738, 0.01517, 0.00539, 0.00345, 0.00192, 0.00123, 0.00079),
           (0.16178, 0.01297, 0.00128, 0.00026, 0.00013, 0.00005, 0.00003, 0.00001),
           (1.26414, 1.01350, 1.00129, 1.00026, 1.00013, 1.00005, 1.00003, 1.00001)),
    "M5": ((0.12291, 0.03897, 0.01207, 0.00531, 0.00373, 0.00234, 0.00164, 0.00115),
           (0.03977, 0.00408, 0.00041, 0.00008, 0.00004, 0.00002, 0.00001, 0.00000),
           (0.97189, 0.99720, 0.99972, 0.99994, 0.99997, 0.99999, 0.99999, 1.00000)),
    "M6": ((0.05472, 0.01599, 0.00435, 0.00174, 0.00117, 0.00070, 0.00047, 0.00032),
           (0.02027, 0.00219, 0.00022, 0.00004, 0.00002, 0.00001, 0.00000, 0.00000),
           (0.91632, 0.99192, 0.99919, 0.99984, 0.99992, 0.99997, 0.99998, 0.99999)),
}


def test_criterion_1_decay_table_reproduced():
    t0 = time.perf_counter()
    worst = 0.0
    where = ""
    for name, spec in PRESETS.items():
        lam = lambda_coeffs(spec, 100_000)
        rep = lambda_asymptote(spec, DECAY_KS, lam)
        want_lam, want_q1, want_q2 = DECAY_TABLE[name]
        assert lam.values[0] == 1.0
        for j, k in enumerate(DECAY_KS):
            for col, got, want in (("lambda", lam.values[k], want_lam[j]),
                                   ("Q1", rep.q1[j], want_q1[j]),
                                   ("Q2", rep.q2[j], want_q2[j])):
                err = abs(got - want)
                if err > worst:
                    worst, where = err, f"{name} {col} k={k}"
    elapsed = time.perf_counter() - t0
    ok = worst <= 5e-6 and elapsed < 60.0
    line = report(1, ok, f"144 table cells, worst |err|={worst:.2e} at {where} "
                         f"(tol 5e-6), {elapsed:.2f}s at m=100,000")
    assert ok, line


# ---------------------------------------------------------------- criterion 2

# per law: E|Z|, E(|Z| ln Z^2), E(ln Z^2), Var(ln Z^2), then sigma_g^2 and K
# evaluated at the M4 asymmetry pair
FUNCTIONAL_TABLE = {
    "gaussian": (0.7979, 0.0925, -1.2704, 4.9348, 0.0559, 0.3088),
    "ged15": (0.7674, 0.0975, -1.4545, 5.4469, 0.0596, 0.3389),
}


def test_criterion_2_moment_functionals_reproduced():
    t0 = time.perf_counter()
    worst = 0.0
    for dist, key in ((GAU, "gaussian"), (STUDY_DIST, "ged15")):
        f = moment_functionals(dist)
        got = (f.mu_abs, f.m_abslnz2, f.e_lnz2, f.v_lnz2,
               sigma_g_sq(M4, f), k_cov(M4, f))
        for g, w in zip(got, FUNCTIONAL_TABLE[key]):
            worst = max(worst, abs(g - w))
    ok = worst <= 5e-5
    line = report(2, ok, f"12 functional values across two laws, worst "
                         f"|err|={worst:.2e} (tol 5e-5), "
                         f"{time.perf_counter() - t0:.2f}s")
    assert ok, line


# ---------------------------------------------------------------- criterion 3

def test_criterion_3_kurtosis_value_at_stated_depth():
    t0 = time.perf_counter()
    got = kurtosis(M4, GAU, m=50_000)
    deeper = kurtosis(M4, GAU, m=70_000)
    ok = abs(got - 5.6733) <= 1e-3
    line = report(3, ok, f"computed {got:.5f} at m=50,000 vs target "
                         f"5.6733 +-1e-3; the target is reproduced at "
                         f"m=70,000 (computed {deeper:.5f}), "
                         f"{time.perf_counter() - t0:.2f}s")
    assert ok, line


# ---------------------------------------------------------------- criterion 4

# frozen long-horizon levels, x100: L1 then L2 for M1..M6
LIMIT_TABLE = {
    "M1": (0.1392, 0.1775), "M2": (0.1323, 0.1431), "M3": (0.1252, 0.1581),
    "M4": (0.0728, 0.0919), "M5": (0.2760, 0.2966), "M6": (0.1252, 0.1298),
}


def test_criterion_4_predictor_limits_at_stated_depth():
    t0 = time.perf_counter()
    diffs = {}
    deep_worst = 0.0
    for name, spec in PRESETS.items():
        lim = predictor_limits(spec, STUDY_DIST, m=50_000)
        want_l1, want_l2 = LIMIT_TABLE[name]
        diffs[name] = (100.0 * lim["L1"] - want_l1, 100.0 * lim["L2"] - want_l2)
        deep = predictor_limits(spec, STUDY_DIST, m=100_000)
        deep_worst = max(deep_worst, abs(100.0 * deep["L1"] - want_l1),
                         abs(100.0 * deep["L2"] - want_l2))
    worst = max(max(abs(a), abs(b)) for a, b in diffs.values())
    offenders = ", ".join(f"{n} dL2={d2:+.1e}" for n, (d1, d2) in diffs.items()
                          if max(abs(d1), abs(d2)) > 5e-5)
    ok = worst <= 5e-5
    line = report(4, ok, f"L1/L2 x100 at m=50,000, worst |err|={worst:.2e} "
                         f"(tol 5e-5; over: {offenders or 'none'}); all "
                         f"twelve match at m=100,000 (worst {deep_worst:.2e}), "
                         f"{time.perf_counter() - t0:.2f}s")
    assert ok, line


# ---------------------------------------------------------------- criterion 5

def test_criterion_5_recursion_agrees_with_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        spec = random_valid_spec(rng)
        got = lambda_coeffs(spec, 500).values
        want = lambda_oracle(spec, 500).values
        worst = max(worst, float(np.max(np.abs(got - want))))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 60.0
    line = report(5, ok, f"100 random specs (orders <= 4, d in (-0.9, 0.49)), "
                         f"k <= 500, worst |err|={worst:.2e} (tol 1e-10), "
                         f"{elapsed:.1f}s")
    assert ok, line


# ---------------------------------------------------------------- criterion 6

@pytest.mark.slow
def test_criterion_6_scaled_replication_study(tmp_path):
    t0 = time.perf_counter()
    cfg = ExperimentConfig(models=("M4",), re=50, n_list=(2000,),
                           m_burn=10_000, holdout=50, seed=0,
                           out=str(tmp_path), jobs=4)
    run_montecarlo(cfg)
    import csv
    with open(tmp_path / "M4_n2000_estimates.csv", newline="") as fh:
        rows = {r["param"]: r for r in csv.DictReader(fh)}
    mean_d = float(rows["d"]["mean"])
    sd_d = float(rows["d"]["sd"])
    mean_ok = abs(mean_d - 0.2950) <= 0.06
    sd_ok = 0.1338 / 2.0 <= sd_d <= 0.1338 * 2.0
    ok = mean_ok and sd_ok
    line = report(6, ok, f"re=50 n=2000: mean d={mean_d:.4f} "
                         f"(target 0.2950 +-0.06), sd={sd_d:.4f} "
                         f"(target 0.1338 within factor 2), failures="
                         f"{rows['d']['failures']}, "
                         f"{time.perf_counter() - t0:.0f}s")
    assert ok, line


# ---------------------------------------------------------------- criterion 7

def test_criterion_7_forecast_mse_law():
    t0 = time.perf_counter()
    M, RE, H = 50_000, 1000, 5
    mu = moment_functionals(GAU).mu_abs
    z_hist = sample(GAU, M, rng_for(44_000, 0))
    g_hist = g_transform(z_hist, M4.theta, M4.gamma, mu)
    fc = forecast_ln_sigma2(M4, g_hist, H)
    sq = np.zeros(H)
    for rep in range(RE):
        z_fut = sample(GAU, H - 1, rng_for(44_000, 1 + rep))
        g_fut = g_transform(z_fut, M4.theta, M4.gamma, mu)
        for h in (2, 5):
            ext = np.concatenate((g_hist, g_fut[: h - 1]))
            actual = forecast_ln_sigma2(M4, ext, 1)[0]
            sq[h - 1] += (actual - fc[h - 1]) ** 2
    emp = sq / RE
    theory = forecast_mse(M4, GAU, H)["mse_ln_sigma2"]
    rel2 = emp[1] / theory[1] - 1.0
    rel5 = emp[4] / theory[4] - 1.0
    ok = abs(rel2) <= 0.10 and abs(rel5) <= 0.10
    line = report(7, ok, f"1,000 continuations: h=2 rel={rel2:+.2%}, "
                         f"h=5 rel={rel5:+.2%} (tol 10%), "
                         f"{time.perf_counter() - t0:.1f}s")
    assert ok, line


# ---------------------------------------------------------------- criterion 8

def _graded_panels(n_panels=200, n_nodes=24, power=3.0):
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    edges = np.pi * np.linspace(0.0, 1.0, n_panels + 1) ** power
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    w = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    wt = (half[:, None] * weights[None, :]).ravel()
    return w, wt


def test_criterion_8_property_suite():
    t0 = time.perf_counter()
    checks = {}

    # predictor ordering from the exponential's convexity
    g_hist = 0.5 * (-1.0) ** np.arange(200)
    sg2 = sigma_g_sq(M4, moment_functionals(GAU))
    both = forecast_sigma2(M4, g_hist, 50, sg2)
    checks["jensen"] = bool(np.all(both["tilde"] >= both["check"])
                            and np.all(both["tilde"][1:] > both["check"][1:]))

    # error growth in the horizon
    mse = forecast_mse(M4, GAU, 20)
    checks["mse-monotone"] = bool(mse["mse_ln_sigma2"][0] == 0.0
                                  and np.all(np.diff(mse["mse_ln_sigma2"]) >= 0)
                                  and np.all(np.diff(mse["mse_ln_x2"]) >= 0))

    # lag-zero split of the observable process
    f = moment_functionals(GAU)
    g0_sig = acvf_ln_sigma2(M4, GAU, 0)[0]
    g0_x = acvf_ln_x2(M4, GAU, 0)[0]
    checks["acvf-split"] = abs(g0_x - (g0_sig + f.v_lnz2)) <= 1e-9 * abs(g0_x)

    # integrating the spectral density back to the lag-zero value; run on a
    # moderate-memory spec: the closed-form density carries the full squared
    # weight sum while the lag-zero routine truncates it, and near the upper
    # d edge that tail alone is a few 1e-3 of gamma(0)
    slow = FiegarchSpec(d=0.2, omega=-7.0, theta=-0.15, gamma=0.25,
                        beta=(0.5,))
    w, wt = _graded_panels()
    integral = 2.0 * np.dot(spectral_density_ln_x2(slow, GAU, w), wt)
    g0_slow = acvf_ln_x2(slow, GAU, 0)[0]
    inv_rel = abs(integral - g0_slow) / g0_slow
    checks["spectral-inversion"] = inv_rel <= 1e-3

    # discrete energy identity on an arbitrary series, odd length
    y = np.random.default_rng(8).normal(size=1001)
    pg = periodogram(y)
    par_rel = abs((4.0 * np.pi / 1001) * pg.sum() - np.var(y)) / np.var(y)
    checks["parseval"] = par_rel <= 1e-12

    # fractional filter against its inverse
    ok_delta = True
    for d in (0.3578, -0.4, 0.49):
        conv = np.convolve(delta_coeffs(d, 200).values,
                           delta_coeffs(-d, 200).values)[:201]
        impulse = np.zeros(201)
        impulse[0] = 1.0
        ok_delta &= bool(np.max(np.abs(conv - impulse)) <= 1e-12)
    checks["delta-inverse"] = ok_delta

    # bit-for-bit reruns
    a = simulate_path(M4, GAU, 500, m_burn=300, seed=77)
    b = simulate_path(M4, GAU, 500, m_burn=300, seed=77)
    checks["seed-determinism"] = (a.x.tobytes() == b.x.tobytes()
                                  and a.sigma2.tobytes() == b.sigma2.tobytes()
                                  and a.z.tobytes() == b.z.tobytes())

    # test size under the truth at level 0.05 over 100 seeds
    n = 2000
    freqs = 2.0 * np.pi * np.arange(1, (n - 1) // 2 + 1) / n
    fvals = spectral_density_ln_x2(M4, GAU, freqs)
    rejections = 0
    for seed in range(100):
        path = simulate_path(M4, GAU, n, m_burn=20_000, seed=seed)
        rep = ks_spectral_test(np.log(path.x ** 2), lambda _: fvals, alpha=0.05)
        rejections += int(rep.reject)
    checks["ks-size"] = rejections <= 10

    failed = [name for name, good in checks.items() if not good]
    ok = not failed
    line = report(8, ok, f"{len(checks) - len(failed)}/{len(checks)} holds "
                         f"(inversion rel={inv_rel:.1e}, parseval rel="
                         f"{par_rel:.1e}, ks rejections={rejections}/100"
                         f"{'; failed: ' + ', '.join(failed) if failed else ''}), "
                         f"{time.perf_counter() - t0:.1f}s")
    assert ok, line
