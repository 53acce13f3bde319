"""Command line front end and the Monte Carlo experiment harness.

Subcommands: coeffs, simulate, fit, forecast, diagnose, montecarlo. All table
output is CSV; every file with scaled cells names the scaling in its header
(for example mse_sigma2_x10000), and each table is written twice: once with
full-precision values and once rounded for side-by-side comparison with
printed tables. Exit codes: 0 success, 2 usage or input error, 3 numeric
failure.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._presets import PRESETS, STUDY_DIST
from .coeffs import FiegarchSpec, lambda_asymptote, lambda_coeffs, validate
from .diagnostics import (ks_spectral_test, periodogram, sample_acvf,
                          sample_asymmetry, sample_kurtosis)
from .errors import FiegarchError, GammaPole
from .estimate import FitOptions, fit, mc_stats, reconstruct
from .forecast import (forecast_ln_sigma2, forecast_mse, forecast_sigma2,
                       g_history, predictor_limits)
from .innovations import GAUSSIAN, GED, InnovationDist, rng_for
from .moments import spectral_density_ln_x2
from .simulate import simulate_path

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

ROUND_DIGITS = 4


# ---------------------------------------------------------------------------
# formatting and file helpers

def _fmt(v) -> str:
    """Shortest representation that round-trips the value."""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _fmt_rounded(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), f".{ROUND_DIGITS}f")


def _write_csv(path: str, header, rows, cell=_fmt) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell(v) for v in row])


def _write_table(out_dir: str, stem: str, header, rows) -> list[str]:
    """Write stem.csv at full precision plus stem_rounded.csv; return paths."""
    os.makedirs(out_dir, exist_ok=True)
    full = os.path.join(out_dir, stem + ".csv")
    twin = os.path.join(out_dir, stem + "_rounded.csv")
    _write_csv(full, header, rows)
    _write_csv(twin, header, rows, cell=_fmt_rounded)
    return [full, twin]


def _emit(args, stem: str, header, rows) -> None:
    """CSV to --out (with rounded twin) or, without --out, to stdout."""
    if args.out:
        for path in _write_table(args.out, stem, header, rows):
            print(f"wrote {path}")
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


# ---------------------------------------------------------------------------
# argument parsing helpers

def _parse_float_list(text: str) -> tuple[float, ...]:
    toks = [t for t in text.replace(" ", "").split(",") if t]
    return tuple(float(t) for t in toks)


def _parse_int_list(text: str) -> tuple[int, ...]:
    toks = [t for t in text.replace(" ", "").split(",") if t]
    return tuple(int(t) for t in toks)


def _spec_from_args(args, parser) -> FiegarchSpec:
    if getattr(args, "preset", None):
        name = args.preset.upper()
        if name not in PRESETS:
            parser.error(f"unknown preset {args.preset!r}; choose from "
                         f"{', '.join(sorted(PRESETS))}")
        return PRESETS[name]
    if args.d is None:
        parser.error("need --preset or an inline spec (at least --d)")
    try:
        alpha = _parse_float_list(args.alpha) if args.alpha else ()
        beta = _parse_float_list(args.beta) if args.beta else ()
    except ValueError as exc:
        parser.error(f"bad coefficient list: {exc}")
    if args.p is not None:
        if alpha and len(alpha) != args.p:
            parser.error(f"--p {args.p} disagrees with --alpha of length {len(alpha)}")
        if not alpha:
            alpha = (0.0,) * args.p
    if args.q is not None:
        if beta and len(beta) != args.q:
            parser.error(f"--q {args.q} disagrees with --beta of length {len(beta)}")
        if not beta:
            beta = (0.0,) * args.q
    try:
        return FiegarchSpec(d=args.d, omega=args.omega, theta=args.theta,
                            gamma=args.gamma, alpha=alpha, beta=beta)
    except (ValueError, FiegarchError) as exc:
        parser.error(f"invalid model: {exc}")


def _add_spec_flags(sub) -> None:
    sub.add_argument("--preset", help="named model, one of " + ", ".join(sorted(PRESETS)))
    sub.add_argument("--d", type=float, default=None, help="memory parameter")
    sub.add_argument("--omega", type=float, default=0.0)
    sub.add_argument("--theta", type=float, default=0.0)
    sub.add_argument("--gamma", type=float, default=0.0)
    sub.add_argument("--alpha", help="comma list of numerator coefficients")
    sub.add_argument("--beta", help="comma list of denominator coefficients")
    sub.add_argument("--p", type=int, default=None,
                     help="numerator order (zero coefficients unless --alpha)")
    sub.add_argument("--q", type=int, default=None,
                     help="denominator order (zero coefficients unless --beta)")


def _add_dist_flags(sub) -> None:
    sub.add_argument("--dist", choices=("gaussian", "ged"), default="gaussian",
                     help="innovation law (default gaussian)")
    sub.add_argument("--nu", type=float, default=1.5,
                     help="GED shape when --dist ged (default 1.5)")


def _dist_from_args(args) -> InnovationDist:
    if args.dist == "ged":
        return InnovationDist(GED, nu=args.nu)
    return InnovationDist(GAUSSIAN)


def _add_common_flags(sub) -> None:
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default=None, help="output directory")


def _read_series(path: str, column: str | None, parser) -> np.ndarray:
    """One numeric column from a CSV, by name or by being the only choice."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        parser.error(f"cannot read {path}: {exc}")
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if not rows:
        parser.error(f"{path}: no data rows")

    def is_numeric(cell: str) -> bool:
        try:
            float(cell)
            return True
        except ValueError:
            return False

    has_header = not all(is_numeric(c) for c in rows[0])
    header = [c.strip() for c in rows[0]] if has_header else None
    data_rows = rows[1:] if has_header else rows
    first_line = 2 if has_header else 1
    if not data_rows:
        parser.error(f"{path}: header but no data rows")

    if column is not None:
        if header is None:
            parser.error(f"{path}: --column {column!r} needs a header row")
        if column not in header:
            parser.error(f"{path}: no column {column!r}; header has {header}")
        idx = header.index(column)
    elif header is not None and "x" in header:
        idx = header.index("x")
    elif len(rows[0]) == 1:
        idx = 0
    else:
        what = header if header is not None else f"{len(rows[0])} unnamed columns"
        parser.error(f"{path}: pick a column with --column (found {what})")

    out = np.empty(len(data_rows))
    for i, row in enumerate(data_rows):
        if idx >= len(row):
            parser.error(f"{path} line {first_line + i}: only {len(row)} fields")
        try:
            out[i] = float(row[idx])
        except ValueError:
            parser.error(f"{path} line {first_line + i}: "
                         f"not a number: {row[idx]!r}")
    return out


# ---------------------------------------------------------------------------
# coeffs

def cmd_coeffs(args, parser) -> int:
    spec = _spec_from_args(args, parser)
    if args.k:
        try:
            ks = sorted(set(_parse_int_list(args.k)))
        except ValueError as exc:
            parser.error(f"bad --k list: {exc}")
        if not ks:
            parser.error("--k list is empty")
        if ks[0] < 0:
            parser.error("--k entries must be nonnegative")
    else:
        ks = list(range((args.m if args.m is not None else 20) + 1))
    m = args.m if args.m is not None else max(ks)
    if m < max(ks):
        parser.error(f"--m {m} is smaller than the largest requested k {max(ks)}")
    lam = lambda_coeffs(spec, m)
    pos = [k for k in ks if k >= 1]
    q1 = {}
    q2 = {}
    if pos:
        try:
            rep = lambda_asymptote(spec, pos, lam)
            q1 = dict(zip(pos, rep.q1))
            q2 = dict(zip(pos, rep.q2))
        except GammaPole:
            pass  # no hyperbolic reference at integer d <= 0; leave blank
    rows = [(k, lam.values[k], q1.get(k, ""), q2.get(k, "")) for k in ks]
    _emit(args, "coeffs", ("k", "lambda", "q1", "q2"), rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate

def cmd_simulate(args, parser) -> int:
    spec = _spec_from_args(args, parser)
    dist = _dist_from_args(args)
    path = simulate_path(spec, dist, args.n, m_burn=args.m_burn, seed=args.seed)
    rows = [(t + 1, path.x[t], path.sigma2[t]) for t in range(args.n)]
    _emit(args, "path", ("t", "x", "sigma2"), rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# fit

def cmd_fit(args, parser) -> int:
    x = _read_series(args.input, args.column, parser)
    p = args.p or 0
    q = args.q or 0
    k = p + q + 4
    if len(x) < 5 * k:
        print(f"error: insufficient data: n={len(x)}, but a {k}-parameter fit "
              f"needs at least {5 * k} observations", file=sys.stderr)
        return EXIT_USAGE
    res = fit(x, p=p, q=q, options=FitOptions(seed=args.seed))
    names = _param_names(p, q)
    est = _spec_to_eta(res.spec_hat)
    rep = validate(res.spec_hat)

    print(f"fitted model: p={p} q={q}  n={len(x)}")
    print(f"loglik {res.loglik:.6f}  AIC {res.info_criteria['AIC']:.6f}  "
          f"BIC {res.info_criteria['BIC']:.6f}  HQC {res.info_criteria['HQC']:.6f}")
    print(f"converged {res.converged}  iterations {res.iterations}  "
          f"hessian_pd {res.hessian_pd}")
    print(f"{'param':<8}{'estimate':>14}{'stderr':>14}")
    for name, e, s in zip(names, est, res.stderr):
        print(f"{name:<8}{e:>14.6f}{s:>14.6f}")
    print(f"validity: weakly_stationary={rep.weakly_stationary} "
          f"strictly_valid={rep.strictly_valid} invertible={rep.invertible} "
          f"beta_stable={rep.beta_stable} common_roots={rep.common_roots_flag}")

    if args.out:
        rows = [(name, e, s) for name, e, s in zip(names, est, res.stderr)]
        rows += [("loglik", res.loglik, ""),
                 ("AIC", res.info_criteria["AIC"], ""),
                 ("BIC", res.info_criteria["BIC"], ""),
                 ("HQC", res.info_criteria["HQC"], ""),
                 ("n", len(x), ""),
                 ("p", p, ""), ("q", q, ""),
                 ("converged", res.converged, ""),
                 ("iterations", res.iterations, ""),
                 ("hessian_pd", res.hessian_pd, "")]
        for pathname in _write_table(args.out, "fit", ("name", "value", "stderr"), rows):
            print(f"wrote {pathname}")
    return EXIT_OK


def _param_names(p: int, q: int) -> list[str]:
    return (["d", "omega", "theta", "gamma"]
            + [f"alpha{j + 1}" for j in range(p)]
            + [f"beta{j + 1}" for j in range(q)])


def _spec_to_eta(spec: FiegarchSpec) -> np.ndarray:
    return np.concatenate(([spec.d, spec.omega, spec.theta, spec.gamma],
                           spec.alpha, spec.beta))


def _spec_from_fit_csv(path: str, parser) -> FiegarchSpec:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        parser.error(f"cannot read {path}: {exc}")
    values: dict[str, float] = {}
    for i, row in enumerate(rows[1:], start=2):
        if len(row) < 2 or not row[0]:
            continue
        try:
            values[row[0]] = float(row[1])
        except ValueError:
            continue  # flag rows like converged=True
    for needed in ("d", "omega", "theta", "gamma"):
        if needed not in values:
            parser.error(f"{path}: not a fit report, missing {needed!r}")
    alpha = tuple(values[f"alpha{j}"] for j in
                  range(1, int(values.get("p", 0)) + 1))
    beta = tuple(values[f"beta{j}"] for j in
                 range(1, int(values.get("q", 0)) + 1))
    return FiegarchSpec(d=values["d"], omega=values["omega"],
                        theta=values["theta"], gamma=values["gamma"],
                        alpha=alpha, beta=beta)


# ---------------------------------------------------------------------------
# forecast

def _sample_sigma_g_sq(z: np.ndarray, theta: float, gamma: float) -> float:
    """Plug-in innovation variance of g(Z) from reconstructed residuals."""
    mu_abs = float(np.mean(np.abs(z)))
    m_zabs = float(np.mean(z * np.abs(z)))
    return (theta * theta + gamma * gamma - (gamma * mu_abs) ** 2
            + 2.0 * theta * gamma * m_zabs)


def cmd_forecast(args, parser) -> int:
    x = _read_series(args.input, args.column, parser)
    if args.fit_report:
        spec = _spec_from_fit_csv(args.fit_report, parser)
    else:
        spec = _spec_from_args(args, parser)
    dist = _dist_from_args(args)
    H = args.horizon
    if H < 1:
        parser.error("--horizon must be at least 1")

    rec = reconstruct(spec, x)
    z = rec["z_hat"]
    sg2_hat = _sample_sigma_g_sq(z, spec.theta, spec.gamma)
    g_hist = g_history(z, spec.theta, spec.gamma)
    ln_hat = forecast_ln_sigma2(spec, g_hist, H)
    both = forecast_sigma2(spec, g_hist, H, sg2_hat)
    mse = forecast_mse(spec, dist, H, n_history=len(x), m=args.limit_m)
    lim = predictor_limits(spec, dist, m=args.limit_m)

    print(f"forecast origin n={len(x)}  horizon H={H}")
    print(f"sample sigma_g^2 {sg2_hat!r}")
    print(f"predictor limits: L1 {lim['L1']!r}  L2 {lim['L2']!r}")
    rows = [(h, ln_hat[h - 1], both["check"][h - 1], both["tilde"][h - 1],
             mse["mse_ln_sigma2"][h - 1], mse["mse_ln_x2"][h - 1])
            for h in range(1, H + 1)]
    _emit(args, "forecast",
          ("h", "ln_sigma2_hat", "sigma2_check", "sigma2_tilde",
           "mse_ln_sigma2", "mse_ln_x2"), rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# diagnose

def cmd_diagnose(args, parser) -> int:
    if not args.out:
        parser.error("diagnose writes several files; --out is required")
    x = _read_series(args.input, args.column, parser)
    spec = _spec_from_args(args, parser)
    dist = _dist_from_args(args)
    zeros = int(np.sum(x == 0.0))
    if zeros:
        print(f"error: {zeros} zero entries; ln(x^2) undefined", file=sys.stderr)
        return EXIT_NUMERIC
    y = np.log(x * x)
    n = len(y)

    try:
        report = ks_spectral_test(y, lambda w: spectral_density_ln_x2(spec, dist, w),
                                  alpha=args.level)
    except ValueError as exc:
        parser.error(str(exc))
    pgram = periodogram(y)
    freqs = 2.0 * np.pi * np.arange(1, len(pgram) + 1) / n
    maxlag = min(args.maxlag, n - 1)
    acvf = sample_acvf(y, maxlag)

    written = []
    written += _write_table(args.out, "periodogram", ("k", "omega", "intensity"),
                            [(k + 1, freqs[k], pgram[k]) for k in range(len(pgram))])
    written += _write_table(args.out, "acvf", ("lag", "acvf", "acf"),
                            [(h, acvf[h], acvf[h] / acvf[0]) for h in range(maxlag + 1)])
    written += _write_table(args.out, "cpgram", ("x", "C", "lower", "upper"),
                            [(i + 1, report.y[i], report.lower[i], report.upper[i])
                             for i in range(report.m)])

    grid = (np.arange(1, report.m + 1) - 1.0) / (report.m - 1)
    dev = report.y - grid
    i_hi = int(np.argmax(dev))
    i_lo = int(np.argmin(dev))
    verdict = "rejected" if report.reject else "not rejected"
    lines = [
        f"series length n={n}, ordinates m={report.m}",
        f"alpha={report.alpha}, critical constant k_alpha={report.k_alpha}, "
        f"band half-width={float(report.k_alpha / np.sqrt(report.m - 1))!r}",
        f"largest upward deviation {float(dev[i_hi])!r} at x={i_hi + 1}",
        f"largest downward deviation {float(dev[i_lo])!r} at x={i_lo + 1}",
        f"first boundary crossing index: {report.first_exit_index}",
        f"sample kurtosis of x: {sample_kurtosis(x)!r}",
        f"sample asymmetry of x: {sample_asymmetry(x)!r}",
        f"verdict: spectral shape {verdict} at level {report.alpha}",
    ]
    report_path = os.path.join(args.out, "ks_report.txt")
    with open(report_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    written.append(report_path)
    for path in written:
        print(f"wrote {path}")
    print(lines[-1])
    return EXIT_OK


# ---------------------------------------------------------------------------
# montecarlo

@dataclass(frozen=True)
class ExperimentConfig:
    """One table-regeneration experiment.

    Per-replication randomness is a pure function of (seed, model index,
    replication index), so any execution order and any parallelism degree
    reproduce identical output. Each replication simulates a single path of
    max(n_list) + holdout observations; every n in n_list estimates on the
    last n pre-holdout observations of that same path.
    """

    models: tuple[str, ...] = ("M4",)
    re: int = 50
    n_list: tuple[int, ...] = (2000,)
    m_burn: int = 10_000
    holdout: int = 50
    horizons: tuple[int, ...] = (1, 2, 3, 4, 5)
    seed: int = 0
    out: str = "mc_out"
    jobs: int = 1
    dist_family: str = "ged"
    nu: float = 1.5

    def dist(self) -> InnovationDist:
        if self.dist_family == "gaussian":
            return InnovationDist(GAUSSIAN)
        return InnovationDist(GED, nu=self.nu)

    def check(self) -> None:
        for m in self.models:
            if m not in PRESETS:
                raise ValueError(f"unknown model {m!r}")
        if self.re < 2:
            raise ValueError("re must be at least 2")
        if not self.n_list or any(n < 100 for n in self.n_list):
            raise ValueError("each n must be at least 100")
        if self.m_burn < 1:
            raise ValueError("m_burn must be positive")
        if not self.horizons or min(self.horizons) < 1:
            raise ValueError("horizons must be positive")
        if max(self.horizons) > self.holdout:
            raise ValueError("largest horizon exceeds the holdout length")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.dist_family not in ("gaussian", "ged"):
            raise ValueError(f"unknown dist {self.dist_family!r}")


_CONFIG_KEYS = {
    "models": lambda v: tuple(t.upper() for t in v.split(",") if t),
    "re": int,
    "n": lambda v: _parse_int_list(v),
    "m_burn": int,
    "holdout": int,
    "horizons": lambda v: _parse_int_list(v),
    "seed": int,
    "out": str,
    "jobs": int,
    "dist": str,
    "nu": float,
}

_CONFIG_FIELD = {"n": "n_list", "dist": "dist_family"}


def load_config(path: str) -> ExperimentConfig:
    """Flat key=value file; # comments; unknown keys are errors."""
    overrides = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path} line {lineno}: expected key=value, "
                                 f"got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path} line {lineno}: unknown key {key!r}")
            try:
                overrides[_CONFIG_FIELD.get(key, key)] = _CONFIG_KEYS[key](value)
            except ValueError as exc:
                raise ValueError(f"{path} line {lineno}: bad value for "
                                 f"{key!r}: {exc}") from None
    return ExperimentConfig(**overrides)


def _fit_seed(base: int, mi: int, rep: int) -> int:
    # only perturbed restarts consume this; distinct per task is all that matters
    return (base * 1_000_003 + mi * 100_000 + rep) & 0x7FFFFFFFFFFFFFFF


def _mc_task(arg) -> dict:
    """One replication of one model: simulate once, fit and forecast per n."""
    cfg, mi, rep = arg
    spec = PRESETS[cfg.models[mi]]
    dist = cfg.dist()
    n_max = max(cfg.n_list)
    h_max = max(cfg.horizons)
    rng = rng_for(cfg.seed, mi, rep)
    path = simulate_path(spec, dist, n_max + cfg.holdout,
                         m_burn=cfg.m_burn, seed=rng)
    out = {"actual_s2": path.sigma2[n_max: n_max + h_max].copy(),
           "actual_x2": (path.x[n_max: n_max + h_max] ** 2).copy(),
           "per_n": {}}
    for n in cfg.n_list:
        x_win = path.x[n_max - n: n_max]
        try:
            res = fit(x_win, p=spec.p, q=spec.q,
                      options=FitOptions(init=spec,
                                         seed=_fit_seed(cfg.seed, mi, rep)))
            sh = res.spec_hat
            z = res.z_hat
            sg2_hat = _sample_sigma_g_sq(z, sh.theta, sh.gamma)
            g_hist = g_history(z, sh.theta, sh.gamma)
            tilde = forecast_sigma2(sh, g_hist, h_max, sg2_hat)["tilde"]
            if not (np.all(np.isfinite(tilde)) and np.all(np.isfinite(_spec_to_eta(sh)))):
                raise FiegarchError("non-finite fit or forecast")
            out["per_n"][n] = {"eta": _spec_to_eta(sh), "tilde": tilde,
                               "fail": ""}
        except FiegarchError as exc:
            out["per_n"][n] = {"eta": None, "tilde": None,
                               "fail": type(exc).__name__}
    return out


def run_montecarlo(cfg: ExperimentConfig) -> dict:
    """Execute the experiment; write per-(model, n) CSVs; return file map."""
    cfg.check()
    tasks = [(cfg, mi, rep)
             for mi in range(len(cfg.models)) for rep in range(cfg.re)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_mc_task, tasks, chunksize=1))
    else:
        results = [_mc_task(t) for t in tasks]

    files: dict[str, list[str]] = {}
    for mi, model in enumerate(cfg.models):
        spec = PRESETS[model]
        truth = _spec_to_eta(spec)
        names = _param_names(spec.p, spec.q)
        reps = results[mi * cfg.re: (mi + 1) * cfg.re]
        for n in cfg.n_list:
            good = [r for r in reps if r["per_n"][n]["fail"] == ""]
            failures = cfg.re - len(good)
            fail_names = sorted({r["per_n"][n]["fail"] for r in reps
                                 if r["per_n"][n]["fail"]})

            if len(good) >= 2:
                est = np.vstack([r["per_n"][n]["eta"] for r in good])
                stats = mc_stats(est, truth)
                est_rows = [(name, truth[j], stats.mean[j], stats.sd[j],
                             stats.bias[j], stats.mae[j], stats.mse[j], failures)
                            for j, name in enumerate(names)]
            else:
                est_rows = [(name, truth[j], "", "", "", "", "", failures)
                            for j, name in enumerate(names)]
            stem = f"{model}_n{n}_estimates"
            files[stem] = _write_table(
                cfg.out, stem,
                ("param", "truth", "mean", "sd", "bias", "mae", "mse", "failures"),
                est_rows)

            fc_rows = []
            for h in cfg.horizons:
                s2 = np.array([r["actual_s2"][h - 1] for r in good])
                x2 = np.array([r["actual_x2"][h - 1] for r in good])
                pred = np.array([r["per_n"][n]["tilde"][h - 1] for r in good])
                if len(good):
                    fc_rows.append((h, 100.0 * s2.mean(), 100.0 * x2.mean(),
                                    100.0 * pred.mean(),
                                    1e4 * np.mean((pred - s2) ** 2),
                                    1e4 * np.mean((pred - x2) ** 2), failures))
                else:
                    fc_rows.append((h, "", "", "", "", "", failures))
            stem = f"{model}_n{n}_forecast"
            files[stem] = _write_table(
                cfg.out, stem,
                ("h", "mean_sigma2_x100", "mean_x2_x100", "predictor_mean_x100",
                 "mse_sigma2_x10000", "mse_x2_x10000", "failures"),
                fc_rows)
            note = f" ({', '.join(fail_names)})" if fail_names else ""
            print(f"{model} n={n}: re={cfg.re} failures={failures}{note}")
    return files


def cmd_montecarlo(args, parser) -> int:
    overrides = {}
    if args.config:
        try:
            cfg = load_config(args.config)
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
    else:
        cfg = ExperimentConfig()
    if args.models:
        overrides["models"] = tuple(t.upper() for t in args.models.split(",") if t)
    if args.re is not None:
        overrides["re"] = args.re
    if args.n:
        try:
            overrides["n_list"] = _parse_int_list(args.n)
        except ValueError as exc:
            parser.error(f"bad --n list: {exc}")
    if args.m_burn is not None:
        overrides["m_burn"] = args.m_burn
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out:
        overrides["out"] = args.out
    if args.jobs is not None:
        overrides["jobs"] = args.jobs
    if overrides:
        cfg = ExperimentConfig(**{**cfg.__dict__, **overrides})
    try:
        cfg.check()
    except ValueError as exc:
        parser.error(str(exc))
    run_montecarlo(cfg)
    print("done")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fiegarch",
        description="Long-memory volatility toolkit: coefficients, simulation, "
                    "estimation, forecasting, spectral diagnostics, and a "
                    "table-regeneration harness.")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("coeffs", help="impulse coefficients and decay checks")
    _add_spec_flags(sub)
    _add_common_flags(sub)
    sub.add_argument("--k", help="comma list of indices (default 0..m)")
    sub.add_argument("--m", type=int, default=None, help="table depth")
    sub.set_defaults(func=cmd_coeffs)

    sub = subs.add_parser("simulate", help="draw one path")
    _add_spec_flags(sub)
    _add_dist_flags(sub)
    _add_common_flags(sub)
    sub.add_argument("--n", type=int, required=True, help="sample length")
    sub.add_argument("--m-burn", type=int, default=10_000, dest="m_burn",
                     help="warm-up truncation depth")
    sub.set_defaults(func=cmd_simulate)

    sub = subs.add_parser("fit", help="quasi-maximum-likelihood estimation")
    _add_common_flags(sub)
    sub.add_argument("--input", required=True, help="CSV holding the series")
    sub.add_argument("--column", default=None, help="column name in the CSV")
    sub.add_argument("--p", type=int, default=0, help="numerator order")
    sub.add_argument("--q", type=int, default=0, help="denominator order")
    sub.set_defaults(func=cmd_fit)

    sub = subs.add_parser("forecast", help="multi-step volatility prediction")
    _add_spec_flags(sub)
    _add_dist_flags(sub)
    _add_common_flags(sub)
    sub.add_argument("--input", required=True, help="CSV holding the series")
    sub.add_argument("--column", default=None)
    sub.add_argument("--fit-report", default=None, dest="fit_report",
                     help="fit.csv written by the fit subcommand")
    sub.add_argument("--horizon", type=int, default=50)
    sub.add_argument("--limit-m", type=int, default=50_000, dest="limit_m",
                     help="truncation depth for limit and tail sums")
    sub.set_defaults(func=cmd_forecast)

    sub = subs.add_parser("diagnose", help="periodogram, correlogram, "
                                           "cumulated spectral test")
    _add_spec_flags(sub)
    _add_dist_flags(sub)
    _add_common_flags(sub)
    sub.add_argument("--input", required=True, help="CSV holding the series")
    sub.add_argument("--column", default=None)
    sub.add_argument("--level", type=float, default=0.05,
                     help="test level, 0.05 or 0.01")
    sub.add_argument("--maxlag", type=int, default=50)
    sub.set_defaults(func=cmd_diagnose)

    sub = subs.add_parser("montecarlo", help="replicated estimation and "
                                             "forecasting experiment")
    # defaults of None so absent flags do not clobber config-file values
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--out", default=None, help="output directory")
    sub.add_argument("--config", default=None, help="key=value experiment file")
    sub.add_argument("--models", default=None, help="comma list of presets")
    sub.add_argument("--re", type=int, default=None, help="replications")
    sub.add_argument("--n", default=None, help="comma list of sample sizes")
    sub.add_argument("--m-burn", type=int, default=None, dest="m_burn")
    sub.add_argument("--jobs", type=int, default=None,
                     help="worker processes (default 1)")
    sub.set_defaults(func=cmd_montecarlo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except FiegarchError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
