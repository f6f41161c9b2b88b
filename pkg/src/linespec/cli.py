"""Command-line interface.

Four subcommands: ``simulate`` writes a sampled signal to CSV, ``estimate``
runs the full estimator on a signal file and reports the result, ``gradcheck``
verifies the analytic gradients against finite differences, and ``experiment``
runs one of the packaged Monte Carlo studies and writes JSON + CSV results.

Exit codes: 0 success (including an empty estimate), 2 bad arguments or
unparseable input, 3 numerical divergence (a partial report is still written
when requested).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict

import numpy as np

from . import experiments
from .errors import LineSpecError, NumericalDivergence
from .fft_init import InitConfig
from .optimizer import TrainConfig
from .order_control import OrderConfig
from .pipeline import EstimatorConfig, RunReport, estimate_spectrum
from .signal_model import TWO_PI, NoiseSpec, Sinusoid, noise_var_for_snr, synthesize

_CONFIG_PREFIX = "# config "


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_components(path: str) -> list[Sinusoid]:
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, list) or not raw:
        raise ValueError("components file must hold a non-empty JSON list")
    comps = []
    for entry in raw:
        comps.append(
            Sinusoid(
                complex(float(entry["re"]), float(entry["im"])),
                TWO_PI * float(entry["normalized_freq"]),
            )
        )
    return comps


def cmd_simulate(args) -> int:
    try:
        comps = _load_components(args.components)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        return _fail(f"cannot read components: {exc}", 2)
    clean = synthesize(comps, args.n, NoiseSpec())
    sigma2 = 0.0
    if args.snr_db is not None:
        try:
            sigma2 = noise_var_for_snr(clean, args.snr_db)
        except LineSpecError as exc:
            return _fail(str(exc), 2)
    signal = synthesize(comps, args.n, NoiseSpec(sigma2=sigma2, seed=args.seed))
    meta = {
        "n": args.n,
        "snr_db": args.snr_db,
        "seed": args.seed,
        "sigma2": sigma2,
        "components": [
            {"re": c.amplitude.real, "im": c.amplitude.imag, "normalized_freq": c.normalized_freq}
            for c in comps
        ],
    }
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "re", "im"])
        for i, v in enumerate(signal.samples):
            writer.writerow([i, repr(float(v.real)), repr(float(v.imag))])
        fh.write(_CONFIG_PREFIX + json.dumps(meta) + "\n")
    print(f"wrote {args.n} samples to {args.out} (sigma2 = {sigma2!r})")
    return 0


def _read_signal_csv(path: str):
    """Parse a signal CSV; returns (samples, metadata or None)."""
    meta = None
    rows = []
    with open(path, newline="") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if line.startswith(_CONFIG_PREFIX):
                    meta = json.loads(line[len(_CONFIG_PREFIX):])
                continue
            rows.append(next(csv.reader([line])))
    if not rows or [c.strip() for c in rows[0]] != ["index", "re", "im"]:
        raise ValueError("signal file must start with header 'index,re,im'")
    body = rows[1:]
    if not body:
        raise ValueError("signal file holds no samples")
    y = np.zeros(len(body), dtype=np.complex128)
    for row in body:
        if len(row) != 3:
            raise ValueError(f"malformed row: {row!r}")
        idx = int(row[0])
        if not 0 <= idx < y.size:
            raise ValueError(f"sample index {idx} out of range")
        y[idx] = complex(float(row[1]), float(row[2]))
    return y, meta


def _flatten_config(cfg: EstimatorConfig) -> dict:
    flat = asdict(cfg)
    flat["init"] = asdict(cfg.init)
    flat["train"] = asdict(cfg.train)
    flat["order"] = asdict(cfg.order)
    return flat


def _report_dict(report: RunReport, cfg: EstimatorConfig, seed) -> dict:
    events = []
    for p, ev in report.merge_events:
        events.append(
            {
                "pass": p,
                "kind": "merge",
                "omega_low": ev.omega_low,
                "omega_high": ev.omega_high,
                "omega_merged": ev.omega_merged,
            }
        )
    for p, pr in report.prune_events:
        events.append(
            {
                "pass": p,
                "kind": "prune",
                "threshold": pr.threshold,
                "xi": [float(x) for x in pr.xi],
                "keep_mask": [bool(k) for k in pr.keep_mask],
            }
        )
    events.sort(key=lambda e: (e["pass"], e["kind"] != "merge"))
    return {
        "estimates": [
            {
                "re": s.amplitude.real,
                "im": s.amplitude.imag,
                "omega": s.omega,
                "normalized_freq": s.normalized_freq,
            }
            for s in report.estimates
        ],
        "sigma2_hat": report.sigma2_hat,
        "k_hat": report.k_hat,
        "outer_iterations": report.outer_iterations,
        "cost_trace": [float(c) for c in report.cost_trace],
        "events": events,
        "config": _flatten_config(cfg),
        "seed": seed,
    }


def _write_report(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def cmd_estimate(args) -> int:
    try:
        y, meta = _read_signal_csv(args.infile)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        return _fail(f"cannot read signal: {exc}", 2)
    try:
        cfg = EstimatorConfig(
            init=InitConfig(l_factor=args.l_factor),
            train=TrainConfig(
                gamma_alpha=args.gamma_alpha,
                gamma_omega=args.gamma_omega,
                momentum=args.momentum,
                eps_tol=args.eps,
                max_iter=args.max_iter,
                min_iter=30,
                consec_hits=3,
            ),
            order=OrderConfig(epsilon_f=args.epsf, epsilon_a=args.epsa),
            eps_floor=min(EstimatorConfig().eps_floor, args.eps),
        )
    except LineSpecError as exc:
        return _fail(str(exc), 2)
    seed = meta.get("seed") if meta else None
    try:
        report = estimate_spectrum(y, cfg)
    except NumericalDivergence as exc:
        if args.report and exc.report is not None:
            payload = _report_dict(exc.report, cfg, seed)
            payload["diverged"] = True
            _write_report(args.report, payload)
        return _fail(f"optimization diverged: {exc}", 3)
    print(f"k_hat = {report.k_hat}")
    print(f"sigma2_hat = {report.sigma2_hat!r}")
    print(f"outer_iterations = {report.outer_iterations}")
    for s in report.estimates:
        print(
            f"  omega = {s.omega:.10f}  normalized_freq = {s.normalized_freq:.10f}"
            f"  amplitude = {s.amplitude.real:+.6f}{s.amplitude.imag:+.6f}j"
        )
    if args.report:
        _write_report(args.report, _report_dict(report, cfg, seed))
        print(f"report written to {args.report}")
    return 0


def cmd_gradcheck(args) -> int:
    from .optimizer import NetworkState, grad_alpha, grad_omega

    worst = 0.0
    for t in range(args.trials):
        rng = np.random.default_rng(args.seed + t)
        m_t = int(rng.integers(1, args.m + 1))
        n_t = int(rng.integers(max(2, m_t), args.n + 1))
        omegas = rng.uniform(0.0, TWO_PI, m_t)
        alphas = rng.standard_normal(m_t) + 1j * rng.standard_normal(m_t)
        y = rng.standard_normal(n_t) + 1j * rng.standard_normal(n_t)
        state = NetworkState.from_parameters(omegas, alphas)
        ga = grad_alpha(state, y)
        gw = grad_omega(state, y)
        if args.perturb:
            ga = ga * (1.0 + 1e-3)
            gw = gw * (1.0 + 1e-3)
        fa, fw = experiments.fd_gradients(state, y)
        err_a = np.max(np.abs(ga - fa)) / max(np.max(np.abs(fa)), 1e-12)
        err_w = np.max(np.abs(gw - fw)) / max(np.max(np.abs(fw)), 1e-12)
        worst = max(worst, float(err_a), float(err_w))
    ok = worst < args.tol
    print(
        f"gradcheck: {args.trials} instances (n <= {args.n}, m <= {args.m}),"
        f" worst relative error {worst:.3e}, tolerance {args.tol:.1e}:"
        f" {'PASS' if ok else 'FAIL'}"
    )
    return 0 if ok else 1


_MSE_TRUTH = [
    Sinusoid(1.0 + 0.0j, TWO_PI * 0.1),
    Sinusoid(1.0 + 0.0j, TWO_PI * 0.22),
    Sinusoid(1.0 + 0.0j, TWO_PI * 0.37),
]


def _run_experiment(name: str, trials: int | None, seed: int | None, full: bool):
    scale = 5 if full else 1
    if name == "mse":
        spec = experiments.TrialSpec(
            truth=_MSE_TRUTH,
            n_samples=32,
            snr_db=20.0,
            trials=trials or 200 * scale,
            base_seed=7000 if seed is None else seed,
        )
        return experiments.mc_mse(spec, snr_grid=[0.0, 10.0, 20.0, 30.0])
    if name == "roc-merge":
        spec = experiments.TrialSpec(
            truth=[],
            n_samples=32,
            snr_db=20.0,
            trials=trials or 50 * scale,
            base_seed=8200 if seed is None else seed,
        )
        return experiments.mc_roc_merge(spec, [1e-8, 1e-6, 1e-4, 1e-2, 1e-1])
    if name in ("roc-prune", "roc-prune-weak"):
        scenario = "one-node" if name == "roc-prune" else "two-node-weak"
        spec = experiments.TrialSpec(
            truth=[],
            n_samples=32,
            snr_db=0.0,
            trials=trials or 2000 * scale,
            base_seed=4600 if seed is None else seed,
        )
        return experiments.mc_roc_prune(
            spec, [1e-6, 1e-4, 1e-3, 1e-2, 0.05, 0.1], scenario=scenario
        )
    if name == "order":
        return experiments.mc_order(
            n_samples=32,
            snr_db=10.0,
            trials=trials or 200 * scale,
            base_seed=5000 if seed is None else seed,
        )
    if name == "converge":
        spec = experiments.TrialSpec(
            truth=_MSE_TRUTH,
            n_samples=32,
            snr_db=10.0,
            trials=trials or 20 * scale,
            base_seed=3000 if seed is None else seed,
        )
        return experiments.convergence_trace(spec, [0.5, 1.0, 2.0], [0.0, 0.5, 0.9])
    if name == "cluster":
        return experiments.mc_cluster(
            trials=trials or 20, base_seed=9000 if seed is None else seed
        )
    raise ValueError(f"unknown experiment {name!r}")


def cmd_experiment(args) -> int:
    try:
        result = _run_experiment(args.name, args.trials, args.seed, args.full)
    except LineSpecError as exc:
        return _fail(str(exc), 3)
    stem = result.name
    json_path = f"{args.out_dir}/{stem}.json"
    csv_path = f"{args.out_dir}/{stem}.csv"
    try:
        result.to_json(json_path)
        result.to_csv(csv_path)
    except OSError as exc:
        return _fail(f"cannot write results: {exc}", 2)
    print(f"experiment {args.name}: {len(result.rows)} rows")
    print(f"  {json_path}")
    print(f"  {csv_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linespec",
        description="Maximum-likelihood line spectral estimation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="synthesize a noisy multi-sinusoid signal")
    p.add_argument("--n", type=int, required=True, help="number of samples")
    p.add_argument(
        "--components",
        required=True,
        help="JSON file: list of {re, im, normalized_freq}",
    )
    p.add_argument("--snr-db", type=float, default=None, help="SNR in dB (omit for noiseless)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="estimate sinusoids from a signal CSV")
    p.add_argument("--in", dest="infile", required=True, help="input CSV (index,re,im)")
    p.add_argument("--report", default=None, help="write a JSON report here")
    p.add_argument("--l-factor", type=int, default=4, help="FFT zero-padding factor")
    p.add_argument("--eps", type=float, default=1e-5, help="inner convergence tolerance")
    p.add_argument("--epsf", type=float, default=1e-6, help="merge test level")
    p.add_argument("--epsa", type=float, default=1e-6, help="prune false-alarm level")
    p.add_argument("--gamma-alpha", type=float, default=None, help="amplitude learning rate")
    p.add_argument("--gamma-omega", type=float, default=None, help="frequency learning rate")
    p.add_argument("--lambda", dest="momentum", type=float, default=0.9, help="momentum coefficient")
    p.add_argument("--max-iter", type=int, default=20000, help="inner iteration cap")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("gradcheck", help="compare analytic and finite-difference gradients")
    p.add_argument("--n", type=int, default=16, help="maximum signal length")
    p.add_argument("--m", type=int, default=4, help="maximum node count")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-6, help="relative error tolerance")
    p.add_argument(
        "--perturb",
        action="store_true",
        help="bias the analytic gradients; the check must then fail",
    )
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("experiment", help="run a packaged Monte Carlo study")
    p.add_argument(
        "name",
        choices=["mse", "roc-merge", "roc-prune", "roc-prune-weak", "order", "converge", "cluster"],
    )
    p.add_argument("--trials", type=int, default=None, help="override the trial count")
    p.add_argument("--seed", type=int, default=None, help="override the base seed")
    p.add_argument("--out-dir", default=".", help="directory for JSON/CSV results")
    p.add_argument("--full", action="store_true", help="publication-scale trial counts")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
