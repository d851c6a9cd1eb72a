"""Batch driver: `roguewave <experiment> [--config FILE] [--set key=value] ...`.

Config files are flat `key = value` lines grouped under `[experiment]`
sections; unknown sections or keys are errors.  Each run writes CSV files
(and SVG when plot = true) whose headers carry the resolved configuration.

Exit codes: 0 success, 2 configuration error, 3 solver divergence in at
least 1% of samples.
"""
import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from . import combinatorics as comb
from . import growth, ldp, minimizer, propagate
from .parallel import ordered_map
from .sampling import SeededStream, sample_theta
from .serialize import write_csv, write_svg, write_theta
from .spectrum import EXPONENTIAL, GAUSSIAN, CoefficientProfile, sup_norm

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGED = 0, 2, 3


class ConfigError(Exception):
    def __init__(self, diagnostics):
        super().__init__("\n".join(diagnostics))
        self.diagnostics = diagnostics


def _bool(text):
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text):
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).replace(",", " ").split()]


def _choice(*options):
    def conv(text):
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
        return text
    return conv


def _opt_float(text):
    return None if str(text).strip().lower() in ("", "none", "auto") else float(text)


FLOWS = _choice(propagate.LINEAR, propagate.RESONANT, propagate.NLS)

COMMON = {
    "b": (float, 1.0),
    "kind": (_choice(EXPONENTIAL, GAUSSIAN), EXPONENTIAL),
    "a": (float, 1.0),
    "seed": (int, 20240601),
    "workers": (int, 1),
    "out": (str, "out"),
    "plot": (_bool, False),
}

SCHEMAS = {
    "rate-scan": {
        "z0": (float, 0.6), "epsilons": (_floats, [1.0, 0.5, 0.25]), "samples": (int, 10_000),
        "flow": (FLOWS, propagate.LINEAR), "statistic": (_choice("all", "sup", "pointwise", "weighted"), "all"),
        "schedule": (_choice("const", "power"), "const"), "t": (float, 0.0), "gamma": (float, 1.0),
        "alpha": (float, 2.0), "mu": (int, 1),
    },
    "mc-tail": {
        "t": (float, 0.0), "z": (_floats, [1.0, 2.0, 3.0]), "flow": (FLOWS, propagate.LINEAR),
        "epsilon": (float, 0.0), "samples": (int, 10_000),
    },
    "cumulant-limit": {
        "lambda": (float, 1.0), "epsilons": (_floats, [1e-1, 1e-2, 1e-3, 1e-4]),
        "z": (_floats, [0.0, 0.5, 1.0, 1.7]),
    },
    "resonance-error": {
        "epsilon": (float, 0.1), "t_scale": (float, 1.0), "gamma": (float, 0.0), "delta": (_opt_float, None),
        "seeds": (int, 50), "alpha": (float, 2.0), "mu": (int, 1), "dt": (_opt_float, None),
        "solver_tol": (float, 1e-8),
    },
    "combinatorics-audit": {
        "n_max": (int, 8), "lambdas": (int, 24), "census_n_max": (int, 12),
        "kinds": (lambda s: [_choice(EXPONENTIAL, GAUSSIAN)(v.strip()) for v in str(s).split(",")],
                  [EXPONENTIAL, GAUSSIAN]),
    },
    "minimizer-check": {
        "trials": (int, 20), "z": (float, 3.0), "b_min": (float, 0.1), "b_max": (float, 2.0),
        "t_max": (float, 10.0), "export": (_bool, False),
    },
    "neighborhood": {
        "epsilons": (_floats, [0.3, 0.1, 0.03, 0.01]), "z0": (_opt_float, None), "alpha": (float, 0.5),
        "beta": (float, 0.4), "t": (float, 0.0), "samples": (int, 1_000_000),
        "containment_samples": (int, 100_000), "containment_epsilon": (float, 0.1),
        "containment_z0": (float, 1.0),
    },
    "growth-curve": {
        "n": (int, 100), "N": (int, 2500), "b_min": (float, 1e-3), "b_max": (float, 0.5), "count": (int, 100),
    },
    "snapshots": {
        "n": (int, 100), "N": (int, 10_000), "times": (_floats, list(growth.FIGURE_TIMES)),
    },
}
EXPERIMENTS = tuple(SCHEMAS)


@dataclass
class Entry:
    value: str
    origin: str


def _parse(text, source):
    sections, diags = {}, []
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in EXPERIMENTS:
                diags.append(f"{where}: unknown section [{current}]")
            sections.setdefault(current, {})
            continue
        if "=" not in line:
            diags.append(f"{where}: expected 'key = value'")
            continue
        if current is None:
            diags.append(f"{where}: key outside of any [experiment] section")
            continue
        key, value = (s.strip() for s in line.split("=", 1))
        if key in sections[current]:
            diags.append(f"{where}: duplicate key '{key}'")
        sections[current][key] = Entry(value, where)
    return sections, diags


def parse_config_text(text, source="<config>"):
    """{section: {key: Entry}} from '[section]' and 'key = value' lines."""
    sections, diags = _parse(text, source)
    if diags:
        raise ConfigError(diags)
    return sections


def resolve(experiment, entries, overrides=None):
    """Typed values for one experiment plus the origin of each key."""
    schema = {**COMMON, **SCHEMAS[experiment]}
    merged = dict(entries or {})
    merged.update(overrides or {})
    values, origins, diags = {}, {}, []
    for key, entry in merged.items():
        if key not in schema:
            diags.append(f"{entry.origin}: unknown key '{key}' for [{experiment}]")
            continue
        conv = schema[key][0]
        try:
            values[key] = conv(entry.value)
        except ValueError as exc:
            diags.append(f"{entry.origin}: bad value for '{key}': {exc}")
        origins[key] = entry.origin
    for key, (_, default) in schema.items():
        values.setdefault(key, default)
        origins.setdefault(key, "default")
    diags += semantic_checks(experiment, values, origins)
    if diags:
        raise ConfigError(diags)
    return values


def semantic_checks(experiment, v, origins):
    out = []

    def bad(key, msg):
        out.append(f"{origins.get(key, 'default')}: {msg}")

    if not v["b"] > 0:
        bad("b", "b must be positive")
    if not v["a"] > 0:
        bad("a", "a must be positive")
    if v["workers"] < 1:
        bad("workers", "workers must be at least 1")
    if "epsilons" in v:
        eps = v["epsilons"]
        if not eps or any(e <= 0 for e in eps):
            bad("epsilons", "epsilons must be positive")
        elif any(x <= y for x, y in zip(eps, eps[1:])):
            bad("epsilons", "epsilons must be strictly decreasing")
    for key in ("samples", "containment_samples", "seeds", "trials", "count", "lambdas"):
        if key in v and v[key] < 1:
            bad(key, f"{key} must be at least 1")
    if "beta" in v and not 0 < v["beta"] < 0.5:
        bad("beta", "beta must lie in (0, 1/2) so that the modulus boxes eps^beta shrink slower than eps^(1/2)")
    if experiment == "neighborhood" and not 0 < v["alpha"] < 1:
        bad("alpha", "alpha must lie in (0, 1)")
    if "mu" in v and v["mu"] not in (1, -1):
        bad("mu", "mu must be +1 or -1")
    if experiment == "resonance-error":
        g, d = v["gamma"], v["delta"]
        if not 0 <= g <= 1:
            bad("gamma", "gamma must lie in [0, 1] (t = t_scale eps^(-1+gamma))")
        elif d is not None:
            if g > 0 and not 0 < d < g / 4:
                bad("delta", f"delta must satisfy 0 < delta < gamma/4 = {g / 4:g} on subcritical times")
            if g == 0 and not 0 < d < 1:
                bad("delta", "delta must lie in (0, 1) at critical times")
        if not v["epsilon"] > 0:
            bad("epsilon", "epsilon must be positive")
    if experiment == "combinatorics-audit":
        if v["census_n_max"] > comb.MAX_CENSUS_N:
            bad("census_n_max", f"census_n_max must be <= {comb.MAX_CENSUS_N}")
        if v["n_max"] > 10:
            bad("n_max", "n_max must be <= 10 for the exhaustive subset scan")
    if experiment in ("growth-curve", "snapshots") and v["N"] < 2 * v["n"] + 1:
        bad("N", "grid N must be at least 2n + 1")
    if experiment == "snapshots" and any(not 0 <= t <= 2 * np.pi for t in v["times"]):
        bad("times", "snapshot times must lie in [0, 2pi]")
    return out


# ---------------------------------------------------------------- runners

def _profile(v):
    return CoefficientProfile(v["b"], v["kind"], v["a"])


def _meta(experiment, v, stream_index=0):
    meta = {"experiment": experiment, "version": __version__, "master_seed": v["seed"],
            "stream_index": stream_index}
    meta.update({f"config.{k}": v[k] for k in sorted(v) if k not in ("workers", "out")})
    return meta


def _path(v, name):
    return os.path.join(v["out"], name)


def run_rate_scan(v):
    prof = _profile(v)
    stream = SeededStream(v["seed"], 0)
    t_of = ldp.schedule(v["schedule"], v["t"], v["gamma"])
    stats = ["pointwise", "sup", "weighted"] if v["statistic"] == "all" else [v["statistic"]]
    cfg = None
    if v["flow"] == propagate.NLS:
        cfg = propagate.EvolutionConfig(v["epsilons"][0], alpha=v["alpha"], mu=v["mu"])
    rows = []
    for stat in stats:
        scan = ldp.rate_scan(prof, v["z0"], t_of, v["flow"], v["epsilons"], v["samples"], stream,
                             statistic=stat, config=cfg, workers=v["workers"])
        rows += [(stat,) + r for r in scan.rows()]
    meta = _meta("rate-scan", v)
    meta["target"] = -ldp.legendre(prof, v["z0"])
    write_csv(_path(v, "rate_scan.csv"), ("statistic", "epsilon", "eps_log_p", "eps_log_ci_low",
                                          "eps_log_ci_high", "hits", "gap"), rows, meta)
    return EXIT_OK


def run_mc_tail(v):
    prof = _profile(v)
    stream = SeededStream(v["seed"], 0)
    cfg = propagate.EvolutionConfig(v["epsilon"]) if v["flow"] == propagate.NLS else None
    sups = ldp.sup_samples(prof, v["t"], v["flow"], v["samples"], stream, v["epsilon"], cfg, v["workers"])
    ws = ldp.weighted_sum_samples(prof, v["samples"], stream, v["workers"])
    rows = []
    for z in v["z"]:
        s, w = ldp.tail_from_samples(sups, z, stream), ldp.tail_from_samples(ws, z, stream)
        rows.append((z, ldp.pointwise_tail_exact(prof, z), s.probability, s.ci_low, s.ci_high, s.hits,
                     w.probability, w.ci_low, w.ci_high, w.hits))
    write_csv(_path(v, "mc_tail.csv"), ("z", "pointwise_exact", "sup_p", "sup_ci_low", "sup_ci_high", "sup_hits",
                                        "weighted_p", "weighted_ci_low", "weighted_ci_high", "weighted_hits"),
              rows, _meta("mc-tail", v))
    return EXIT_OK


def run_cumulant_limit(v):
    prof = _profile(v)
    lam = v["lambda"]
    limit = ldp.cumulant_limit(prof, lam)
    rows = []
    for eps in v["epsilons"]:
        val = eps * ldp.cumulant_epsilon(prof, lam, eps)
        rows.append((eps, val, limit, (val - limit) / limit))
    write_csv(_path(v, "cumulant_limit.csv"), ("epsilon", "eps_cumulant", "limit", "rel_gap"), rows,
              _meta("cumulant-limit", v))
    lrows = [(z, ldp.legendre(prof, z), ldp.legendre_numeric(lambda l: ldp.cumulant_limit(prof, l), z))
             for z in v["z"]]
    write_csv(_path(v, "legendre.csv"), ("z", "closed_form", "numeric"), lrows, _meta("cumulant-limit", v))
    return EXIT_OK


def _resonance_task(prof, seed, index, t, cfg, delta):
    theta = sample_theta(SeededStream(seed, index), prof)
    try:
        reps = propagate.approximation_errors([theta], t, cfg, delta=delta)[0]
    except (propagate.DivergenceError, propagate.ConvergenceError) as exc:
        return index, None, str(exc)
    return index, reps, ""


def run_resonance_error(v):
    prof = _profile(v)
    eps, g = v["epsilon"], v["gamma"]
    t = v["t_scale"] * eps ** (-1.0 + g)
    delta = v["delta"] if v["delta"] is not None else (0.5 if g == 0 else g / 5)
    cfg = propagate.EvolutionConfig(eps, alpha=v["alpha"], mu=v["mu"], dt=v["dt"], solver_tol=v["solver_tol"])
    tasks = [(prof, v["seed"], i, t, cfg, delta) for i in range(v["seeds"])]
    rows, diverged = [], 0
    for index, reps, err in ordered_map(_resonance_task, tasks, v["workers"]):
        if reps is None:
            diverged += 1
            rows.append((index, "", t, np.nan, np.nan, np.nan, 0, 1))
            continue
        for ref in (propagate.LINEAR, propagate.RESONANT):
            r = reps[ref]
            rows.append((index, ref) + r.row() + (0,))
    meta = _meta("resonance-error", v)
    meta["delta_used"] = delta
    write_csv(_path(v, "resonance_error.csv"), ("stream_index", "reference", "t", "fl01_err", "fl21_err",
                                                "threshold", "pass", "diverged"), rows, meta)
    if diverged and diverged >= 0.01 * v["seeds"]:
        print(f"{diverged} of {v['seeds']} trajectories diverged", file=sys.stderr)
        return EXIT_DIVERGED
    return EXIT_OK


def run_combinatorics_audit(v):
    rows = []
    for kind in v["kinds"]:
        prof = CoefficientProfile(v["b"], kind, v["a"])
        for n in range(1, v["n_max"] + 1):
            for lam in comb.lambda_grid(prof, n, v["lambdas"], seed=v["seed"] + n):
                r = comb.exhaustive_check(prof, lam, n)
                rows.append((kind, n, lam, r.k_star, int(r.argmax_matches), r.ties, r.worst_excess, r.violations))
    write_csv(_path(v, "exhaustive.csv"), ("kind", "n", "lambda_eps", "k_star", "argmax_matches", "ties",
                                           "worst_excess", "violations"), rows, _meta("combinatorics-audit", v))
    crow = []
    for n in range(0, v["census_n_max"] + 1):
        for ks in range(0, n + 2):
            for m, c, bound, ratio in comb.census_rows(n, ks):
                crow.append((n, ks, m, c, bound, ratio))
    write_csv(_path(v, "census.csv"), ("n", "k_star", "m", "count", "bound", "ratio"), crow,
              _meta("combinatorics-audit", v))
    return EXIT_OK


def run_minimizer_check(v):
    rng = np.random.default_rng(v["seed"])
    rows = []
    for i in range(v["trials"]):
        b = rng.uniform(v["b_min"], v["b_max"])
        t, x, p0 = rng.uniform(0, v["t_max"]), rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi)
        prof = CoefficientProfile(b, v["kind"], v["a"])
        fam = minimizer.MinimizerFamily(v["z"], t, x, p0)
        theta = minimizer.build_minimizer(fam, prof)
        s = sup_norm(propagate.linear_flow(theta, t))
        rows.append((i, b, t, x, p0, s.value, s.argmax, abs(s.value - v["z"]) / v["z"],
                     float(minimizer.circular_distance(s.argmax, x)),
                     minimizer.objective(theta) - v["z"] ** 2 / prof.c2_sum))
        if v["export"]:
            write_theta(_path(v, f"minimizer_{i:03d}.csv"), theta, {"z": v["z"], "t": t, "x_star": x,
                                                                      "phi0_star": p0})
    write_csv(_path(v, "minimizer_check.csv"), ("trial", "b", "t", "x_star", "phi0_star", "sup", "argmax",
                                                "rel_err", "argmax_err", "objective_gap"), rows,
              _meta("minimizer-check", v))
    return EXIT_OK


def run_neighborhood(v):
    prof = _profile(v)
    z0 = v["z0"] if v["z0"] is not None else minimizer.z0_for_m1(prof, v["epsilons"][0], v["beta"])
    rows = []
    for i, eps in enumerate(v["epsilons"]):
        spec = minimizer.neighborhood_spec(prof, eps, z0, v["alpha"], v["beta"])
        fam = spec.family(t=v["t"])
        logp = minimizer.neighborhood_probability_exact(spec, fam, prof)
        hits, n = (minimizer.membership_frequency(spec, fam, prof, v["samples"], SeededStream(v["seed"], 1),
                                                  v["workers"]) if i == 0 else (-1, 0))
        rows.append((eps, spec.m1, spec.m2, logp, eps * logp, -ldp.legendre(prof, z0),
                     eps * logp + ldp.legendre(prof, z0), n * np.exp(logp) if n else np.nan, hits, n))
    meta = _meta("neighborhood", v)
    meta["z0_used"] = z0
    write_csv(_path(v, "neighborhood.csv"), ("epsilon", "m1", "m2", "log_p", "eps_log_p", "target", "gap",
                                             "expected_hits", "mc_hits", "mc_samples"), rows, meta)
    spec = minimizer.neighborhood_spec(prof, v["containment_epsilon"], v["containment_z0"], v["alpha"], v["beta"])
    rep = minimizer.containment_experiment(spec, spec.family(t=v["t"]), prof, v["containment_samples"],
                                           SeededStream(v["seed"], 2), workers=v["workers"])
    write_csv(_path(v, "containment.csv"), ("n_samples", "z", "a", "c", "sup_failures", "e_failures",
                                            "min_sup_margin", "min_e", "non_members"), [rep.row()], meta)
    return EXIT_OK


def run_growth_curve(v):
    bs = np.linspace(v["b_min"], v["b_max"], v["count"])
    rows = growth.growth_curve(bs, v["n"], v["N"], v["kind"], v["workers"])
    write_csv(_path(v, "growth_curve.csv"), ("b", "m", "t_min"), rows, _meta("growth-curve", v))
    if v["plot"]:
        write_svg(_path(v, "growth_curve.svg"), [r[0] for r in rows], [[r[1] for r in rows]],
                  xlabel="b", ylabel="m")
    return EXIT_OK


def run_snapshots(v):
    cfg = growth.GrowthConfig(n=v["n"], b=v["b"], N_t=v["N"], N_x=v["N"], kind=v["kind"])
    ref = growth.minimax_growth(cfg)
    xs, profiles = growth.snapshots(cfg, v["times"])
    meta = _meta("snapshots", v)
    meta["m_reference"] = ref.m
    for t, prof in zip(v["times"], profiles):
        tag = f"{t:.4f}".replace(".", "p")
        meta_t = dict(meta, time=t)
        write_csv(_path(v, f"snapshot_t{tag}.csv"), ("x", "abs_u"), zip(xs, prof), meta_t)
        if v["plot"]:
            write_svg(_path(v, f"snapshot_t{tag}.svg"), xs, [prof], hline=ref.m, ylabel="|u(t,x)|",
                      title=f"t = {t:.4f}")
    return EXIT_OK


RUNNERS = {
    "rate-scan": run_rate_scan, "mc-tail": run_mc_tail, "cumulant-limit": run_cumulant_limit,
    "resonance-error": run_resonance_error, "combinatorics-audit": run_combinatorics_audit,
    "minimizer-check": run_minimizer_check, "neighborhood": run_neighborhood,
    "growth-curve": run_growth_curve, "snapshots": run_snapshots,
}


def _read_sections(path):
    if path is None:
        return {}
    with open(path) as fh:
        return parse_config_text(fh.read(), path)


def _overrides(args):
    out = {}
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError([f"--set {item}: expected key=value"])
        key, value = (s.strip() for s in item.split("=", 1))
        out[key] = Entry(value, f"--set {key}")
    for flag in ("seed", "workers", "out"):
        val = getattr(args, flag, None)
        if val is not None:
            out[flag] = Entry(str(val), f"--{flag}")
    if getattr(args, "plot", False):
        out["plot"] = Entry("true", "--plot")
    return out


def validate(path):
    """Diagnostics for every section of a config file; empty when valid."""
    with open(path) as fh:
        sections, diags = _parse(fh.read(), path)
    for name, entries in sections.items():
        if name not in SCHEMAS:
            continue
        try:
            resolve(name, entries)
        except ConfigError as exc:
            diags += exc.diagnostics
    return diags


def run(experiment, config_path=None, overrides=None):
    sections = _read_sections(config_path)
    values = resolve(experiment, sections.get(experiment, {}), overrides)
    try:
        return RUNNERS[experiment](values)
    except (propagate.DivergenceError, propagate.ConvergenceError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_DIVERGED


def build_parser():
    parser = argparse.ArgumentParser(prog="roguewave", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="config file with a [%s] section" % name)
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--out")
        p.add_argument("--plot", action="store_true", help="also write SVG figures")
    p = sub.add_parser("validate")
    p.add_argument("config")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            if not os.path.exists(args.config):
                print(f"{args.config}: no such file", file=sys.stderr)
                return EXIT_CONFIG
            diags = validate(args.config)
            for d in diags:
                print(d, file=sys.stderr)
            return EXIT_CONFIG if diags else EXIT_OK
        return run(args.command, args.config, _overrides(args))
    except ConfigError as exc:
        for d in exc.diagnostics:
            print(d, file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
