"""Command line experiment runner.

Each subcommand runs one experiment, writes a CSV table plus a JSON summary
(config echo, wall time, per-check pass/fail) into the output directory,
and renders report figures unless asked not to.  The exit code is 0 when
every declared check passes, 1 when one fails, and 2 on usage or config
errors.  CSV files are byte-identical across reruns with the same config
and seed on one platform; figures and summaries never feed back into the
CSV or exit-code contract.

Raw seminorm squares are complex averages; their CSV columns report the
real part, which is the quantity the square root is taken from (the
imaginary part is a finite-size artifact).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from ._numutil import fmt_float, make_rng, unit_phase
from .config import (ConfigError, Resolver, load_config_file, parse_count,
                     parse_float_list, parse_int_list, parse_sequence)
from .dbar import (BlockDistribution, bernoulli_blocks, block_string,
                   dbar_k, empirical_blocks, sign_symbols)
from .fourier import f1
from .kronecker import build, enumerate_test_functions
from .momo import BlockStructure, adversarial_points, make_blocks, \
    momo_log_value, momo_value, sample_point, wedge_momo
from .seminorms import correlations, u1_lambda_sq, u1_sq, us_norm
from .sequences import InsufficientDataError
from .spectral import _grid_masses, atom_scan, autocorr, wiener_sum
from .systems import (Character, WedgeObservable, WedgeSystem, parse_system,
                      system_to_string)
from .universal import (CharacterTriple, point_mass_eta, product_eta,
                        spectral_wzors_check)

__all__ = ["main"]

DEFAULT_ALPHA = 0.41421356237309515


# ------------------------------------------------------------ emission

def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(float(v))
    return str(v)


def write_csv(path, header, rows) -> str:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")
    return str(path)


def write_json(path, obj) -> str:
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return str(path)


def check(name: str, passed: bool, value, threshold, relation: str) -> dict:
    return {"name": name, "passed": bool(passed), "value": value,
            "threshold": threshold, "relation": relation}


def _figures_on(res: Resolver, args) -> bool:
    return not getattr(args, "no_figures", False)


# ------------------------------------------------------------ subcommands

def run_ghk(res: Resolver, args, out: str):
    seq = res.get("seq", str, required=True)
    N = res.get("N", parse_count, required=True)
    H = res.get("H", parse_count, required=True)
    s = res.get("s", int, 1)
    mode = res.get("mode", str, "cesaro")
    lam_pos = res.get("lam", float)
    if mode not in ("cesaro", "logarithmic"):
        raise ConfigError("mode", f"must be cesaro or logarithmic, got {mode!r}")
    levels = 1 if lam_pos is not None else s
    u = parse_sequence(seq, N + levels * H, res.cache_dir)
    if lam_pos is not None:
        est = u1_lambda_sq(u, unit_phase(lam_pos), N=N, H=H, mode=mode)
        header = ["N", "H", "lam", "u1_lam_raw", "u1_lam"]
        row = [est.N, est.H, lam_pos, est.raw.real, est.value]
    elif s == 1:
        est = u1_sq(u, N=N, H=H, mode=mode)
        header = ["N", "H", "u1_sq_raw", "u1_sq"]
        row = [est.N, est.H, est.raw.real, est.value]
    else:
        est = us_norm(u, s=s, N=N, H=H, mode=mode)
        header = ["N", "H", f"us{s}_raw", f"us{s}"]
        row = [est.N, est.H, est.raw.real, est.value]
    outputs = [write_csv(os.path.join(out, "ghk.csv"), header, [row])]
    if _figures_on(res, args):
        from .plots import plot_correlations
        c = correlations(u, est.N, est.H, mode)
        outputs.append(plot_correlations(
            c, est.H, est.raw, os.path.join(out, "ghk_correlations.png")))
    echo = {"seq": seq, "N": est.N, "H": est.H, "s": s, "mode": mode,
            "lam": lam_pos, "value": est.value, "raw_re": est.raw.real,
            "raw_im": est.raw.imag}
    return echo, [], outputs


def run_fourier(res: Resolver, args, out: str):
    seq = res.get("seq", str, required=True)
    Hs = res.get("H", parse_int_list, required=True)
    if isinstance(Hs, int):
        Hs = [Hs]
    N = res.get("N", parse_count)
    M = res.get("M", parse_count)
    stride = res.get("stride", parse_count)
    grid_factor = res.get("grid-factor", parse_count, 8)
    threads = res.get("threads", parse_count)
    if N is None:
        max_H = max(Hs)
        span = (M - 1) * (stride if stride else max(1, max_H // 4)) if M else 0
        N = max_H + max(span, 3 * max_H)
    u = parse_sequence(seq, N, res.cache_dir)
    header = ["N", "H", "M", "stride", "grid_factor", "f1"]
    rows, values = [], []
    for H in Hs:
        r = f1(u, H, M=M, stride=stride, grid_factor=grid_factor,
               threads=threads)
        rows.append([N, r.H, r.M, r.stride, r.grid_factor, r.value])
        values.append(r.value)
    outputs = [write_csv(os.path.join(out, "fourier.csv"), header, rows)]
    if _figures_on(res, args):
        from .plots import plot_f1_curve
        outputs.append(plot_f1_curve(
            Hs, values, os.path.join(out, "fourier_f1.png")))
    echo = {"seq": seq, "N": N, "H": Hs, "M": M, "stride": stride,
            "grid_factor": grid_factor, "values": values}
    return echo, [], outputs


def run_spectral(res: Resolver, args, out: str):
    seq = res.get("seq", str, required=True)
    N = res.get("N", parse_count, required=True)
    H = res.get("H", parse_count)
    grid = res.get("grid", parse_count, 2048)
    tau = res.get("tau", float, 0.05)
    mode = res.get("mode", str, "cesaro")
    u = parse_sequence(seq, N + (int(H) if H else N // 4), res.cache_dir)
    est = autocorr(u, N=N, H_max=H, mode=mode)
    H_used = est.H_max if H is None else int(H)
    atoms = atom_scan(est, H=H_used, grid=grid, tau=tau)
    ws = wiener_sum(est, H=H_used)
    header = ["position", "lam_re", "lam_im", "mass"]
    rows = [[a.position, a.lam.real, a.lam.imag, a.mass] for a in atoms]
    outputs = [write_csv(os.path.join(out, "spectral.csv"), header, rows)]
    if _figures_on(res, args):
        from .plots import plot_atom_scan
        masses = _grid_masses(est, H_used, grid)
        outputs.append(plot_atom_scan(
            np.arange(grid) / grid, masses, atoms, tau,
            os.path.join(out, "spectral_atoms.png")))
    echo = {"seq": seq, "N": est.N, "H": H_used, "grid": grid, "tau": tau,
            "mode": mode, "wiener_sum": ws, "n_atoms": len(atoms),
            "total_mass": float(sum(a.mass for a in atoms))}
    return echo, [], outputs


def _parse_blocks(text: str) -> BlockStructure:
    kind, sep, body = text.partition(":")
    if not sep:
        raise ConfigError("blocks", f"spec {text!r} needs kind:params")
    try:
        if kind == "poly":
            degree, K = (int(t) for t in body.split(","))
            return make_blocks("poly", K, degree=degree)
        if kind == "geometric":
            ratio, K = (int(t) for t in body.split(","))
            return make_blocks("geometric", K, ratio=ratio)
        if kind == "explicit":
            values = [int(t) for t in body.split(",")]
            return make_blocks("explicit", len(values), values=values)
    except (TypeError, ValueError) as exc:
        raise ConfigError("blocks", f"cannot parse {text!r}: {exc}") from None
    raise ConfigError("blocks", f"unknown block kind {kind!r}")


def _parse_observable(system, freq_text, base):
    if isinstance(system, WedgeSystem):
        inner = []
        if freq_text:
            for part, chunk in zip(system.parts, freq_text.split(";")):
                freqs = tuple(int(t) for t in chunk.split(","))
                if len(freqs) != part.dim:
                    raise ConfigError(
                        "freqs", f"need {part.dim} frequencies per component")
                inner.append(Character(freqs))
        return WedgeObservable(base, tuple(inner))
    freqs = tuple(int(t) for t in freq_text.split(";")[0].split(",")) \
        if freq_text else (1,) * system.dim
    if len(freqs) != system.dim:
        raise ConfigError("freqs", f"system has dimension {system.dim}, "
                                   f"got {len(freqs)} frequencies")
    return Character(freqs)


def run_momo(res: Resolver, args, out: str):
    seq = res.get("seq", str, required=True)
    system_text = res.get("system", str, f"rotation:{DEFAULT_ALPHA!r}")
    blocks_text = res.get("blocks", str, "poly:2,40")
    freq_text = res.get("freqs", str)
    base = res.get("wedge-base", float, 1.0)
    points_kind = res.get("points", str, "random")
    trials = res.get("trials", parse_count, 32)
    mode = res.get("mode", str, "cesaro")
    seed = res.get("seed", parse_count, 0)
    system = parse_system(system_text)
    blocks = _parse_blocks(blocks_text)
    N = res.get("N", parse_count, int(blocks.b_K))
    if N < blocks.b_K - 1:
        raise ConfigError("N", f"prefix {N} shorter than final block edge "
                               f"{blocks.b_K} - 1")
    u = parse_sequence(seq, N, res.cache_dir)
    f = _parse_observable(system, freq_text, base)
    is_wedge = isinstance(system, WedgeSystem)
    if mode not in ("cesaro", "logarithmic"):
        raise ConfigError("mode", f"must be cesaro or logarithmic, got {mode!r}")
    if is_wedge and mode == "logarithmic":
        raise ConfigError("mode", "wedge runs support cesaro averaging only")
    if points_kind == "adversarial":
        points, result = adversarial_points(u, system, f, blocks,
                                            trials=trials, seed=seed)
        if is_wedge:
            result = wedge_momo(u, system, f, blocks, points)
    elif points_kind == "random":
        rng = make_rng(seed)
        points = [sample_point(system, rng) for _ in range(blocks.K - 1)]
        if is_wedge:
            result = wedge_momo(u, system, f, blocks, points)
        elif mode == "logarithmic":
            result = momo_log_value(u, system, f, blocks, points)
        else:
            result = momo_value(u, system, f, blocks, points)
    else:
        raise ConfigError("points", f"must be random or adversarial, "
                                    f"got {points_kind!r}")
    header = ["k", "b_lo", "b_hi", "magnitude"]
    rows = [[k, int(blocks.b[k]), int(blocks.b[k + 1]), m]
            for k, m in enumerate(result.block_values)]
    outputs = [write_csv(os.path.join(out, "momo.csv"), header, rows)]
    if _figures_on(res, args):
        from .plots import plot_block_magnitudes
        outputs.append(plot_block_magnitudes(
            result.block_values, os.path.join(out, "momo_blocks.png")))
    echo = {"seq": seq, "system": system_to_string(system),
            "blocks": blocks_text, "N": N, "K": blocks.K,
            "b_K": int(blocks.b_K), "points": points_kind, "mode": mode,
            "seed": seed, "value": result.value,
            "density": blocks.density, "growth_ok": blocks.growth_ok,
            "zero_density_ok": blocks.zero_density_ok}
    if hasattr(result, "core"):
        echo["core"] = result.core
        echo["tail"] = result.tail
    return echo, [], outputs


def _load_distribution(path) -> BlockDistribution:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0].split(",")[0] != "block":
        raise ConfigError("dist-a", f"{path}: expected header block,prob")
    pairs = []
    for ln in lines[1:]:
        blk, prob = ln.split(",")
        pairs.append((blk, float(prob)))
    k = len(pairs[0][0])
    digits = [int(ch) for blk, _ in pairs for ch in blk]
    alphabet = max(2, max(digits) + 1)
    probs = np.zeros(alphabet ** k)
    for blk, prob in pairs:
        if len(blk) != k:
            raise ConfigError("dist-a", f"{path}: ragged block strings")
        probs[int(blk, alphabet)] = prob
    return BlockDistribution(alphabet, k, probs, source="exact")


def _dump_distribution(path, dist: BlockDistribution) -> str:
    rows = [[block_string(i, dist.alphabet, dist.k), p]
            for i, p in enumerate(dist.probs)]
    return write_csv(path, ["block", "prob"], rows)


def run_dbar(res: Resolver, args, out: str):
    method = res.get("method", str, "auto")
    kmax = res.get("kmax", parse_count, 3)
    if kmax < 1:
        raise ConfigError("kmax", "must be >= 1")
    dist_a = res.get("dist-a", str)
    dist_b = res.get("dist-b", str)
    seq_a = res.get("seq-a", str)
    seq_b = res.get("seq-b", str)
    p = res.get("p", float)
    q = res.get("q", float)
    rows, plans = [], []
    if dist_a or dist_b:
        if not (dist_a and dist_b):
            raise ConfigError("dist-b", "need both dist-a and dist-b")
        P, Q = _load_distribution(dist_a), _load_distribution(dist_b)
        plan = dbar_k(P, Q, method=method)
        rows.append([P.k, plan.cost])
        plans.append(plan)
        last = (P, Q)
        echo_src = {"dist-a": dist_a, "dist-b": dist_b}
    elif seq_a or seq_b:
        if not (seq_a and seq_b):
            raise ConfigError("seq-b", "need both seq-a and seq-b")
        N = res.get("N", parse_count, required=True)
        xa = sign_symbols(parse_sequence(seq_a, N, res.cache_dir))
        xb = sign_symbols(parse_sequence(seq_b, N, res.cache_dir))
        for k in range(1, kmax + 1):
            P = empirical_blocks(xa, k)
            Q = empirical_blocks(xb, k)
            plan = dbar_k(P, Q, method=method)
            rows.append([k, plan.cost])
            plans.append(plan)
            last = (P, Q)
        echo_src = {"seq-a": seq_a, "seq-b": seq_b, "N": N}
    elif p is not None and q is not None:
        for k in range(1, kmax + 1):
            P = bernoulli_blocks(p, k)
            Q = bernoulli_blocks(q, k)
            plan = dbar_k(P, Q, method=method)
            rows.append([k, plan.cost])
            plans.append(plan)
            last = (P, Q)
        echo_src = {"p": p, "q": q}
    else:
        raise ConfigError("p", "need p and q, or seq-a and seq-b, "
                               "or dist-a and dist-b")
    outputs = [write_csv(os.path.join(out, "dbar.csv"), ["k", "cost"], rows)]
    outputs.append(_dump_distribution(os.path.join(out, "dbar_a.csv"), last[0]))
    outputs.append(_dump_distribution(os.path.join(out, "dbar_b.csv"), last[1]))
    if _figures_on(res, args):
        from .plots import plot_dbar_curve
        outputs.append(plot_dbar_curve(
            [r[0] for r in rows], [r[1] for r in rows],
            os.path.join(out, "dbar_curve.png")))
    echo = dict(echo_src, method=method, kmax=kmax,
                costs=[r[1] for r in rows],
                methods=[pl.method for pl in plans],
                iterations=[pl.iterations for pl in plans])
    return echo, [], outputs


def run_kronecker(res: Resolver, args, out: str):
    p = res.get("p", parse_count, required=True)
    depth = res.get("depth", parse_count, required=True)
    eps = res.get("eps", parse_float_list)
    samples = res.get("samples", parse_count, 64)
    max_height = res.get("max-height", parse_count, 6)
    tests = enumerate_test_functions(depth, max_height) if depth else []
    K, certs = build(p, depth, eps_schedule=eps, tests=tests,
                     samples_per_arc=samples)
    header = ["level", "word", "start", "length"]
    rows = [[K.level, a.word, float(a.start), float(a.length)]
            for a in K.arcs]
    outputs = [write_csv(os.path.join(out, "kronecker.csv"), header, rows)]
    cert_rows = [{"n": c.level, "k_n": c.k, "worst": c.worst,
                  "slack": c.slack, "bound": c.bound, "ok": c.ok}
                 for c in certs]
    outputs.append(write_json(
        os.path.join(out, "kronecker_certificates.json"), cert_rows))
    checks = [check(f"star_level_{c.level}", c.ok, c.worst + c.slack,
                    c.bound, "<") for c in certs]
    if _figures_on(res, args):
        from .plots import plot_arcs
        outputs.append(plot_arcs(
            K.arcs, certs, os.path.join(out, "kronecker_arcs.png")))
    echo = {"p": p, "depth": depth, "eps": eps, "samples": samples,
            "max_height": max_height, "n_arcs": len(K.arcs),
            "max_length": float(K.max_length),
            "tests": [t.label() for t in tests]}
    return echo, checks, outputs


def _parse_laws(text: str):
    laws = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok in ("u", "uniform"):
            laws.append(("uniform",))
        else:
            laws.append(("point", float(tok)))
    return tuple(laws)


def _parse_eta(text: str, d: int):
    kind, sep, body = text.partition(":")
    if kind == "point":
        y_text, _, v_text = body.partition("|")
        y = parse_float_list(y_text)
        v = parse_float_list(v_text) if v_text else [0.0] * len(y)
        return point_mass_eta(y, v)
    if kind == "product":
        y_text, _, v_text = body.partition("|")
        y_spec = _parse_laws(y_text)
        v_spec = _parse_laws(v_text) if v_text else (("point", 0.0),) * len(y_spec)
        return product_eta(y_spec, v_spec)
    raise ConfigError("eta", f"unknown eta spec {text!r}")


def _parse_freq_list(res, key, d):
    text = res.get(key, str)
    if text is None:
        return (0,) * d
    try:
        vals = [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise ConfigError(key, f"bad integer list {text!r}") from None
    if len(vals) > d:
        raise ConfigError(key, f"more than d={d} frequencies")
    return tuple(vals + [0] * (d - len(vals)))


def run_universal(res: Resolver, args, out: str):
    d = res.get("d", parse_count, 1)
    m1 = _parse_freq_list(res, "m1", d)
    m2 = _parse_freq_list(res, "m2", d)
    m3_text = res.get("m3", str, "1" + ",0" * (d - 1))
    m3 = tuple(int(t) for t in str(m3_text).split(","))
    if len(m3) != d:
        raise ConfigError("m3", f"need exactly d={d} frequencies")
    chi = CharacterTriple(m1, m2, m3)
    eta_text = res.get("eta", str, "product:" + ",".join(["u"] * d))
    eta = _parse_eta(eta_text, d)
    if eta.d != d:
        raise ConfigError("eta", f"eta has dimension {eta.d}, expected {d}")
    n_max = res.get("nmax", parse_count, 100)
    M = res.get("M", parse_count, 100_000)
    S = res.get("S", parse_count, 1_000_000)
    seed = res.get("seed", parse_count, 0)
    report = spectral_wzors_check(chi, eta, n_max, M, S=S, seed=seed)
    if eta.kind == "product" and any(
            m3[j] != 0 and eta.y_spec[j][0] == "uniform" for j in range(d)):
        tol = 4.0 / math.sqrt(M)
    else:
        tol = 1e-12
    header = ["n", "empirical_re", "empirical_im", "analytic_re",
              "analytic_im", "discrepancy"]
    rows = [[r["n"], r["empirical_re"], r["empirical_im"], r["analytic_re"],
             r["analytic_im"], r["discrepancy"]] for r in report.rows]
    outputs = [write_csv(os.path.join(out, "universal.csv"), header, rows)]
    outputs.append(write_json(os.path.join(out, "universal_report.json"),
                              list(report.rows)))
    checks = [check("moment_discrepancy", report.max_discrepancy <= tol,
                    report.max_discrepancy, tol, "<=")]
    if _figures_on(res, args):
        from .plots import plot_discrepancy
        outputs.append(plot_discrepancy(
            report.rows, os.path.join(out, "universal_discrepancy.png")))
    echo = {"d": d, "m1": list(m1), "m2": list(m2), "m3": list(m3),
            "eta": eta_text, "nmax": n_max, "M": M, "S": S, "seed": seed,
            "max_discrepancy": report.max_discrepancy}
    return echo, checks, outputs


def run_xcheck(res: Resolver, args, out: str):
    alpha = res.get("alpha", float, DEFAULT_ALPHA)
    N = res.get("N", parse_count, 1_000_000)
    H = res.get("H", parse_count, 1024)
    Hs = res.get("Hs", parse_int_list, [256, 512, 1024, 2048, 4096])
    M = res.get("M", parse_count, 256)
    threads = res.get("threads", parse_count)
    if H not in Hs:
        raise ConfigError("Hs", f"window list must contain H={H}")
    specs = [f"phase:0,{alpha!r}", f"phase:0,0,{alpha!r}", "random:7",
             "mobius"]
    header = ["sequence", "us2"] + [f"f1_{h}" for h in Hs]
    rows, us2_vals, f1_at_H = [], [], []
    f1_curves = []
    for spec in specs:
        u = parse_sequence(spec, N, res.cache_dir)
        us2 = us_norm(u, s=2, H=H).value
        curve = [f1(u, h, M=min(M, (N - h) // max(1, h // 4) + 1),
                    threads=threads).value for h in Hs]
        rows.append([spec, us2] + curve)
        us2_vals.append(us2)
        f1_at_H.append(curve[Hs.index(H)])
        f1_curves.append(curve)
    checks = [
        check("structured_us2_high", us2_vals[0] >= 0.9, us2_vals[0], 0.9, ">="),
        check("structured_f1_high", f1_at_H[0] >= 0.9, f1_at_H[0], 0.9, ">="),
    ]
    for i in (1, 2, 3):
        tag = ("quadratic", "random", "mobius")[i - 1]
        checks.append(check(f"{tag}_us2_low", us2_vals[i] <= 0.25,
                            us2_vals[i], 0.25, "<="))
        checks.append(check(f"{tag}_f1_low", f1_at_H[i] <= 0.25,
                            f1_at_H[i], 0.25, "<="))
        curve = f1_curves[i]
        decreasing = all(curve[j + 1] < curve[j] for j in range(len(curve) - 1))
        checks.append(check(f"{tag}_f1_decreasing", decreasing,
                            curve, None, "strictly decreasing in H"))
    outputs = [write_csv(os.path.join(out, "xcheck.csv"), header, rows)]
    if _figures_on(res, args):
        from .plots import plot_cross_table
        outputs.append(plot_cross_table(
            specs, us2_vals, f1_at_H, os.path.join(out, "xcheck_table.png")))
    echo = {"alpha": alpha, "N": N, "H": H, "Hs": Hs, "M": M,
            "sequences": specs}
    return echo, checks, outputs


RUNNERS = {
    "ghk": run_ghk,
    "fourier": run_fourier,
    "spectral": run_spectral,
    "momo": run_momo,
    "dbar": run_dbar,
    "kronecker": run_kronecker,
    "universal": run_universal,
    "xcheck": run_xcheck,
}

KNOWN_KEYS = {
    "ghk": {"seq", "n", "h", "s", "mode", "lam", "seed"},
    "fourier": {"seq", "n", "h", "m", "stride", "grid-factor", "threads",
                "seed"},
    "spectral": {"seq", "n", "h", "grid", "tau", "mode", "seed"},
    "momo": {"seq", "n", "system", "blocks", "freqs", "wedge-base", "points",
             "trials", "mode", "seed"},
    "dbar": {"p", "q", "seq-a", "seq-b", "dist-a", "dist-b", "n", "kmax",
             "method", "seed"},
    "kronecker": {"p", "depth", "eps", "samples", "max-height", "seed"},
    "universal": {"d", "m1", "m2", "m3", "eta", "nmax", "m", "s", "seed"},
    "xcheck": {"alpha", "n", "h", "hs", "m", "threads", "seed"},
}


def _add_common(sub):
    sub.add_argument("--config", help="sectioned key=value config file")
    sub.add_argument("--out", default=".", help="output directory")
    sub.add_argument("--cache", help="sequence cache directory")
    sub.add_argument("--threads", type=int, default=None,
                     help="worker threads (also env ORTHODYN_THREADS)")
    sub.add_argument("--seed", type=int, default=None, help="run seed")
    sub.add_argument("--no-figures", action="store_true",
                     help="skip figure rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orthodyn",
        description="Numerical experiments on multiplicative-orthogonality "
                    "statistics: seminorms, window Fourier scans, spectral "
                    "atoms, block functionals, block transport distance, "
                    "arc-set recursion, and coordinate-adding spectra.")
    subs = parser.add_subparsers(dest="command")

    sp = subs.add_parser("ghk", help="degree-s uniformity seminorms")
    _add_common(sp)
    sp.add_argument("--seq", help="sequence spec (mobius, liouville, "
                                  "random:SEED, phase:c0,c1,..., mix:...)")
    sp.add_argument("--N", help="prefix length, accepts 1e6 style")
    sp.add_argument("--H", help="correlation window length")
    sp.add_argument("--s", type=int, help="seminorm degree 1..3")
    sp.add_argument("--mode", help="cesaro or logarithmic averaging")
    sp.add_argument("--lam", help="modulation position in [0,1)")

    sp = subs.add_parser("fourier", help="local Fourier window scan")
    _add_common(sp)
    sp.add_argument("--seq")
    sp.add_argument("--N")
    sp.add_argument("--H", help="comma list of window lengths")
    sp.add_argument("--M", help="number of windows")
    sp.add_argument("--stride", help="offset stride, default H//4")
    sp.add_argument("--grid-factor", dest="grid_factor")

    sp = subs.add_parser("spectral", help="correlation spectrum atoms")
    _add_common(sp)
    sp.add_argument("--seq")
    sp.add_argument("--N")
    sp.add_argument("--H", help="kernel window, default N//4")
    sp.add_argument("--grid", help="scan grid size")
    sp.add_argument("--tau", help="atom mass threshold")
    sp.add_argument("--mode")

    sp = subs.add_parser("momo", help="averaged block functionals")
    _add_common(sp)
    sp.add_argument("--seq")
    sp.add_argument("--N")
    sp.add_argument("--system", help="rotation:a,b / shear / skew:a / "
                                     "product(...) / wedge(...|scales=...)")
    sp.add_argument("--blocks", help="poly:DEG,K / geometric:R,K / "
                                     "explicit:b1,b2,...")
    sp.add_argument("--freqs", help="character frequencies, ';' per wedge "
                                    "component")
    sp.add_argument("--wedge-base", dest="wedge_base",
                    help="observable base value on the wedge")
    sp.add_argument("--points", help="random or adversarial")
    sp.add_argument("--trials", help="adversarial candidates per block")
    sp.add_argument("--mode")

    sp = subs.add_parser("dbar", help="block-distribution transport distance")
    _add_common(sp)
    sp.add_argument("--p", help="first Bernoulli parameter")
    sp.add_argument("--q", help="second Bernoulli parameter")
    sp.add_argument("--seq-a", dest="seq_a", help="first sign sequence spec")
    sp.add_argument("--seq-b", dest="seq_b", help="second sign sequence spec")
    sp.add_argument("--dist-a", dest="dist_a", help="first block,prob CSV")
    sp.add_argument("--dist-b", dest="dist_b", help="second block,prob CSV")
    sp.add_argument("--N", help="prefix length for sequence mode")
    sp.add_argument("--kmax", help="largest block length")
    sp.add_argument("--method", help="auto, exact, or entropic")

    sp = subs.add_parser("kronecker", help="nested arc-set recursion")
    _add_common(sp)
    sp.add_argument("--p", help="prime branching base")
    sp.add_argument("--depth", help="recursion depth")
    sp.add_argument("--eps", help="comma list overriding 2^-n schedule")
    sp.add_argument("--samples", help="verification samples per arc")
    sp.add_argument("--max-height", dest="max_height",
                    help="test function enumeration height cap")

    sp = subs.add_parser("universal", help="coordinate-adding automorphism "
                                           "spectral moments")
    _add_common(sp)
    sp.add_argument("--d", help="torus dimension per factor")
    sp.add_argument("--m1", help="y frequencies, comma list")
    sp.add_argument("--m2", help="v frequencies, comma list")
    sp.add_argument("--m3", help="z frequencies, comma list")
    sp.add_argument("--eta", help="point:Y|V or product:LAWS|LAWS "
                                  "(law = u or a float)")
    sp.add_argument("--nmax", help="largest power checked")
    sp.add_argument("--M", help="Monte Carlo sample count")
    sp.add_argument("--S", help="orbit-time sampling range")

    sp = subs.add_parser("xcheck", help="four-sequence cross table of "
                                        "seminorm and Fourier statistics")
    _add_common(sp)
    sp.add_argument("--alpha", help="rotation number for the phase rows")
    sp.add_argument("--N")
    sp.add_argument("--H", help="window for the headline statistics")
    sp.add_argument("--Hs", help="comma list for the decrease scan")
    sp.add_argument("--M", help="windows per Fourier average")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    try:
        section = {}
        if args.config:
            section = load_config_file(args.config).get(args.command, {})
        res = Resolver(section, args)
        unknown = res.unknown_keys(KNOWN_KEYS[args.command] | {"cache"})
        if unknown:
            raise ConfigError(unknown[0],
                              f"unknown key for experiment {args.command!r}")
        res.cache_dir = res.get("cache", str)
        threads = getattr(args, "threads", None)
        if threads is not None:
            os.environ["ORTHODYN_THREADS"] = str(threads)
        out = args.out
        os.makedirs(out, exist_ok=True)
        t0 = time.perf_counter()
        echo, checks, outputs = RUNNERS[args.command](res, args, out)
        wall = time.perf_counter() - t0
        summary = {"experiment": args.command, "config": echo,
                   "checks": checks, "outputs": sorted(outputs),
                   "wall_time_s": round(wall, 3)}
        summary_path = write_json(
            os.path.join(out, f"{args.command}_summary.json"), summary)
        for c in checks:
            state = "ok  " if c["passed"] else "FAIL"
            print(f"{state} {c['name']}: value={c['value']} "
                  f"{c['relation']} {c['threshold']}")
        print(f"summary: {summary_path}")
        return 0 if all(c["passed"] for c in checks) else 1
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InsufficientDataError, ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
