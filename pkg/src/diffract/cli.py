"""Command line interface: generate, diffract, analyze, reproduce.

Runs are driven by plain-text config files (``key = value`` lines, '#'
comments, unknown keys rejected).  Every run writes the fully resolved
configuration next to its outputs as ``resolved.cfg``; re-running from the
same inputs reproduces every output byte for byte in single-threaded mode.
The environment variable DIFFRACT_SEED overrides the seed from any config
file (precedence: environment, then config, then the default 0).

Exit codes: 0 success, 2 configuration error, 3 input file error,
4 analysis incompatibility.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import analysis, fileio, ice, ising, sequences, spectra
from .core import SeededRng, SpectrumGrid, comb_from_lattice_weights
from .sequences import CircleParams, TwoLetterWeights

__all__ = ["main"]


class ConfigError(Exception):
    exit_code = 2


class InputError(Exception):
    exit_code = 3


class AnalysisError(Exception):
    exit_code = 4


# ---------------------------------------------------------------------------
# config files
# ---------------------------------------------------------------------------

_COMMON_KEYS = {
    "model": str,
    "seed": int,
    "stream": int,
    "pgm": str,
    "gamma": float,
    "colormap": str,
    "sizes": str,
    "k": str,
    "realizations": int,
}

_MODEL_KEYS = {
    "lattice": {"n": int},
    "bernoulli": {"n": int, "h1": float, "h2": float, "p1": float},
    "rudin-shapiro": {"n": int},
    "thue-morse": {"n": int, "signed": int},
    "thue-morse-2d": {"depth": int, "signed": int},
    "fibonacci": {"n": int},
    "circle": {"n": int, "alpha": float, "beta": float, "xi": float, "x0": float},
    "random-tiling": {"n": int, "p": float},
    "ising": {"L": int, "K1": float, "K2": float, "equilibration": int,
              "spacing": int, "restrict_positive": int},
    "ice": {"L": int, "equilibration": int, "spacing": int,
            "hO": float, "hH": float},
    "bernoulli-hydrogens": {"L": int, "hO": float, "hH": float},
}

_DEFAULTS = {
    "seed": 0, "stream": 0, "signed": 1, "h1": 1.0, "h2": 0.0, "p1": 0.5,
    "alpha": (5 ** 0.5 - 1) / 2, "beta": 2 - sequences.TAU,
    "xi": sequences.TAU - 1, "x0": 0.0, "p": 0.5,
    "K1": 0.35, "K2": 0.1, "equilibration": 1000, "spacing": 10,
    "restrict_positive": 0, "hO": 0.0, "hH": 1.0,
    "pgm": "log", "gamma": 1.0, "colormap": "grayscale", "realizations": 1,
}


def parse_config(path, require_model_keys: bool = True) -> dict:
    """Read key = value lines; validate keys against the model's schema.

    With require_model_keys=False, model keys without defaults may be
    absent (the scaling analysis supplies the size itself).
    """
    raw: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    model = raw.get("model")
    if model is None:
        raise ConfigError("config must name a model")
    if model not in _MODEL_KEYS:
        raise ConfigError(
            f"unknown model {model!r}; valid models: {', '.join(sorted(_MODEL_KEYS))}")
    schema = dict(_COMMON_KEYS)
    schema.update(_MODEL_KEYS[model])
    config: dict = {}
    for key, value in raw.items():
        if key not in schema:
            raise ConfigError(f"unknown key {key!r} for model {model!r}")
        try:
            config[key] = schema[key](value)
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: {exc}") from exc
    for key, typ in _MODEL_KEYS[model].items():
        if key not in config:
            if key in _DEFAULTS:
                config[key] = typ(_DEFAULTS[key])
            elif require_model_keys:
                raise ConfigError(f"model {model!r} requires key {key!r}")
    for key in ("seed", "stream", "pgm", "gamma", "colormap"):
        config.setdefault(key, _DEFAULTS[key])
    if config["colormap"] != "grayscale":
        raise ConfigError("only the linear grayscale colormap is supported")
    env_seed = os.environ.get("DIFFRACT_SEED")
    if env_seed is not None:
        try:
            config["seed"] = int(env_seed)
        except ValueError as exc:
            raise ConfigError(f"DIFFRACT_SEED must be an integer: {env_seed!r}") from exc
    return config


def write_resolved(outdir: Path, config: dict) -> None:
    lines = [f"{key} = {config[key]}" for key in sorted(config)]
    (outdir / "resolved.cfg").write_text("\n".join(lines) + "\n")


def build_comb(config: dict):
    """Instantiate the configured model as a weighted comb."""
    model = config["model"]
    rng = SeededRng(config["seed"], config["stream"])
    if model == "lattice":
        return comb_from_lattice_weights(np.ones(config["n"]), 1.0, periodic=True)
    if model == "bernoulli":
        w = TwoLetterWeights(config["h1"], config["h2"], config["p1"], 1 - config["p1"])
        return sequences.bernoulli_chain(config["n"], w, rng)
    if model == "rudin-shapiro":
        return sequences.rudin_shapiro(0, config["n"])
    if model == "thue-morse":
        return sequences.thue_morse(config["n"], signed=bool(config["signed"]))
    if model == "thue-morse-2d":
        return sequences.thue_morse_2d(config["depth"], signed=bool(config["signed"]))
    if model == "fibonacci":
        return sequences.fibonacci_chain(config["n"])
    if model == "circle":
        params = CircleParams(config["alpha"], config["beta"], config["xi"], config["x0"])
        return sequences.circle_sequence(config["n"], params)
    if model == "random-tiling":
        return sequences.random_interval_tiling(config["n"], config["p"], rng)
    if model == "ising":
        params = ising.IsingParams(
            shape=(config["L"], config["L"]), k1=config["K1"], k2=config["K2"],
            rng=rng, equilibration_sweeps=config["equilibration"],
            sweeps_between=config["spacing"],
            restrict_positive=bool(config["restrict_positive"]))
        return ising.ising_sample(params)
    if model == "ice":
        cfg = ice.ice_sample(config["L"], rng,
                             equilibration_sweeps=config["equilibration"])
        return ice.ice_to_comb(cfg, config["hO"], config["hH"])
    if model == "bernoulli-hydrogens":
        cfg = ice.bernoulli_hydrogens(config["L"], rng)
        return ice.ice_to_comb(cfg, config["hO"], config["hH"])
    raise ConfigError(f"unknown model {model!r}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_generate(args) -> int:
    config = parse_config(args.config)
    try:
        comb = build_comb(config)
    except (ValueError, OverflowError) as exc:
        raise ConfigError(str(exc)) from exc
    out = _outdir(args)
    fileio.write_comb(out / "comb.txt", comb)
    write_resolved(out, config)
    print(f"wrote {out / 'comb.txt'} ({len(comb)} points)")
    return 0


def _read_comb(path):
    try:
        return fileio.read_comb(path)
    except OSError as exc:
        raise InputError(f"cannot read comb file: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"malformed comb file: {exc}") from exc


def cmd_diffract(args) -> int:
    comb = _read_comb(args.comb)
    try:
        spec = spectra.diffraction_fft(comb, oversample=args.oversample,
                                       bin_width=args.bin_width)
    except spectra.DiffractionError as exc:
        raise InputError(str(exc)) from exc
    out = _outdir(args)
    fileio.write_spectrum_csv(out / "spectrum.csv", spec)
    made = [out / "spectrum.csv"]
    if args.pgm != "off":
        if spec.dimension != 2:
            raise AnalysisError("PGM rendering needs a 2D spectrum")
        fileio.write_pgm(out / "spectrum.pgm", spec.values, mode=args.pgm,
                         gamma=args.gamma)
        made.append(out / "spectrum.pgm")
    if args.cut is not None:
        if spec.dimension != 2:
            raise AnalysisError("cuts need a 2D spectrum")
        k2, values, used = spectra.grid_cut(spec, args.cut)
        cut_spec = SpectrumGrid(dimension=1, dk=(spec.dk[1],), values=values,
                                volume=spec.volume)
        fileio.write_spectrum_csv(out / "cut.csv", cut_spec)
        (out / "cut_info.txt").write_text(
            f"requested k1 = {args.cut}\nrow k1 = {used}\n")
        made.append(out / "cut.csv")
    write_resolved(out, {
        "input": args.comb, "oversample": args.oversample,
        "bin_width": args.bin_width, "pgm": args.pgm, "gamma": args.gamma,
        "cut": args.cut,
    })
    print("wrote " + ", ".join(str(p) for p in made))
    return 0


def _read_spectrum(path):
    try:
        return fileio.read_spectrum_csv(path)
    except OSError as exc:
        raise InputError(f"cannot read spectrum file: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"malformed spectrum file: {exc}") from exc


def _report(out: Path, lines: list[str], rows: list[tuple]) -> None:
    (out / "report.txt").write_text("\n".join(lines) + "\n")
    with open(out / "report.csv", "w") as fh:
        for row in rows:
            fh.write(",".join(str(x) for x in row) + "\n")
    for line in lines:
        print(line)


def cmd_analyze(args) -> int:
    out = _outdir(args)
    if args.analysis == "scaling":
        if not args.config:
            raise ConfigError("scaling analysis needs --config")
        config = parse_config(args.config, require_model_keys=False)
        if "sizes" not in config or "k" not in config:
            raise ConfigError("scaling analysis needs 'sizes' and 'k' in the config")
        if "n" not in _MODEL_KEYS[config["model"]]:
            raise AnalysisError(
                f"scaling runs over the point count; model {config['model']!r} "
                f"is not size-parameterized by n")
        sizes = [int(s) for s in config["sizes"].split(",")]
        k = [float(x) for x in config["k"].split(",")]
        k = k[0] if len(k) == 1 else np.array(k)
        model_cfg = dict(config)

        def generator(n, rng=None):
            cfg = dict(model_cfg)
            cfg["n"] = n
            if rng is not None:
                cfg["seed"], cfg["stream"] = rng.seed, rng.stream
            return build_comb(cfg)

        realizations = config.get("realizations", 1)
        rng = SeededRng(config["seed"], config["stream"]) if realizations > 1 else None
        try:
            fit = analysis.peak_scaling(generator, k, sizes,
                                        realizations=realizations, rng=rng)
        except ValueError as exc:
            raise AnalysisError(str(exc)) from exc
        lines = [
            f"scaling analysis at k = {config['k']}",
            f"alpha = {fit.alpha:.6f} +- {fit.alpha_stderr:.6f}",
            f"classification = {fit.classification}",
            f"note: {fit.caveat}",
        ]
        rows = [("size", "intensity")] + list(zip(fit.sizes, fit.intensities))
        _report(out, lines, rows)
        write_resolved(out, config)
        return 0
    if args.analysis == "symmetry":
        spec = _read_spectrum(args.inputs[0])
        try:
            target = analysis.bragg_only(spec) if args.bragg_only else spec
            score = analysis.symmetry_score(target, args.op)
        except ValueError as exc:
            raise AnalysisError(str(exc)) from exc
        part = "bragg-only" if args.bragg_only else "full"
        lines = [f"symmetry analysis ({args.op}, {part})",
                 f"score = {score:.6g}",
                 "0 means symmetric under the operation"]
        _report(out, lines, [("op", "part", "score"), (args.op, part, score)])
        write_resolved(out, {"analysis": "symmetry", "op": args.op,
                             "bragg_only": args.bragg_only, "input": args.inputs[0]})
        return 0
    if args.analysis == "homometry":
        if len(args.inputs) < 2:
            raise AnalysisError("homometry needs two spectrum files")
        a = _read_spectrum(args.inputs[0])
        b = _read_spectrum(args.inputs[1])
        try:
            rep = analysis.homometry_compare(a, b, width=args.width)
        except ValueError as exc:
            raise AnalysisError(str(exc)) from exc
        lines = [f"homometry comparison (smoothing width {rep.width})",
                 f"raw L1 distance = {rep.raw:.6g}",
                 f"smoothed L1 distance = {rep.smoothed:.6g}"]
        rows = [("quantity", "value"), ("raw", rep.raw), ("smoothed", rep.smoothed)]
        if args.baseline:
            base = [_read_spectrum(p) for p in args.baseline]
            dists = []
            for i in range(len(base)):
                for j in range(i + 1, len(base)):
                    try:
                        dists.append(analysis.homometry_compare(
                            base[i], base[j], width=args.width).smoothed)
                    except ValueError as exc:
                        raise AnalysisError(str(exc)) from exc
            spread = float(np.mean(dists))
            verdict = "indistinguishable" if rep.smoothed < spread else "distinguishable"
            lines.append(f"baseline spread = {spread:.6g}")
            lines.append(f"verdict: {verdict} at width {rep.width}")
            rows += [("spread", spread), ("verdict", verdict)]
        _report(out, lines, rows)
        write_resolved(out, {"analysis": "homometry", "width": args.width,
                             "inputs": " ".join(args.inputs),
                             "baseline": " ".join(args.baseline or [])})
        return 0
    if args.analysis == "entropy":
        comb = _read_comb(args.inputs[0])
        values = comb.weights.real
        try:
            result = analysis.block_entropy(values, max_length=args.max_block)
        except ValueError as exc:
            raise AnalysisError(str(exc)) from exc
        lines = [f"block entropy up to length {args.max_block} (nats)"]
        rows = [("n", "H_n", "h_n", "undersampled")]
        for i, n in enumerate(result.lengths):
            h = result.slopes[i] if i < len(result.slopes) else float("nan")
            flag = int(n in result.undersampled)
            lines.append(f"n={n:2d}  H={result.entropies[i]:.4f}  h={h:.4f}"
                         + ("  (undersampled)" if flag else ""))
            rows.append((n, result.entropies[i], h, flag))
        _report(out, lines, rows)
        write_resolved(out, {"analysis": "entropy", "max_block": args.max_block,
                             "input": args.inputs[0]})
        return 0
    raise ConfigError(f"unknown analysis {args.analysis!r}")


# ---------------------------------------------------------------------------
# figure reproduction
# ---------------------------------------------------------------------------

def _ensemble_mean_spectrum(make_comb, count: int, threads: int) -> SpectrumGrid:
    """Average FFT spectra of `count` members; reduction is in index order,
    so the result does not depend on the thread count."""
    def one(i: int):
        return spectra.diffraction_fft(make_comb(i))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one, range(count)))
    else:
        parts = [one(i) for i in range(count)]
    acc = np.zeros_like(parts[0].values)
    for p in parts:
        acc += p.values
    first = parts[0]
    return SpectrumGrid(dimension=first.dimension, dk=first.dk,
                        values=acc / count, volume=first.volume)


def cmd_reproduce(args) -> int:
    out = _outdir(args)
    quick = args.quick
    seed = int(os.environ.get("DIFFRACT_SEED", args.seed))
    threads = args.threads
    fig = args.figure
    resolved = {"figure": fig, "seed": seed, "quick": int(quick), "threads": threads}
    if fig == "fig1":
        depth = 5
        comb = sequences.thue_morse_2d(depth)
        fileio.write_comb(out / "pattern.txt", comb)
        fileio.write_pgm(out / "pattern.pgm", comb.lattice_weights().real,
                         mode="linear")
        resolved.update(depth=depth)
    elif fig == "fig2":
        depth = 7 if quick else 9
        comb = sequences.thue_morse_2d(depth)
        spec = spectra.diffraction_fft(comb)
        fileio.write_spectrum_csv(out / "spectrum.csv", spec)
        fileio.write_pgm(out / "spectrum.pgm", spec.values, mode="log")
        k2, cut, used = spectra.grid_cut(spec, 1.0 / 3.0)
        fileio.write_spectrum_csv(out / "cut.csv", SpectrumGrid(
            dimension=1, dk=(spec.dk[1],), values=cut, volume=spec.volume))
        resolved.update(depth=depth, cut_row_k1=used)
    elif fig == "fig3":
        size = 64 if quick else 256
        count = 50 if quick else 200
        params = ising.IsingParams(shape=(size, size), k1=0.35, k2=0.1,
                                   rng=SeededRng(seed),
                                   equilibration_sweeps=1000, sweeps_between=10)
        configs = list(ising.ising_configurations(params, count))
        spec = _ensemble_mean_spectrum(
            lambda i: ising.occupation_comb(configs[i]), count, threads)
        fileio.write_spectrum_csv(out / "spectrum.csv", spec)
        fileio.write_pgm(out / "spectrum.pgm", spec.values, mode="log")
        resolved.update(L=size, K1=0.35, K2=0.1, measurements=count)
    elif fig == "fig4":
        size = 16
        cfg = ice.ice_sample(size, SeededRng(seed))
        comb = ice.ice_to_comb(cfg, 0.0, 1.0)
        fileio.write_comb(out / "ice_comb.txt", comb)
        fileio.write_pgm(out / "ice_pattern.pgm",
                         np.abs(comb.lattice_weights()), mode="linear")
        resolved.update(L=size, hO=0.0, hH=1.0)
    elif fig == "fig5":
        size = 32 if quick else 64
        count = 20 if quick else 100
        configs = list(ice.ice_configurations(size, count, SeededRng(seed)))
        spec = _ensemble_mean_spectrum(
            lambda i: ice.ice_to_comb(configs[i], 0.0, 1.0), count, threads)
        fileio.write_spectrum_csv(out / "spectrum.csv", spec)
        fileio.write_pgm(out / "spectrum.pgm", spec.values, mode="log")
        resolved.update(L=size, hO=0.0, hH=1.0, configurations=count)
    else:
        raise ConfigError(f"unknown figure id {fig!r}; use fig1 .. fig5")
    write_resolved(out, resolved)
    print(f"reproduced {fig} into {out}")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diffract",
        description="point-set diffraction models, spectra and analyses")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for ensemble averages (results "
                             "are identical for any value)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a model configuration")
    p.add_argument("config", help="key = value config file")
    p.add_argument("--out", default="run", help="output directory")

    p = sub.add_parser("diffract", help="diffract a comb file onto an FFT grid")
    p.add_argument("comb", help="comb file from 'generate'")
    p.add_argument("--out", default="run", help="output directory")
    p.add_argument("--oversample", type=int, default=1)
    p.add_argument("--bin-width", type=float, default=None,
                   help="snap width for incommensurate combs")
    p.add_argument("--pgm", choices=["log", "linear", "off"], default="off")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--cut", type=float, default=None,
                   help="write the 1D cut along this k1")

    p = sub.add_parser("analyze", help="run an analysis and write a report")
    p.add_argument("analysis", choices=["scaling", "symmetry", "homometry", "entropy"])
    p.add_argument("inputs", nargs="*", help="input spectrum/comb files")
    p.add_argument("--out", default="run", help="output directory")
    p.add_argument("--config", help="model config (scaling)")
    p.add_argument("--op", choices=["swap", "rot90"], default="swap")
    p.add_argument("--bragg-only", action="store_true")
    p.add_argument("--width", type=int, default=8)
    p.add_argument("--baseline", nargs="*", default=None,
                   help="baseline spectra for the homometry spread")
    p.add_argument("--max-block", type=int, default=10)

    p = sub.add_parser("reproduce", help="one-shot pipeline for a figure")
    p.add_argument("figure", help="fig1 | fig2 | fig3 | fig4 | fig5")
    p.add_argument("--out", default="run", help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true",
                   help="smaller sizes for a fast smoke run")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "diffract":
            return cmd_diffract(args)
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "reproduce":
            return cmd_reproduce(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, InputError, AnalysisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
