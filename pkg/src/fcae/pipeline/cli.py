"""Command line entry point: ``fcae {gen,train,denoise,sweep,energy,inspect}``."""
import argparse
import contextlib
import logging
import sys
from pathlib import Path

from ..errors import FCAEError
from . import io, report, runner
from .config import SWEEP_RATIOS, check_layers, from_flat, load_config
from .synthetic import gen_synthetic

log = logging.getLogger("fcae")


def _floats(text):
    return tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())


def _subsets(text):
    """``"1,2,3;1,2,3,4"`` -> ((1, 2, 3), (1, 2, 3, 4))."""
    return tuple(check_layers(int(v) for v in part.split(",") if v.strip())
                 for part in text.split(";") if part.strip())


def _threads(n):
    if not n:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits
    return threadpool_limits(limits=n)


def _config(args):
    config = load_config(args.config, args.preset) if args.config else from_flat({}, args.preset)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.alpha is not None:
        overrides["alpha"] = args.alpha
    if getattr(args, "epochs", None) is not None:
        overrides["epochs"] = args.epochs
    if overrides:
        config = config.with_training(**overrides)
    if args.sigma is not None or args.out is not None:
        flat = config.to_flat()
        if args.sigma is not None:
            flat["sigma"] = args.sigma
        if args.out is not None:
            flat["output_dir"] = args.out
        config = from_flat(flat, args.preset)
    return config


def cmd_gen(args):
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    seed = args.seed if args.seed is not None else 0
    clean = gen_synthetic(args.n, args.length, seed)
    io.write_signals_csv(out / "clean.csv", clean)
    print(f"wrote {len(clean)} signals to {out / 'clean.csv'}")
    if args.sigma:
        from ..signal import add_gaussian_noise
        from .config import seed_streams
        noisy = [add_gaussian_noise(c, args.sigma, s) for c, s in zip(clean, seed_streams(seed + 1, len(clean)))]
        io.write_signals_csv(out / "noisy.csv", noisy)
        print(f"wrote noisy copies (sigma={args.sigma}) to {out / 'noisy.csv'}")


def cmd_train(args):
    config = _config(args)
    result = runner.run_training(config)
    print(f"checkpoint: {result.checkpoint}")
    print(f"loss: {result.losses[0]:.6g} -> {result.losses[-1]:.6g}")
    test_clean, test_noisy = result.dataset.subset(result.dataset.test_idx)
    if test_noisy:
        snr_db, prd_pct = runner.evaluate(result.model, test_noisy, test_clean)
        print(f"test: mean SNR {snr_db:.3f} dB, mean PRD {prd_pct:.3f} %")


def cmd_denoise(args):
    model = runner.load_model(args.checkpoint)
    noisy = io.ingest_csv(args.input)
    clean = io.ingest_csv(args.clean) if args.clean else None
    results = runner.run_denoise(model, noisy, clean)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    io.write_signals_csv(out / "denoised.csv", [r.signal for r in results])
    if clean is not None:
        lines = ["signal,snr_db,prd_pct"]
        lines += [f"{i},{r.report.snr_db!r},{r.report.prd_pct!r}" for i, r in enumerate(results)]
        (out / "metrics.csv").write_text("\n".join(lines) + "\n")
        for i, r in enumerate(results):
            print(f"signal {i}: SNR {r.report.snr_db:.3f} dB, PRD {r.report.prd_pct:.3f} %")
    print(f"wrote {len(results)} signals to {out / 'denoised.csv'}")


def _test_split(args):
    base = Path(args.checkpoints[0]).parent
    clean = io.ingest_csv(args.clean or base / runner.TEST_CLEAN_NAME)
    noisy = io.ingest_csv(args.noisy or base / runner.TEST_NOISY_NAME)
    return noisy, clean


def cmd_sweep(args):
    models = [runner.load_model(p) for p in args.checkpoints]
    noisy, clean = _test_split(args)
    alphas = (args.alpha,) if args.alpha is not None else None
    cells = runner.run_sweep(models, noisy, clean, args.ratios, args.layers, alphas=alphas,
                             seed=args.seed or 0)
    profiles = {f"{m.alpha:g}": runner.energy_profile(m.params) for m in models}
    for path in report.emit_report(cells, profiles, args.out or "."):
        print(f"wrote {path}")


def cmd_energy(args):
    model = runner.load_model(args.checkpoint)
    for path in report.emit_report([], {"": runner.energy_profile(model.params)}, args.out or "."):
        print(f"wrote {path}")


def cmd_inspect(args):
    params, header = io.read_checkpoint(args.checkpoint)
    for key, value in header.items():
        print(f"{key}: {value}")
    for l, (W, B) in enumerate(zip(params.W, params.B), start=1):
        print(f"W[{l}]: {W.shape[0]}x{W.shape[1]}  B[{l}]: {B.size}")
    meta = Path(args.checkpoint).with_suffix(".json")
    if meta.exists():
        m = io.read_json(meta)
        print(f"frag_len: {m['frag_len']}")
        print(f"loss: {m['initial_loss']!r} -> {m['final_loss']!r}")


def build_parser():
    parser = argparse.ArgumentParser(prog="fcae", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=False):
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--threads", type=int, default=0, help="BLAS threads; 1 = strict reproducibility")
        if config:
            p.add_argument("--config")
            p.add_argument("--preset", default="desk", choices=["desk", "keirn", "motor"])
            p.add_argument("--alpha", type=float)
            p.add_argument("--sigma", type=float)
            p.add_argument("--epochs", type=int)

    p = sub.add_parser("gen", help="write synthetic clean signals to CSV")
    common(p)
    p.add_argument("--n", type=int, default=40)
    p.add_argument("--length", type=int, default=2500)
    p.add_argument("--sigma", type=float, default=0.0, help="also write a noisy copy")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("train", help="train a model from a config")
    common(p, config=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("denoise", help="denoise signals from a CSV file")
    common(p)
    p.add_argument("checkpoint")
    p.add_argument("--input", required=True)
    p.add_argument("--clean", help="clean references for SNR/PRD")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("sweep", help="compression-ratio sweep over one or more checkpoints")
    common(p)
    p.add_argument("checkpoints", nargs="+")
    p.add_argument("--ratios", type=_floats, default=SWEEP_RATIOS)
    p.add_argument("--layers", type=_subsets, default=((1, 2, 3, 4),),
                   help="layer subsets, e.g. '1,2,3;1,2,3,4'")
    p.add_argument("--alpha", type=float, help="require a checkpoint trained at this order")
    p.add_argument("--clean")
    p.add_argument("--noisy")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("energy", help="singular-value energy profile of each layer")
    common(p)
    p.add_argument("checkpoint")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("inspect", help="print checkpoint header")
    common(p)
    p.add_argument("checkpoint")
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with _threads(args.threads):
            args.func(args)
    except (FCAEError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
