"""Command-line front end: sweeps, single points, soft-metric audits,
code generation, and configuration info.

Exit status is 0 on success and 2 for configuration errors (bad flags, bad
grid syntax, malformed config files or codes).
"""

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from reconsim import metrics
from reconsim.channel import make_constellation, transmit
from reconsim.ldpc import generate_regular_code, load_alist, write_alist
from reconsim.quantizer import make_quantizer, quantize
from reconsim.simulator import SimPoint, run_point, run_sweep
from reconsim.softmetric import soft_metric

_NEGATIVE_VALUE_FLAGS = ("--snr",)


def _merge_negative_values(argv):
    """Glue '--snr -11:-10.5:11' into '--snr=-11:-10.5:11'.

    argparse treats a leading dash as an option; grids and single SNRs are
    routinely negative, so the value is merged into the flag token.
    """
    merged = []
    skip = False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (
            tok in _NEGATIVE_VALUE_FLAGS
            and nxt is not None
            and nxt.startswith("-")
            and len(nxt) > 1
            and (nxt[1].isdigit() or nxt[1] == ".")
        ):
            merged.append(f"{tok}={nxt}")
            skip = True
        else:
            merged.append(tok)
    return merged


def _parse_grid(text, parser):
    """SNR grid: a single value, a comma list, or start:stop:steps."""
    try:
        if ":" in text:
            start_s, stop_s, steps_s = text.split(":")
            start, stop, steps = float(start_s), float(stop_s), int(steps_s)
            if steps < 1:
                parser.error(f"grid {text!r}: steps must be at least 1")
            if stop < start:
                parser.error(f"grid {text!r}: stop must not be below start")
            return [float(v) for v in np.linspace(start, stop, steps)]
        return [float(tok) for tok in text.split(",") if tok]
    except ValueError:
        parser.error(f"cannot parse SNR grid {text!r}")


def _add_code_args(sub):
    sub.add_argument("--code", metavar="ALIST", help="parity-check matrix file")
    sub.add_argument(
        "--gen",
        metavar="N,WC,WR",
        help="generate a regular code: block length, column weight, row weight",
    )
    sub.add_argument("--gen-seed", type=int, default=1, help="seed for --gen (default 1)")


def _add_sim_args(sub):
    _add_code_args(sub)
    sub.add_argument(
        "--scheme", choices=["rrh", "rrs", "direct"], required=True, help="reconciliation scheme"
    )
    sub.add_argument("--labelling", choices=["natural", "gray"], default="natural")
    sub.add_argument("--seed", type=int, default=1, help="master seed (default 1)")
    sub.add_argument("--max-frames", type=int, default=100000)
    sub.add_argument(
        "--min-ferr",
        type=int,
        default=50,
        help="stop a point after this many frame errors (default 50)",
    )
    sub.add_argument("--max-iter", type=int, default=200, help="decoder iterations per frame")
    sub.add_argument("--variant", choices=["sum-product", "min-sum"], default="sum-product")
    sub.add_argument("--min-sum-scale", type=float, default=0.75)
    sub.add_argument(
        "--complement-odd",
        action="store_true",
        help="disclose 1-n on odd regions (continuous metric variant)",
    )
    sub.add_argument(
        "--rate", type=float, default=None, help="rate used for the beta column (default: design rate)"
    )
    sub.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="worker processes (default: RECON_SIM_JOBS env var, else 1)",
    )
    sub.add_argument("--out", metavar="CSV", help="write results as CSV")
    sub.add_argument("--config", metavar="JSON", help="JSON file with flag defaults")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="recon-sim",
        description="Reverse-reconciliation simulator for PAM-4 over AWGN",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sweep = subs.add_parser("sweep", help="simulate a grid of SNR points")
    sweep.add_argument(
        "--snr", required=True, metavar="GRID", help="single value, comma list, or start:stop:steps"
    )
    _add_sim_args(sweep)

    point = subs.add_parser("point", help="simulate a single SNR point")
    point.add_argument("--snr", required=True, type=float)
    _add_sim_args(point)

    audit = subs.add_parser("audit", help="soft-metric uniformity and independence checks")
    audit.add_argument("--snr", required=True, type=float)
    audit.add_argument("--samples", type=int, default=200000)
    audit.add_argument("--seed", type=int, default=1)
    audit.add_argument("--complement-odd", action="store_true")
    audit.add_argument(
        "--dump-soft-metrics", metavar="CSV", help="write region,n samples as CSV"
    )
    audit.add_argument("--config", metavar="JSON", help="JSON file with flag defaults")

    gencode = subs.add_parser("gencode", help="generate a regular code and write alist")
    gencode.add_argument("--gen", required=True, metavar="N,WC,WR")
    gencode.add_argument("--gen-seed", type=int, default=1)
    gencode.add_argument("--out", required=True, metavar="ALIST")
    gencode.add_argument("--config", metavar="JSON", help="JSON file with flag defaults")

    info = subs.add_parser(
        "info", help="information metrics, constellation, quantizer, and code summaries"
    )
    info.add_argument("--snr", metavar="GRID", default=None, help="SNR grid for the metric table")
    info.add_argument("--rate", type=float, default=None, help="also report beta at this rate")
    info.add_argument("--labelling", choices=["natural", "gray"], default="natural")
    info.add_argument("--samples", type=int, default=100000, help="Monte-Carlo sample count")
    info.add_argument("--seed", type=int, default=1)
    info.add_argument("--complement-odd", action="store_true")
    _add_code_args(info)
    info.add_argument("--config", metavar="JSON", help="JSON file with flag defaults")

    return parser, {s: p for s, p in subs.choices.items()}


def _apply_config(argv, parser, subparsers):
    """Load --config JSON (if any) as defaults for the chosen subcommand."""
    command = next((tok for tok in argv if not tok.startswith("-")), None)
    if command not in subparsers:
        return
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config":
            path = argv[i + 1] if i + 1 < len(argv) else None
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return
    try:
        values = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config {path!r}: {exc}")
    if not isinstance(values, dict):
        parser.error(f"config {path!r} must hold a JSON object")
    sub = subparsers[command]
    known = {action.dest for action in sub._actions}
    for key in values:
        if key not in known:
            parser.error(f"config {path!r}: unknown key {key!r}")
    sub.set_defaults(**values)


def _load_code(args, parser):
    if getattr(args, "code", None) and getattr(args, "gen", None):
        parser.error("give either --code or --gen, not both")
    if getattr(args, "code", None):
        try:
            return load_alist(Path(args.code).read_text())
        except (OSError, ValueError) as exc:
            parser.error(f"cannot load code {args.code!r}: {exc}")
    if getattr(args, "gen", None):
        try:
            n, wc, wr = (int(tok) for tok in args.gen.split(","))
        except ValueError:
            parser.error(f"cannot parse --gen {args.gen!r}, expected N,WC,WR")
        try:
            return generate_regular_code(n, wc, wr, args.gen_seed)
        except ValueError as exc:
            parser.error(f"--gen {args.gen!r}: {exc}")
    return None


def _resolve_jobs(args):
    if args.jobs is not None:
        return max(1, args.jobs)
    env = os.environ.get("RECON_SIM_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _points(args, snrs, code):
    return [
        SimPoint(
            snr_db=snr,
            scheme=args.scheme,
            code=code,
            seed=args.seed + i,
            max_frames=args.max_frames,
            min_frame_errors=args.min_ferr,
            labelling=args.labelling,
            max_iter=args.max_iter,
            decoder_variant=args.variant,
            min_sum_scale=args.min_sum_scale,
            complement_odd=args.complement_odd,
        )
        for i, snr in enumerate(snrs)
    ]


def _print_results(results):
    print(f"{'SNR':>9} {'BER':>12} {'FER':>10} {'beta':>8} {'frames':>7} {'iters':>8}")
    for res in results:
        print(
            f"{res.snr_db:9.3f} {res.ber:12.4e} {res.fer:10.4e}"
            f" {res.beta:8.4f} {res.frames:7d} {res.mean_iters:8.2f}"
        )


def _cmd_sweep(args, parser, snrs):
    code = _load_code(args, parser)
    if code is None:
        parser.error("sweep needs a code: --code or --gen")
    results = run_sweep(_points(args, snrs, code), jobs=_resolve_jobs(args), rate=args.rate, path=args.out)
    _print_results(results)
    if args.out:
        print(f"wrote {args.out}")
    return 0


def _cmd_audit(args):
    from scipy import stats

    constellation = make_constellation(args.snr)
    spec = make_quantizer(constellation)
    rng = np.random.default_rng(args.seed)
    x = rng.integers(0, 4, args.samples)
    y = transmit(constellation, x, rng)
    regions = quantize(y, spec)
    n = soft_metric(y, regions, constellation, args.complement_odd)
    print(f"soft-metric audit at {args.snr:g} dB, {args.samples} samples")
    for k in range(4):
        sel = n[regions == k]
        pval = stats.kstest(sel, "uniform").pvalue if sel.size else float("nan")
        print(f"  region {k}: {sel.size:8d} samples  KS-vs-uniform p = {pval:.4g}")
    bins = np.minimum((n * 20).astype(int), 19)
    table = np.zeros((4, 20), dtype=np.int64)
    np.add.at(table, (regions, bins), 1)
    chi2 = stats.chi2_contingency(table)
    print(f"  region/metric independence: chi2 p = {chi2.pvalue:.4g}")
    if args.dump_soft_metrics:
        with open(args.dump_soft_metrics, "w") as fh:
            fh.write("region,n\n")
            for ki, ni in zip(regions, n):
                fh.write(f"{ki},{ni:.17g}\n")
        print(f"wrote {args.dump_soft_metrics}")
    return 0


def _cmd_gencode(args, parser):
    try:
        n, wc, wr = (int(tok) for tok in args.gen.split(","))
    except ValueError:
        parser.error(f"cannot parse --gen {args.gen!r}, expected N,WC,WR")
    try:
        code = generate_regular_code(n, wc, wr, args.gen_seed)
    except ValueError as exc:
        parser.error(f"--gen {args.gen!r}: {exc}")
    Path(args.out).write_text(write_alist(code))
    print(
        f"wrote {args.out}: n={code.n} m={code.m} edges={code.num_edges}"
        f" design rate={code.design_rate:.6g}"
    )
    return 0


def _cmd_info(args, parser):
    code = _load_code(args, parser)
    shown = False
    if args.snr is not None:
        snrs = _parse_grid(args.snr, parser)
        constellation = make_constellation(snrs[0])
        spec = make_quantizer(constellation, args.labelling)
        print(f"labelling : {args.labelling}")
        print(f"amplitudes at {snrs[0]:g} dB: {np.array2string(constellation.amplitudes, precision=6)}")
        print(f"thresholds at {snrs[0]:g} dB: {np.array2string(spec.thresholds, precision=6)}")
        header = f"{'SNR':>9} {'mi_hard':>9} {'mi_soft':>9} {'bmi_dir':>9} {'bmi_rrh':>9} {'bmi_rrs':>9}"
        if args.rate is not None:
            header += f" {'beta':>9}"
        print(header)
        for snr in snrs:
            constellation = make_constellation(snr)
            spec = make_quantizer(constellation, args.labelling)
            hard = metrics.mi_hard(constellation, spec)
            soft, _ = metrics.mi_soft_mc(
                constellation, args.samples, args.seed, args.complement_odd
            )
            row = f"{snr:9.3f} {hard:9.5f} {soft:9.5f}"
            for scheme in ("direct", "rrh", "rrs"):
                est, _ = metrics.bmi_mc(
                    constellation, spec, scheme, args.samples, args.seed, args.complement_odd
                )
                row += f" {est:9.5f}"
            if args.rate is not None:
                row += f" {float(metrics.beta_from_snr(snr, args.rate)):9.5f}"
            print(row)
        shown = True
    if code is not None:
        print(
            f"code      : n={code.n} m={code.m} edges={code.num_edges}"
            f" design rate={code.design_rate:.6g}"
        )
        cdeg = code.variable_degrees()
        rdeg = code.check_degrees()
        print(f"degrees   : columns {cdeg.min()}..{cdeg.max()}, rows {rdeg.min()}..{rdeg.max()}")
        shown = True
    if not shown:
        parser.error("info needs --snr and/or a code (--code / --gen)")
    return 0


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    argv = _merge_negative_values(argv)
    parser, subparsers = _build_parser()
    _apply_config(argv, parser, subparsers)
    args = parser.parse_args(argv)
    if args.command == "sweep":
        return _cmd_sweep(args, parser, _parse_grid(args.snr, parser))
    if args.command == "point":
        code = _load_code(args, parser)
        if code is None:
            parser.error("point needs a code: --code or --gen")
        results = run_sweep(
            _points(args, [args.snr], code), jobs=_resolve_jobs(args), rate=args.rate, path=args.out
        )
        _print_results(results)
        if args.out:
            print(f"wrote {args.out}")
        return 0
    if args.command == "audit":
        return _cmd_audit(args)
    if args.command == "gencode":
        return _cmd_gencode(args, parser)
    if args.command == "info":
        return _cmd_info(args, parser)
    parser.error(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
