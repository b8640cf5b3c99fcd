"""Command-line interface.

Exit codes: 0 for a positive verdict (McCulloch-Pitts, separable, battery
passed) or plain success, 1 for a negative verdict, 2 for bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import nullcontext
from pathlib import Path

from . import bitstats, combinatorics, distinguisher, dynamics
from .formats import (
    FormatError,
    dichotomy_from_points,
    dump_system,
    dump_trace,
    fmt_rational,
    load_points,
    load_system,
    load_trace,
)
from .model import BitVec, DimensionError, PointConflict
from .separability import decide_separable

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read(path: str, binary: bool = False):
    try:
        if path == "-":
            return sys.stdin.buffer.read() if binary else sys.stdin.read()
        p = Path(path)
        return p.read_bytes() if binary else p.read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _emit(args, text: str | bytes):
    out = getattr(args, "output", None)
    if out and out != "-":
        Path(out).write_bytes(text) if isinstance(text, bytes) else Path(out).write_text(text)
    elif isinstance(text, bytes):
        sys.stdout.buffer.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _executor(workers: int):
    return ProcessPoolExecutor(workers) if workers and workers > 1 else nullcontext(None)


def _bits_arg(text: str) -> BitVec:
    try:
        return BitVec.from_str(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def cmd_distinguish(args) -> int:
    trace = load_trace(_read(args.trace))
    fn = distinguisher.distinguish_refined if args.refined else distinguisher.distinguish
    v = fn(trace)
    if args.json:
        out = v.to_dict()
        out.update(refined=args.refined, n=trace.n, m=trace.m)
        _emit(args, _json(out))
    else:
        _emit(args, f"{v.label}\n")
    return EXIT_OK if v.is_mp else EXIT_NEGATIVE


def cmd_separable(args) -> int:
    points = load_points(_read(args.points), require_labels=True)
    try:
        d = dichotomy_from_points(points)
    except PointConflict as e:
        if args.json:
            _emit(args, _json({"verdict": "inseparable", "conflict_point": str(e.point)}))
        else:
            _emit(args, f"inseparable\nconflict point: {e.point}\n")
        return EXIT_NEGATIVE
    res = decide_separable(d)
    if args.json:
        _emit(args, _json(res.to_dict()))
    else:
        lines = [res.verdict.value]
        w = res.witness.to_dict()
        if res.separable:
            lines.append("y: " + " ".join(w["y"]))
            lines.append("offset: " + w["offset"])
        else:
            lines.append("lambda: " + " ".join(f"{p}:{c}" for p, c in w["lambda"].items()))
            lines.append("mu: " + " ".join(f"{p}:{c}" for p, c in w["mu"].items()))
            lines.append("common point: " + " ".join(w["common_point"]))
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if res.separable else EXIT_NEGATIVE


def cmd_simulate(args) -> int:
    phi = load_system(_read(args.system))
    start = args.start
    if len(start) != phi.n:
        raise InputError(f"start state has {len(start)} bits, system has dimension {phi.n}")
    if args.cycle:
        budget = args.budget if args.budget is not None else 2**phi.n
        info = dynamics.find_cycle(phi, start, budget)
        if args.json:
            _emit(args, _json({"start": str(start), "tail": info.tail, "period": info.period}))
        else:
            _emit(args, f"tail {info.tail}\nperiod {info.period}\n")
        return EXIT_OK
    if args.steps is None:
        raise InputError("--steps is required unless --cycle is given")
    if args.first_bit or args.prefix:
        m = 1 if args.first_bit else args.prefix
        if not 1 <= m <= phi.n:
            raise InputError(f"--prefix must be in [1, {phi.n}]")
        states, _ = dynamics.orbit(phi, start, args.steps)
        block = states[1:, :m]
        if m == 1:
            bits = block[:, 0]
            if args.json:
                _emit(args, _json({"start": str(start), "length": len(bits),
                                   "stream": "".join(map(str, bits.tolist()))}))
            elif args.packed:
                _emit(args, bitstats.pack_bits(bits))
            else:
                _emit(args, bitstats.format_bit_lines(bits))
        else:
            rows = ["".join(map(str, r)) for r in block.tolist()]
            _emit(args, _json({"start": str(start), "prefix": m, "states": rows})
                  if args.json else "".join(r + "\n" for r in rows))
        return EXIT_OK
    traj = dynamics.trajectory(phi, start, args.steps)
    if args.json:
        _emit(args, _json({"trajectory": [str(x) for x in traj]}))
    else:
        _emit(args, "".join(f"{x}\n" for x in traj))
    return EXIT_OK


def cmd_gen_system(args) -> int:
    spec = dynamics.SystemGenSpec(args.n, args.wlow, args.whigh, args.tlow, args.thigh, args.seed)
    phi = dynamics.random_system(spec)
    _emit(args, dump_system(phi))
    return EXIT_OK


def cmd_gen_trace(args) -> int:
    if args.mp:
        phi = load_system(_read(args.mp))
        t = distinguisher.generate_mp_trace(phi, args.m, args.seed)
    else:
        if args.n is None:
            raise InputError("--random needs --n")
        t = distinguisher.generate_random_trace(args.n, args.m, args.seed)
    if args.json:
        _emit(args, _json({"n": t.n, "m": t.m, "pairs": [[str(x), str(y)] for x, y in t]}))
    else:
        _emit(args, dump_trace(t))
    return EXIT_OK


def cmd_bound(args) -> int:
    if args.sauer:
        kind, value = "sauer_shelah", str(combinatorics.sauer_shelah_bound(args.m, args.n))
    elif args.prob:
        kind, value = "probability", fmt_rational(combinatorics.probability_bound(args.m, args.n))
    else:
        kind, value = "cover", str(combinatorics.paper_bound(args.m, args.n))
    if args.json:
        _emit(args, _json({"m": args.m, "n": args.n, "kind": kind, "value": value}))
    else:
        _emit(args, value + "\n")
    return EXIT_OK


def cmd_count(args) -> int:
    pts = [p for p, _ in load_points(_read(args.points))]
    if not pts:
        raise InputError("point file contains no points")
    try:
        count = combinatorics.count_separable(pts)
    except ValueError as e:
        raise InputError(str(e)) from None
    distinct = len(set(pts))
    if args.json:
        _emit(args, _json({"points": distinct, "n": len(pts[0]), "separable_dichotomies": str(count)}))
    else:
        _emit(args, f"{count}\n")
    return EXIT_OK


def _reports_out(args, reports):
    if args.json:
        data = [r.to_dict() for r in reports]
        _emit(args, _json(data[0] if len(data) == 1 and args.command == "estimate" else data))
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(combinatorics.EstimateReport.CSV_COLUMNS)
    for r in reports:
        w.writerow(r.to_row())
    _emit(args, buf.getvalue())


def cmd_estimate(args) -> int:
    with _executor(args.workers) as ex:
        rep = combinatorics.estimate_separability_probability(
            args.n, args.m if args.m is not None else 0, args.trials, args.seed,
            distinct_only=args.distinct_only, full_cube=args.full_cube, executor=ex,
        )
    _reports_out(args, [rep])
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        ratios = [float(r) for r in args.ratios.split(",") if r.strip()]
    except ValueError:
        raise InputError(f"bad --ratios {args.ratios!r}") from None
    with _executor(args.workers) as ex:
        reps = combinatorics.phase_transition_sweep(
            args.n, ratios, args.trials, args.seed, distinct_only=args.distinct_only, executor=ex
        )
    _reports_out(args, reps)
    return EXIT_OK


def _battery_table(rep: bitstats.BatteryReport) -> str:
    lines = [f"{'test':<18}{'statistic':>16}{'p-value':>14}  result"]
    for r in rep.results:
        if not r.applicable:
            lines.append(f"{r.name:<18}{'-':>16}{'-':>14}  n/a")
        else:
            lines.append(
                f"{r.name:<18}{r.statistic:>16.6g}{r.p_value:>14.6g}  {'pass' if r.passed else 'FAIL'}"
            )
    lines.append(f"length {rep.length}, alpha {rep.config.alpha}: {'PASS' if rep.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


def cmd_battery(args) -> int:
    if args.packed:
        bits = bitstats.unpack_bytes(_read(args.stream, binary=True), args.length)
    else:
        try:
            bits = bitstats.parse_bit_text(_read(args.stream))
        except ValueError as e:
            raise InputError(str(e)) from None
    cfg = bitstats.BatteryConfig(args.alpha, args.block_len, args.lag)
    rep = bitstats.run_battery(bits, cfg)
    _emit(args, _json(rep.to_dict()) if args.json else _battery_table(rep))
    return EXIT_OK if rep.passed else EXIT_NEGATIVE


def cmd_search(args) -> int:
    cfg = bitstats.BatteryConfig(args.alpha)
    with _executor(args.workers) as ex:
        rep = dynamics.search_pseudorandom_system(
            args.n, args.len, cfg, args.attempts, args.seed,
            weight_range=(args.wlow, args.whigh), theta_range=(args.tlow, args.thigh), executor=ex,
        )
    data = rep.to_dict()
    data.update(n=args.n, attempts=args.attempts, seed=args.seed)
    if args.json:
        _emit(args, _json(data))
    else:
        period = rep.period if rep.period is not None else f"> {rep.stream_len}"
        _emit(args, (
            f"best attempt {rep.attempt} (system seed {rep.system_seed})\n"
            f"start {rep.start}\n"
            f"tests passed {rep.passed}/{rep.applicable}\n"
            f"period {period}\n"
        ) + _battery_table(rep.battery))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mcpitts",
        description="Linear separability certificates and the McCulloch-Pitts distinguisher.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=fn)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("-o", "--output", help="write output to a file instead of stdout")
        return sp

    sp = add("distinguish", cmd_distinguish, "classify a trace file")
    sp.add_argument("trace")
    sp.add_argument("--refined", action="store_true", help="test every bit position")

    sp = add("separable", cmd_separable, "decide separability of a labelled point file")
    sp.add_argument("points")

    sp = add("simulate", cmd_simulate, "iterate a system")
    sp.add_argument("system")
    sp.add_argument("--start", type=_bits_arg, required=True)
    sp.add_argument("--steps", type=int)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--first-bit", action="store_true", help="emit the first-bit stream")
    g.add_argument("--prefix", type=int, help="emit m-bit prefixes of the states")
    g.add_argument("--cycle", action="store_true", help="report tail and period")
    sp.add_argument("--budget", type=int, help="cycle search budget (default 2^n)")
    sp.add_argument("--packed", action="store_true", help="pack the first-bit stream 8 bits per byte")

    gen = sub.add_parser("gen", help="generate a random system or a trace")
    gsub = gen.add_subparsers(dest="what", required=True)
    sp = gsub.add_parser("system")
    sp.set_defaults(func=cmd_gen_system)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("-o", "--output")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--wlow", type=int, default=-8)
    sp.add_argument("--whigh", type=int, default=8)
    sp.add_argument("--tlow", type=int, default=-8)
    sp.add_argument("--thigh", type=int, default=8)
    sp.add_argument("--seed", type=int, required=True)
    sp = gsub.add_parser("trace")
    sp.set_defaults(func=cmd_gen_trace)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("-o", "--output")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--mp", metavar="SYSTEM_FILE")
    src.add_argument("--random", action="store_true")
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)

    sp = add("bound", cmd_bound, "exact counting bounds")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--sauer", action="store_true")
    g.add_argument("--prob", action="store_true")

    sp = add("count", cmd_count, "count separable dichotomies of a point file")
    sp.add_argument("points")

    for name, fn, help in (
        ("estimate", cmd_estimate, "Monte-Carlo separability probability"),
        ("sweep", cmd_sweep, "estimates over m = ceil(ratio * n)"),
    ):
        sp = add(name, fn, help)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--trials", type=int, required=True)
        sp.add_argument("--seed", type=int, required=True)
        sp.add_argument("--distinct-only", action="store_true")
        sp.add_argument("--workers", type=int, default=1)
        if name == "estimate":
            sp.add_argument("--m", type=int)
            sp.add_argument("--full-cube", action="store_true", help="use all 2^n points")
        else:
            sp.add_argument("--ratios", default="1,1.5,2,3,4")

    sp = add("battery", cmd_battery, "run the randomness battery on a bit stream")
    sp.add_argument("stream")
    sp.add_argument("--alpha", type=float, default=0.01)
    sp.add_argument("--block-len", type=int, default=128)
    sp.add_argument("--lag", type=int, default=1)
    sp.add_argument("--packed", action="store_true", help="stream file is packed binary")
    sp.add_argument("--length", type=int, help="number of bits to use from a packed file")

    sp = add("search", cmd_search, "search random systems for a random-looking first-bit stream")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--len", type=int, required=True)
    sp.add_argument("--attempts", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--alpha", type=float, default=0.01)
    sp.add_argument("--wlow", type=int, default=-8)
    sp.add_argument("--whigh", type=int, default=8)
    sp.add_argument("--tlow", type=int, default=-8)
    sp.add_argument("--thigh", type=int, default=8)
    sp.add_argument("--workers", type=int, default=1)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "estimate" and not args.full_cube and args.m is None:
        print("error: --m is required unless --full-cube is given", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, FormatError, DimensionError, ValueError, dynamics.CycleBudgetExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
