"""Command-line entry point: ``wrot {verify,run,sweep,adversary}``.

Exit codes: 0 success, 1 a check failed, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

from . import adversaries as adv
from . import harness
from .protocol import honest_table, make_params, simulate_rounds
from .records import format_record


def _overlap(text: str) -> float:
    try:
        a = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 < a < 1.0:
        raise argparse.ArgumentTypeError(f"a must lie strictly inside (0, 1), got {a}")
    return a


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {n}")
    return n


def _seed(text: str) -> int:
    try:
        s = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return s


def _alice(text: str):
    if text in ("honest", "max", "min"):
        return (text,)
    if text.startswith("pure:"):
        try:
            d1, d2 = (float(t) for t in text[5:].split(","))
            return ("pure", adv.PureCheatState(d1, d2))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad pure state {text!r}: {exc}")
    raise argparse.ArgumentTypeError(f"expected honest | pure:d1,d2 | max | min, got {text!r}")


def _bob(text: str):
    if text in ("honest", "optimal"):
        return (text,)
    if text.startswith("guess:"):
        try:
            theta = float(text[6:])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad angle in {text!r}")
        if not 0.0 <= theta <= math.pi / 4:
            raise argparse.ArgumentTypeError("guess angle must lie in [0, pi/4]")
        return ("guess", theta)
    raise argparse.ArgumentTypeError(f"expected honest | guess:theta | optimal, got {text!r}")


def _bit_source(text: str):
    if text == "random":
        return "random"
    if text in ("0", "1"):
        return int(text)
    raise argparse.ArgumentTypeError("bit must be random, 0 or 1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wrot", description="Weak Rabin OT simulator and analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--threads", type=_positive_int, default=1)
    common.add_argument("--json", action="store_true", help="emit strict JSON records")

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("--a-grid", type=_positive_int, default=99)

    p = sub.add_parser("run", parents=[common], help="Monte Carlo of one party configuration")
    p.add_argument("--a", type=_overlap, required=True)
    p.add_argument("--trials", type=_positive_int, default=1_000_000)
    p.add_argument("--alice", type=_alice, default=("honest",))
    p.add_argument("--bob", type=_bob, default=("honest",))
    p.add_argument("--bit", type=_bit_source, default="random")

    p = sub.add_parser("sweep", parents=[common], help="trade-off curves over a")
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--a-min", type=float, default=0.0)
    p.add_argument("--a-max", type=float, default=1.0)
    p.add_argument("--out", help="CSV destination (stdout when omitted)")
    p.add_argument("--svg", help="SVG destination")

    p = sub.add_parser("adversary", parents=[common], help="optimal attacks at one a")
    p.add_argument("--a", type=_overlap, required=True)
    return parser


def _cmd_verify(args, out) -> int:
    checks = harness.verify_suite(args.a_grid, args.seed, args.threads)
    for c in checks:
        if args.json:
            print(format_record({"check": c.name, "ok": c.ok, "detail": c.detail}, True), file=out)
        else:
            print(c.line(), file=out)
    return 0 if all(c.ok for c in checks) else 1


def _cmd_run(args, parser, out) -> int:
    a = args.a
    alice, bob = args.alice, args.bob
    if alice[0] != "honest" and bob[0] != "honest":
        parser.error("only one party may cheat in a run")
    if alice[0] == "honest" and bob[0] == "honest":
        table = honest_table(make_params(a))
    elif alice[0] == "pure":
        table = adv.alice_cheat_table(a, alice[1])
    elif alice[0] == "max":
        table = adv.alice_cheat_table(a, adv.max_alice_advantage(a).state)
    elif alice[0] == "min":
        table = adv.alice_cheat_table(a, adv.min_alice_advantage(a).state)
    else:
        strategy = adv.optimal_bob(a).strategy if bob[0] == "optimal" else adv.bob_guess_basis(a, bob[1])
        table = adv.bob_guess_table(a, strategy)
    stats = simulate_rounds(a, table, args.trials, args.seed, args.bit, args.threads)
    print(format_record(stats.to_record(), args.json), file=out)
    if bob[0] != "honest":
        extra = {"kind": "bob_guess", "correct": stats.correct, "correct_rate": stats.empirical_correct_rate}
        print(format_record(extra, args.json), file=out)
    return 0


def _cmd_sweep(args, parser, out) -> int:
    try:
        config = harness.SweepConfig(args.a_min, args.a_max, args.steps)
    except ValueError as exc:
        parser.error(str(exc))
    rows = harness.sweep(config, args.threads)
    if args.out:
        harness.emit_csv(rows, args.out)
    else:
        out.write(harness.csv_text(rows))
    if args.svg:
        harness.emit_svg(rows, args.svg)
    return 0


def _cmd_adversary(args, out) -> int:
    a = args.a
    for rec in (
        adv.max_alice_advantage(a).to_record(),
        adv.min_alice_advantage(a).to_record(),
        adv.optimal_bob(a).to_record(),
    ):
        print(format_record(rec, args.json), file=out)
    return 0


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "verify":
            return _cmd_verify(args, out)
        if args.command == "run":
            return _cmd_run(args, parser, out)
        if args.command == "sweep":
            return _cmd_sweep(args, parser, out)
        return _cmd_adversary(args, out)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2


if __name__ == "__main__":
    sys.exit(main())
