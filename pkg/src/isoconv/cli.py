"""Command-line interface: ``isoconv <subcommand> ...``.

Exit codes: 0 on success, 1 when a decode leaves lost symbols or the example
check fails, 2 on malformed input or inconsistent data.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .convcode import profile
from .decoder import Decoder, ReceivedStream
from .errors import IntegrityError, IsoconvError, ParseError
from .example import T as EXAMPLE_T, verify_example
from .formats import (
    CodeSpec,
    dump_json,
    format_mask,
    format_message,
    format_stream,
    parse_mask,
    parse_message,
    parse_stream,
    report_dict,
)
from .pipeline import IID, Burst, Frame, PatternChannel, SplitMix64, apply_channel, message_rng, run_experiment
from .sysrep import construct_example_532, generator_of, quality_report


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_spec(path: str | None) -> CodeSpec:
    if path is None:
        return example_spec()
    return CodeSpec.loads(_read(path))


def example_spec() -> CodeSpec:
    S = construct_example_532()
    return CodeSpec.from_parts(generator=generator_of(S), system=S, T=EXAMPLE_T, L=1)


def _channel(args: argparse.Namespace):
    if args.pattern:
        return PatternChannel(tuple(map(tuple, parse_mask(_read(args.pattern)))), args.seed)
    if args.burst:
        g2b, b2g = args.burst
        return Burst(g2b, b2g, seed=args.seed)
    return IID(args.p_erase, seed=args.seed, p_y=args.p_erase_y, p_u=args.p_erase_u)


def _delay(args: argparse.Namespace, spec: CodeSpec) -> int:
    if args.delay is not None:
        return args.delay
    if spec.T is not None:
        return spec.T
    return spec.L if spec.L is not None else 0


# -- subcommands ----------------------------------------------------------------


def cmd_gen_example(args: argparse.Namespace) -> int:
    _emit(example_spec().dumps(), args.out)
    return 0


def cmd_encode(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec)
    G = spec.get_generator()
    if args.message:
        _, msg = parse_message(_read(args.message), spec.field)
    else:
        rng = message_rng(args.seed)
        msg = [[rng.field_element(G.field) for _ in range(G.k)] for _ in range(args.gamma + 1)]
        if args.message_out:
            Path(args.message_out).write_text(format_message(spec.field, msg))
    frame = Frame.encode(G, msg)
    stream = ReceivedStream(G.n, G.k, frame.gamma, frame.blocks)
    _emit(format_stream(spec.field, stream), args.out)
    return 0


def cmd_erase(args: argparse.Namespace) -> int:
    F, stream = parse_stream(_read(args.stream), allow_erasure=False)
    frame = Frame(stream.gamma, (), tuple(tuple(b) for b in stream.blocks))  # type: ignore[arg-type]
    model = _channel(args)
    out, mask = apply_channel(frame, model, stream.k, SplitMix64(args.seed))
    if args.mask_out:
        Path(args.mask_out).write_text(format_mask(mask))
    _emit(format_stream(F, out), args.out)
    return 0


def cmd_decode(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec)
    _, stream = parse_stream(_read(args.stream), spec.field)
    S = spec.get_system()
    G = spec.get_generator()
    if stream.last != stream.gamma + G.mu:
        raise ParseError(f"stream has {stream.last + 1} blocks, expected gamma + mu + 1 = {stream.gamma + G.mu + 1}")
    dec = Decoder(S, _delay(args, spec), stream.last, spec.L, generator=G)
    report = dec.baseline(stream) if args.baseline else dec.decode(stream)
    recovered = ReceivedStream(stream.n, stream.k, stream.gamma, tuple(tuple(r) for r in report.values))
    _emit(format_stream(spec.field, recovered), args.out)
    if args.report:
        Path(args.report).write_text(dump_json(report_dict(report, spec.field)))
    lost = report.lost()
    if lost:
        print(f"{len(lost)} symbols lost: {lost}", file=sys.stderr)
        return 1
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec)
    stats = run_experiment(
        spec.get_system(), spec.get_generator(), _channel(args), args.trials, _delay(args, spec),
        gamma=args.gamma, L=spec.L,
    )
    _emit(dump_json(stats.to_dict(include_trials=args.per_trial)), args.out)
    return 0


def cmd_verify_example(args: argparse.Namespace) -> int:
    res = verify_example()
    print(res.summary())
    if args.out:
        d = res.to_dict()
        d["report"] = report_dict(res.report, res.field)
        d["baseline"] = report_dict(res.baseline, res.field)
        Path(args.out).write_text(dump_json(d))
    return 0 if res.ok else 1


def cmd_inspect(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec)
    G = spec.get_generator()
    S = spec.get_system()
    T = _delay(args, spec)
    d = {
        "field": spec.field.name,
        "profile": profile(G).to_dict(),
        "quality": quality_report(S, T, args.gamma, G.mu, seed=args.seed),
    }
    _emit(dump_json(d), args.out)
    return 0


# -- parser ---------------------------------------------------------------------


def _channel_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--p-erase", type=float, default=0.05, help="IID erasure probability per symbol")
    g.add_argument("--pattern", help="mask file with a fixed erasure pattern")
    g.add_argument("--burst", type=float, nargs=2, metavar=("G2B", "B2G"),
                   help="Gilbert-Elliott transition probabilities (bad state erases every symbol)")
    p.add_argument("--p-erase-y", type=float, default=None, help="IID rate for output symbols")
    p.add_argument("--p-erase-u", type=float, default=None, help="IID rate for input symbols")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isoconv", description="Erasure decoding of convolutional codes in ISO form.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-example", help="write the (5,3,2) example code spec")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_example)

    p = sub.add_parser("encode", help="encode a message file (or a random message) into a stream")
    p.add_argument("spec")
    p.add_argument("message", nargs="?")
    p.add_argument("--gamma", type=int, default=3, help="degree of a random message")
    p.add_argument("--seed", type=int, default=0, help="seed of a random message")
    p.add_argument("--message-out", help="also write the random message here")
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("erase", help="pass a stream through an erasure channel")
    p.add_argument("stream")
    _channel_args(p)
    p.add_argument("--mask-out", help="also write the mask used")
    p.add_argument("--out")
    p.set_defaults(func=cmd_erase)

    p = sub.add_parser("decode", help="recover a masked stream")
    p.add_argument("spec")
    p.add_argument("stream")
    p.add_argument("--delay", type=int, default=None, help="maximum delay T")
    p.add_argument("--baseline", action="store_true", help="use the largest-window-first baseline")
    p.add_argument("--report", help="write the JSON decode report here")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="run decode and baseline over random frames")
    p.add_argument("spec", nargs="?", help="code spec (default: the example code)")
    _channel_args(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--delay", type=int, default=None)
    p.add_argument("--gamma", type=int, default=3)
    p.add_argument("--per-trial", action="store_true", help="include per-trial records")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify-example", help="check the (5,3,2) worked example end to end")
    p.add_argument("--out", help="write the checks and decode report as JSON")
    p.set_defaults(func=cmd_verify_example)

    p = sub.add_parser("inspect", help="print the code profile and decoder quality report")
    p.add_argument("spec")
    p.add_argument("--delay", type=int, default=None)
    p.add_argument("--gamma", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_inspect)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"isoconv: parse error: {exc}", file=sys.stderr)
        return 2
    except IntegrityError as exc:
        print(f"isoconv: inconsistent data: {exc}", file=sys.stderr)
        return 2
    except (IsoconvError, ValueError) as exc:
        print(f"isoconv: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
