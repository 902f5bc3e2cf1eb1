"""Command-line front end.

Exit status: 0 on success, 1 when a verification (or a requested encode)
fails, 2 for usage, parse and parameter errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import export, jrc, region, schemes, verify
from .channel import channel_matrix, transmit
from .exceptions import InfeasibleMessageError
from .topology import Topology, describe_groups, load_topology

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    subcommand: str
    topologies: list
    scheme: str | None
    splits: list
    out: Path | None
    fmt: str | None
    seed: int


# ---------------------------------------------------------------- argument parsing


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _split(text: str) -> tuple[int, int, int]:
    vals = _int_list(text)
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"--split takes i,p,value, got {text!r}")
    return vals


def _assign(text: str) -> tuple[int, tuple[int, int]]:
    try:
        j, pair = text.split(":")
        i, p = _int_list(pair)
        return int(j), (i, p)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--assign takes transmitter:i,p, got {text!r}") from None


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lacoding", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    def topo(p, required=True, repeat=False):
        p.add_argument(
            "--topology",
            action="append" if repeat else "store",
            type=Path,
            required=required,
            metavar="PATH",
            help="topology JSON file" + (" (repeat to union several deployments)" if repeat else ""),
        )

    def scheme_args(p):
        p.add_argument("--scheme", choices=["src", "erc", "jrc"], required=True)
        p.add_argument("--receiver", type=int, metavar="N", help="SRC target receiver (1-based)")
        p.add_argument("--split", type=_split, action="append", default=[], metavar="i,p,value",
                       help="credit value units of pair {i,p} to receiver i (repeatable)")
        p.add_argument("--assign", type=_assign, action="append", default=[], metavar="j:i,p",
                       help="pair for a transmitter covering 3+ receivers (repeatable)")
        p.add_argument("--higher-bits", type=_int_list, metavar="b1,...",
                       help="fixed bits of the 3+-receiver transmitters, ascending transmitter order")

    p = sub.add_parser("region", help="achievable rate region vertices")
    topo(p, repeat=True)
    p.add_argument("--out", type=Path, metavar="PATH")
    p.add_argument("--format", choices=["csv", "svg"], default="csv")

    p = sub.add_parser("encode", help="trace one message through encoder, channel and decoder")
    topo(p)
    scheme_args(p)
    p.add_argument("--message", type=_int_list, required=True, metavar="v1,v2,...")

    p = sub.add_parser("decode", help="decode received intensity levels")
    topo(p)
    scheme_args(p)
    p.add_argument("--levels", type=_int_list, required=True, metavar="y1,y2,...")

    p = sub.add_parser("verify", help="exhaustive or random round-trip verification")
    topo(p, required=False)
    p.add_argument("--scheme", choices=["src", "erc", "jrc"])
    p.add_argument("--receiver", type=int, metavar="N")
    p.add_argument("--split", type=_split, action="append", default=[], metavar="i,p,value")
    p.add_argument("--assign", type=_assign, action="append", default=[], metavar="j:i,p")
    p.add_argument("--higher-bits", type=_int_list, metavar="b1,...")
    p.add_argument("--mode", choices=["exhaustive", "random"], default="exhaustive")
    p.add_argument("--seed", type=_seed, default=0, metavar="U64")
    p.add_argument("--samples", type=int, default=1000, help="messages drawn in random mode")
    p.add_argument("--sweep-max", type=int, metavar="N",
                   help="sweep every pairwise JRC profile with counts <= N instead of one topology")
    p.add_argument("--receivers", type=int, choices=[2, 3], default=2, help="receivers in a sweep")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--corrupt-decoder", action="store_true", help="harness self-test: perturb decoded b_1")
    p.add_argument("--out", type=Path, metavar="PATH")
    p.add_argument("--format", choices=["jsonl"], default="jsonl")

    p = sub.add_parser("alloc", help="check, enumerate or greedily choose a JRC allocation")
    topo(p)
    p.add_argument("--split", type=_split, action="append", default=[], metavar="i,p,value")
    p.add_argument("--assign", type=_assign, action="append", default=[], metavar="j:i,p")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--greedy", action="store_true", help="print the greedy max-sum allocation")
    g.add_argument("--all", action="store_true", help="list every valid allocation")

    p = sub.add_parser("channel-matrix", help="per-receiver channel matrix as CSV")
    topo(p)
    p.add_argument("--receiver", type=int, metavar="N", help="1-based; default is every receiver")
    p.add_argument("--out", type=Path, metavar="PATH")
    p.add_argument("--format", choices=["csv"], default="csv")
    return ap


def _config(args) -> CliConfig:
    paths = args.topology if isinstance(args.topology, list) else ([args.topology] if args.topology else [])
    for path in paths:
        if not path.is_file():
            raise UsageError(f"topology file not found: {path}")
    return CliConfig(
        subcommand=args.subcommand,
        topologies=[load_topology(path) for path in paths],
        scheme=getattr(args, "scheme", None),
        splits=getattr(args, "split", []),
        out=getattr(args, "out", None),
        fmt=getattr(args, "format", None),
        seed=getattr(args, "seed", 0),
    )


# ---------------------------------------------------------------- helpers


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _receiver(t: Topology, n: int | None) -> int:
    if n is None:
        raise UsageError("--receiver is required")
    if not 1 <= n <= t.num_receivers:
        raise UsageError(f"--receiver {n} out of range 1..{t.num_receivers}")
    return n - 1


def _assignment(t: Topology, pairs) -> dict | None:
    if not pairs:
        return None
    out = {}
    for j, (i, p) in pairs:
        if not 1 <= j <= t.num_transmitters:
            raise UsageError(f"--assign names T{j}, topology has {t.num_transmitters} transmitters")
        out[j - 1] = (i - 1, p - 1)
    return out


def _allocation(t: Topology, splits) -> jrc.JrcAllocation:
    return jrc.JrcAllocation.from_splits(t.num_receivers, [(i - 1, p - 1, v) for i, p, v in splits])


def _scheme_kwargs(t: Topology, args) -> dict:
    scheme = args.scheme
    if scheme == "src":
        return {"receiver": _receiver(t, args.receiver)}
    if scheme == "erc":
        return {}
    return {
        "alloc": _allocation(t, args.split),
        "assignment": _assignment(t, args.assign),
        "higher_bits": args.higher_bits,
    }


def _tup(v) -> str:
    return str(tuple(int(x) for x in v))


# ---------------------------------------------------------------- subcommands


def cmd_region(cfg: CliConfig, args) -> int:
    if len(cfg.topologies) == 1:
        t = cfg.topologies[0]
        tuples = region.collect_tuples(t)
    else:
        tuples = region.collect_family(cfg.topologies, [p.stem for p in args.topology])
    m = cfg.topologies[0].num_receivers
    reg = region.convex_hull(tuples, dimension=m)
    text = export.region_svg(reg) if cfg.fmt == "svg" else export.region_csv(reg)
    _emit(text, cfg.out)
    print(f"vertices: {len(reg.vertices)}; max sum rate: {reg.max_sum_rate():.6f}",
          file=sys.stderr if cfg.out is None else sys.stdout)
    return EXIT_OK


def _encode_trace(t: Topology, args, b) -> list[str]:
    lines = [describe_groups(t)]
    if args.scheme == "src":
        r = _receiver(t, args.receiver)
        n = len(t.covering(r))
        if len(b) != 1 and len(b) != t.num_receivers:
            raise UsageError("SRC message is the level for the target receiver")
        level = b[0] if len(b) == 1 else b[r]
        if not 0 <= level <= n:
            raise UsageError(f"SRC level {level} outside 0..{n}")
        frame = schemes.src_frame(t, r, level)
        lines.append(f"level = {level} on {n} transmitters")
        y = transmit(t, frame)
        decoded = (schemes.src_decode(y, r),)
    elif args.scheme == "erc":
        if len(b) != t.num_receivers or any(v not in (0, 1) for v in b):
            raise UsageError(f"ERC message needs {t.num_receivers} bits")
        h, cols = schemes.erc_matrix(t)
        lines.append("transmitters used = " + ", ".join(f"T{j + 1}" for j in cols))
        frame = schemes.erc_frame(t, b)
        y = transmit(t, frame)
        decoded = schemes.erc_decode(y)
    else:
        kw = _scheme_kwargs(t, args)
        enc = jrc.JrcEncoder(t, kw["alloc"], kw["assignment"], kw["higher_bits"])
        lines.append(f"moduli c = {_tup(enc.moduli)}")
        if t.num_receivers == 2 and not enc.higher:
            tr = jrc.jrc2_trace(*enc.profile.exclusive, enc.profile.pair(0, 1),
                                (enc.alloc.split[0][1], enc.alloc.split[1][0]), tuple(b))
            lines.append(f"candidate set R1 = {{{', '.join(map(str, tr.candidates[0]))}}}")
            lines.append(f"candidate set R2 = {{{', '.join(map(str, tr.candidates[1]))}}}")
            lines.append(f"intersection = {{{', '.join(map(str, tr.intersection))}}}")
        cw = enc.encode(b)
        lines.append(f"exclusive levels = {_tup(cw.exclusive_levels)}")
        for (i, p), v in sorted(cw.shared_levels.items()):
            lines.append(f"shared level R{i + 1}R{p + 1} = {v}")
        for j, bit in sorted(cw.higher_bits.items()):
            lines.append(f"higher-order bit T{j + 1} = {bit}")
        frame = jrc.codeword_frame(t, cw)
        y = transmit(t, frame)
        decoded = enc.decode(y)
    lines.append(f"frame = {''.join(map(str, frame))}")
    lines.append(f"received = {_tup(y)}")
    lines.append(f"decoded = {_tup(decoded)}")
    return lines


def cmd_encode(cfg: CliConfig, args) -> int:
    t = cfg.topologies[0]
    try:
        lines = _encode_trace(t, args, args.message)
    except InfeasibleMessageError as exc:
        print(f"encode failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print("\n".join(lines))
    return EXIT_OK


def cmd_decode(cfg: CliConfig, args) -> int:
    t = cfg.topologies[0]
    y = args.levels
    if len(y) != t.num_receivers:
        raise UsageError(f"need {t.num_receivers} received levels, got {len(y)}")
    for r, v in enumerate(y):
        if not 0 <= v <= len(t.covering(r)):
            raise UsageError(f"level {v} impossible at R{r + 1}")
    if args.scheme == "src":
        decoded = (schemes.src_decode(y, _receiver(t, args.receiver)),)
    elif args.scheme == "erc":
        decoded = schemes.erc_decode(y)
    else:
        kw = _scheme_kwargs(t, args)
        decoded = jrc.JrcEncoder(t, kw["alloc"], kw["assignment"], kw["higher_bits"]).decode(y)
    print(f"decoded = {_tup(decoded)}")
    return EXIT_OK


def cmd_verify(cfg: CliConfig, args) -> int:
    if args.sweep_max is not None:
        if cfg.topologies or args.scheme not in (None, "jrc"):
            raise UsageError("--sweep-max runs JRC over generated profiles; drop --topology/--scheme")
        if args.sweep_max < 0:
            raise UsageError("--sweep-max must be non-negative")
        result = verify.sweep_parameter_space(args.receivers, args.sweep_max, workers=args.workers)
        reports = result.reports
        summary = (f"configurations: {result.configurations}; messages: {result.messages};"
                   f" failing configurations: {len(result.failed)}")
    else:
        if not cfg.topologies:
            raise UsageError("--topology is required unless --sweep-max is given")
        if args.scheme is None:
            raise UsageError("--scheme is required")
        if args.samples < 1:
            raise UsageError("--samples must be positive")
        t = cfg.topologies[0]
        run = verify.build_scheme(t, args.scheme, **_scheme_kwargs(t, args))
        rep = verify.run_verification(t, run, args.mode, cfg.seed, args.samples, args.corrupt_decoder)
        reports = [rep]
        rates = ", ".join(f"{r:.6f}" for r in rep.rates)
        summary = f"tested: {rep.tested}; failures: {len(rep.failures)}; rates: ({rates})"
    if cfg.out is None:
        verify.write_jsonl(reports, sys.stdout)
        print(summary, file=sys.stderr)
    else:
        with open(cfg.out, "w") as fh:
            verify.write_jsonl(reports, fh)
        print(summary)
    return EXIT_FAIL if any(r.failures for r in reports) else EXIT_OK


def cmd_alloc(cfg: CliConfig, args) -> int:
    t = cfg.topologies[0]
    profile = jrc.convert_to_pairwise(t, _assignment(t, args.assign))

    def show(alloc):
        c = alloc.moduli(profile)
        rates = ", ".join(f"{math.log2(x):.6f}" for x in c)
        ok = "decodable" if jrc.is_decodable(t, c) else "NOT decodable"
        return f"{alloc.describe()}  c = {_tup(c)}  rates = ({rates})  {ok}"

    if args.all:
        for alloc in jrc.enumerate_allocations(profile):
            print(show(alloc))
        return EXIT_OK
    if args.greedy:
        alloc, steps = jrc.greedy_trace(profile)
        for s in steps:
            i, p = s.pair
            who = "nobody" if s.chosen is None else f"R{s.chosen + 1}"
            print(f"unit of R{i + 1}R{p + 1}: c = {_tup(s.moduli_before)} -> {who}")
        print(show(alloc))
        return EXIT_OK
    alloc = _allocation(t, args.split)
    problems = alloc.violations(profile)
    if problems:
        for msg in problems:
            print(f"invalid: {msg}", file=sys.stderr)
        return EXIT_USAGE
    print(show(alloc))
    return EXIT_OK


def cmd_channel_matrix(cfg: CliConfig, args) -> int:
    t = cfg.topologies[0]
    receivers = [_receiver(t, args.receiver)] if args.receiver is not None else range(t.num_receivers)
    parts = []
    for r in receivers:
        text = export.channel_matrix_csv(channel_matrix(t, r))
        parts.append(text if args.receiver is not None else f"# R{r + 1}\n{text}")
    _emit("".join(parts), cfg.out)
    return EXIT_OK


COMMANDS = {
    "region": cmd_region,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "verify": cmd_verify,
    "alloc": cmd_alloc,
    "channel-matrix": cmd_channel_matrix,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = _config(args)
        return COMMANDS[cfg.subcommand](cfg, args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
