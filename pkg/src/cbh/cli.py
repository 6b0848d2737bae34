"""Command-line driver: each command runs a set of checks and prints one record.

Exit status is 0 when every check passes, 1 on a failed check and 2 on a usage
error (bad flags or a descriptor the command cannot use).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from math import comb
from typing import List, Optional, Sequence

from . import rootdata as rd
from .coeffring import modulus, upow
from .covering import CoveringDescriptor, exceptional_character, fits_fundamental_pair, fundamental_pair_oracle
from .whittaker import dim_whittaker_theta, orbit_classes, theta_coefficient, theta_row_sums
from .zeta import Report, counterexample_series, fundamental_pair, verify_rank2, verify_theta

COMMANDS = ("pair", "orbits", "whittaker", "verify-theta", "verify-rank2", "counterexample")


class UsageError(Exception):
    pass


def thread_count() -> int:
    raw = os.environ.get("CBH_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"CBH_THREADS must be an integer, got {raw!r}") from None


def _descriptor(args) -> CoveringDescriptor:
    try:
        return CoveringDescriptor(args.r, args.n, args.p, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _instance(args):
    try:
        return fundamental_pair(args.r, args.n, args.p, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def run_pair(args) -> Report:
    d = _descriptor(args)
    rep = Report("pair", {"n": d.n, "p": d.p, "q": d.q, "r": d.r})
    R = fits_fundamental_pair(d.r, d.n, d.p, d.q)
    oracle = fundamental_pair_oracle(d.r, d.n, d.p, d.q)
    verdict = "FUNDAMENTAL" if R is not None else "NOT FUNDAMENTAL"
    lattice = f"{d.n_alpha}Y" if d.is_n_alpha_lattice() else str(d.yqn)
    rep.add("fundamental pair criterion: n_alpha > r and n | q n_alpha",
            R == oracle,
            f"Q(alpha^vee)={d.Q_coroot} n_alpha={d.n_alpha} R={R if R is not None else '-'} "
            f"Y_Qn={lattice} verdict {verdict}")
    return rep


def run_orbits(args) -> Report:
    d = _descriptor(args)
    rep = Report("orbits", {"n": d.n, "p": d.p, "q": d.q, "r": d.r})
    classes = orbit_classes(d)
    free = [o for o in classes if o.free]
    dim = dim_whittaker_theta(d)
    detail = (f"{d.quotient.order} cosets, {len(classes)} orbit classes, "
              f"{len(free)} free orbit classes, dim Wh = {dim}")
    if d.is_n_alpha_lattice():
        rep.add("Whittaker dimension equals binom(n_alpha, r) when Y_Qn = n_alpha Y",
                dim == comb(d.n_alpha, d.r), detail)
    else:
        rep.add("Whittaker dimension equals the number of free orbit classes", dim == len(free), detail)
    if d.n_alpha >= d.r:
        zero_free = any(o.free and (0,) * d.r in o.members for o in classes)
        rep.add("the orbit of 0 is free when n_alpha >= r", zero_free, f"n_alpha={d.n_alpha} r={d.r}")
    return rep


def run_whittaker(args) -> Report:
    d = _descriptor(args)
    rep = Report("whittaker", {"n": d.n, "p": d.p, "q": d.q, "r": d.r})
    if d.n_alpha < d.r:
        raise UsageError("the orbit of 0 is free only when n_alpha >= r")
    try:
        chi = exceptional_character(d, "a")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    c = theta_coefficient(d, chi)
    zero = (0,) * d.r
    bad_mod, bad_hat, shown = [], [], []
    for w in rd.weyl_group(d.r):
        val = c(rd.twisted_act(w, zero))
        if modulus(val) != upow(-rd.length(w)):
            bad_mod.append(w)
        if val != c(rd.twisted_act(rd.hat(w), zero)):
            bad_hat.append(w)
        if len(shown) < 6:
            shown.append(f"c(w{list(w)}[0])={val}")
    rep.add("theta coefficient at w[0] has modulus q^(-l(w)/2)", not bad_mod,
            "; ".join(shown) + ("" if not bad_mod else f"; failures at {bad_mod[:3]}"))
    rep.add("theta coefficient satisfies c(w[0]) = c(hat(w)[0])", not bad_hat,
            f"{len(rd.weyl_group(d.r)) - len(bad_hat)} of {len(rd.weyl_group(d.r))} Weyl elements")
    for i in range(1, d.r):
        sums = theta_row_sums(d, chi, i)
        nonzero = [col for col, v in sums.items() if v]
        rep.add(f"theta coefficient is annihilated by the simple intertwining step s_{i}", not nonzero,
                f"{len(sums)} columns, {len(nonzero)} nonzero")
    return rep


def run_verify_theta(args) -> Report:
    inst = _instance(args)
    return verify_theta(inst, args.trunc, tamper=args.tamper)


def run_verify_rank2(args) -> Report:
    if args.r != 2:
        raise UsageError("verify-rank2 needs --r 2")
    inst = _instance(args)
    if not inst.small.is_n_alpha_lattice():
        raise UsageError("verify-rank2 needs Y_Qn = n_alpha Y for the rank-two group")
    gammas = ["s0", "w1"] if args.gamma == "both" else [args.gamma]
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        parts = list(pool.map(lambda g: verify_rank2(inst, g, args.trunc, args.samples, args.seed), gammas))
    rep = Report("verify-rank2", {"n": args.n, "p": args.p, "q": args.q, "r": 2, "R": inst.R,
                                  "gamma": args.gamma, "trunc": args.trunc if args.trunc else 4 * inst.n_alpha,
                                  "samples": args.samples, "seed": args.seed})
    for g, part in zip(gammas, parts):
        for c in part.checks:
            rep.add(f"{c.anchor} [gamma={g}]", c.passed, c.detail)
    return rep


def run_counterexample(args) -> Report:
    res = counterexample_series(args.trunc or 12)
    return res.report


RUNNERS = {
    "pair": run_pair,
    "orbits": run_orbits,
    "whittaker": run_whittaker,
    "verify-theta": run_verify_theta,
    "verify-rank2": run_verify_rank2,
    "counterexample": run_counterexample,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cbh", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--n", type=int, default=3 if name == "counterexample" else None,
                        required=name != "counterexample")
        sp.add_argument("--p", type=int, default=-1 if name == "counterexample" else None,
                        required=name != "counterexample")
        sp.add_argument("--q", type=int, default=-1 if name == "counterexample" else None,
                        required=name != "counterexample")
        sp.add_argument("--r", type=int, default=1 if name == "counterexample" else None,
                        required=name != "counterexample")
        sp.add_argument("--trunc", type=int, default=None, help="truncation order N (series up to T^N)")
        sp.add_argument("--samples", type=int, default=20)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
        sp.add_argument("--timing", action="store_true", help="record elapsed_ms (off keeps JSON reproducible)")
        if name == "verify-theta":
            sp.add_argument("--tamper", action="store_true", help="perturb the L-side (mutation check)")
        if name == "verify-rank2":
            sp.add_argument("--gamma", choices=("s0", "w1", "both"), default="both")
    return parser


def _validate(args) -> None:
    if args.trunc is not None and args.trunc < 1:
        raise UsageError("--trunc must be >= 1")
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    if not -(2 ** 63) <= args.seed < 2 ** 63:
        raise UsageError("--seed must fit in 64 bits")
    if args.command == "counterexample" and (args.n, args.p, args.q, args.r) != (3, -1, -1, 1):
        raise UsageError("counterexample is fixed to --n 3 --p -1 --q -1 --r 1")


def to_record(rep: Report, elapsed_ms: Optional[float]) -> dict:
    return {
        "command": rep.command,
        "params": rep.params,
        "checks": [{"anchor": c.anchor, "status": c.status, "detail": c.detail} for c in rep.checks],
        "elapsed_ms": elapsed_ms,
    }


def render(rep: Report, fmt: str, elapsed_ms: Optional[float]) -> str:
    if fmt == "json":
        return json.dumps(to_record(rep, elapsed_ms), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if rep.series:
            writer.writerow(["series", "exponent", "coefficient"])
            for name in sorted(rep.series):
                for k, c in enumerate(rep.series[name].coeffs):
                    writer.writerow([name, k, str(c)])
        else:
            writer.writerow(["anchor", "status", "detail"])
            for c in rep.checks:
                writer.writerow([c.anchor, c.status, c.detail])
        return buf.getvalue()
    params = " ".join(f"{k}={v}" for k, v in rep.params.items())
    lines = [f"{rep.command}: {params}"]
    for c in rep.checks:
        lines.append(f"  [{c.status.upper():4}] {c.anchor}")
        lines.append(f"         {c.detail}")
    lines.append("OK" if rep.passed else "FAILED")
    if elapsed_ms is not None:
        lines.append(f"elapsed {elapsed_ms:.1f} ms")
    return "\n".join(lines) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        _validate(args)
        thread_count()
        rep = RUNNERS[args.command](args)
    except UsageError as exc:
        print(f"cbh {args.command}: error: {exc}", file=sys.stderr)
        return 2
    elapsed = round((time.perf_counter() - start) * 1000, 3) if args.timing else None
    sys.stdout.write(render(rep, args.format, elapsed))
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
