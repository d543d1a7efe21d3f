"""Batch command-line front end.

Subcommands: sat count, coloring, channel convert/check, mps factor,
invariants, fidelity.  Output is plain text, one `name = value` line per
result with 12 significant digits.  Exit codes: 0 success, 1 usage,
2 parse error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import boolean, channels, counting, decomp, invariants
from . import tensor as tz
from .errors import NumericalError, ParseError, ShapeError, TnqError


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fmt(value):
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, complex):
        if abs(value.imag) < 1e-12:
            return _fmt(float(value.real))
        return f"{value.real:.12g}{value.imag:+.12g}j"
    return f"{float(value):.12g}"


def _emit(out, name, value):
    out.write(f"{name} = {_fmt(value)}\n")


def _read_text(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}")


def _build_parser():
    parser = _Parser(prog="tnq", description=__doc__)
    parser.add_argument("--tol", type=float, default=tz.DEFAULT_TOL,
                        help="comparison tolerance override")
    sub = parser.add_subparsers(dest="command", required=True)

    sat = sub.add_parser("sat", help="Boolean satisfiability counting")
    sat_sub = sat.add_subparsers(dest="sat_command", required=True)
    sat_count = sat_sub.add_parser("count", help="#SAT of a DIMACS file")
    sat_count.add_argument("cnf")

    col = sub.add_parser("coloring", help="count 3-edge-colorings")
    col.add_argument("graph")
    col.add_argument("--oracle", action="store_true",
                     help="use the brute-force enumerator")

    chan = sub.add_parser("channel", help="channel representation tools")
    chan_sub = chan.add_subparsers(dest="channel_command", required=True)
    conv = chan_sub.add_parser("convert")
    conv.add_argument("--from", dest="src_rep", required=True,
                      choices=channels.REPS)
    conv.add_argument("--to", dest="dst_rep", required=True,
                      choices=channels.REPS)
    conv.add_argument("--in", dest="infile", required=True)
    conv.add_argument("--out", dest="outfile", required=True)
    conv.add_argument("--basis", choices=("pauli", "elem"), default=None)
    chk = chan_sub.add_parser("check")
    chk.add_argument("--in", dest="infile", required=True)

    mps = sub.add_parser("mps", help="matrix product state tools")
    mps_sub = mps.add_subparsers(dest="mps_command", required=True)
    fac = mps_sub.add_parser("factor")
    fac.add_argument("--in", dest="infile", required=True)
    fac.add_argument("--out", dest="outdir", required=True)
    fac.add_argument("--truncate", type=int, default=None)

    inv = sub.add_parser("invariants", help="state invariants")
    inv.add_argument("--in", dest="infile", required=True)

    fid = sub.add_parser("fidelity", help="channel fidelities")
    fid.add_argument("--in", dest="infile", required=True)
    fid.add_argument("--state", dest="state", default=None)

    return parser


def _chosen_basis(name, d_in, d_out):
    if name == "pauli":
        if (d_in, d_out) != (2, 2):
            raise _UsageError("--basis pauli requires a qubit channel")
        return channels.pauli_basis()
    if name == "elem":
        return channels.elementary_basis(d_out, d_in)
    return None


def _cmd_sat(args, out):
    cnf = boolean.parse_dimacs(_read_text(args.cnf))
    _emit(out, "count", boolean.count_sat(cnf, engine="tensor"))
    return 0


def _cmd_coloring(args, out):
    g = counting.parse_edgelist(_read_text(args.graph))
    if args.oracle:
        _emit(out, "K", counting.count_colorings_bruteforce(g))
    else:
        _emit(out, "K", counting.count_colorings_epsilon(g))
    return 0


def _cmd_channel(args, out):
    if args.channel_command == "check":
        ch = channels.read_chx(_read_text(args.infile))
        for prop in ("CP", "TP", "HP", "unital"):
            ok, _ = channels.check(ch, prop)
            _emit(out, prop, ok)
        return 0
    ch = channels.read_chx(_read_text(args.infile))
    if ch.rep != args.src_rep:
        raise ParseError(
            f"file holds a {ch.rep} channel, --from says {args.src_rep}",
            code="bad-header",
        )
    basis = _chosen_basis(args.basis, ch.d_in, ch.d_out)
    converted = channels.convert(ch, args.dst_rep, basis=basis)
    try:
        with open(args.outfile, "w") as fh:
            fh.write(channels.write_chx(converted))
    except OSError as exc:
        raise _UsageError(f"cannot write {args.outfile}: {exc}")
    _emit(out, "rep", converted.rep)
    return 0


def _cmd_mps(args, out):
    state = tz.read_tntx(_read_text(args.infile))
    if args.truncate is not None and args.truncate < 1:
        raise _UsageError("--truncate must be >= 1")
    m = decomp.mps_factor(state, max_rank=args.truncate)
    decomp.save_mps(m, args.outdir)
    _emit(out, "sites", len(m.sites))
    for k, site in enumerate(m.sites[:-1]):
        _emit(out, f"chi_{k}", site.dims[-1])
    return 0


def _cmd_invariants(args, out):
    state = tz.read_tntx(_read_text(args.infile))
    if state.order < 2:
        raise ShapeError("invariants need a state with at least two legs")
    _emit(out, "J1", invariants.j1(state))
    _emit(out, "J2", invariants.j2(state))
    if state.dims == (2, 2):
        _emit(out, "K1", invariants.k1(state))
    sd = decomp.schmidt(state, list(range(state.order // 2)))
    _emit(out, "entropy", decomp.entropy(sd.sigma, normalize=True))
    _emit(out, "chi", sd.chi)
    return 0


def _cmd_fidelity(args, out):
    ch = channels.read_chx(_read_text(args.infile))
    _emit(out, "avg_gate_fidelity", channels.avg_gate_fidelity(ch))
    if args.state is not None:
        rho = tz.read_tntx(_read_text(args.state))
        _emit(out, "entanglement_fidelity",
              channels.entanglement_fidelity(ch, rho))
    return 0


def run(argv, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "sat":
            return _cmd_sat(args, out)
        if args.command == "coloring":
            return _cmd_coloring(args, out)
        if args.command == "channel":
            return _cmd_channel(args, out)
        if args.command == "mps":
            return _cmd_mps(args, out)
        if args.command == "invariants":
            return _cmd_invariants(args, out)
        if args.command == "fidelity":
            return _cmd_fidelity(args, out)
        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 1
    except ParseError as exc:
        loc = f" (line {exc.line})" if exc.line else ""
        err.write(f"parse error [{exc.code}]{loc}: {exc}\n")
        return 2
    except NumericalError as exc:
        err.write(f"numerical failure: {exc}\n")
        return 3
    except (ShapeError, TnqError) as exc:
        err.write(f"input error: {exc}\n")
        return 2


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
