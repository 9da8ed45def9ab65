"""Command line: ``ftqec-grid-sim run`` for sweeps, ``ftqec-grid-sim ftverify`` for circuits.

Every ``run`` flag can also come from a ``--config`` file of ``key = value``
lines (``#`` starts a comment, dashes and underscores in keys are
interchangeable).  Flags given on the command line win over the file.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .circuit import CircuitError, load_circuit
from .noise import SWAP_MODES
from .protocols import PROTOCOLS
from .stats import POLICIES, ConfigError, SweepConfig, pseudo_threshold, run_sweep
from .verify import PREDICATES, format_report, verify_fault_tolerance


def read_config(path: str | Path) -> dict[str, str]:
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _run_parser(sub) -> argparse.ArgumentParser:
    ap = sub.add_parser("run", help="sweep a protocol over physical error rates")
    ap.add_argument("--config", help="key=value file with defaults for any flag below")
    ap.add_argument("--protocol", choices=PROTOCOLS)
    ap.add_argument("--pmin", type=float)
    ap.add_argument("--pmax", type=float)
    ap.add_argument("--points", type=int)
    ap.add_argument("--plist", help="comma-separated error rates (instead of pmin/pmax/points)")
    ap.add_argument("--shots", type=int, default=200_000)
    ap.add_argument("--policy", choices=POLICIES, default=None,
                    help="encoding flag set, or EC post-selection (default: trivial / f1s2)")
    ap.add_argument("--decoder", choices=("s2", "f1s2"), default="f1s2")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", help="output file (default: stdout)")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--circuit", help="GotoRL encoder file replacing the shipped one")
    ap.add_argument("--swap-noise", choices=SWAP_MODES, default="decomposed")
    ap.add_argument("--batch-size", type=int, default=50_000)
    ap.add_argument("--workers", type=int, default=1)
    return ap


def _verify_parser(sub) -> argparse.ArgumentParser:
    ap = sub.add_parser("ftverify", help="single-fault analysis of a circuit file")
    ap.add_argument("circuit", help="circuit file")
    ap.add_argument("--code", choices=("steane",), default="steane")
    ap.add_argument("--predicate", choices=sorted(PREDICATES), default="css",
                    help="harmfulness test: css (weight-2 X or Z), zero (|0>_L), plus (|+>_L)")
    ap.add_argument("--all", action="store_true", help="list every fault, not only harmful ones")
    ap.add_argument("--gate-faults-only", action="store_true",
                    help="leave out preparation and measurement faults")
    return ap


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ftqec-grid-sim", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    _run_parser(sub)
    _verify_parser(sub)
    return ap


def _apply_config(ap: argparse.ArgumentParser, argv: list[str]) -> None:
    """Turn config-file entries into parser defaults so explicit flags override them."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    sub = next(a for a in ap._actions if isinstance(a, argparse._SubParsersAction))
    run_ap = sub.choices["run"]
    dests = {a.dest: a for a in run_ap._actions}
    defaults = {}
    for key, raw in read_config(known.config).items():
        if key not in dests or key == "config":
            raise ConfigError(f"unknown config key {key!r}")
        act = dests[key]
        value = act.type(raw) if act.type else raw
        if act.choices and value not in act.choices:
            raise ConfigError(f"config {key}={raw!r} not in {list(act.choices)}")
        defaults[key] = value
    run_ap.set_defaults(**defaults)


def p_values(args) -> list[float]:
    if args.plist:
        return sorted(float(x) for x in str(args.plist).split(",") if x.strip())
    if args.pmin is None or args.pmax is None or args.points is None:
        raise ConfigError("give --plist or all of --pmin, --pmax, --points")
    if args.points == 1:
        return [args.pmin]
    return [float(p) for p in np.geomspace(args.pmin, args.pmax, args.points)]


def cmd_run(args) -> int:
    if args.protocol is None:
        raise ConfigError("--protocol is required")
    pol = args.policy
    if pol is None:
        pol = "trivial" if args.protocol.startswith("enc-") else "f1s2"
    cfg = SweepConfig(protocol=args.protocol, p_values=p_values(args), shots=args.shots,
                      seed=args.seed, policy=pol, decoder=args.decoder,
                      swap_noise=args.swap_noise, batch_size=args.batch_size,
                      workers=args.workers, circuit=args.circuit, out=args.out,
                      format=args.format)
    result = run_sweep(cfg)
    text = result.to_json() + "\n" if cfg.format == "json" else result.to_csv()
    if cfg.out:
        Path(cfg.out).write_text(text)
        th = pseudo_threshold(result)
        msg = f"pseudo-threshold {th.value:.4g}" if th.found else f"no crossing: {th.hint}"
        print(f"wrote {len(result.points)} points to {cfg.out}; {msg}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


def cmd_ftverify(args) -> int:
    circ = load_circuit(args.circuit)
    res = verify_fault_tolerance(circ, predicate=args.predicate,
                                 gate_faults_only=args.gate_faults_only)
    rows = res.reports if args.all else res.harmful
    sys.stdout.write(format_report(rows, circ))
    verdict = "fault tolerant" if res else f"NOT fault tolerant ({len(res.violations)} unflagged)"
    print(f"# {len(res.harmful)} harmful single faults; {verdict}", file=sys.stderr)
    return 0 if res else 1


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        _apply_config(ap, argv)
        args = ap.parse_args(argv)
        if args.command == "run":
            return cmd_run(args)
        return cmd_ftverify(args)
    except (ConfigError, CircuitError, OSError) as exc:
        print(f"ftqec-grid-sim: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
