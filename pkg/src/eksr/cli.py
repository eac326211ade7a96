"""Command-line interface.

Every command prints a single JSON report to stdout with the fixed keys
``value`` (rational as "num/den" or null), ``sequence`` (list of bitstrings
or null), ``flips`` (flipped variable per step or null) and ``meta``.
Exit codes: 0 success, 1 domain error (one-line diagnostic on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bounds
from .approx import derandomize, randomized_round
from .errors import EksrError
from .exact import DEFAULT_N_CAP, opt_exact
from .formulas import Assignment, Instance, ReconfSequence, check_sequence, seq_value, value
from .generate import PlantedGenerator, gen_random_instance
from .io import load_instance, serialize_instance
from .reductions import build_witness, reduce_horn_emulation, reduce_np_gadget, reduce_pad, reduce_width
from .verifiers import acceptance_probability, horn_rejection_curve, spec_from_json


def _frac_str(x: Fraction | None) -> str | None:
    if x is None:
        return None
    return f"{x.numerator}/{x.denominator}"


def _report(value=None, sequence=None, flips=None, meta=None) -> dict:
    return {
        "value": _frac_str(value) if isinstance(value, Fraction) else value,
        "sequence": [str(a) for a in sequence] if sequence is not None else None,
        "flips": list(flips) if flips is not None else None,
        "meta": meta or {},
    }


def _emit(report: dict) -> int:
    print(json.dumps(report))
    return 0


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise EksrError(f"not a rational: {text!r}") from None


def _sequence_from_arg(arg: str) -> list[Assignment]:
    """A sequence argument is either a JSON report file or a comma-separated
    list of bitstrings."""
    if arg.endswith(".json"):
        with open(arg, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        strings = payload.get("sequence")
        if not strings:
            raise EksrError(f"{arg}: no 'sequence' field in report")
    else:
        strings = arg.split(",")
    return [Assignment.from_string(s) for s in strings]


def _cmd_value(args) -> int:
    instance = load_instance(args.file)
    a = Assignment.from_string(args.assignment)
    return _emit(_report(value=value(instance.formula, a),
                         meta={"n": instance.n, "m": instance.formula.m}))


def _cmd_check_seq(args) -> int:
    instance = load_instance(args.file)
    steps = _sequence_from_arg(args.sequence)
    report = check_sequence(instance, steps)
    meta = {"valid": report.valid}
    if report.reason:
        meta["reason"] = report.reason
    return _emit(_report(value=report.value, sequence=steps if report.valid else None,
                         meta=meta))


def _cmd_exact(args) -> int:
    instance = load_instance(args.file)
    result = opt_exact(instance, n_cap=args.cap)
    return _emit(_report(value=result.opt, sequence=result.witness,
                         flips=result.witness.flips,
                         meta={"n": instance.n, "m": instance.formula.m}))


def _cmd_approx(args) -> int:
    instance = load_instance(args.file)
    k = instance.formula.k
    if args.randomized:
        seq = randomized_round(instance, args.seed)
        method = "randomized"
    else:
        seq = derandomize(instance)
        method = "derandomized"
    bound = bounds.approximation_factor(k)
    return _emit(_report(value=seq_value(instance.formula, seq), sequence=seq, flips=seq.flips,
                         meta={"method": method, "k": k, "bound": _frac_str(bound)}))


def _cmd_table(args) -> int:
    rows = bounds.factor_table(args.k_min, args.k_max)
    return _emit(_report(meta={"rows": rows}))


def _cmd_gen(args) -> int:
    n, m, k = args.n, args.m, args.k
    plant0 = Assignment.from_string(args.plant0) if args.plant0 else Assignment.zeros(n)
    plant1 = Assignment.from_string(args.plant1) if args.plant1 else Assignment.ones(n)
    gen = PlantedGenerator(n, m, k, args.seed, (plant0, plant1))
    instance = gen_random_instance(gen)
    text = serialize_instance(instance)
    meta = {"n": n, "m": m, "k": k, "seed": args.seed}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        meta["out"] = args.out
    else:
        meta["instance"] = text
    return _emit(_report(meta=meta))


def _cmd_reduce(args) -> int:
    source = load_instance(args.file)
    kind = args.kind
    witness_requested = args.witness
    if kind == "pad":
        out = reduce_pad(source, args.k)
    elif kind == "horn":
        out = reduce_horn_emulation(source, args.lam)
    elif kind == "width":
        out = reduce_width(source, args.k)
    elif kind in ("np3", "np4", "npk"):
        k_target = {"np3": 3, "np4": 4}.get(kind, args.k)
        delta = _parse_fraction(args.delta) if args.delta else None
        out = reduce_np_gadget(source.formula, k_target, delta=delta)
    else:  # pragma: no cover - argparse restricts choices
        raise EksrError(f"unknown reduction {kind!r}")

    witness = None
    if witness_requested:
        if kind in ("np3", "np4", "npk"):
            sat = _find_satisfying(source, args.cap)
            witness = build_witness(out, source_sat=sat)
        else:
            opt = opt_exact(source, n_cap=args.cap)
            if opt.opt != 1:
                raise EksrError(f"source optimum is {opt.opt}; no value-1 witness exists")
            witness = build_witness(out, source_path=opt.witness)

    emitted = out.instance if kind != "np3" else out.e3.instance
    text = serialize_instance(emitted)
    meta = {"kind": kind, "params": out.params, "n_out": emitted.n, "m_out": emitted.formula.m}
    if kind == "np3":
        meta["raw_widths"] = "3,4"
        meta["note"] = "instance file holds the uniform width-3 companion"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        meta["out"] = args.out
    else:
        meta["instance"] = text
    if witness is not None:
        if kind == "np3":
            witness = build_witness(out.e3, source_path=witness)
        return _emit(_report(value=Fraction(1), sequence=witness, flips=witness.flips, meta=meta))
    return _emit(_report(meta=meta))


def _find_satisfying(source: Instance, cap: int) -> Assignment:
    f = source.formula
    if f.n > cap:
        raise EksrError(f"n={f.n} exceeds cap {cap} for witness search")
    from .formulas import count_satisfied

    for bits in range(1 << f.n):
        a = Assignment(f.n, bits)
        if count_satisfied(f, a) == f.m:
            return a
    raise EksrError("source formula is unsatisfiable; no witness exists")


def _cmd_verify(args) -> int:
    if args.what == "curve":
        lam = args.lam
        grid_n = max(args.samples, 1) * lam
        points = horn_rejection_curve(lam, [Fraction(i, grid_n) for i in range(grid_n + 1)])
        best = max(points, key=lambda p: p[1])
        rows = [{"eps": _frac_str(e), "reject": _frac_str(r)} for e, r in points]
        return _emit(_report(meta={"lambda": lam, "points": rows,
                                   "argmax": _frac_str(best[0])}))
    if args.what == "accept":
        with open(args.spec, "r", encoding="utf-8") as fh:
            spec = spec_from_json(fh.read())
        proof = Assignment.from_string(args.proof)
        return _emit(_report(value=acceptance_probability(spec, proof),
                             meta={"proof_len": spec.proof_len, "atoms": len(spec.atoms)}))
    raise EksrError(f"unknown verify mode {args.what!r}")  # pragma: no cover


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eksr", description=__doc__)
    parser.add_argument("--seed", type=int, default=0, help="PRNG seed (default 0)")
    parser.add_argument("--cap", type=int, default=DEFAULT_N_CAP,
                        help="variable-count cap for exhaustive operations")
    parser.add_argument("--samples", type=int, default=32, help="sampling density where applicable")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("value", help="value of one assignment on an instance's formula")
    p.add_argument("file")
    p.add_argument("assignment")
    p.set_defaults(func=_cmd_value)

    p = sub.add_parser("check-seq", help="validate a sequence and report its value")
    p.add_argument("file")
    p.add_argument("sequence", help="JSON report file or comma-separated bitstrings")
    p.set_defaults(func=_cmd_check_seq)

    p = sub.add_parser("exact", help="exact optimum and witness (small n)")
    p.add_argument("file")
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("approx", help="guaranteed-value sequence via derandomized rounding")
    p.add_argument("file")
    p.add_argument("--randomized", action="store_true", help="use seeded random rounding instead")
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("table", help="approximation factors per clause width")
    p.add_argument("--k-min", type=int, default=3)
    p.add_argument("--k-max", type=int, default=10)
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("gen", help="generate a planted random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--plant0")
    p.add_argument("--plant1")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("reduce", help="compile an instance through a gadget reduction")
    p.add_argument("kind", choices=["pad", "horn", "width", "np3", "np4", "npk"])
    p.add_argument("file")
    p.add_argument("--k", type=int, default=5, help="target width (pad/width/npk)")
    p.add_argument("--lambda", dest="lam", type=int, default=2, help="Horn repetition count")
    p.add_argument("--delta", help="copy-count fraction P/Q (np3/np4)")
    p.add_argument("--out", help="write the instance file here instead of embedding it")
    p.add_argument("--witness", action="store_true",
                   help="also build a completeness witness (needs a small source)")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("verify", help="verifier utilities")
    vsub = p.add_subparsers(dest="what", required=True)
    pc = vsub.add_parser("curve", help="Horn rejection curve points")
    pc.add_argument("--lambda", dest="lam", type=int, required=True)
    pv = vsub.add_parser("accept", help="acceptance probability of a proof")
    pv.add_argument("spec")
    pv.add_argument("proof")
    p.set_defaults(func=_cmd_verify)

    return parser


def run_command(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EksrError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))
