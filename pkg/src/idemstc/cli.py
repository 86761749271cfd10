"""Command-line interface.

Exit codes: 0 success / pass, 1 verification failed, 2 usage,
3 validation or parse error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from fractions import Fraction

import numpy as np

from . import audit
from . import constellations as cons
from .errors import IdemError, ReferenceDeviationWarning
from .fileio import FileFormatError, constellation_to_dict, dumps, load_constellation, save_constellation
from .linalg import max_entry, spectral_decompose_unitary, unitarity_residual

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3, 4
STRICT_SAMPLE = 256


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"expected comma-separated integers, got {text!r}", EXIT_USAGE)


def _pairs(text: str) -> list[list[str]]:
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 2:
            raise CliError(f"pair {chunk!r} must have exactly two entries", EXIT_USAGE)
        out.append(parts)
    return out


def _family_params(args) -> dict:
    f = args.family

    def need(name):
        v = getattr(args, name)
        if v is None:
            raise CliError(f"family {f} needs --{name.replace('_', '-')}", EXIT_USAGE)
        return v

    if f == "cyclic":
        try:
            tuples = cons.parse_tuples(need("tuples"))
        except ValueError:
            raise CliError("--tuples must look like '0,2;1,4;...'", EXIT_USAGE)
        return {"n": need("n"), "tuples": [list(t) for t in tuples], "basis": args.basis}
    if f == "real-rank1":
        return {"indices": _int_list(need("indices"))}
    if f == "rational":
        return {"pairs": [[int(p), int(q)] for p, q in _pairs(need("pairs"))]}
    if f == "angle":
        return {"n": need("n")}
    if f == "gaussian":
        return {"pairs": _pairs(need("pairs"))}
    raise CliError(f"unknown family {f!r}", EXIT_USAGE)


def _emit(args, payload: dict | str) -> None:
    text = payload if isinstance(payload, str) else dumps(payload)
    if getattr(args, "out", None):
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc}", EXIT_IO)
    else:
        sys.stdout.write(text)


def _load(path: str) -> cons.Constellation:
    try:
        return load_constellation(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO)
    except (FileFormatError, ValueError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_INVALID)


def _save(args, c: cons.Constellation) -> None:
    if args.out:
        try:
            save_constellation(args.out, c)
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc}", EXIT_IO)
    else:
        sys.stdout.write(dumps(constellation_to_dict(c)))


def _summary(c: cons.Constellation) -> str:
    return f"members={len(c)} order={c.order} rate={c.rate:.17g}"


def _warn_lines(caught) -> list[dict]:
    out = []
    for w in caught:
        if isinstance(w.message, ReferenceDeviationWarning):
            d = w.message.deviation.as_dict()
            if d not in out:
                out.append(d)
    return out


def _report_warnings(records: list[dict]) -> None:
    for d in records:
        print(f"warning: [{d['code']}] {d['message']}", file=sys.stderr)


def cmd_generate(args) -> int:
    params = _family_params(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        c = audit.generate(args.family, params)
    _report_warnings(_warn_lines(caught))
    _save(args, c)
    print(_summary(c), file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_extend(args) -> int:
    c = _load(args.input)
    if args.op == "negate":
        step = {"op": "negate"}
    elif args.op == "omega":
        if args.k is None:
            raise CliError("--op omega needs --k", EXIT_USAGE)
        step = {"op": "omega", "k": args.k}
    elif args.op == "tangle":
        step = {"op": "tangle", "omega_order": args.omega_order}
    else:
        step = {"op": "omega-free"}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        out = audit.apply_step(c, step)
    _report_warnings(_warn_lines(caught))
    _save(args, out)
    print(_summary(out), file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def _histogram(report: cons.QualityReport, width: int = 40) -> str:
    top = max(n for _, n in report.distribution)
    lines = []
    for d, n in report.distribution:
        bar = "#" * max(1, round(width * n / top))
        lines.append(f"{d:.12f} | {bar} {n}")
    return "\n".join(lines) + "\n"


def quality_payload(c: cons.Constellation, tolerance: float, with_predictions: bool) -> tuple[dict, cons.QualityReport]:
    """The ReportFile document for ``c`` (also used in-process by tests)."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = cons.quality(c)
        ii, jj, dets = cons.pair_abs_dets(c)
        diverse = bool(np.all(dets > tolerance))
        preds = audit.predictions(c, report) if with_predictions else None
        audit.published_deviations(c, report)
    payload = report.as_dict()
    payload["diversity"] = diverse
    payload["size"] = len(c)
    payload["order"] = c.order
    payload["mean_distance"] = report.mean_distance
    if preds is not None:
        payload["predictions"] = preds
    payload["warnings"] = _warn_lines(caught)
    return payload, report


def cmd_quality(args) -> int:
    c = _load(args.input)
    if len(c) < 2:
        raise CliError("quality needs at least two members", EXIT_INVALID)
    payload, report = quality_payload(c, args.tolerance, args.predictions)
    _report_warnings(payload["warnings"])
    _emit(args, payload)
    if args.histogram:
        print(_histogram(report), end="", file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_verify(args) -> int:
    c = _load(args.input)
    problems: list[str] = []
    residuals = {lab: unitarity_residual(m) for lab, m in zip(c.labels, c.matrices)}
    for lab, r in residuals.items():
        if r > 1e-8:
            problems.append(f"not unitary: {lab} (residual {r:.3e})")
    for a, b in cons.find_duplicates(c):
        problems.append(f"duplicate members: {a} {b}")
    diverse, witness = cons.is_fully_diverse(c, args.tolerance)
    if not diverse:
        problems.append(f"not fully diverse: {witness[0]} {witness[1]}")
    result = {
        "members": len(c),
        "order": c.order,
        "max_unitarity_residual": max(residuals.values()),
        "fully_diverse": diverse,
        "problems": problems,
    }
    if args.strict:
        idx = list(range(len(c)))
        if len(idx) > STRICT_SAMPLE:
            rng = np.random.default_rng(args.seed)
            idx = sorted(rng.choice(len(c), STRICT_SAMPLE, replace=False).tolist())
        worst = 0.0
        for i in idx:
            m = c.matrices[i]
            if residuals[c.labels[i]] > 1e-8:
                continue
            worst = max(worst, max_entry(spectral_decompose_unitary(m).reconstruct() - m))
        result["decomposed"] = len(idx)
        result["max_reconstruction_residual"] = worst
        if worst > 1e-8:
            problems.append(f"reconstruction residual {worst:.3e} exceeds 1e-8")
    if args.json:
        _emit(args, result)
    else:
        lines = [f"{'FAIL' if problems else 'PASS'} {len(c)} members of order {c.order}"]
        lines.append(f"max unitarity residual {result['max_unitarity_residual']:.3e}")
        if "max_reconstruction_residual" in result:
            lines.append(f"max reconstruction residual {result['max_reconstruction_residual']:.3e}")
        lines += problems
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_FAIL if problems else EXIT_OK


def phase_text(z: complex, max_denominator: int = 720) -> str:
    """``exp(2 pi i p/q)`` when the angle is a rational turn, else a decimal."""
    turn = (math.atan2(z.imag, z.real) / (2 * math.pi)) % 1.0
    frac = Fraction(turn).limit_denominator(max_denominator)
    if abs(float(frac) - turn) <= 1e-9 / (2 * math.pi) or abs(float(frac) - turn - 1) <= 1e-9:
        if frac.numerator % frac.denominator == 0:
            return "1"
        return f"exp(2πi·{frac.numerator}/{frac.denominator})"
    return f"{z.real:+.12f}{z.imag:+.12f}i"


def cmd_decompose(args) -> int:
    c = _load(args.input)
    key = args.member
    if key in c.labels:
        i = c.index(key)
    else:
        try:
            i = int(key)
        except ValueError:
            raise CliError(f"no member labelled {key!r}", EXIT_INVALID)
        if not 0 <= i < len(c):
            raise CliError(f"index {i} out of range", EXIT_INVALID)
    try:
        dec = spectral_decompose_unitary(c.matrices[i])
    except IdemError as exc:
        raise CliError(str(exc), EXIT_INVALID)
    residual = max_entry(dec.reconstruct() - c.matrices[i])
    if args.json:
        _emit(args, {
            "label": c.labels[i],
            "phases": [[z.real, z.imag] for z in dec.phases],
            "phase_text": [phase_text(z) for z in dec.phases],
            "projectors": [[[[x.real, x.imag] for x in row] for row in p] for p in dec.projectors],
            "reconstruction_residual": residual,
        })
        return EXIT_OK
    lines = [f"member {c.labels[i]} (index {i})"]
    for k, (z, p) in enumerate(zip(dec.phases, dec.projectors)):
        lines.append(f"phase {k}: {phase_text(z)}")
        for row in p:
            lines.append("  " + "  ".join(f"{x.real:+.6f}{x.imag:+.6f}i" for x in row))
    lines.append(f"reconstruction residual {residual:.3e}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--tolerance", type=float, default=1e-9, help="|det| threshold for full diversity")
    common.add_argument("--seed", type=int, default=0, help="seed for --strict sampling")
    common.add_argument("--json", action="store_true", help="machine-readable report")

    p = argparse.ArgumentParser(prog="idemstc", description="Unitary constellations from orthogonal idempotents.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="build a constellation family")
    g.add_argument("family", choices=audit.FAMILIES)
    g.add_argument("--n", type=int, help="root order (cyclic) or number of angles (angle)")
    g.add_argument("--tuples", help="exponent tuples, e.g. '0,2;1,4;2,1'")
    g.add_argument("--basis", choices=("diagonal", "dft"), default="diagonal", help="idempotent set for cyclic")
    g.add_argument("--indices", help="k values for real-rank1, e.g. '1,2,4,16'")
    g.add_argument("--pairs", help="'p,q;...' for rational, 'a,b;...' Gaussian integers for gaussian")
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("extend", parents=[common], help="negate, omega-extend or tangle a constellation")
    e.add_argument("input")
    e.add_argument("--op", required=True, choices=("negate", "omega", "tangle", "omega-free"))
    e.add_argument("--k", type=int, help="root order for --op omega")
    e.add_argument("--omega-order", type=int, default=1, help="root order for --op tangle")
    e.set_defaults(func=cmd_extend)

    q = sub.add_parser("quality", parents=[common], help="quality, rate and distance distribution")
    q.add_argument("input")
    q.add_argument("--histogram", action="store_true")
    q.add_argument("--predictions", action="store_true")
    q.set_defaults(func=cmd_quality)

    v = sub.add_parser("verify", parents=[common], help="unitarity, distinctness and full diversity")
    v.add_argument("input")
    v.add_argument("--strict", action="store_true", help="also decompose members and check reconstruction")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("decompose", parents=[common], help="phases and projectors of one member")
    d.add_argument("input")
    d.add_argument("member", help="label or 0-based index")
    d.set_defaults(func=cmd_decompose)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except IdemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        pair = getattr(exc, "pair", None)
        if pair:
            print(f"offending members: {pair[0]} {pair[1]}", file=sys.stderr)
        return EXIT_INVALID
    except (KeyError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
