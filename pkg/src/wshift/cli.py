"""Command-line front end.

Exit codes: 0 success, 1 the property does not hold (well-formed input),
2 input or usage error, 3 an explicit search bound was exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import jsonio
from .aluthge import aluthge_classify, classify_sqrt_sequence, shift_of_measure, thm21_predicate
from .core import (
    AtomicCharge,
    PreconditionError,
    SearchSpaceTooLarge,
    ShiftError,
    arithmetic_mode,
    moments_to_weights,
)
from .flatness import (
    NOT_JUMPING,
    PropagationError,
    detect_k_jumping,
    jumping_charpoly,
    jumping_type,
    propagate,
)
from .hankel import classify
from .measures import abs_support, conv_square_root, moments_of, mult_convolve, t_weight
from .recursive import RepeatedRootError, recover_measure
from .verify import (
    four_atom_charges,
    sweep_fib,
    sweep_hamburger_failure,
    sweep_parity,
    sweep_thm21,
    thm21_tuples,
    tuple_measure,
)

OK, FALSE, INPUT_ERROR, BOUND_EXCEEDED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=("exact", "approx"), default=argparse.SUPPRESS)
    p.add_argument("--eps", type=float, default=argparse.SUPPRESS)
    p.add_argument("--out", default=argparse.SUPPRESS, help="also write the JSON payload here")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wshift", description="Weighted shifts: Hankel positivity, Aluthge transforms, flatness.")
    _common(parser)
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    shift = groups.add_parser("shift").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = shift.add_parser("analyze", help="H(n) / H~(n) classification")
    _source(p)
    _truncation(p)
    p = shift.add_parser("aluthge", help="classify the Aluthge transform")
    _source(p, measure=True)
    _truncation(p)
    p = shift.add_parser("from-measure", help="weights of the shift of a probability measure")
    p.add_argument("--measure", required=True)
    p.add_argument("--horizon", type=int, required=True)
    p = shift.add_parser("recover", help="atomic representing charge of a moment sequence")
    _source(p)
    for p in shift.choices.values():
        _common(p)

    measure = groups.add_parser("measure").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = measure.add_parser("moments")
    p.add_argument("charge")
    p.add_argument("-n", type=int, required=True)
    p = measure.add_parser("convolve")
    p.add_argument("first")
    p.add_argument("second")
    p = measure.add_parser("tmul")
    p.add_argument("charge")
    p = measure.add_parser("sqrtconv")
    p.add_argument("charge")
    p.add_argument("--candidates", help="JSON file: charge (its |support| is used) or list of scalars")
    p.add_argument("--nonneg-support", action="store_true")
    p = measure.add_parser("abs-support")
    p.add_argument("charge")
    for p in measure.choices.values():
        _common(p)

    flat = groups.add_parser("flatness").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = flat.add_parser("detect")
    _source(p)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--horizon", type=int)
    p = flat.add_parser("type")
    _source(p)
    p = flat.add_parser("propagate")
    _source(p)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--raw-inner", action="store_true", help="use (k-1)n'_0 without even rounding")
    for p in flat.choices.values():
        _common(p)

    verify = groups.add_parser("verify").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = verify.add_parser("thm21")
    p.add_argument("--grid")
    p.add_argument("--trials", type=int, default=300)
    p = verify.add_parser("fib")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--violating", type=int, default=10)
    p = verify.add_parser("four-atoms")
    p.add_argument("--trials", type=int, default=100)
    p = verify.add_parser("parity")
    for name, p in verify.choices.items():
        _common(p)
        p.add_argument("--seed", type=int, default=0)
        if name == "parity":
            p.add_argument("--horizon", type=int, default=20)
        else:
            _truncation(p, default_n=4, default_h=12)
    return parser


def _source(p, measure: bool = False) -> None:
    p.add_argument("--weights", help="WeightSequence JSON")
    p.add_argument("--moments", help="MomentSequence JSON (or {\"gamma_sq\": [...]} for sqrt sequences)")
    if measure:
        p.add_argument("--measure", help="probability measure JSON")


def _truncation(p, default_n=None, default_h=None) -> None:
    p.add_argument("--max-n", type=int, default=default_n)
    p.add_argument("--horizon", type=int, default=default_h)


# --------------------------------------------------------------------------
# input helpers


def _load_source(args, horizon=None):
    """Return ``("weights", WeightSequence)``, ``("moments", MomentSequence)`` or
    ``("sqrt", [q...])``."""
    given = [k for k in ("weights", "moments", "measure") if getattr(args, k, None)]
    if len(given) != 1:
        raise UsageError("give exactly one of --weights / --moments" + (" / --measure" if hasattr(args, "measure") else ""))
    kind = given[0]
    doc = jsonio.load(getattr(args, kind))
    if kind == "weights":
        return "weights", jsonio.weights_from_json(doc, args.weights)
    if kind == "measure":
        mu = jsonio.charge_from_json(doc, args.measure)
        if horizon is None:
            raise UsageError("--measure needs --horizon")
        return "weights", shift_of_measure(mu, horizon + 2)
    if isinstance(doc, dict) and "gamma_sq" in doc:
        return "sqrt", jsonio._scalar_list(doc["gamma_sq"], f"{args.moments}.gamma_sq")
    return "moments", jsonio.moments_from_json(doc, args.moments)


def _moments(kind, src, count: int | None):
    if kind == "moments":
        return src
    if count is None:
        count = int(src.horizon) if src.tail is None else 2 * src.tail.order + 2
    return src.moments(count)


def _candidates(path: str | None, rho: AtomicCharge):
    if path is None:
        return abs_support(rho)
    doc = jsonio.load(path)
    if isinstance(doc, list):
        return jsonio._scalar_list(doc, path)
    return abs_support(jsonio.charge_from_json(doc, path))


# --------------------------------------------------------------------------
# commands


def _shift(args):
    if args.command == "from-measure":
        mu = jsonio.charge_from_json(jsonio.load(args.measure), args.measure)
        return OK, jsonio.weights_to_json(shift_of_measure(mu, args.horizon))
    if args.command == "recover":
        kind, src = _load_source(args)
        if kind == "sqrt":
            raise UsageError("recover needs moments, not squared moments")
        g = _moments(kind, src, None)
        try:
            mu = recover_measure(g)
        except RepeatedRootError as exc:
            return FALSE, {"charge": None, "reason": str(exc)}
        if mu is None:
            return FALSE, {"charge": None, "reason": "no real atomic representing charge"}
        return OK, {"charge": jsonio.charge_to_json(mu), "signed": mu.is_signed}
    if args.command == "analyze":
        kind, src = _load_source(args)
        if kind == "sqrt":
            horizon = len(src) - 1 if args.horizon is None else args.horizon
            report = classify_sqrt_sequence(src, _max_n(args, horizon), horizon)
        else:
            g = _moments(kind, src, args.horizon)
            horizon = len(g) - 1 if args.horizon is None else args.horizon
            report = classify(g, _max_n(args, horizon), horizon)
        return (OK if report.subnormal_truncated else FALSE), jsonio.report_to_json(report)
    if args.command == "aluthge":
        horizon = args.horizon
        kind, src = _load_source(args, horizon)
        if kind != "weights":
            if kind == "sqrt":
                raise UsageError("aluthge needs weights, moments or a measure")
            src = moments_to_weights(src)
        if horizon is None:
            horizon = int(src.horizon) - 2 if src.tail is None else 12
        res = aluthge_classify(src, _max_n(args, horizon), horizon)
        return (OK if res.classification.subnormal_truncated else FALSE), jsonio.aluthge_to_json(res)
    raise UsageError(f"unknown command {args.command}")


def _max_n(args, horizon: int) -> int:
    return horizon // 2 if args.max_n is None else args.max_n


def _measure(args):
    load = lambda path: jsonio.charge_from_json(jsonio.load(path), path)  # noqa: E731
    if args.command == "moments":
        return OK, jsonio.moments_to_json(moments_of(load(args.charge), args.n))
    if args.command == "convolve":
        return OK, jsonio.charge_to_json(mult_convolve(load(args.first), load(args.second)))
    if args.command == "tmul":
        return OK, jsonio.charge_to_json(t_weight(load(args.charge)))
    if args.command == "abs-support":
        return OK, {"locations": [jsonio.scalar_to_json(x) for x in abs_support(load(args.charge))]}
    if args.command == "sqrtconv":
        rho = load(args.charge)
        nu = conv_square_root(rho, _candidates(args.candidates, rho), nonneg_support=args.nonneg_support)
        if nu is None:
            return FALSE, {"charge": None}
        return OK, {"charge": jsonio.charge_to_json(nu)}
    raise UsageError(f"unknown command {args.command}")


def _flatness(args):
    kind, src = _load_source(args)
    if kind == "sqrt":
        raise UsageError("flatness commands need weights or moments")
    if args.command == "propagate":
        g = _moments(kind, src, args.horizon)
        try:
            rep = propagate(g, args.k, args.n0, args.horizon, raw_inner=args.raw_inner)
        except (PropagationError, PreconditionError) as exc:
            return FALSE, {"error": str(exc), "step": getattr(exc, "step", "precondition")}
        return OK, jsonio.propagation_to_json(rep)
    w = src if kind == "weights" else moments_to_weights(src)
    if args.command == "detect":
        found = detect_k_jumping(w, args.k, args.horizon)
        return (OK if found else FALSE), {"k": args.k, "k_jumping": found}
    if args.command == "type":
        kind = jumping_type(w)
        doc = {"type": kind}
        if kind != NOT_JUMPING:
            doc["charpoly"] = jsonio.polynomial_to_json(jumping_charpoly(w))
        return (FALSE if kind == NOT_JUMPING else OK), doc
    raise UsageError(f"unknown command {args.command}")


def _verify(args):
    if args.command == "thm21":
        if args.grid:
            doc = jsonio.load(args.grid)
            rows = doc.get("tuples", doc) if isinstance(doc, dict) else doc
            if not isinstance(rows, list):
                raise jsonio.InputError(f"{args.grid}: expected a list of tuples")
            tuples = []
            for i, row in enumerate(rows):
                vals = jsonio._scalar_list(row, f"{args.grid}[{i}]")
                if len(vals) != 6:
                    raise jsonio.InputError(f"{args.grid}[{i}]: expected (a, b, c, p, r, q)")
                tuples.append(tuple(Fraction(v) for v in vals))
            for i, t in enumerate(tuples):
                try:
                    thm21_predicate(tuple_measure(t))
                except ShiftError as exc:
                    raise jsonio.InputError(f"{args.grid}[{i}]: {exc}") from exc
        else:
            tuples = thm21_tuples(args.trials, args.seed)
        rows = sweep_thm21(tuples, args.max_n, args.horizon)
        ok = all(r["agree"] for r in rows)
        return (OK if ok else FALSE), {
            "agreements": sum(r["agree"] for r in rows),
            "rows": [
                {
                    "tuple": [jsonio.scalar_to_json(x) for x in r["tuple"]],
                    "predicate": r["predicate"],
                    "subnormal_truncated": r["subnormal"],
                    "certified": r["certified"],
                    "agree": r["agree"],
                }
                for r in rows
            ],
        }
    if args.command == "four-atoms":
        rows = sweep_hamburger_failure(four_atom_charges(args.trials, args.seed), args.max_n, args.horizon)
        ok = all(r["fails"] for r in rows)
        return (OK if ok else FALSE), {"failing": sum(r["fails"] for r in rows), "rows": [_row(r) for r in rows]}
    if args.command == "fib":
        res = sweep_fib(args.trials, args.seed, args.violating, args.max_n, args.horizon)
        held = res["hypothesis_holds"]
        ok = all(r["fails"] for r in held)
        return (OK if ok else FALSE), {
            "failing": sum(r["fails"] for r in held),
            "hypothesis_holds": [_row(r) for r in held],
            "hypothesis_fails": [_row(r) for r in res["hypothesis_fails"]],
        }
    if args.command == "parity":
        rows = sweep_parity(args.seed, args.horizon)
        out = []
        for r in rows:
            doc = {"k": r["k"], "n0": r["n0"], "measure": jsonio.charge_to_json(r["measure"]), "ok": r["ok"]}
            doc["expected"] = r["expected"]
            if "error" in r:
                doc["error"] = r["error"]
            else:
                doc["parity_conclusion"] = r["parity_conclusion"]
                doc["no_negative_atom"] = r["no_negative_atom"]
            out.append(doc)
        return (OK if all(r["ok"] for r in rows) else FALSE), {"rows": out}
    raise UsageError(f"unknown command {args.command}")


def _row(r: dict) -> dict:
    doc = {"charge": jsonio.charge_to_json(r["charge"]), "hamburger_fails": r["fails"]}
    for key in ("n", "k", "certified", "corrected_hypothesis"):
        if key in r:
            doc[key] = r[key]
    return doc


HANDLERS = {"shift": _shift, "measure": _measure, "flatness": _flatness, "verify": _verify}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        mode = getattr(args, "mode", "exact")
        eps = getattr(args, "eps", 1e-9)
        if mode == "exact" and hasattr(args, "eps"):
            raise UsageError("--eps requires --mode approx")
        with arithmetic_mode(mode == "exact", eps):
            code, payload = HANDLERS[args.group](args)
    except UsageError as exc:
        print(f"wshift: error: {exc}", file=stderr)
        return INPUT_ERROR
    except SearchSpaceTooLarge as exc:
        print(f"wshift: bound exceeded: {exc}", file=stderr)
        return BOUND_EXCEEDED
    except (ShiftError, ValueError, TypeError, KeyError) as exc:
        print(f"wshift: input error: {exc}", file=stderr)
        return INPUT_ERROR
    text = jsonio.dumps(payload)
    print(text, file=stdout)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return code


def main() -> None:  # pragma: no cover
    sys.exit(run())
