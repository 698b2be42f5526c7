"""JSON forms of every value and report the command line reads or writes.

Scalars are strings ``"p/q"`` (exact), integers (exact) or other numbers
(approximate).  Irrational values produced by the Aluthge and square-root
code are written as ``{"sqrt": "p/q"}`` or ``{"expr": "<sympy expression>"}``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .core import (
    AtomicCharge,
    MomentSequence,
    Radical,
    RecursionSpec,
    ShiftError,
    WeightSequence,
    to_scalar,
)
from .hankel import ClassificationReport, Failure, PsdCertificate
from .recursive import Polynomial, RootSet


class InputError(ShiftError):
    """Malformed input document; the message names the offending field."""


# --------------------------------------------------------------------------
# scalars


def scalar_to_json(x):
    if isinstance(x, bool):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return x
    if isinstance(x, Radical):
        return {"sqrt": str(x.radicand)}
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    try:
        import sympy
    except ImportError:  # pragma: no cover
        sympy = None
    if sympy is not None and isinstance(x, sympy.Basic):
        if x.is_Rational:
            return str(Fraction(int(x.p), int(x.q)))
        return {"expr": str(x)}
    if hasattr(x, "__float__"):  # mpmath values
        return float(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def scalar_from_json(v, where: str = "value"):
    if isinstance(v, bool):
        raise InputError(f"{where}: expected a scalar, got a boolean")
    if isinstance(v, int):
        return to_scalar(v)
    if isinstance(v, float):
        return to_scalar(v)
    if isinstance(v, str):
        try:
            return to_scalar(v)
        except ShiftError as exc:
            raise InputError(f"{where}: {exc}") from exc
    if isinstance(v, dict):
        if set(v) == {"sqrt"}:
            rad = scalar_from_json(v["sqrt"], f"{where}.sqrt")
            return Radical(Fraction(rad)).exact_or_self()
        if set(v) == {"expr"}:
            import sympy

            try:
                return to_scalar(sympy.sympify(v["expr"], rational=True))
            except (sympy.SympifyError, TypeError) as exc:
                raise InputError(f"{where}.expr: cannot parse {v['expr']!r}") from exc
        if set(v) == {"re", "im"}:
            return complex(v["re"], v["im"])
    raise InputError(f"{where}: expected a scalar (\"p/q\" string or number), got {v!r}")


def _field(d: dict, key: str, where: str):
    if not isinstance(d, dict):
        raise InputError(f"{where}: expected an object")
    if key not in d:
        raise InputError(f"{where}: missing field '{key}'")
    return d[key]


def _scalar_list(v, where: str) -> list:
    if not isinstance(v, list):
        raise InputError(f"{where}: expected a list")
    return [scalar_from_json(x, f"{where}[{i}]") for i, x in enumerate(v)]


# --------------------------------------------------------------------------
# core values


def spec_to_json(spec: RecursionSpec) -> dict:
    return {"coeffs": [scalar_to_json(c) for c in spec.coeffs], "initial": [scalar_to_json(c) for c in spec.initial]}


def spec_from_json(d, where: str = "recursion") -> RecursionSpec:
    try:
        return RecursionSpec(
            tuple(_scalar_list(_field(d, "coeffs", where), f"{where}.coeffs")),
            tuple(_scalar_list(_field(d, "initial", where), f"{where}.initial")),
        )
    except InputError:
        raise
    except ShiftError as exc:
        raise InputError(f"{where}: {exc}") from exc


def weights_to_json(w: WeightSequence) -> dict:
    out = {"weights_sq": [scalar_to_json(x) for x in w.weights_sq]}
    if w.tail is not None:
        out["tail"] = spec_to_json(w.tail)
    return out


def weights_from_json(d, where: str = "weights") -> WeightSequence:
    if isinstance(d, dict) and "weights" in d and "weights_sq" not in d:
        vals = _scalar_list(d["weights"], f"{where}.weights")
        sq = [v * v for v in vals]
    else:
        sq = _scalar_list(_field(d, "weights_sq", where), f"{where}.weights_sq")
    tail = d.get("tail")
    try:
        return WeightSequence(tuple(sq), spec_from_json(tail, f"{where}.tail") if tail is not None else None)
    except InputError:
        raise
    except ShiftError as exc:
        raise InputError(f"{where}: {exc}") from exc


def moments_to_json(g) -> dict:
    return {"gamma": [scalar_to_json(x) for x in g]}


def moments_from_json(d, where: str = "moments") -> MomentSequence:
    return MomentSequence(_scalar_list(_field(d, "gamma", where), f"{where}.gamma"))


def charge_to_json(m: AtomicCharge) -> dict:
    return {"atoms": [{"loc": scalar_to_json(x), "den": scalar_to_json(d)} for x, d in m.atoms]}


def charge_from_json(d, where: str = "charge") -> AtomicCharge:
    atoms = _field(d, "atoms", where)
    if not isinstance(atoms, list):
        raise InputError(f"{where}.atoms: expected a list")
    out = []
    for i, a in enumerate(atoms):
        w = f"{where}.atoms[{i}]"
        out.append((scalar_from_json(_field(a, "loc", w), f"{w}.loc"), scalar_from_json(_field(a, "den", w), f"{w}.den")))
    return AtomicCharge(tuple(out))


def polynomial_to_json(p: Polynomial) -> dict:
    return {"monic_coeffs": [scalar_to_json(c) for c in p.coeffs]}


def polynomial_from_json(d, where: str = "polynomial") -> Polynomial:
    try:
        return Polynomial(tuple(_scalar_list(_field(d, "monic_coeffs", where), f"{where}.monic_coeffs")))
    except InputError:
        raise
    except ShiftError as exc:
        raise InputError(f"{where}: {exc}") from exc


def rootset_to_json(rs: RootSet) -> dict:
    return {"roots": [{"value": scalar_to_json(v), "multiplicity": m} for v, m in rs.roots]}


def rootset_from_json(d, where: str = "roots") -> RootSet:
    roots = _field(d, "roots", where)
    return RootSet(
        tuple(
            (scalar_from_json(_field(r, "value", f"{where}[{i}]"), f"{where}[{i}].value"), int(r["multiplicity"]))
            for i, r in enumerate(roots)
        )
    )


# --------------------------------------------------------------------------
# reports


def certificate_to_json(c: PsdCertificate) -> dict:
    out = {"verdict": c.verdict, "exact": c.exact}
    if c.witness is not None:
        out["witness"] = [scalar_to_json(x) for x in c.witness]
        out["value"] = scalar_to_json(c.value)
    if c.pivots:
        out["pivots"] = [scalar_to_json(x) for x in c.pivots]
    return out


def certificate_from_json(d, where: str = "certificate") -> PsdCertificate:
    witness = d.get("witness")
    return PsdCertificate(
        verdict=_field(d, "verdict", where),
        witness=tuple(_scalar_list(witness, f"{where}.witness")) if witness is not None else None,
        value=scalar_from_json(d["value"], f"{where}.value") if "value" in d else None,
        pivots=tuple(_scalar_list(d.get("pivots", []), f"{where}.pivots")),
        exact=bool(d.get("exact", True)),
    )


def _failure_to_json(f: Failure) -> dict:
    return {"property": f.property, "n": f.n, "k": f.k, "certificate": certificate_to_json(f.certificate)}


def _failure_from_json(d, where: str) -> Failure:
    return Failure(d["property"], int(d["n"]), int(d["k"]), certificate_from_json(d["certificate"], f"{where}.certificate"))


def report_to_json(r: ClassificationReport) -> dict:
    return {
        "horizon": r.horizon,
        "h_results": {str(n): v for n, v in r.h_results.items()},
        "h_tilde_results": {str(n): v for n, v in r.h_tilde_results.items()},
        "hamburger_truncated": r.hamburger_truncated,
        "subnormal_truncated": r.subnormal_truncated,
        "exact": r.exact,
        "first_failure": _failure_to_json(r.first_failure) if r.first_failure else None,
        "failures": {k: _failure_to_json(f) for k, f in r.failures.items()},
    }


def report_from_json(d, where: str = "report") -> ClassificationReport:
    r = ClassificationReport(horizon=int(_field(d, "horizon", where)))
    r.h_results = {int(n): bool(v) for n, v in _field(d, "h_results", where).items()}
    r.h_tilde_results = {int(n): bool(v) for n, v in _field(d, "h_tilde_results", where).items()}
    r.subnormal_truncated = bool(d["subnormal_truncated"])
    r.exact = bool(d.get("exact", True))
    r.failures = {k: _failure_from_json(f, f"{where}.failures.{k}") for k, f in d.get("failures", {}).items()}
    ff = d.get("first_failure")
    r.first_failure = _failure_from_json(ff, f"{where}.first_failure") if ff else None
    return r


def aluthge_to_json(res) -> dict:
    return {
        "weights_sq": [scalar_to_json(x) for x in res.weights_sq],
        "moments_sq": [scalar_to_json(x) for x in res.moments_sq],
        "classification": report_to_json(res.classification),
        "measure": charge_to_json(res.measure) if res.measure is not None else None,
        "product_measure": charge_to_json(res.product_measure) if res.product_measure is not None else None,
        "hamburger_certified": res.hamburger_certified,
        "subnormal_certified": res.subnormal_certified,
    }


def aluthge_from_json(d, where: str = "aluthge"):
    from .aluthge import AluthgeResult

    return AluthgeResult(
        weights_sq=_scalar_list(d["weights_sq"], f"{where}.weights_sq"),
        moments_sq=_scalar_list(d["moments_sq"], f"{where}.moments_sq"),
        classification=report_from_json(d["classification"], f"{where}.classification"),
        measure=charge_from_json(d["measure"], f"{where}.measure") if d.get("measure") else None,
        product_measure=charge_from_json(d["product_measure"], f"{where}.product_measure")
        if d.get("product_measure")
        else None,
        hamburger_certified=bool(d.get("hamburger_certified", False)),
        subnormal_certified=bool(d.get("subnormal_certified", False)),
    )


def propagation_to_json(r) -> dict:
    return {
        "k": r.k,
        "n0": r.n0,
        "horizon": r.horizon,
        "property_order": r.property_order,
        "m0": r.m0,
        "m0_inner": r.m0_inner,
        "m0_inner_raw": r.m0_inner_raw,
        "recursion_at_m0": spec_to_json(r.recursion_at_m0),
        "recovered_measure": charge_to_json(r.recovered_measure),
        "outer_equalities_verified_to": r.outer_equalities_verified_to,
        "inner_equalities_verified_from": r.inner_equalities_verified_from,
        "parity_conclusion": r.parity_conclusion,
        "exact": r.exact,
        "steps": [
            {
                "phase": s.phase,
                "offset": s.offset,
                "recursion": spec_to_json(s.recursion),
                "shifted_measure": charge_to_json(s.shifted_measure),
                "lambda": scalar_to_json(s.lam),
                "equalities_from": s.equalities_from,
            }
            for s in r.steps
        ],
    }


def propagation_from_json(d, where: str = "propagation"):
    from .flatness import PropagationReport, PropagationStep

    steps = [
        PropagationStep(
            s["phase"],
            int(s["offset"]),
            spec_from_json(s["recursion"], f"{where}.steps[{i}].recursion"),
            charge_from_json(s["shifted_measure"], f"{where}.steps[{i}].shifted_measure"),
            scalar_from_json(s["lambda"], f"{where}.steps[{i}].lambda"),
            int(s["equalities_from"]),
        )
        for i, s in enumerate(d.get("steps", []))
    ]
    return PropagationReport(
        k=int(d["k"]),
        n0=int(d["n0"]),
        horizon=int(d["horizon"]),
        property_order=int(d["property_order"]),
        m0=int(d["m0"]),
        m0_inner=int(d["m0_inner"]),
        m0_inner_raw=int(d["m0_inner_raw"]),
        recursion_at_m0=spec_from_json(d["recursion_at_m0"], f"{where}.recursion_at_m0"),
        recovered_measure=charge_from_json(d["recovered_measure"], f"{where}.recovered_measure"),
        outer_equalities_verified_to=int(d["outer_equalities_verified_to"]),
        inner_equalities_verified_from=int(d["inner_equalities_verified_from"]),
        parity_conclusion=d["parity_conclusion"],
        steps=steps,
        exact=bool(d.get("exact", True)),
    )


# --------------------------------------------------------------------------
# files


def load(path: str):
    """Parse a JSON file, turning syntax errors into line/column diagnostics."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)
