"""Command-line front end: ``neron tate|series|verify|torus|psi``.

Every command builds a plain dict report.  The text and JSON renderings
are produced from the same dict, so both carry identical numbers.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import (
    InputError,
    NeronError,
    ParseError,
    UnsupportedField,
    WildCurve,
)
from .fields import field_from_name
from .galois_lattice import CyclicLatticeAction, h1, invariants_rank, phi_torus
from .local_field import parse_laurent
from .ratfun import RatFun, expand, pole_at_one, psi
from .series import (
    POT_MULT,
    TAME,
    ReductionData,
    SeriesReport,
    WildEllipticData,
    assemble,
    assemble_wild_elliptic,
    in_nprime,
)
from .tate import (
    WeierstrassModel,
    kodaira_after,
    reduction_tower,
    tate_algorithm,
    wild_elliptic_data,
)

DEFAULT_TERMS = 60
DEFAULT_DMAX = 24
PSI_TERMS = 20
JSON_INT_LIMIT = 2 ** 53
WILD = "wild_elliptic"

EXIT_OK, EXIT_INPUT, EXIT_PRECISION, EXIT_UNSUPPORTED, EXIT_MISMATCH = 0, 1, 2, 3, 4


# -- file formats ---------------------------------------------------------------

_LINE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*[=:]\s*")


def _key_values(text: str) -> List[Tuple[int, str, str, int]]:
    """(line number, key, value, column offset of value) for each non-blank line."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = _LINE.match(line)
        if not m:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError("expected 'key = value'", lineno, col)
        out.append((lineno, m.group(1).lower(), line[m.end():], m.end()))
    return out


def is_curve_text(text: str) -> bool:
    try:
        return any(key == "field" for _, key, _, _ in _key_values(text))
    except ParseError:
        return False


def parse_curve_file(text: str) -> WeierstrassModel:
    """Curve file: ``field = Q | F<q>`` and ``a1`` .. ``a6`` Laurent polynomials."""
    entries = _key_values(text)
    fields = [(n, v, c) for n, k, v, c in entries if k == "field"]
    if len(fields) != 1:
        raise ParseError("curve file needs exactly one 'field' line", fields[1][0] if fields else None)
    lineno, name, col = fields[0]
    try:
        k = field_from_name(name)
    except ValueError as exc:
        raise UnsupportedField(f"{exc} (line {lineno})") from None
    coeffs = {}
    for n, key, value, c in entries:
        if key == "field":
            continue
        if key not in ("a1", "a2", "a3", "a4", "a6"):
            raise ParseError(f"unknown key {key!r}", n, 1)
        if key in coeffs:
            raise ParseError(f"duplicate key {key!r}", n, 1)
        coeffs[key] = parse_laurent(value, k, line=n, col_offset=c)
    return WeierstrassModel.from_coefficients(k, **coeffs)


def _int(value: str, lineno: int, col: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"expected an integer, got {value!r}", lineno, col + 1) from None


def parse_data_file(text: str) -> Union[ReductionData, WildEllipticData]:
    """Abstract reduction data.

    Keys: ``p``, ``e`` (or ``e_prime`` for wild elliptic data), ``regime``
    (tame, potentially_purely_multiplicative, wild_elliptic), optional
    ``potential_good`` (yes/no), and one ``tower = a phi [t]`` line per
    divisor.
    """
    p = e = e_prime = None
    regime = None
    potential_good = None
    tower: Dict[int, Tuple[int, ...]] = {}
    for n, key, value, c in _key_values(text):
        if key == "p":
            p = _int(value, n, c)
        elif key == "e":
            e = _int(value, n, c)
        elif key == "e_prime":
            e_prime = _int(value, n, c)
        elif key == "regime":
            regime = value.strip()
            if regime not in (TAME, POT_MULT, WILD):
                raise ParseError(f"unknown regime {regime!r}", n, c + 1)
        elif key == "potential_good":
            flag = value.strip().lower()
            if flag not in ("yes", "no", "true", "false"):
                raise ParseError("potential_good must be yes or no", n, c + 1)
            potential_good = flag in ("yes", "true")
        elif key == "tower":
            parts = value.split()
            if len(parts) not in (2, 3):
                raise ParseError("tower entry must be 'a phi t' or 'a phi'", n, c + 1)
            nums = tuple(_int(x, n, c) for x in parts)
            if nums[0] in tower:
                raise ParseError(f"duplicate tower entry for a={nums[0]}", n, c + 1)
            tower[nums[0]] = nums[1:]
        else:
            raise ParseError(f"unknown key {key!r}", n, 1)
    if p is None:
        raise InputError("data file needs 'p'")
    if regime is None:
        regime = WILD if e_prime is not None and e is None else TAME
    if regime == WILD:
        if e_prime is None:
            raise InputError("wild elliptic data needs 'e_prime'")
        if any(len(v) != 1 for v in tower.values()):
            raise InputError("wild elliptic tower entries are 'a phi'")
        data = WildEllipticData(p, e_prime, {a: v[0] for a, v in tower.items()})
    else:
        if e is None:
            raise InputError("data file needs 'e'")
        if any(len(v) != 2 for v in tower.values()):
            raise InputError("tower entries are 'a phi t'")
        data = ReductionData(p, e, {a: (v[0], v[1]) for a, v in tower.items()}, regime, potential_good)
    data.validate()
    return data


def parse_lattice_file(text: str) -> CyclicLatticeAction:
    """``rank n``, ``order e``, then n rows of n integers."""
    rows: List[List[int]] = []
    n = e = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] in ("rank", "order"):
            if len(words) != 2:
                raise ParseError(f"expected '{words[0]} <integer>'", lineno, 1)
            value = _int(words[1], lineno, raw.index(words[1]))
            if words[0] == "rank":
                n = value
            else:
                e = value
            continue
        try:
            rows.append([int(w) for w in words])
        except ValueError:
            raise ParseError("matrix rows must be integers", lineno, 1) from None
    if n is None or e is None:
        raise InputError("lattice file needs 'rank' and 'order'")
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InputError(f"expected {n} rows of {n} integers")
    return CyclicLatticeAction(rows, e)


# -- serialization ---------------------------------------------------------------

def jsonable(obj):
    """Exact values only: big ints and rationals become strings, never floats."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) <= JSON_INT_LIMIT else str(obj)
    if isinstance(obj, Fraction):
        return jsonable(obj.numerator) if obj.denominator == 1 else str(obj)
    if isinstance(obj, float):
        if math.isinf(obj):
            return "-inf" if obj < 0 else "inf"
        raise TypeError("floats are not allowed in reports")
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, RatFun):
        return jsonable(rational_dict(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2, ensure_ascii=False)


def _text_value(v) -> str:
    if isinstance(v, list):
        if v and isinstance(v[0], dict):
            return "\n" + "\n".join("  - " + ", ".join(f"{k}={_text_value(x)}" for k, x in sorted(d.items())) for d in v)
        return " ".join(_text_value(x) for x in v)
    if isinstance(v, dict):
        return ", ".join(f"{k}={_text_value(x)}" for k, x in sorted(v.items()))
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def to_text(report: dict) -> str:
    data = jsonable(report)
    return "\n".join(f"{k}: {_text_value(v)}" for k, v in sorted(data.items()))


def rational_dict(f: RatFun) -> dict:
    return {"num": list(f.num.coeffs), "den": list(f.den.coeffs), "text": str(f)}


def _degree(deg) -> Union[int, str]:
    return deg if isinstance(deg, int) else "-inf"


# -- commands ----------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _series_dict(rep: SeriesReport, terms: int) -> dict:
    return {
        "closed_form": rational_dict(rep.closed_form),
        "pole_order": rep.pole_order,
        "residue": rep.leading,
        "degree": _degree(rep.degree),
        "degree_sign": rep.degree_sign,
        "degree_sign_expected": rep.degree_sign_expected,
        "t_tame": rep.t_tame,
        "p": rep.p,
        "coefficients": rep.coefficients(terms - 1),  # T^0 .. T^(terms-1)
    }


def curve_report(model: WeierstrassModel) -> dict:
    """Kodaira data of the base plus the reduction tower."""
    res = tate_algorithm(model)
    k = res.data
    out = {
        "type": str(k.kodaira_type),
        "v_delta_min": k.v_delta_min,
        "v_delta_input": res.v_delta_input,
        "phi": k.phi,
        "phi_structure": k.phi_structure,
        "m": k.m,
        "t": k.t,
        "field": model.field.name,
        "minimal_model": str(res.minimal),
        "wild": False,
    }
    try:
        tower, _ = reduction_tower(model)
        out.update(tower.to_dict())
    except WildCurve:
        wild = wild_elliptic_data(model)
        out["wild"] = True
        out["e"] = None
        out["e_prime"] = wild.e_prime
        out["tower"] = [
            {"a": a, "type": str((k if a == 1 else kodaira_after(model, a)).kodaira_type), "phi": phi, "t": 0}
            for a, phi in sorted(wild.tower.items())
        ]
    return out


def cmd_tate(path: str) -> dict:
    return curve_report(parse_curve_file(_read(path)))


def _data_for_curve(model: WeierstrassModel, wild: bool):
    try:
        tower, data = reduction_tower(model)
        return tower.to_dict(), data
    except WildCurve as exc:
        if not wild:
            raise WildCurve(f"{exc}; rerun with --wild, or pass a data file with regime = wild_elliptic") from None
        data = wild_elliptic_data(model)
        return {"e": None, "e_prime": data.e_prime, "tower": [{"a": a, "phi": v} for a, v in sorted(data.tower.items())]}, data


def series_of(data) -> SeriesReport:
    if isinstance(data, WildEllipticData):
        return assemble_wild_elliptic(data)
    return assemble(data)


def cmd_series(path: str, terms: int = DEFAULT_TERMS, wild: bool = False) -> dict:
    text = _read(path)
    if is_curve_text(text):
        tower, data = _data_for_curve(parse_curve_file(text), wild)
        out = _series_dict(series_of(data), terms)
        out["input"] = "curve"
        out["tower"] = tower
    else:
        data = parse_data_file(text)
        out = _series_dict(series_of(data), terms)
        out["input"] = WILD if isinstance(data, WildEllipticData) else data.regime
    return out


@dataclass
class VerifyReport:
    dmax: int
    rows: List[Tuple[int, int, Optional[int]]]  # (d, closed form coefficient, Tate phi or None off N')
    pole_claimed: int
    pole_computed: int
    degree_sign_claimed: str
    degree_sign_computed: str
    extras: dict = field(default_factory=dict)

    @property
    def first_mismatch(self) -> Optional[int]:
        for d, closed, oracle in self.rows:
            if closed != (oracle or 0):
                return d
        return None

    @property
    def passed(self) -> bool:
        return (
            self.first_mismatch is None
            and self.pole_claimed == self.pole_computed
            and self.degree_sign_claimed == self.degree_sign_computed
        )

    @property
    def oracle_phi(self) -> List[int]:
        return [o for _, _, o in self.rows if o is not None]

    def to_dict(self) -> dict:
        out = {
            "dmax": self.dmax,
            "comparison": [{"d": d, "closed_form": c, "tate": o, "match": c == (o or 0)} for d, c, o in self.rows],
            "pole_order_claimed": self.pole_claimed,
            "pole_order_computed": self.pole_computed,
            "degree_sign_claimed": self.degree_sign_claimed,
            "degree_sign_computed": self.degree_sign_computed,
            "first_mismatch": self.first_mismatch,
            "passed": self.passed,
        }
        out.update(self.extras)
        return out


def verify_curve(model: WeierstrassModel, dmax: int = DEFAULT_DMAX, data=None, wild: bool = False) -> VerifyReport:
    """Closed form against Tate's algorithm run over every K(d), d in N', d <= dmax.

    ``data`` overrides the tower derived from the curve (to test the harness
    itself against deliberately wrong input).
    """
    if dmax < 1:
        raise InputError("dmax must be at least 1")
    if data is None:
        _, data = _data_for_curve(model, wild)
    rep = series_of(data)
    closed = [int(c) for c in expand(rep.closed_form, dmax)]
    p = model.field.char_exponent
    rows = []
    for d in range(1, dmax + 1):
        oracle = kodaira_after(model, d).phi if in_nprime(d, p) else None
        rows.append((d, closed[d], oracle))
    return VerifyReport(
        dmax,
        rows,
        pole_claimed=rep.t_tame + 1,
        pole_computed=rep.pole_order,
        degree_sign_claimed=rep.degree_sign_expected,
        degree_sign_computed=rep.degree_sign,
        extras={"closed_form": rational_dict(rep.closed_form), "residue": rep.leading},
    )


def cmd_verify(path: str, dmax: int = DEFAULT_DMAX, data_path: Optional[str] = None, wild: bool = False) -> VerifyReport:
    model = parse_curve_file(_read(path))
    data = parse_data_file(_read(data_path)) if data_path else None
    return verify_curve(model, dmax, data, wild)


def cmd_torus(path: str) -> dict:
    action = parse_lattice_file(_read(path))
    group = h1(action)
    return {
        "rank": action.rank,
        "order": action.order,
        "invariants_rank": invariants_rank(action),
        "h1": list(group.invariants),
        "h1_order": group.order,
        "phi": phi_torus(action),
    }


def cmd_psi(a: int, terms: int = PSI_TERMS) -> dict:
    if a < 0:
        raise InputError("a must be nonnegative")
    f = psi(a)
    pole = pole_at_one(f)
    return {
        "a": a,
        "closed_form": rational_dict(f),
        "pole_order": pole.order,
        "residue": pole.leading,
        "degree": _degree(pole.degree),
        "coefficients": [int(c) for c in expand(f, terms - 1)],
    }


# -- entry point ------------------------------------------------------------------------

def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="neron", description="Néron component series of elliptic curves over k((t)).")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="emit JSON")
        return sp

    sp = add("tate", "Kodaira type, component group and reduction tower of a curve")
    sp.add_argument("curve")
    sp = add("series", "closed form of the component series")
    sp.add_argument("input", help="curve file or reduction data file")
    sp.add_argument("--terms", type=_positive, default=DEFAULT_TERMS)
    sp.add_argument("--wild", action="store_true", help="derive wild elliptic data from a wild curve")
    sp = add("verify", "check the closed form against Tate's algorithm over K(d)")
    sp.add_argument("curve")
    sp.add_argument("--dmax", type=_positive, default=DEFAULT_DMAX)
    sp.add_argument("--data", help="use this reduction data file instead of the derived tower")
    sp.add_argument("--wild", action="store_true", help="derive wild elliptic data from a wild curve")
    sp = add("torus", "component group of a torus from its character lattice")
    sp.add_argument("lattice")
    sp = add("psi", "the series sum d^a T^d")
    sp.add_argument("a", type=int)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    status = EXIT_OK
    try:
        if args.command == "tate":
            report = cmd_tate(args.curve)
        elif args.command == "series":
            report = cmd_series(args.input, args.terms, args.wild)
        elif args.command == "verify":
            vr = cmd_verify(args.curve, args.dmax, args.data, args.wild)
            report = vr.to_dict()
            status = EXIT_OK if vr.passed else EXIT_MISMATCH
        elif args.command == "torus":
            report = cmd_torus(args.lattice)
        else:
            report = cmd_psi(args.a)
    except NeronError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    print(to_json(report) if args.json else to_text(report))
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
