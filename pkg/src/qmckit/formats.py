"""Plain-text formats: point sets, generating matrices and CSV report rows.

Point-set file::

    # qmc-points s=2 n=3 base=2 exact=true
    0 0
    1/2 1/4
    1/4 3/4

Float fields are written with 17 significant digits, which round-trips
IEEE doubles exactly.  Exact fields are integers or ``num/den``.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, TextIO

import numpy as np

from .digital import GeneratingMatrices
from .errors import ParameterError, ParseError
from .pointsets import PointSet

__all__ = [
    "METRICS",
    "ReportRow",
    "format_value",
    "write_pointset",
    "read_pointset",
    "dumps_pointset",
    "loads_pointset",
    "write_matrices",
    "read_matrices",
    "write_report",
    "read_report",
]

_HEADER = re.compile(r"^#\s*qmc-points((?:\s+\w+=\S+)*)\s*$")

METRICS = frozenset(
    {
        "n_points",
        "dimension",
        "star_discrepancy",
        "l2_discrepancy",
        "l2_star_discrepancy",
        "lp_discrepancy_mc",
        "l2_parseval",
        "etk_bound",
        "wce",
        "wce2_korobov_closed",
        "wce2_korobov_dual",
        "avg_case_error",
        "cbc_g",
        "cbc_wce",
        "dual_vector",
        "dual_net_vector",
        "enhanced_trig_degree",
        "random_star_discrepancy",
        "hoeffding_bound",
    }
)


def format_value(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, (tuple, list)):
        return " ".join(format_value(x) for x in v)
    return str(v)


# ---------------------------------------------------------------------------
# point sets


def dumps_pointset(P: PointSet, exact: bool | None = None) -> str:
    use_exact = P.exact is not None if exact is None else exact
    if use_exact and P.exact is None:
        raise ParameterError("point set has no exact representation")
    head = f"# qmc-points s={P.s} n={P.N}"
    if P.base is not None:
        head += f" base={P.base}"
    head += f" exact={'true' if use_exact else 'false'}"
    lines = [head]
    if use_exact:
        for row in P.exact:
            lines.append(" ".join(format_value(v) for v in row))
    else:
        for row in P.coords.tolist():
            lines.append(" ".join(format(v, ".17g") for v in row))
    return "\n".join(lines) + "\n"


def write_pointset(P: PointSet, out: TextIO | str, exact: bool | None = None) -> None:
    text = dumps_pointset(P, exact)
    if isinstance(out, str):
        with open(out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)


def _parse_field(tok: str, exact: bool, lineno: int):
    try:
        if exact:
            v = Fraction(tok)
            if "." in tok or "e" in tok.lower():
                raise ValueError
        else:
            v = float(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad {'rational' if exact else 'number'} {tok!r}", lineno) from None
    if not 0 <= v < 1:
        raise ParseError(f"value {tok} outside [0,1)", lineno)
    return v


def loads_pointset(text: str) -> PointSet:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    m = _HEADER.match(lines[0].strip())
    if not m:
        raise ParseError("expected header '# qmc-points s=<s> n=<N> ...'", 1)
    attrs = dict(kv.split("=", 1) for kv in m.group(1).split())
    try:
        s = int(attrs["s"])
        n = int(attrs["n"])
        base = int(attrs["base"]) if "base" in attrs else None
    except (KeyError, ValueError):
        raise ParseError("header needs integer s= and n=", 1) from None
    exact_flag = attrs.get("exact", "false").lower()
    if exact_flag not in ("true", "false"):
        raise ParseError("exact= must be true or false", 1)
    exact = exact_flag == "true"
    if s < 1 or n < 1:
        raise ParseError("s and n must be positive", 1)
    rows = []
    for i, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        toks = raw.split()
        if len(toks) != s:
            raise ParseError(f"expected {s} fields, found {len(toks)}", i)
        if len(rows) == n:
            raise ParseError(f"more than n={n} rows", i)
        rows.append([_parse_field(t, exact, i) for t in toks])
    if len(rows) < n:
        raise ParseError(f"expected {n} rows, found {len(rows)}", len(lines) + 1)
    if exact:
        return PointSet.from_exact([tuple(r) for r in rows], s, base=base)
    return PointSet(np.array(rows, dtype=float).reshape(n, s), base=base)


def read_pointset(src: TextIO | str) -> PointSet:
    """Parse a point-set file (path or open text stream)."""
    if isinstance(src, str):
        with open(src, encoding="ascii") as fh:
            return loads_pointset(fh.read())
    return loads_pointset(src.read())


# ---------------------------------------------------------------------------
# generating matrices


def write_matrices(gen: GeneratingMatrices, out: TextIO) -> None:
    """Header ``b m s`` followed by s blocks of m rows of m digits."""
    if gen.rows != gen.m:
        raise ParameterError("only square matrices have a file format")
    out.write(f"{gen.b} {gen.m} {gen.s}\n")
    for C in gen.matrices:
        for row in C.tolist():
            out.write(" ".join(str(v) for v in row) + "\n")


def read_matrices(src: TextIO | str) -> GeneratingMatrices:
    if isinstance(src, str):
        with open(src, encoding="ascii") as fh:
            text = fh.read()
    else:
        text = src.read()
    lines = [(i, ln.split()) for i, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    if not lines:
        raise ParseError("empty matrix file", 1)
    i0, head = lines[0]
    try:
        b, m, s = (int(t) for t in head)
    except ValueError:
        raise ParseError("header must be 'b m s'", i0) from None
    body = lines[1:]
    if len(body) != m * s:
        last = body[-1][0] + 1 if body else i0 + 1
        raise ParseError(f"expected {m * s} matrix rows, found {len(body)}", last)
    mats = []
    for j in range(s):
        rows = []
        for i, toks in body[j * m : (j + 1) * m]:
            if len(toks) != m:
                raise ParseError(f"expected {m} digits, found {len(toks)}", i)
            try:
                digits = [int(t) for t in toks]
            except ValueError:
                raise ParseError("digits must be integers", i) from None
            if any(not 0 <= d < b for d in digits):
                raise ParseError(f"digits must lie in 0..{b - 1}", i)
            rows.append(digits)
        mats.append(np.array(rows, dtype=np.int64))
    return GeneratingMatrices(b, tuple(mats))


# ---------------------------------------------------------------------------
# reports


@dataclass
class ReportRow:
    metric: str
    params: dict = field(default_factory=dict)
    value: object = ""
    aux: object = ""

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ParameterError(f"unregistered metric {self.metric!r}")

    def cells(self) -> list[str]:
        params = ";".join(f"{k}={format_value(v)}" for k, v in self.params.items())
        return [self.metric, params, format_value(self.value), format_value(self.aux)]


def write_report(rows: Iterable[ReportRow], out: TextIO, header: bool = True) -> None:
    w = csv.writer(out, lineterminator="\n")
    if header:
        w.writerow(["metric", "params", "value", "aux"])
    for r in rows:
        w.writerow(r.cells())


def read_report(src: TextIO | str) -> list[dict]:
    """Rows as dicts with the params field split into a dict of strings."""
    stream = io.StringIO(src) if isinstance(src, str) else src
    out = []
    for rec in csv.DictReader(stream):
        params = dict(kv.split("=", 1) for kv in rec["params"].split(";") if kv)
        out.append({"metric": rec["metric"], "params": params, "value": rec["value"], "aux": rec["aux"]})
    return out
