"""State-file grammar and curve-data serialization.

A state file is line oriented. The first non-comment line starts with a
form token and the remaining numbers may follow on the same or later lines::

    tz 0.5 0.5            # (t, z) on the Bloch disk
    bloch 0.3 0.4 0.5     # (x, y, z)
    pure 0.6 0.8i         # amplitudes, complex as a+bi
    matrix                # one row per line
    0.75 0.25
    0.25 0.25

``#`` starts a comment, commas count as whitespace.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass

import numpy as np

from .errors import NotNormalizedError, ValidationError
from .hermitian import DensityMatrix, PureState
from .qubit import BlochVector, QubitParams, bloch_density, extremal_curves, rho_tz

FORMS = ("matrix", "tz", "bloch", "pure")
PURE_NORM_TOL = 1e-9
CURVE_HEADER = ("t", "c_max", "c_min", "alpha")

_COMPLEX_RE = re.compile(r"^[+-]?([0-9.]+([eE][+-]?[0-9]+)?)?([+-]([0-9.]+([eE][+-]?[0-9]+)?)?)?[ij]?$")


def parse_complex(token: str) -> complex:
    s = token.strip().replace("I", "i").replace("J", "j")
    if not s or not _COMPLEX_RE.match(s):
        raise ValidationError(f"cannot parse number {token!r}")
    s = s.replace("i", "j")
    if s in ("j", "+j"):
        return 1j
    if s == "-j":
        return -1j
    # "a+j" / "a-j" need an explicit unit coefficient
    s = re.sub(r"([+-])j$", r"\g<1>1j", s)
    try:
        return complex(s)
    except ValueError:
        raise ValidationError(f"cannot parse number {token!r}") from None


def _real(token: str) -> float:
    z = parse_complex(token)
    if z.imag != 0:
        raise ValidationError(f"expected a real number, got {token!r}")
    return z.real


@dataclass(frozen=True)
class ParsedState:
    form: str
    state: DensityMatrix
    params: dict


def _rows(text: str):
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].replace(",", " ").strip()
        if line:
            rows.append(line.split())
    return rows


def parse_state(text: str, renormalize: bool = False) -> ParsedState:
    """Parse a state description; raises ``ValidationError`` subclasses on bad input."""
    rows = _rows(text)
    if not rows:
        raise ValidationError("empty state description")
    form = rows[0][0].lower()
    if form not in FORMS:
        raise ValidationError(f"unknown state form {rows[0][0]!r} (expected one of {', '.join(FORMS)})")
    body = [rows[0][1:]] + rows[1:] if len(rows[0]) > 1 else rows[1:]
    flat = [tok for row in body for tok in row]

    if form == "tz":
        if len(flat) != 2:
            raise ValidationError(f"tz form needs 2 numbers, got {len(flat)}")
        p = QubitParams(_real(flat[0]), _real(flat[1]))
        return ParsedState(form, rho_tz(p), {"t": p.t, "z": p.z})
    if form == "bloch":
        if len(flat) != 3:
            raise ValidationError(f"bloch form needs 3 numbers, got {len(flat)}")
        b = BlochVector(*(_real(x) for x in flat))
        return ParsedState(form, bloch_density(b), {"x": b.x, "y": b.y, "z": b.z})
    if form == "pure":
        amps = np.array([parse_complex(x) for x in flat])
        if amps.size < 2:
            raise ValidationError("pure form needs at least 2 amplitudes")
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > PURE_NORM_TOL and not renormalize:
            raise NotNormalizedError(
                f"amplitudes have squared norm {norm2!r}; pass --renormalize to rescale",
                abs(norm2 - 1.0),
            )
        psi = PureState.normalized(amps)
        return ParsedState(form, psi.density(), {"amplitudes": [[z.real, z.imag] for z in psi.amplitudes]})

    matrix = [[parse_complex(x) for x in row] for row in body]
    n = len(matrix)
    if n == 0 or any(len(row) != n for row in matrix):
        raise ValidationError("matrix form needs a square block of entries")
    return ParsedState(form, DensityMatrix(np.array(matrix)), {"dim": n})


def format_number(x: float) -> str:
    """Shortest text that parses back to the same float."""
    x = float(x)
    if x == 0.0:
        return "0"
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


@dataclass(frozen=True)
class CurveRow:
    t: float
    c_max: float
    c_min: float
    alpha: str


def alpha_label(alpha: float) -> str:
    return f"{float(alpha):g}"


def curve_rows(alpha: float, steps: int) -> list[CurveRow]:
    """Envelope data at ``t = k / steps`` for ``k = 0..steps``."""
    if steps < 2:
        raise ValidationError(f"steps must be at least 2, got {steps}")
    t = np.arange(steps + 1) / steps
    cmax, cmin = extremal_curves(t, alpha)
    label = alpha_label(alpha)
    return [CurveRow(float(a), float(b), float(c), label) for a, b, c in zip(t, cmax, cmin)]


def curves_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CURVE_HEADER)
    for r in rows:
        w.writerow([format_number(r.t), format_number(r.c_max), format_number(r.c_min), r.alpha])
    return buf.getvalue()


def curves_from_csv(text: str) -> list[CurveRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != CURVE_HEADER:
        raise ValidationError(f"unexpected curve header {header!r}")
    return [CurveRow(float(t), float(a), float(b), label) for t, a, b, label in reader]


def curves_to_json(rows) -> str:
    data = [{"t": r.t, "c_max": r.c_max, "c_min": r.c_min, "alpha": r.alpha} for r in rows]
    return json.dumps(data, indent=1) + "\n"


def dumps_report(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators, finite floats only."""
    return json.dumps(obj, sort_keys=True, indent=1, allow_nan=False) + "\n"
