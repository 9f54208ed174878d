"""CSV and JSON formats for designs, responses, paths and diagnostics.

Matrices are headerless CSV, one observation per line; responses hold one
value per line. Every float is written with 17 significant digits so a
read/write cycle is the identity.
"""
import json
import math

import numpy as np

from .errors import ParseError
from .homotopy import Event, LassoPath, PathSegment
from .kkt import ActiveModel
from .linalg import as_design


def fmt(v):
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def _parse_rows(path):
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    rows = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        row, col = [], 1
        for tok in line.split(","):
            stripped = tok.strip()
            try:
                val = float(stripped)
            except ValueError:
                raise ParseError(path, lineno, col, f"not a number: {stripped!r}") from None
            if not math.isfinite(val):
                raise ParseError(path, lineno, col, f"non-finite value {stripped!r}")
            row.append(val)
            col += len(tok) + 1
        rows.append((lineno, row))
    if not rows:
        raise ParseError(path, 1, 1, "file contains no data")
    return rows


def read_matrix(path):
    rows = _parse_rows(path)
    width = len(rows[0][1])
    for lineno, row in rows:
        if len(row) != width:
            raise ParseError(path, lineno, 1, f"expected {width} columns, found {len(row)}")
    return np.array([r for _, r in rows])


def read_vector(path):
    rows = _parse_rows(path)
    for lineno, row in rows:
        if len(row) != 1:
            raise ParseError(path, lineno, 1, f"expected one value per line, found {len(row)}")
    return np.array([r[0] for _, r in rows])


def write_matrix(path, X):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in np.atleast_2d(X):
            fh.write(",".join(fmt(v) for v in row) + "\n")


def write_vector(path, v):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for x in v:
            fh.write(fmt(x) + "\n")


def dump_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=False)
        fh.write("\n")


def path_to_dict(path):
    return {
        "tau": path.tau,
        "lambda_min": path.lambda_min,
        "reentries": path.reentries,
        "ties": path.ties,
        "segments": [
            {
                "lambda_hi": s.lambda_hi,
                "lambda_lo": s.lambda_lo,
                "support": list(s.model.support),
                "signs": list(s.model.signs),
                "intercept": [float(v) for v in s.intercept],
                "slope": [float(v) for v in s.slope],
                "event": str(s.event_at_lo),
            }
            for s in path.segments
        ],
    }


def path_from_dict(d, X, y):
    segs = tuple(
        PathSegment(
            float(s["lambda_hi"]),
            float(s["lambda_lo"]),
            ActiveModel(tuple(s["support"]), tuple(s["signs"])),
            np.array(s["intercept"], dtype=float),
            np.array(s["slope"], dtype=float),
            Event.parse(s["event"]),
        )
        for s in d["segments"]
    )
    first = segs[0].model.support[0]
    return LassoPath(as_design(X), np.asarray(y, dtype=float), float(d["tau"]),
                     float(d["lambda_min"]), segs, first,
                     d.get("reentries", 0), d.get("ties", 0))


BREAKPOINT_HEADER = "k,lambda,event,support_size,l1_norm,residual_sq"


def breakpoint_rows(path):
    """One row per breakpoint, from tau downwards.

    support_size is the size of the model valid just below the breakpoint;
    l1_norm and residual_sq are evaluated at the breakpoint itself.
    """
    rows = []
    events = [Event("ACTIVATION", path.first_index)]
    events += [s.event_at_lo for s in path.segments]
    lams = [path.tau] + [s.lambda_lo for s in path.segments]
    for k, (lam, ev) in enumerate(zip(lams, events)):
        if ev.kind == "PATH_END":
            break
        b = path.coefficients(lam)
        r = path.y - path.X.values @ b
        rows.append((k, lam, str(ev), len(path.segments[k].model), float(np.abs(b).sum()),
                     float(r @ r)))
    return rows


def write_breakpoints(fname, path):
    with open(fname, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(BREAKPOINT_HEADER + "\n")
        for k, lam, ev, size, l1, rsq in breakpoint_rows(path):
            fh.write(f"{k},{fmt(lam)},{ev},{size},{fmt(l1)},{fmt(rsq)}\n")


CURVE_HEADER = "lambda,l1_norm,residual_sq,gamma,theta,phi,support_size"


def write_curve(fname, rows):
    with open(fname, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CURVE_HEADER + "\n")
        for r in sorted(rows, key=lambda r: r.lam):
            fh.write(",".join([fmt(r.lam), fmt(r.l1_norm), fmt(r.residual_sq), fmt(r.gamma),
                               fmt(r.theta), fmt(r.phi), str(r.support_size)]) + "\n")
