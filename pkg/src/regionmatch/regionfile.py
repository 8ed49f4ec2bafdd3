"""Plain-text region-set files.

Format, one region per line after the header:

    ddm-regions v1 d=<d> n=<subs> m=<upds>
    S <id> <lower_0> <upper_0> [<lower_1> <upper_1> ...]
    U <id> <lower_0> <upper_0> ...

Floats are written with repr, so a file regenerated from the same data is
byte-identical and round-trips exactly.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .geometry import SUBSCRIPTION, UPDATE, RegionSet

_MAGIC = "ddm-regions"
_VERSION = "v1"
_ROLE_CHARS = {SUBSCRIPTION: "S", UPDATE: "U"}


def format_regions(S: RegionSet, U: RegionSet) -> str:
    """Serialise both region sets into the text format."""
    if S.dimensions != U.dimensions:
        raise ValueError(f"dimension mismatch: {S.dimensions} vs {U.dimensions}")
    d = S.dimensions
    lines = [f"{_MAGIC} {_VERSION} d={d} n={len(S)} m={len(U)}"]
    for role_char, rs in (("S", S), ("U", U)):
        for rid in range(len(rs)):
            coords = []
            for dim in range(d):
                coords.append(repr(float(rs.lowers[rid, dim])))
                coords.append(repr(float(rs.uppers[rid, dim])))
            lines.append(f"{role_char} {rid} " + " ".join(coords))
    return "\n".join(lines) + "\n"


def write_regions(path: str | Path, S: RegionSet, U: RegionSet) -> None:
    Path(path).write_text(format_regions(S, U), encoding="utf-8")


def read_regions(path: str | Path) -> tuple[RegionSet, RegionSet]:
    """Load a region-set file, validating the header and id density."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty region file")
    header = lines[0].split()
    if len(header) != 5 or header[0] != _MAGIC or header[1] != _VERSION:
        raise ValueError(f"{path}: unrecognised header {lines[0]!r}")
    try:
        d = int(header[2].removeprefix("d="))
        n = int(header[3].removeprefix("n="))
        m = int(header[4].removeprefix("m="))
    except ValueError as err:
        raise ValueError(f"{path}: bad header fields {lines[0]!r}") from err
    if d < 1 or n < 0 or m < 0:
        raise ValueError(f"{path}: implausible header counts {lines[0]!r}")

    bounds = {
        "S": (np.empty((n, d)), np.empty((n, d)), np.zeros(n, dtype=bool)),
        "U": (np.empty((m, d)), np.empty((m, d)), np.zeros(m, dtype=bool)),
    }
    if len(lines) - 1 != n + m:
        raise ValueError(f"{path}: expected {n + m} region lines, found {len(lines) - 1}")
    for line_no, line in enumerate(lines[1:], start=2):
        fields = line.split()
        if len(fields) != 2 + 2 * d:
            raise ValueError(f"{path} line {line_no}: expected {2 + 2 * d} fields")
        role_char = fields[0]
        if role_char not in bounds:
            raise ValueError(f"{path} line {line_no}: unknown role {role_char!r}")
        lowers, uppers, seen = bounds[role_char]
        try:
            rid = int(fields[1])
            coords = [float(v) for v in fields[2:]]
        except ValueError as err:
            raise ValueError(f"{path} line {line_no}: malformed numbers") from err
        if not 0 <= rid < len(seen) or seen[rid]:
            raise ValueError(f"{path} line {line_no}: id {rid} out of range or repeated")
        seen[rid] = True
        lowers[rid] = coords[0::2]
        uppers[rid] = coords[1::2]
    for role_char, (_, _, seen) in bounds.items():
        if not seen.all():
            raise ValueError(f"{path}: missing {role_char} region ids")
    S = RegionSet(SUBSCRIPTION, bounds["S"][0], bounds["S"][1])
    U = RegionSet(UPDATE, bounds["U"][0], bounds["U"][1])
    return S, U
