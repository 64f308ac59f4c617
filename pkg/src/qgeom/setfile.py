"""Line-oriented point-set files.

::

    q=3^2 n=2 count=3
    0 0
    1 4
    8 2

The header gives the field as p^e, the dimension and the number of points.
Each following line holds n integers in [0, q) in the field's integer
encoding.  Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import re
from pathlib import Path

from .errors import ConfigError
from .gf import field_make
from .vecspace import PointSet

_HEADER = re.compile(r"^q=(\d+)\^(\d+)\s+n=(\d+)\s+count=(\d+)$")


class SetFileError(ConfigError):
    pass


def dumps(E: PointSet) -> str:
    f = E.field
    lines = [f"q={f.p}^{f.e} n={E.n} count={len(E)}"]
    lines += [" ".join(str(int(x)) for x in row) for row in E.array]
    return "\n".join(lines) + "\n"


def loads(text: str) -> PointSet:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise SetFileError("empty set file")
    m = _HEADER.match(lines[0])
    if not m:
        raise SetFileError(f"bad header {lines[0]!r}; expected 'q=<p>^<e> n=<n> count=<c>'")
    p, e, n, count = (int(g) for g in m.groups())
    try:
        field = field_make(p, e)
    except ValueError as exc:
        raise SetFileError(str(exc)) from exc
    body = lines[1:]
    if len(body) != count:
        raise SetFileError(f"header says {count} points, found {len(body)}")
    points = []
    for lineno, ln in enumerate(body, start=2):
        try:
            row = tuple(int(t) for t in ln.split())
        except ValueError as exc:
            raise SetFileError(f"line {lineno}: non-integer entry") from exc
        if len(row) != n:
            raise SetFileError(f"line {lineno}: expected {n} coordinates, got {len(row)}")
        if any(not 0 <= x < field.q for x in row):
            raise SetFileError(f"line {lineno}: entry outside [0, {field.q})")
        points.append(row)
    if len(set(points)) != len(points):
        raise SetFileError("duplicate points")
    return PointSet(field, n, points)


def write(E: PointSet, path) -> None:
    Path(path).write_text(dumps(E))


def read(path) -> PointSet:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SetFileError(f"cannot read {path}: {exc}") from exc
    return loads(text)
