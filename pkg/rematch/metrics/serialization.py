"""Text format for metrics.

Grammar (one directive per line, `#` starts a comment, blank lines ignored):

    metric line
    point <id> <integer-coordinate>      # ids exactly 0..n-1, any order

    metric general
    n <n>                                # a bare `<n>` line is accepted too
    <d00> <d01> ... <d0,n-1>             # n rows of n numbers

    metric star
    leaves <n>
"""

from collections.abc import Sequence
from pathlib import Path

from rematch.errors import InstanceFormatError
from rematch.metrics.base import MetricSpace
from rematch.metrics.general import GeneralMetric, StarMetric
from rematch.metrics.line import LineMetric

Line = tuple[int, str]  # (1-based line number, stripped content)


def meaningful_lines(text: str) -> list[Line]:
    """Drop comments and blank lines, keeping original line numbers."""
    out: list[Line] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            out.append((number, content))
    return out


def _int(token: str, source: str, number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise InstanceFormatError(f"expected an integer, got {token!r}", source, number) from None


def parse_metric(lines: Sequence[Line], source: str = "<input>") -> tuple[MetricSpace, int]:
    """Parse a metric section from the start of `lines`.

    Returns the metric and the index of the first line after the section.
    """
    if not lines:
        raise InstanceFormatError("missing `metric` header", source)

    number, header = lines[0]
    tokens = header.split()
    if len(tokens) != 2 or tokens[0] != "metric":
        raise InstanceFormatError(f"expected `metric <kind>`, got {header!r}", source, number)

    kind = tokens[1]
    if kind == "line":
        return _parse_line(lines, source)
    if kind == "general":
        return _parse_general(lines, source)
    if kind == "star":
        return _parse_star(lines, source)
    raise InstanceFormatError(f"unknown metric kind {kind!r}", source, number)


def _parse_line(lines: Sequence[Line], source: str) -> tuple[MetricSpace, int]:
    coords: dict[int, int] = {}
    index = 1
    while index < len(lines) and lines[index][1].split()[0] == "point":
        number, content = lines[index]
        tokens = content.split()
        if len(tokens) != 3:
            raise InstanceFormatError(f"expected `point <id> <coord>`, got {content!r}",
                                      source, number)
        point = _int(tokens[1], source, number)
        if point in coords:
            raise InstanceFormatError(f"point {point} defined twice", source, number)
        coords[point] = _int(tokens[2], source, number)
        index += 1

    if sorted(coords) != list(range(len(coords))):
        raise InstanceFormatError(f"line point ids must be 0..{len(coords) - 1}", source)
    return LineMetric([coords[p] for p in range(len(coords))]), index


def _parse_general(lines: Sequence[Line], source: str) -> tuple[MetricSpace, int]:
    if len(lines) < 2:
        raise InstanceFormatError("general metric without size line", source)
    number, content = lines[1]
    tokens = content.split()
    if len(tokens) == 2 and tokens[0] == "n":
        n = _int(tokens[1], source, number)
    elif len(tokens) == 1:
        n = _int(tokens[0], source, number)
    else:
        raise InstanceFormatError(f"expected `n <n>`, got {content!r}", source, number)

    rows: list[list[float]] = []
    for number, content in lines[2 : 2 + n]:
        try:
            row = [float(x) for x in content.split()]
        except ValueError:
            raise InstanceFormatError(f"bad distance row {content!r}", source, number) from None
        if len(row) != n:
            raise InstanceFormatError(f"row has {len(row)} entries, expected {n}",
                                      source, number)
        rows.append(row)
    if len(rows) != n:
        raise InstanceFormatError(f"expected {n} distance rows, got {len(rows)}", source)
    return GeneralMetric(rows), 2 + n


def _parse_star(lines: Sequence[Line], source: str) -> tuple[MetricSpace, int]:
    if len(lines) < 2 or len(lines[1][1].split()) != 2 or lines[1][1].split()[0] != "leaves":
        raise InstanceFormatError("star metric needs `leaves <n>`", source, lines[0][0])
    number, content = lines[1]
    return StarMetric(_int(content.split()[1], source, number)), 2


def format_metric(m: MetricSpace) -> list[str]:
    if isinstance(m, StarMetric):
        return ["metric star", f"leaves {m.n_leaves}"]
    if isinstance(m, LineMetric):
        return ["metric line"] + [f"point {p} {x}" for p, x in enumerate(m.coordinates)]
    if isinstance(m, GeneralMetric):
        table = m.distance_matrix()
        rows = [" ".join(repr(float(x)) for x in row) for row in table]
        return ["metric general", f"n {m.n_points}", *rows]
    raise TypeError(f"no text format for {type(m).__name__}")


def read_metric(path: str | Path) -> MetricSpace:
    text = Path(path).read_text(encoding="utf-8")
    metric, consumed = parse_metric(meaningful_lines(text), str(path))
    rest = meaningful_lines(text)[consumed:]
    if rest:
        number, content = rest[0]
        raise InstanceFormatError(f"unexpected line {content!r}", str(path), number)
    return metric


def write_metric(m: MetricSpace, path: str | Path) -> None:
    Path(path).write_text("\n".join(format_metric(m)) + "\n", encoding="utf-8")
