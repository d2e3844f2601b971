"""Datasets: the embedded scoring-time pairs and CSV ingestion."""

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, TextIO, Union

from .errors import IngestionError
from .fitting import BivariateSample

# Game time (minutes) to the first field goal and to the first touchdown in
# 42 American Football League matches played on three weekends of 1986.
FOOTBALL_PAIRS: tuple[tuple[float, float], ...] = (
    (2.05, 3.98), (9.05, 9.05), (0.85, 0.85), (3.43, 3.43), (7.78, 7.78),
    (10.57, 14.28), (7.05, 7.05), (2.58, 2.58), (7.23, 9.68), (6.85, 34.58),
    (32.45, 42.35), (8.53, 14.57), (31.13, 49.88), (14.58, 20.57),
    (5.78, 25.98), (13.80, 49.75), (7.25, 7.25), (4.25, 4.25), (1.65, 1.65),
    (6.42, 15.08), (4.22, 9.48), (15.53, 15.53), (2.90, 2.90), (7.02, 7.02),
    (6.42, 6.42), (8.98, 8.98), (10.15, 10.15), (8.87, 8.87),
    (10.40, 10.25), (2.98, 2.98), (3.88, 6.43), (0.75, 0.75), (11.63, 17.37),
    (1.38, 1.38), (10.53, 10.53), (12.13, 12.13), (14.58, 14.58),
    (11.82, 11.82), (5.52, 11.27), (19.65, 10.7), (17.83, 17.83),
    (10.85, 38.07),
)

# the published fits use minutes / 100
FOOTBALL_SCALE = 0.01

EMBEDDED = "embedded"

_SEPARATOR = re.compile(r"[,;\s]+")


@dataclass(frozen=True)
class DatasetSpec:
    """Where the pairs come from and the factor applied to every value."""

    source: Union[str, Path] = EMBEDDED
    scale: float = 1.0

    def __post_init__(self) -> None:
        if not self.scale > 0:
            raise IngestionError(f"scale must be positive, got {self.scale}")

    @property
    def is_embedded(self) -> bool:
        return str(self.source) == EMBEDDED


def _parse_line(text: str, line: int) -> Optional[tuple[float, float]]:
    fields = [f for f in _SEPARATOR.split(text.strip()) if f]
    if len(fields) != 2:
        raise IngestionError(f"expected 2 columns, found {len(fields)}", line)
    try:
        y1, y2 = float(fields[0]), float(fields[1])
    except ValueError:
        return None
    if not (y1 > 0 and y2 > 0) or y1 == float("inf") or y2 == float("inf"):
        raise IngestionError(f"values must be positive and finite: {text.strip()!r}", line)
    return y1, y2


def parse_pairs(lines: Iterable[str]) -> list[tuple[float, float]]:
    """
    Parse `y1,y2` rows; comma, semicolon or whitespace separated.

    `#` starts a comment. A non-numeric first row is taken as a header.

    Raises:
        IngestionError: On a malformed row (with its line number) or no rows
    """
    pairs: list[tuple[float, float]] = []
    seen_row = False
    for number, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0]
        if not text.strip():
            continue
        pair = _parse_line(text, number)
        if pair is None:
            if seen_row:
                raise IngestionError(f"non-numeric value in {text.strip()!r}", number)
            seen_row = True
            continue
        seen_row = True
        pairs.append(pair)
    if not pairs:
        raise IngestionError("no observations found")
    return pairs


def read_pairs(path: Union[str, Path]) -> list[tuple[float, float]]:
    """Read pairs from a CSV file, see parse_pairs."""
    try:
        with open(path, encoding="utf-8") as f:
            return parse_pairs(f)
    except OSError as e:
        raise IngestionError(f"cannot open {path}: {e.strerror}") from None


def write_pairs(pairs: Iterable[tuple[float, float]], stream: TextIO) -> None:
    """Write a `y1,y2` header and one row per pair; floats round-trip exactly."""
    stream.write("y1,y2\n")
    for y1, y2 in pairs:
        stream.write(f"{float(y1)!r},{float(y2)!r}\n")


def load_dataset(spec: DatasetSpec, tie_tol: float = 0.0) -> BivariateSample:
    """Ingest, scale and partition a dataset."""
    if spec.is_embedded:
        pairs = list(FOOTBALL_PAIRS)
    else:
        pairs = read_pairs(spec.source)
    if spec.scale != 1.0:
        pairs = [(y1 * spec.scale, y2 * spec.scale) for y1, y2 in pairs]
    return BivariateSample.from_pairs(pairs, tie_tol=tie_tol)
