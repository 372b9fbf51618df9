"""Shared domain types, exceptions and CSV ingestion."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

SQRT_1_5 = math.sqrt(1.5)
METHODS = ("Mean", "Winsor", "WinsorBoot")


class RobustMaxTestError(Exception):
    """Base class for all package errors."""


class InvalidTuning(RobustMaxTestError, ValueError):
    pass


class EpsilonTooLarge(RobustMaxTestError, ValueError):
    def __init__(self, name: str, value: float):
        self.name = name
        self.value = value
        super().__init__(
            f"{name} = {value:.6g} is not below 1/2; the winsorized statistic is undefined "
            "(increase n, decrease d or the contamination budget)"
        )


class InvalidInterval(RobustMaxTestError, ValueError):
    pass


class DomainError(RobustMaxTestError, ValueError):
    pass


class NotSymmetric(RobustMaxTestError, ValueError):
    pass


class EigenFailure(RobustMaxTestError, ArithmeticError):
    pass


class DegenerateCorrelation(RobustMaxTestError, ValueError):
    pass


class AllCoordinatesDegenerate(RobustMaxTestError, ValueError):
    pass


class InvalidParameter(RobustMaxTestError, ValueError):
    pass


class BudgetExceeded(RobustMaxTestError, ValueError):
    pass


class DataError(RobustMaxTestError, ValueError):
    """Raised when a dataset file cannot be turned into a valid sample."""


class EmptyFile(DataError):
    pass


class RaggedRows(DataError):
    def __init__(self, line: int, expected: int, got: int):
        self.line = line
        super().__init__(f"line {line}: expected {expected} columns, got {got}")


class NonNumericCell(DataError):
    def __init__(self, line: int, col: int, text: str):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: cannot parse {text!r} as a finite real")


@dataclass(frozen=True)
class Sample:
    """An n x d matrix of observations, one row per observation.

    The array is copied and made read-only on construction.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=float, copy=True)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise ValueError(f"sample data must be 2-dimensional, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]


class Finding(NamedTuple):
    kind: str
    row: int | None = None
    col: int | None = None

    def __str__(self):
        if self.row is None:
            return self.kind
        return f"{self.kind}({self.row},{self.col})"


@dataclass(frozen=True)
class MomentClass:
    b1: float
    b2: float
    m: float

    def __post_init__(self):
        if not (0 < self.b1 < self.b2):
            raise InvalidParameter(f"need 0 < b1 < b2, got b1={self.b1}, b2={self.b2}")
        if not self.m > 2:
            raise InvalidParameter(f"moment order m must exceed 2, got {self.m}")


@dataclass(frozen=True)
class TuningConfig:
    """Level, winsorization tuning, contamination budget and bootstrap settings.

    ``c_cov`` defaults to ``c`` when left as ``None``.
    """

    alpha: float = 0.05
    c: float = 1.1
    c_cov: float | None = None
    eta_bar: float = 0.0
    boot_draws: int = 2000
    seed: int = 0

    def __post_init__(self):
        if self.c_cov is None:
            object.__setattr__(self, "c_cov", self.c)
        if not 0 < self.alpha < 1:
            raise InvalidTuning(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 1 < self.c < SQRT_1_5:
            raise InvalidTuning(f"c must lie in (1, sqrt(1.5)), got {self.c}")
        if not self.c_cov > 1:
            raise InvalidTuning(f"c_cov must exceed 1, got {self.c_cov}")
        if not 0 <= self.eta_bar < 0.5:
            raise InvalidTuning(f"eta_bar must lie in [0, 1/2), got {self.eta_bar}")
        if int(self.boot_draws) < 1:
            raise InvalidTuning(f"boot_draws must be positive, got {self.boot_draws}")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidTuning(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass
class TestReport:
    method: str
    coord_stats: np.ndarray
    sup_norm: float
    critical_value: float
    reject: bool
    epsilon_used: float = float("nan")
    epsilon_prime_used: float = float("nan")
    degenerate_coords: list[int] = field(default_factory=list)
    n: int = 0
    d: int = 0

    __test__ = False  # not a pytest class

    def to_dict(self, verbose: bool = False) -> dict:
        def _num(x):
            return None if not math.isfinite(x) else float(x)

        out = {
            "critical_value": float(self.critical_value),
            "d": int(self.d),
            "degenerate_coords": [int(j) for j in self.degenerate_coords],
            "epsilon": _num(self.epsilon_used),
            "epsilon_prime": _num(self.epsilon_prime_used),
            "method": self.method,
            "n": int(self.n),
            "reject": bool(self.reject),
            "sup_norm": float(self.sup_norm),
        }
        if verbose:
            out["coord_stats"] = [_num(x) for x in self.coord_stats]
        return out


def as_array(s) -> np.ndarray:
    """Return the observation matrix of a Sample or 2-d array-like."""
    if isinstance(s, Sample):
        return s.data
    arr = np.asarray(s, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    return arr


def load_sample_csv(path, has_header: bool = False) -> Sample:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"dataset not found: {path}")
    rows = []
    width = None
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if has_header and lineno == 1:
                continue
            if not row or all(not cell.strip() for cell in row):
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise RaggedRows(lineno, width, len(row))
            values = []
            for col, cell in enumerate(row, start=1):
                try:
                    v = float(cell)
                except ValueError:
                    raise NonNumericCell(lineno, col, cell) from None
                if not math.isfinite(v):
                    raise NonNumericCell(lineno, col, cell)
                values.append(v)
            rows.append(values)
    if not rows:
        raise EmptyFile(f"no data rows in {path}")
    return Sample(np.array(rows, dtype=float))


def write_sample_csv(s, path) -> None:
    """Write observations with 17 significant digits so a reload is exact."""
    np.savetxt(path, as_array(s), delimiter=",", fmt="%.17g")


def validate_sample(s) -> list[Finding]:
    arr = as_array(s)
    findings = []
    if arr.ndim != 2:
        return [Finding("NotAMatrix")]
    n, d = arr.shape
    if n < 2:
        findings.append(Finding("TooFewObservations"))
    if d < 1:
        findings.append(Finding("NoCoordinates"))
    for i, j in zip(*np.nonzero(~np.isfinite(arr))):
        findings.append(Finding("NonFinite", int(i), int(j)))
    return findings
