"""Loading, normalization and fixed splits for the three benchmark datasets.

Continuous attributes are scaled into [0, 1]; nominal attributes are kept as
symbol indices and one-hot encoded only when building network inputs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

SCHEMA_IDS = ("breast_cancer", "diabetes", "lenses")

# canonical sizes of the fixed training splits
TRAIN_COUNTS = {"breast_cancer": 350, "diabetes": 384, "lenses": 12}


class DataFormatError(ValueError):
    """Raised for malformed records; message carries the 1-based line number."""


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    kind: str  # 'continuous' | 'nominal'
    nominal_values: tuple[str, ...] = ()
    raw_range: tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind == "nominal" and not self.nominal_values:
            raise ValueError(f"nominal attribute {self.name!r} needs values")
        if self.kind == "continuous" and self.raw_range is not None:
            lo, hi = self.raw_range
            if not lo < hi:
                raise ValueError(f"bad raw_range for {self.name!r}: {self.raw_range}")


class Pattern(NamedTuple):
    features: np.ndarray
    target: int


@dataclass
class Dataset:
    schema: list[AttributeSpec]
    x: np.ndarray  # (k, n_attrs) float
    y: np.ndarray  # (k,) int
    class_names: list[str]

    def __len__(self) -> int:
        return self.x.shape[0]

    @property
    def patterns(self) -> list[Pattern]:
        return [Pattern(self.x[i], int(self.y[i])) for i in range(len(self))]

    def n_attributes(self) -> int:
        return len(self.schema)

    def n_classes(self) -> int:
        return len(self.class_names)


@dataclass(frozen=True)
class SplitSpec:
    train_count: int


CANCER_ATTRS = [
    "Clump thickness",
    "Uniformity of cell size",
    "Uniformity of cell shape",
    "Marginal adhesion",
    "Single epithelial cell size",
    "Bare nuclei",
    "Bland chromatin",
    "Normal nucleoli",
    "Mitosis",
]

DIABETES_ATTRS = [
    "Number of times pregnant",
    "Plasma glucose concentration",
    "Diastolic blood pressure",
    "Triceps skin fold thickness",
    "2-hour serum insulin",
    "Body mass index",
    "Diabetes pedigree function",
    "Age",
]

LENSES_ATTRS = [
    ("Age", ("young", "pre-presbyopic", "presbyopic")),
    ("Spectacle Prescription", ("myope", "hypermetrope")),
    ("Astigmatic", ("no", "yes")),
    ("Tear Production Rate", ("reduce", "normal")),
]

LENSES_CLASSES = ["hard contact lenses", "soft contact lenses", "no contact lenses"]


def _read_records(path: str, n_fields: int, sep: str | None) -> list[list[str]]:
    records = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(sep)]
            if len(parts) != n_fields:
                raise DataFormatError(
                    f"line {lineno}: expected {n_fields} fields, got {len(parts)}"
                )
            records.append(parts)
    return records


def _parse_number(token: str, lineno: int, col: str) -> float:
    if token == "?":
        return np.nan
    try:
        return float(token)
    except ValueError:
        raise DataFormatError(f"line {lineno}: non-numeric value {token!r} in {col}") from None


def load_uci(path: str, schema_id: str, train_count: int | None = None) -> Dataset:
    """Load one of the three benchmark files into a normalized Dataset.

    Continuous attributes are normalized using statistics of the first
    ``train_count`` records (the canonical fixed split by default), which
    also supply the imputation means for missing values.
    """
    if schema_id not in SCHEMA_IDS:
        raise ValueError(f"unknown schema_id {schema_id!r}; expected one of {SCHEMA_IDS}")
    if train_count is None:
        train_count = TRAIN_COUNTS[schema_id]

    if schema_id == "breast_cancer":
        return _load_cancer(path, train_count)
    if schema_id == "diabetes":
        return _load_diabetes(path, train_count)
    return _load_lenses(path)


def _load_cancer(path: str, train_count: int) -> Dataset:
    records = _read_records(path, 11, ",")
    raw = np.empty((len(records), 9))
    y = np.empty(len(records), dtype=int)
    for i, rec in enumerate(records):
        # rec[0] is the sample id; it is not a feature
        for j in range(9):
            v = _parse_number(rec[j + 1], i + 1, CANCER_ATTRS[j])
            if not np.isnan(v) and not 1 <= v <= 10:
                raise DataFormatError(f"line {i + 1}: value {v} outside 1..10")
            raw[i, j] = v
        cls = rec[10]
        if cls == "2":
            y[i] = 0
        elif cls == "4":
            y[i] = 1
        else:
            raise DataFormatError(f"line {i + 1}: unknown class label {cls!r}")
    # missing values: training-set mean of the attribute
    train_raw = raw[:train_count]
    for j in range(9):
        col = raw[:, j]
        if np.isnan(col).any():
            mean = np.nanmean(train_raw[:, j])
            col[np.isnan(col)] = mean
    schema = [
        AttributeSpec(name, "continuous", raw_range=(0.0, 10.0)) for name in CANCER_ATTRS
    ]
    return Dataset(schema, raw / 10.0, y, ["benign", "malignant"])


def _load_diabetes(path: str, train_count: int) -> Dataset:
    records = _read_records(path, 9, ",")
    raw = np.empty((len(records), 8))
    y = np.empty(len(records), dtype=int)
    for i, rec in enumerate(records):
        for j in range(8):
            raw[i, j] = _parse_number(rec[j], i + 1, DIABETES_ATTRS[j])
        cls = rec[8]
        if cls not in ("0", "1"):
            raise DataFormatError(f"line {i + 1}: unknown class label {cls!r}")
        y[i] = int(cls)
    lo = raw[:train_count].min(axis=0)
    hi = raw[:train_count].max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    x = np.clip((raw - lo) / span, 0.0, 1.0)
    schema = [
        AttributeSpec(name, "continuous", raw_range=(float(l), float(h)))
        for name, l, h in zip(DIABETES_ATTRS, lo, hi)
    ]
    return Dataset(schema, x, y, ["tested negative", "tested positive"])


def _load_lenses(path: str) -> Dataset:
    # whitespace- or comma-separated; leading field is the example number
    with open(path) as f:
        first = f.readline()
    sep = "," if "," in first else None
    records = _read_records(path, 6, sep)
    x = np.empty((len(records), 4))
    y = np.empty(len(records), dtype=int)
    for i, rec in enumerate(records):
        for j, (name, values) in enumerate(LENSES_ATTRS):
            v = _parse_number(rec[j + 1], i + 1, name)
            if v != int(v) or not 1 <= v <= len(values):
                raise DataFormatError(f"line {i + 1}: {name} value {rec[j + 1]!r} out of range")
            x[i, j] = v - 1
        cls = int(_parse_number(rec[5], i + 1, "class"))
        if cls not in (1, 2, 3):
            raise DataFormatError(f"line {i + 1}: unknown class label {rec[5]!r}")
        y[i] = cls - 1
    schema = [AttributeSpec(name, "nominal", nominal_values=values) for name, values in LENSES_ATTRS]
    return Dataset(schema, x, y, list(LENSES_CLASSES))


def split(d: Dataset, s: SplitSpec) -> tuple[Dataset, Dataset]:
    """Split into (first s.train_count patterns, remainder), in file order."""
    if not 0 < s.train_count < len(d):
        raise ValueError(f"train_count {s.train_count} invalid for {len(d)} patterns")
    k = s.train_count
    train = Dataset(d.schema, d.x[:k].copy(), d.y[:k].copy(), d.class_names)
    test = Dataset(d.schema, d.x[k:].copy(), d.y[k:].copy(), d.class_names)
    return train, test


def one_of_c(target: int, n_classes: int) -> np.ndarray:
    """Target vector with a single 1 at the class index."""
    if not 0 <= target < n_classes:
        raise ValueError(f"target {target} out of range for {n_classes} classes")
    v = np.zeros(n_classes)
    v[target] = 1.0
    return v


def targets_matrix(y: np.ndarray, n_classes: int) -> np.ndarray:
    t = np.zeros((len(y), n_classes))
    t[np.arange(len(y)), y] = 1.0
    return t


@dataclass
class InputLayout:
    """Maps network input columns back to dataset attributes.

    Continuous attributes occupy one column; nominal attributes one column
    per symbol (one-hot).
    """
    columns: list[tuple[int, int | None]] = field(default_factory=list)

    @property
    def n_inputs(self) -> int:
        return len(self.columns)

    def attribute_of(self, col: int) -> int:
        return self.columns[col][0]

    def columns_of(self, attr: int) -> list[int]:
        return [c for c, (a, _) in enumerate(self.columns) if a == attr]


def encode_inputs(d: Dataset) -> tuple[np.ndarray, InputLayout]:
    """Build the network input matrix (one-hot nominal, raw continuous)."""
    layout = InputLayout()
    cols = []
    for a, spec in enumerate(d.schema):
        if spec.kind == "continuous":
            layout.columns.append((a, None))
            cols.append(d.x[:, a])
        else:
            for v in range(len(spec.nominal_values)):
                layout.columns.append((a, v))
                cols.append((d.x[:, a] == v).astype(float))
    return np.column_stack(cols), layout


def denormalize(spec: AttributeSpec, value: float) -> float:
    """Invert continuous normalization using the attribute's raw range."""
    if spec.kind != "continuous" or spec.raw_range is None:
        raise ValueError(f"{spec.name!r} is not a normalized continuous attribute")
    lo, hi = spec.raw_range
    return lo + value * (hi - lo)
