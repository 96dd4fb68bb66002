from pathlib import Path
from typing import Union

import pandas as pd

from .errors import DataError

PathLike = Union[str, Path]


def write_csv(df: pd.DataFrame, path: PathLike) -> None:
    """
    Write a frame the same way everywhere: no index, LF line endings and the shortest
    float representation that parses back to the identical value.
    """
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, lineterminator='\n', encoding='utf-8')


def read_csv_frame(path: PathLike, columns: list) -> pd.DataFrame:
    """
    Read a CSV file with the given header. Cells are returned as strings so callers
    can report the first offending row themselves.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"file not found: {path}")
    try:
        df = pd.read_csv(path, dtype=str, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise DataError(f"{path}: no samples")
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise DataError(f"{path}: missing column(s) {', '.join(missing)}")
    if len(df) == 0:
        raise DataError(f"{path}: no samples")
    return df[columns]


def to_numeric_column(df: pd.DataFrame, column: str, path: PathLike) -> pd.Series:
    values = pd.to_numeric(df[column], errors='coerce')
    bad = values.isna()
    if bad.any():
        row = int(bad.to_numpy().argmax()) + 1
        raise DataError(f"{path}: non-numeric value {df[column].iloc[row - 1]!r} in column '{column}' at row {row}")
    # correctly rounded parse
    return df[column].str.strip().astype(float)
