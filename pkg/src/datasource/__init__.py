from pathlib import Path
from typing import Union

from src.hindsight.policy import SocPolicyTable
from src.signals.ace_series import AceSeries
from src.utils.errors import DataError
from .csv_reader import AceCsvReader, PolicyCsvReader
from .datasource_base import DataSourceBase


def get_dataset_reader(extension: str) -> DataSourceBase:
    if extension.startswith('.'):
        extension = extension[1:]
    if extension.lower() == 'csv':
        return AceCsvReader()
    else:
        raise NotImplementedError


def load_ace_csv(path: Union[str, Path]) -> AceSeries:
    """
    Load an ACE series. The kind of file is inferred by its extension.
    """
    path = Path(path)
    try:
        reader = get_dataset_reader(path.suffix)
    except NotImplementedError:
        raise DataError(f"{path}: unsupported file type '{path.suffix}'")
    return reader.load(path)


def load_policy_csv(path: Union[str, Path]) -> SocPolicyTable:
    return PolicyCsvReader().load(path)
