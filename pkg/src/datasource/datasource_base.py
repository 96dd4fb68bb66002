from pathlib import Path
from typing import Any, Union


class DataSourceBase:
    def load(self, path: Union[str, Path]) -> Any:
        raise NotImplementedError
