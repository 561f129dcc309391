"""In-memory repositories used by tests and dry runs"""
import copy
from typing import Any, Dict, List, Tuple

import pandas as pd

from ..domain.networks import Mlp
from ..interfaces.repositories import ArtifactRepository, ParameterRepository


class InMemoryArtifactRepository(ArtifactRepository):
    """Keeps copies of every table and metadata dict keyed by run directory"""

    def __init__(self):
        self._tables: Dict[Tuple[str, str], pd.DataFrame] = {}
        self._metadata: Dict[str, Dict[str, Any]] = {}

    def write_table(self, run_dir: str, name: str, frame: pd.DataFrame) -> str:
        self._tables[(run_dir, name)] = frame.copy()
        return f"{run_dir}/{name}.csv"

    def read_table(self, run_dir: str, name: str) -> pd.DataFrame:
        if (run_dir, name) not in self._tables:
            raise FileNotFoundError(f"No table {name!r} under {run_dir}")
        return self._tables[(run_dir, name)].copy()

    def list_tables(self, run_dir: str) -> List[str]:
        return sorted(name for directory, name in self._tables if directory == run_dir)

    def write_metadata(self, run_dir: str, metadata: Dict[str, Any]) -> str:
        self._metadata[run_dir] = copy.deepcopy(metadata)
        return f"{run_dir}/metadata.json"

    def read_metadata(self, run_dir: str) -> Dict[str, Any]:
        if run_dir not in self._metadata:
            raise FileNotFoundError(f"No metadata under {run_dir}")
        return copy.deepcopy(self._metadata[run_dir])


class InMemoryParameterRepository(ParameterRepository):
    """Maps locations to networks"""

    def __init__(self):
        self._networks: Dict[str, Mlp] = {}

    def save(self, location: str, net: Mlp) -> str:
        self._networks[location] = net
        return location

    def load(self, location: str) -> Mlp:
        if location not in self._networks:
            raise FileNotFoundError(f"No network stored at {location}")
        return self._networks[location]
