"""
Repository interfaces for run artifacts and trained network parameters.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List

import pandas as pd

from ..domain.networks import Mlp


class ArtifactRepository(ABC):
    """Tables and metadata of experiment runs, addressed by run directory and name"""

    @abstractmethod
    def write_table(self, run_dir: str, name: str, frame: pd.DataFrame) -> str:
        """Store a table and return its location"""
        pass

    @abstractmethod
    def read_table(self, run_dir: str, name: str) -> pd.DataFrame:
        """Load a stored table; FileNotFoundError when it does not exist"""
        pass

    @abstractmethod
    def list_tables(self, run_dir: str) -> List[str]:
        """Names of the tables under a run directory, sorted, including case subdirectories"""
        pass

    @abstractmethod
    def write_metadata(self, run_dir: str, metadata: Dict[str, Any]) -> str:
        """Store run metadata (timestamps, resolved config) and return its location"""
        pass

    @abstractmethod
    def read_metadata(self, run_dir: str) -> Dict[str, Any]:
        """Load run metadata"""
        pass


class ParameterRepository(ABC):
    """Persistence of trained networks"""

    @abstractmethod
    def save(self, location: str, net: Mlp) -> str:
        """Store the network and return its location"""
        pass

    @abstractmethod
    def load(self, location: str) -> Mlp:
        """Rebuild a stored network"""
        pass
