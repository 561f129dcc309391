"""CSV artifact store on the local filesystem"""
import json
from pathlib import Path
from typing import Any, Dict, List

import pandas as pd

from ..interfaces.repositories import ArtifactRepository
from ..log_utils import RobustRdeuLogger

METADATA_FILE = "metadata.json"


class CsvArtifactRepository(ArtifactRepository):
    """Writes each table as `<run_dir>/<name>.csv`; names may contain case subdirectories"""

    def __init__(self, float_format: str = "%.10g"):
        self.logger = RobustRdeuLogger()
        self.float_format = float_format

    @staticmethod
    def _path(run_dir: str, name: str) -> Path:
        return Path(run_dir) / f"{name}.csv"

    def write_table(self, run_dir: str, name: str, frame: pd.DataFrame) -> str:
        path = self._path(run_dir, name)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=self.float_format, lineterminator="\n")
        self.logger.info(f"Wrote {len(frame)} rows to {path}")
        return str(path)

    def read_table(self, run_dir: str, name: str) -> pd.DataFrame:
        path = self._path(run_dir, name)
        if not path.is_file():
            raise FileNotFoundError(f"No table {name!r} under {run_dir}")
        return pd.read_csv(path)

    def list_tables(self, run_dir: str) -> List[str]:
        root = Path(run_dir)
        if not root.is_dir():
            raise FileNotFoundError(f"Run directory not found: {run_dir}")
        return sorted(path.relative_to(root).with_suffix("").as_posix() for path in root.rglob("*.csv"))

    def write_metadata(self, run_dir: str, metadata: Dict[str, Any]) -> str:
        path = Path(run_dir) / METADATA_FILE
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(metadata, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
        self.logger.debug(f"Wrote run metadata to {path}")
        return str(path)

    def read_metadata(self, run_dir: str) -> Dict[str, Any]:
        path = Path(run_dir) / METADATA_FILE
        if not path.is_file():
            raise FileNotFoundError(f"No {METADATA_FILE} under {run_dir}")
        return json.loads(path.read_text(encoding="utf-8"))
