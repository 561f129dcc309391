"""Tests for the CSV artifact store"""
import pandas as pd
import pytest

from ...repositories.csv import METADATA_FILE, CsvArtifactRepository


@pytest.fixture
def repository():
    return CsvArtifactRepository()


@pytest.fixture
def frame():
    return pd.DataFrame({"iteration": [1, 2, 3], "rdeu": [-0.125, -0.25, -0.3125]})


class TestTables:
    def test_write_then_read(self, repository, frame, tmp_path):
        path = repository.write_table(str(tmp_path), "trace", frame)
        assert path == str(tmp_path / "trace.csv")
        pd.testing.assert_frame_equal(repository.read_table(str(tmp_path), "trace"), frame)

    def test_case_subdirectories_are_created_and_listed(self, repository, frame, tmp_path):
        repository.write_table(str(tmp_path), "summary", frame)
        repository.write_table(str(tmp_path), "eps=0.01_p=0.75/trace", frame)
        repository.write_table(str(tmp_path), "eps=0.01_p=0.75/wealth", frame)
        assert (tmp_path / "eps=0.01_p=0.75" / "trace.csv").is_file()
        assert repository.list_tables(str(tmp_path)) == [
            "eps=0.01_p=0.75/trace",
            "eps=0.01_p=0.75/wealth",
            "summary",
        ]

    def test_plain_text_layout(self, repository, tmp_path):
        repository.write_table(str(tmp_path), "weights", pd.DataFrame({"asset": [1, 2], "weight": [0.25, 0.75]}))
        assert (tmp_path / "weights.csv").read_text(encoding="utf-8") == "asset,weight\n1,0.25\n2,0.75\n"

    def test_missing_table(self, repository, tmp_path):
        with pytest.raises(FileNotFoundError):
            repository.read_table(str(tmp_path), "trace")

    def test_missing_run_directory(self, repository, tmp_path):
        with pytest.raises(FileNotFoundError):
            repository.list_tables(str(tmp_path / "absent"))


class TestMetadata:
    def test_round_trip(self, repository, tmp_path):
        metadata = {"run_id": "portfolio-7", "seed": 7, "cases": [[0.01, 0.75]], "converged": False}
        path = repository.write_metadata(str(tmp_path / "run"), metadata)
        assert path == str(tmp_path / "run" / METADATA_FILE)
        assert repository.read_metadata(str(tmp_path / "run")) == metadata

    def test_missing_metadata(self, repository, tmp_path):
        with pytest.raises(FileNotFoundError):
            repository.read_metadata(str(tmp_path))
