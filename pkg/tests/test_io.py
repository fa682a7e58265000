import json

import numpy as np
import pandas as pd
import pytest

from src.utils.io import RunManifest, dumps, read_json, sha256_file, write_csv, write_json
from src.utils.parallel import parallel_map, resolve_threads
from src.utils.rng import make_rng, seed_sequence, spawn


class TestJson:
    def test_numpy_values(self, tmp_path):
        payload = {"a": np.float64(0.1), "b": np.arange(3), "c": np.bool_(True), "p": tmp_path}
        back = json.loads(dumps(payload))
        assert back == {"a": 0.1, "b": [0, 1, 2], "c": True, "p": str(tmp_path)}

    def test_unsupported_type(self):
        with pytest.raises(TypeError):
            dumps({"x": object()})

    def test_write_creates_parents(self, tmp_path):
        path = write_json({"k": 1}, tmp_path / "a" / "b.json")
        assert read_json(path) == {"k": 1}


class TestCsv:
    def test_full_precision_round_trip(self, tmp_path):
        values = [1 / 3, 2 / 75, 1e-17, 0.1 + 0.2]
        path = write_csv(pd.DataFrame({"x": values}), tmp_path / "x.csv")
        assert pd.read_csv(path, float_precision="round_trip")["x"].tolist() == values

    def test_same_frame_same_bytes(self, tmp_path):
        df = pd.DataFrame({"r2": [1 / 9, 1 / 27], "label": ["B", "C"]})
        a = write_csv(df, tmp_path / "a.csv")
        b = write_csv(df, tmp_path / "b.csv")
        assert sha256_file(a) == sha256_file(b)


class TestManifest:
    def test_finish(self, tmp_path):
        out = write_csv(pd.DataFrame({"x": [1.0]}), tmp_path / "x.csv")
        manifest = RunManifest(["fig2a"], seed=4, threads=2)
        manifest.add_output(out)
        path = manifest.finish(tmp_path / "manifest.json")
        payload = read_json(path)
        assert payload["outputs"] == {"x.csv": sha256_file(out)}
        assert payload["seed"] == 4
        assert payload["finished_at"] is not None
        assert {"randcorr", "numpy", "scipy", "pandas"} <= set(payload["versions"])


class TestSeeds:
    def test_children_reproducible(self):
        a = [make_rng(c).random() for c in spawn(5, 4)]
        b = [make_rng(c).random() for c in spawn(5, 4)]
        assert a == b
        assert len(set(a)) == 4

    def test_generator_passthrough(self, rng):
        assert make_rng(rng) is rng
        assert isinstance(seed_sequence(rng), np.random.SeedSequence)


class TestParallel:
    def test_order_preserved(self):
        assert parallel_map(lambda x: x * x, range(20), threads=4) == [x * x for x in range(20)]

    def test_resolve_threads(self):
        assert resolve_threads(None) >= 1
        assert resolve_threads(0) == 1
        assert resolve_threads(3) == 3
