"""Leitura e escrita de JSON/CSV e manifesto de execução."""

from __future__ import annotations

import hashlib
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import pandas as pd
import scipy

import config
from src import __version__

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _to_jsonable(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"Objeto não serializável: {type(obj).__name__}")


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, default=_to_jsonable)


def read_json(path: PathLike) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_json(payload: Any, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(payload))
        f.write("\n")
    return path


def write_csv(df: pd.DataFrame, path: PathLike) -> Path:
    """CSV com precisão total de float (round-trip exato)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=config.CSV_FLOAT_FORMAT)
    logger.info(f"CSV gravado: {path} ({len(df)} linhas)")
    return path


def sha256_file(path: PathLike, chunk_bytes: int = 1 << 20) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(chunk_bytes), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    """Registro de proveniência gravado ao lado das saídas de cada execução."""

    command: list
    seed: Optional[int]
    threads: int
    started_at: str = field(default_factory=utc_now)
    finished_at: Optional[str] = None
    versions: dict = field(default_factory=lambda: {
        "randcorr": __version__,
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
    })
    outputs: dict = field(default_factory=dict)

    def add_output(self, path: PathLike) -> None:
        path = Path(path)
        self.outputs[path.name] = sha256_file(path)

    def finish(self, path: PathLike) -> Path:
        self.finished_at = utc_now()
        return write_json(asdict(self), path)
