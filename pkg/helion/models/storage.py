"""
On-disk artifacts

CMX1 matrices, scattering-pair directories and schema-versioned CSV/JSON
tables. Every file is written to a temporary sibling and renamed into place.
"""

import io
import json
import logging
import os
import struct
import tempfile
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd

from helion.core.config import settings
from helion.core.errors import StorageError
from helion.schemas.config import SystemConfig
from helion.services.discrim import DiscriminationSpectrum, enhancement
from helion.services.scatter import ScatteringPair, build_masks

logger = logging.getLogger(__name__)

CMX_MAGIC = b"CMXv0001"
CMX_HEADER = struct.Struct("<8sQQ")
PAIR_FILES = ("s1", "s2", "a", "b")

PathLike = Union[str, Path]


def atomic_write(path: PathLike, data: bytes) -> None:
    """Write bytes to path via a temporary file in the same directory"""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise StorageError(f"cannot write ({exc.strerror or exc})", str(path)) from exc


def encode_cmx(matrix: np.ndarray) -> bytes:
    arr = np.asarray(matrix, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr[:, np.newaxis]
    rows, cols = arr.shape
    return CMX_HEADER.pack(CMX_MAGIC, rows, cols) + np.ascontiguousarray(arr, dtype="<c16").tobytes()


def decode_cmx(data: bytes, source: str = "<bytes>") -> np.ndarray:
    if len(data) < CMX_HEADER.size:
        raise StorageError("truncated CMX1 header", source)
    magic, rows, cols = CMX_HEADER.unpack_from(data)
    if magic != CMX_MAGIC:
        raise StorageError("not a CMX1 file", source)
    expected = CMX_HEADER.size + rows * cols * 16
    if rows < 1 or cols < 1 or len(data) != expected:
        raise StorageError(f"CMX1 payload size mismatch for {rows}x{cols}", source)
    values = np.frombuffer(data, dtype="<c16", count=rows * cols, offset=CMX_HEADER.size)
    matrix = values.reshape(rows, cols).astype(np.complex128)
    if not np.all(np.isfinite(matrix)):
        raise StorageError("CMX1 file holds non-finite entries", source)
    return matrix


def write_cmx(path: PathLike, matrix: np.ndarray) -> None:
    atomic_write(path, encode_cmx(matrix))


def read_cmx(path: PathLike) -> np.ndarray:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise StorageError(f"cannot read ({exc.strerror or exc})", str(path)) from exc
    return decode_cmx(data, str(path))


def dumps_json(payload: Dict[str, Any]) -> bytes:
    return (json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n").encode()


def write_json(path: PathLike, payload: Dict[str, Any]) -> None:
    atomic_write(path, dumps_json(payload))


def read_json(path: PathLike) -> Dict[str, Any]:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise StorageError(f"cannot read ({exc.strerror or exc})", str(path)) from exc
    except json.JSONDecodeError as exc:
        raise StorageError(f"invalid JSON ({exc.msg})", str(path)) from exc


def write_table(path: PathLike, frame: pd.DataFrame, kind: str, fmt: str = "csv") -> Path:
    """
    Write a result table as CSV (leading '# helion <kind> v<version>' line)
    or as a JSON document with the same schema tag
    """
    path = Path(path)
    version = settings.FORMAT_VERSION
    if fmt == "json":
        path = path.with_suffix(".json")
        records = json.loads(frame.to_json(orient="records", double_precision=15))
        write_json(path, {"schema": kind, "version": version, "rows": records})
        return path
    buffer = io.StringIO()
    buffer.write(f"# helion {kind} v{version}\n")
    frame.to_csv(buffer, index=False, lineterminator="\n")
    atomic_write(path.with_suffix(".csv"), buffer.getvalue().encode())
    return path.with_suffix(".csv")


def read_table(path: PathLike) -> pd.DataFrame:
    path = Path(path)
    if path.suffix == ".json":
        return pd.DataFrame(read_json(path)["rows"])
    try:
        return pd.read_csv(path, comment="#")
    except OSError as exc:
        raise StorageError(f"cannot read ({exc.strerror or exc})", str(path)) from exc


def save_pair(directory: PathLike, pair: ScatteringPair) -> Path:
    """Persist a pair as s1/s2/a/b CMX1 files plus meta.json"""
    directory = Path(directory)
    for name in PAIR_FILES:
        matrix = getattr(pair, name)
        if matrix is not None:
            write_cmx(directory / f"{name}.cmx", matrix)
    meta = {
        "kind": "scattering_pair",
        "format_version": settings.FORMAT_VERSION,
        "shape": list(pair.s1.shape),
        "sigma_max": pair.sigma_max,
        "unitary": pair.unitary,
        "generator": pair.generator,
        "config": pair.config.model_dump(mode="json") if pair.config else None,
        "metadata": pair.metadata,
    }
    write_json(directory / "meta.json", meta)
    logger.info(f"Saved scattering pair to {directory}")
    return directory


def load_pair(directory: PathLike) -> ScatteringPair:
    directory = Path(directory)
    if not directory.is_dir():
        raise StorageError("pair directory not found", str(directory))
    meta = read_json(directory / "meta.json")
    if not isinstance(meta, dict):
        raise StorageError("meta.json is not a JSON object", str(directory))
    matrices: Dict[str, Optional[np.ndarray]] = {}
    for name in PAIR_FILES:
        path = directory / f"{name}.cmx"
        matrices[name] = read_cmx(path) if path.exists() else None
    if matrices["s1"] is None or matrices["s2"] is None:
        raise StorageError("pair directory lacks s1.cmx or s2.cmx", str(directory))
    config = SystemConfig(**meta["config"]) if meta.get("config") else None
    mask1, mask2 = build_masks(config) if config else (None, None)
    try:
        sigma_max = float(meta["sigma_max"])
        unitary = bool(meta["unitary"])
    except (KeyError, TypeError, ValueError) as exc:
        raise StorageError(f"meta.json lacks a valid {exc}", str(directory)) from exc
    return ScatteringPair(
        s1=matrices["s1"],
        s2=matrices["s2"],
        sigma_max=sigma_max,
        unitary=unitary,
        a=matrices["a"],
        b=matrices["b"],
        mask1=mask1,
        mask2=mask2,
        config=config,
        generator=meta.get("generator"),
        metadata=meta.get("metadata") or {},
    )


def spectrum_frame(spec: DiscriminationSpectrum) -> pd.DataFrame:
    """index (1-based), eigenvalue, eigenvalue_over_mean (blank when the mean is zero)"""
    ratio = enhancement(spec)
    over_mean = (
        spec.eigenvalues / spec.mean_eigenvalue if ratio is not None else np.full(spec.dim, np.nan)
    )
    return pd.DataFrame(
        {
            "index": np.arange(1, spec.dim + 1),
            "eigenvalue": spec.eigenvalues,
            "eigenvalue_over_mean": over_mean,
        }
    )
