"""Model files.

Layout::

    shlearn-model v1\\n
    <one-line JSON header>\\n
    <parameters: float64, little-endian, row-major, blocks in header order>

The header records the config, coverage task, vocabulary name, fold and
seed; ``load_model`` rejects files whose payload size does not match it.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..tokens import CoverageTask
from .model import Model, ModelConfig

MAGIC = b"shlearn-model v1\n"
_DTYPE = np.dtype("<f8")


class ModelFormatError(ValueError):
    pass


@dataclass(frozen=True)
class SavedModel:
    model: Model
    task: CoverageTask
    vocabulary: str
    fold: int | None = None


def save_model(path: str | Path, model: Model, task: CoverageTask, vocabulary: str = "minilang",
               fold: int | None = None) -> None:
    cfg = model.config
    header = {
        "config": asdict(cfg),
        "task": CoverageTask.parse(task).value,
        "vocabulary": vocabulary,
        "fold": fold,
        "blocks": [[name, list(shape)] for name, shape in cfg.block_shapes()],
        "dtype": "float64",
        "byteorder": "little",
    }
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8") + b"\n")
        fh.write(model.theta.astype(_DTYPE, copy=False).tobytes(order="C"))


def load_model(path: str | Path) -> SavedModel:
    data = Path(path).read_bytes()
    if not data.startswith(MAGIC):
        raise ModelFormatError(f"{path}: not a shlearn v1 model file")
    nl = data.find(b"\n", len(MAGIC))
    if nl < 0:
        raise ModelFormatError(f"{path}: truncated header")
    try:
        header = json.loads(data[len(MAGIC):nl])
        cfg = ModelConfig(**header["config"])
        task = CoverageTask.parse(header["task"])
    except (ValueError, KeyError, TypeError) as e:
        raise ModelFormatError(f"{path}: bad header ({e})") from None
    expected = [[n, list(s)] for n, s in cfg.block_shapes()]
    if header.get("blocks") != expected:
        raise ModelFormatError(f"{path}: block shapes do not match config")
    payload = data[nl + 1:]
    n = cfg.n_params()
    if len(payload) != n * _DTYPE.itemsize:
        raise ModelFormatError(
            f"{path}: shape mismatch, expected {n} parameters ({n * _DTYPE.itemsize} bytes), "
            f"found {len(payload)} bytes")
    theta = np.frombuffer(payload, dtype=_DTYPE).astype(np.float64)
    if not np.all(np.isfinite(theta)):
        raise ModelFormatError(f"{path}: non-finite parameters")
    return SavedModel(Model(cfg, theta), task, header["vocabulary"], header.get("fold"))
