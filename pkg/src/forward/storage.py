"""
Cauchy 数据与 DtN 矩阵的文件格式

  - Cauchy 数据：JSON，键排序，浮点数按 repr 精确写出
  - DtN 矩阵：little-endian float64，8 个值的头部
    (magic, version, rows, cols, R, k_re, k_im, reserved)，随后 re/im 交错存放
"""

from __future__ import annotations

import json
import logging
import os

import numpy as np

from src.utils.errors import StorageError

from .boundary import BoundaryFunction
from .solver import DtnMatrix
from .synthesis import CauchyData

logger = logging.getLogger(__name__)

DTN_MAGIC = 0x4F57_4454_4E  # "OWDTN"
DTN_VERSION = 1
_HEADER = 8


def cauchy_to_dict(data: CauchyData) -> dict:
    payload = {"radius": data.radius, "n_modes": data.n_modes, "meta": dict(data.meta)}
    payload.update(data.f.to_dict("f"))
    payload.update(data.g.to_dict("g"))
    return payload


def cauchy_from_dict(payload: dict) -> CauchyData:
    try:
        radius = float(payload["radius"])
        n_modes = int(payload["n_modes"])
        f = np.asarray(payload["f_re"], dtype=float) + 1j * np.asarray(payload["f_im"], dtype=float)
        g = np.asarray(payload["g_re"], dtype=float) + 1j * np.asarray(payload["g_im"], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise StorageError(f"malformed Cauchy data: {e}") from e
    if len(f) != n_modes or len(g) != n_modes:
        raise StorageError(f"Cauchy data declares {n_modes} modes but stores {len(f)}/{len(g)}")
    return CauchyData(
        f=BoundaryFunction(f, radius),
        g=BoundaryFunction(g, radius),
        meta=dict(payload.get("meta", {})),
    )


def save_cauchy_data(data: CauchyData, path: str) -> str:
    text = json.dumps(cauchy_to_dict(data), sort_keys=True, indent=2)
    try:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    except OSError as e:
        raise StorageError(f"cannot write {path}: {e}") from e
    logger.info(f"Cauchy data saved to {path}")
    return path


def load_cauchy_data(path: str) -> CauchyData:
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
    except OSError as e:
        raise StorageError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise StorageError(f"{path} is not valid JSON: {e}") from e
    return cauchy_from_dict(payload)


def save_dtn_matrix(dtn: DtnMatrix, path: str) -> str:
    rows, cols = dtn.entries.shape
    header = np.array(
        [DTN_MAGIC, DTN_VERSION, rows, cols, dtn.radius, dtn.wavenumber.real, dtn.wavenumber.imag, 0.0],
        dtype="<f8",
    )
    body = np.empty((rows, cols, 2), dtype="<f8")
    body[..., 0] = dtn.entries.real
    body[..., 1] = dtn.entries.imag
    try:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "wb") as f:
            f.write(header.tobytes())
            f.write(body.tobytes())
    except OSError as e:
        raise StorageError(f"cannot write {path}: {e}") from e
    return path


def load_dtn_matrix(path: str) -> DtnMatrix:
    try:
        raw = np.fromfile(path, dtype="<f8")
    except OSError as e:
        raise StorageError(f"cannot read {path}: {e}") from e
    if raw.size < _HEADER or int(raw[0]) != DTN_MAGIC:
        raise StorageError(f"{path} is not a DtN matrix file")
    if int(raw[1]) != DTN_VERSION:
        raise StorageError(f"{path}: unsupported version {int(raw[1])}")
    rows, cols = int(raw[2]), int(raw[3])
    body = raw[_HEADER:]
    if body.size != rows * cols * 2:
        raise StorageError(f"{path}: expected {rows}x{cols} entries, found {body.size // 2}")
    pairs = body.reshape(rows, cols, 2)
    return DtnMatrix(
        entries=pairs[..., 0] + 1j * pairs[..., 1],
        wavenumber=complex(raw[5], raw[6]),
        radius=float(raw[4]),
    )
