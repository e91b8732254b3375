"""
manifest.json：参数、输入输出文件的 SHA-256、版本号

不记录时间戳，相同输入的两次运行产生相同的 manifest。
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field

from src import __version__
from src.utils.errors import StorageError
from src.utils.helpers import sha256_file

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


@dataclass
class Manifest:
    out_dir: str
    command: str
    parameters: dict = field(default_factory=dict)
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add_input(self, name: str, path: str) -> None:
        self.inputs[name] = path

    def add_outputs(self, *paths: str | None) -> None:
        self.outputs.extend(p for p in paths if p)

    def _relative(self, path: str) -> str:
        return os.path.relpath(os.path.abspath(path), os.path.abspath(self.out_dir)).replace(os.sep, "/")

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "version": __version__,
            "parameters": self.parameters,
            "inputs": {
                name: {"file": os.path.basename(path), "sha256": sha256_file(path)}
                for name, path in sorted(self.inputs.items())
            },
            "outputs": {self._relative(p): sha256_file(p) for p in sorted(set(self.outputs))},
            "notes": list(self.notes),
        }

    def write(self) -> str:
        path = os.path.join(self.out_dir, MANIFEST_NAME)
        try:
            os.makedirs(self.out_dir, exist_ok=True)
            payload = self.to_dict()
            with open(path, "w", encoding="utf-8") as f:
                json.dump(payload, f, sort_keys=True, indent=2)
                f.write("\n")
        except OSError as e:
            raise StorageError(f"cannot write {path}: {e}") from e
        logger.info(f"Manifest with {len(self.outputs)} outputs written to {path}")
        return path
