"""
工具函数
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import sys

import yaml

from .errors import ConfigError, StorageError


DEFAULT_CONFIG_PATH = os.path.join(
    os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))),
    "config.yaml",
)


def load_config(config_path: str | None = None) -> dict:
    """加载配置文件，并用环境变量覆盖部分设置"""
    path = config_path or DEFAULT_CONFIG_PATH
    try:
        with open(path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f) or {}
    except FileNotFoundError as e:
        raise StorageError(f"config file not found: {path}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"invalid YAML in {path}: {e}") from e

    # .env 文件支持
    try:
        from dotenv import load_dotenv
        load_dotenv()
    except ImportError:
        pass

    env_map = {
        "OWF_LOG_LEVEL": ("logging", "level", str),
        "OWF_OUTPUT_DIR": ("output", "dir", str),
        "OWF_MODES": ("numerics", "n_modes", int),
    }
    for env_var, (section, key, cast) in env_map.items():
        val = os.getenv(env_var, "")
        if val:
            try:
                config.setdefault(section, {})[key] = cast(val)
            except ValueError as e:
                raise ConfigError(f"cannot parse {env_var}={val!r}", f"{section}.{key}") from e

    return config


def setup_logging(level: str = "INFO"):
    """配置日志格式"""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s | %(levelname)-7s | %(name)s | %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stdout,
    )


def canonical_json(data) -> str:
    """键排序、无多余空白的 JSON，用于哈希和可复现输出"""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()
