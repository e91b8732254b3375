from .helpers import load_config, setup_logging, canonical_json, sha256_text, sha256_file

__all__ = [
    "load_config",
    "setup_logging",
    "canonical_json",
    "sha256_text",
    "sha256_file",
]
