"""On-disk cache for character tables and Schur projectors.

Layout under the cache root::

    sym_tables/k<k>.json          S_k character tables
    group_tables/<family>_<n>.json  finite-group character tables
    projectors/k<k>_d<d>.npz      explicit Schur projectors

The root is ``$SCHURLAB_CACHE`` if set, otherwise ``$XDG_CACHE_HOME/schurlab``
or ``~/.cache/schurlab``. Unreadable or corrupt entries are treated as misses
and rewritten.
"""
from __future__ import annotations

import io
import json
import os
from pathlib import Path
from typing import Optional

import numpy as np

from . import characters, groups, sampling
from .serialize import atomic_write

FORMAT = 1


def default_cache_dir() -> Path:
    env = os.environ.get("SCHURLAB_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "schurlab"


class DiskCache:
    def __init__(self, root=None):
        self.root = Path(root) if root is not None else default_cache_dir()

    def _read_json(self, path: Path) -> Optional[dict]:
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError):
            return None
        if not isinstance(data, dict) or data.get("format") != FORMAT:
            return None
        return data.get("payload")

    def _write_json(self, path: Path, payload) -> None:
        try:
            atomic_write(path, json.dumps({"format": FORMAT, "payload": payload}, sort_keys=True))
        except OSError:
            pass  # a read-only cache only costs time

    # S_k tables
    def load(self, k: int) -> Optional[dict]:
        return self._read_json(self.root / "sym_tables" / f"k{k}.json")

    def save(self, k: int, data: dict) -> None:
        self._write_json(self.root / "sym_tables" / f"k{k}.json", data)

    def group_store(self) -> "_GroupStore":
        return _GroupStore(self)

    def projector_store(self) -> "_ProjectorStore":
        return _ProjectorStore(self)


class _GroupStore:
    def __init__(self, cache: DiskCache):
        self.cache = cache

    def _path(self, name: str) -> Path:
        return self.cache.root / "group_tables" / (name.replace(":", "_") + ".json")

    def load(self, name: str) -> Optional[dict]:
        return self.cache._read_json(self._path(name))

    def save(self, name: str, data: dict) -> None:
        self.cache._write_json(self._path(name), data)


class _ProjectorStore:
    def __init__(self, cache: DiskCache):
        self.cache = cache

    def _path(self, k, d) -> Path:
        return self.cache.root / "projectors" / f"k{k}_d{d}.npz"

    def load(self, k, d) -> Optional[dict]:
        try:
            with np.load(self._path(k, d)) as data:
                return {key: data[key] for key in data.files}
        except (OSError, ValueError):
            return None

    def save(self, k, d, mats: dict) -> None:
        buf = io.BytesIO()
        np.savez_compressed(buf, **mats)
        try:
            atomic_write(self._path(k, d), buf.getvalue())
        except OSError:
            pass


def install(root=None) -> DiskCache:
    """Route all table and projector lookups through a disk cache."""
    cache = DiskCache(root)
    characters.use_table_store(cache)
    groups.use_table_store(cache.group_store())
    sampling.use_projector_store(cache.projector_store())
    return cache


def uninstall() -> None:
    characters.use_table_store(None)
    groups.use_table_store(None)
    sampling.use_projector_store(None)
