"""Classic benchmark networks.

karate, lesmis and football ship with the package.  Any other network is
looked up as ``<name>.txt`` (or ``.edges``) in the directory named by the
``SIEVE_DATA_DIR`` environment variable.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

from .graph import SparseGraph, load_edge_list, read_edge_list

BUNDLED = ("karate", "lesmis", "football")
DATA_ENV = "SIEVE_DATA_DIR"


class DatasetUnavailable(FileNotFoundError):
    pass


def dataset_path(name: str) -> Path | None:
    """Location of ``name`` under $SIEVE_DATA_DIR, if it is there."""
    root = os.environ.get(DATA_ENV)
    if not root:
        return None
    for ext in (".txt", ".edges"):
        p = Path(root) / f"{name}{ext}"
        if p.is_file():
            return p
    return None


def load_dataset(name: str, weighted: bool = False) -> SparseGraph:
    """Load a benchmark network.

    Edge weights (lesmis coappearance counts) are kept only with
    ``weighted=True``; the S objective always uses the plain graph.
    """
    path = dataset_path(name)
    if path is not None:
        g = read_edge_list(path)
    elif name in BUNDLED:
        with resources.files("sieve").joinpath(f"data/{name}.txt").open(encoding="utf-8") as fh:
            g = load_edge_list(fh)
    else:
        hint = f"set {DATA_ENV} to a directory holding {name}.txt" if not os.environ.get(DATA_ENV) else (
            f"{name}.txt not found in {os.environ[DATA_ENV]}"
        )
        raise DatasetUnavailable(f"dataset {name!r} is not bundled; {hint}")
    return g if weighted else g.unweighted()


def available() -> list[str]:
    names = set(BUNDLED)
    root = os.environ.get(DATA_ENV)
    if root and Path(root).is_dir():
        names.update(p.stem for p in Path(root).iterdir() if p.suffix in (".txt", ".edges"))
    return sorted(names)
