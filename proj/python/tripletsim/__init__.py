"""Photon-triplet simulator for cascaded four-wave mixing in two coupled microrings.

The compiled core lives in ``tripletsim._core``; this module adds readers for the
manifest bundles written by ``run`` and by the ``tripletsim run`` command.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._core import (  # noqa: F401
    ConfigError,
    ConvergenceError,
    DomainError,
    preset,
    purity,
    run,
    simulate,
    triplet_rate,
    validate,
)

_DTYPES = {
    "complex128": np.dtype("<c16"),
    "float64": np.dtype("<f8"),
    "uint8": np.dtype("u1"),
}


@dataclass
class Bundle:
    """A manifest plus lazily loaded arrays."""

    root: Path
    manifest: dict
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def results(self) -> dict:
        return self.manifest["results"]

    @property
    def names(self) -> list[str]:
        return [a["name"] for a in self.manifest["arrays"]]

    def entry(self, name: str) -> dict:
        for a in self.manifest["arrays"]:
            if a["name"] == name:
                return a
        raise KeyError(f"array {name!r} is not in the manifest")

    def array(self, name: str) -> np.ndarray:
        if name not in self._cache:
            e = self.entry(name)
            dtype = _DTYPES[e["dtype"]]
            shape = tuple(e["shape"])
            data = np.fromfile(self.root / e["file"], dtype=dtype)
            if data.size != int(np.prod(shape)):
                raise ValueError(f"{e['file']}: {data.size} values, manifest says {shape}")
            self._cache[name] = data.reshape(shape)
        return self._cache[name]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.array(name)


def read_manifest(path: str | Path) -> Bundle:
    """Open a bundle from its directory or its manifest.json path."""
    p = Path(path)
    if p.is_dir():
        p = p / "manifest.json"
    with open(p, encoding="utf-8") as f:
        manifest = json.load(f)
    for key in ("arrays", "axes", "results"):
        if key not in manifest:
            raise ValueError(f"{p} has no {key!r} section")
    b = Bundle(p.parent, manifest)
    for a in manifest["arrays"]:
        if not (b.root / a["file"]).exists():
            raise FileNotFoundError(b.root / a["file"])
    return b


def marginals(density: np.ndarray, x: tuple[np.ndarray, np.ndarray, np.ndarray]) -> list[np.ndarray]:
    """Trapezoid marginals of a density on uniform axes; entry i integrates out axis i."""
    out = []
    for axis in range(3):
        xi = x[axis]
        w = np.full(xi.size, xi[1] - xi[0])
        w[0] *= 0.5
        w[-1] *= 0.5
        out.append(np.tensordot(density, w, axes=([axis], [0])))
    return out
