"""Provenance manifests: every artifact records how it was produced.

A manifest ``<output>.manifest.json`` sits beside each output file and
carries the effective-parameter hash, the seed (when one is in play), the
SHA-256 digests of every input file, and the tool version. Manifests are
timestamp-free so re-running a pipeline reproduces the output tree
byte-for-byte.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

from .records import write_json


def file_digest(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            digest.update(block)
    return f"sha256:{digest.hexdigest()}"


def params_hash(params: dict) -> str:
    """Hash of the effective parameters, canonicalized as sorted key=value."""
    canonical = "\n".join(f"{key}={params[key]}" for key in sorted(params))
    return f"sha256:{hashlib.sha256(canonical.encode('utf-8')).hexdigest()}"


def manifest_path(output: str | Path) -> Path:
    output = Path(output)
    return output.with_name(output.name + ".manifest.json")


def write_manifest(
    output: str | Path,
    params: dict,
    inputs,
    seed: int | None = None,
    version: str | None = None,
) -> Path:
    """Write the manifest for ``output``; returns the manifest path.

    ``inputs`` is an iterable of input file paths; they are digested and
    recorded under their names, sorted for determinism.
    """
    from . import __version__

    digests = {str(Path(p)): file_digest(p) for p in inputs}
    manifest = {
        "tool": "copticforge",
        "version": version if version is not None else __version__,
        "output": Path(output).name,
        "config_hash": params_hash(params),
        "seed": seed,
        "inputs": {name: digests[name] for name in sorted(digests)},
    }
    target = manifest_path(output)
    write_json(target, manifest)
    return target
