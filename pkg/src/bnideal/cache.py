"""Content-addressed on-disk cache of Groebner bases.

Enabled when ``BNIDEAL_CACHE`` names a directory (or :func:`configure` is
called).  Keys hash the canonical generator strings, the order descriptor and
the field characteristic.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

_dir: Path | None = None
_configured = False


def configure(directory: str | os.PathLike | None) -> None:
    global _dir, _configured
    _dir = Path(directory) if directory else None
    if _dir is not None:
        _dir.mkdir(parents=True, exist_ok=True)
    _configured = True


def directory() -> Path | None:
    if not _configured:
        env = os.environ.get("BNIDEAL_CACHE")
        configure(env or None)
    return _dir


def cache_key(ring, generators, order) -> str:
    h = hashlib.sha256()
    h.update(str(ring.field.characteristic).encode())
    h.update(b"|")
    h.update(",".join(str(v) for v in ring.variables).encode())
    h.update(b"|")
    h.update(order.descriptor().encode())
    for s in sorted(g.to_string() for g in generators):
        h.update(b"\n")
        h.update(s.encode())
    return h.hexdigest()


def load(ring, generators, order):
    d = directory()
    if d is None:
        return None
    path = d / f"{cache_key(ring, generators, order)}.json"
    if not path.exists():
        return None
    from .groebner import GroebnerBasis
    data = json.loads(path.read_text())
    polys = [ring.parse(s) for s in data["generators"]]
    return GroebnerBasis(ring, order, polys)


def store(basis, generators) -> None:
    d = directory()
    if d is None or basis.truncated_at is not None:
        return
    path = d / f"{cache_key(basis.ring, generators, basis.order)}.json"
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps({"order": basis.order.descriptor(),
                               "generators": [g.to_string() for g in basis.generators]}))
    tmp.replace(path)
