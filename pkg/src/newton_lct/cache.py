"""On-disk store for sequence terms, keyed by a content hash of (presentation, j)."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from .monomial import MonomialIdeal

ENV_VAR = "NEWTON_LCT_CACHE"
log = logging.getLogger(__name__)


def _digest(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


class TermCache:
    """Each entry stores the term together with a sha256 of its canonical body.

    Entries whose digest does not match are treated as misses and overwritten.
    An unusable directory disables the cache with a warning.
    """

    def __init__(self, directory):
        self.directory = Path(directory)
        self.enabled = True
        self.hits = 0
        self.misses = 0
        self.corrupt = 0
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            probe = tempfile.NamedTemporaryFile(dir=self.directory, delete=True)
            probe.close()
        except OSError as exc:
            log.warning("cache directory %s is not writable (%s); continuing uncached", directory, exc)
            self.enabled = False

    @classmethod
    def from_env(cls, directory=None) -> "TermCache | None":
        directory = directory or os.environ.get(ENV_VAR)
        return cls(directory) if directory else None

    def path(self, key: str, j: int) -> Path:
        name = hashlib.sha256(f"{key}\0{j}".encode()).hexdigest()
        return self.directory / name[:2] / f"{name}.json"

    def get(self, key: str, j: int) -> MonomialIdeal | None:
        if not self.enabled:
            return None
        p = self.path(key, j)
        try:
            doc = json.loads(p.read_text())
            body = doc["body"]
            if doc["sha256"] != _digest(body) or body["key"] != key or body["j"] != j:
                raise ValueError("digest mismatch")
            a = MonomialIdeal(body["dim"], tuple(tuple(g) for g in body["generators"]))
        except FileNotFoundError:
            self.misses += 1
            return None
        except (OSError, ValueError, KeyError, TypeError) as exc:
            log.warning("discarding corrupted cache entry %s (%s)", p.name, exc)
            self.corrupt += 1
            self.misses += 1
            return None
        self.hits += 1
        return a

    def put(self, key: str, j: int, a: MonomialIdeal) -> None:
        if not self.enabled:
            return
        body = {"key": key, "j": j, "dim": a.dim, "generators": [list(g) for g in a.generators]}
        doc = {"body": body, "sha256": _digest(body)}
        p = self.path(key, j)
        try:
            p.parent.mkdir(exist_ok=True)
            tmp = p.with_suffix(f".{os.getpid()}.tmp")
            tmp.write_text(json.dumps(doc, sort_keys=True))
            os.replace(tmp, p)
        except OSError as exc:
            log.warning("cache write failed (%s); continuing uncached", exc)
            self.enabled = False

    def stats(self) -> dict:
        return {"hits": self.hits, "misses": self.misses, "corrupt": self.corrupt, "enabled": self.enabled}
