"""Content-addressed on-disk memoization of hom-category enumerations."""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path

from .categories import Morphism
from .enumeration import HomCategory, Multifunctor
from .serialize import canonical_json, digest

log = logging.getLogger(__name__)

FORMAT = 1


class ResultCache:
    """JSON files named by the sha256 of their key; writes are atomic renames.

    Unusable directories turn caching off with a warning; unreadable or
    mismatched entries are treated as misses and overwritten.
    """

    def __init__(self, directory: str | Path):
        self.dir = Path(directory)
        self.enabled = True
        try:
            self.dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            self._disable(f"cannot create cache directory {self.dir}: {exc}")
            return
        if not os.access(self.dir, os.W_OK):
            self._disable(f"cache directory {self.dir} is not writable")

    def _disable(self, why: str) -> None:
        log.warning("%s; caching disabled", why)
        self.enabled = False

    @staticmethod
    def key(*parts) -> str:
        return digest([FORMAT, *parts])

    def _path(self, key: str) -> Path:
        return self.dir / f"{key}.json"

    def get(self, key: str):
        path = self._path(key)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text("utf-8"))
            if entry.get("key") != key:
                raise ValueError("key mismatch")
            return entry["payload"]
        except (OSError, ValueError, KeyError, AttributeError) as exc:
            log.warning("ignoring corrupt cache entry %s (%s)", path.name, exc)
            return None

    def put(self, key: str, payload) -> None:
        if not self.enabled:
            return
        try:
            fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".json")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(canonical_json({"key": key, "payload": payload}))
            os.replace(tmp, self._path(key))
        except OSError as exc:
            self._disable(f"cannot write cache entry: {exc}")


def encode_level(H: HomCategory) -> dict:
    """Functors and every computed hom-set, as positions inside the target's hom-sets."""
    M = H.target
    functors = []
    for F in H.functors:
        objs = [M.object_index(y) for y in F.objects]
        arrs = [M.hom_index(a) for a in F.arrows]
        functors.append([objs, arrs])
    homs = {}
    for (i, j), arrows in sorted(H._homs.items()):
        homs[f"{i},{j}"] = [[M.hom_index(c) for c in t.data] for t in arrows]
    return {"functors": functors, "homs": homs}


def decode_level(S, M, data: dict, budget) -> HomCategory:
    src_arrows = S.arrows()
    functors = []
    for objs, arrs in data["functors"]:
        objects = tuple(M.objects[k] for k in objs)
        pos = {x: objects[i] for i, x in enumerate(S.objects)}
        images = tuple(
            M.hom(tuple(pos[a] for a in f.source), pos[f.target])[k] for f, k in zip(src_arrows, arrs)
        )
        functors.append(Multifunctor(S, M, objects, images))
    H = HomCategory(S, M, budget, functors=functors)
    for key, rows in data["homs"].items():
        i, j = map(int, key.split(","))
        F, G = H.functors[i], H.functors[j]
        homs = [M.hom((F.objects[p],), G.objects[p]) for p in range(len(S.objects))]
        H.prefill(i, j, [Morphism(i, j, tuple(homs[p][k] for p, k in enumerate(row))) for row in rows])
    return H
