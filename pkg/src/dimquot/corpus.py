"""The built-in group corpus, pinned in ``data/corpus.json``."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .groups import FamilyGroup, GroupError, build_family


@dataclass(frozen=True)
class Manifest:
    version: int
    abelian: tuple[str, ...]
    nonabelian: tuple[str, ...]

    @property
    def specs(self) -> tuple[str, ...]:
        return self.abelian + self.nonabelian


def load_manifest(path: str | None = None) -> Manifest:
    if path is None:
        text = resources.files("dimquot").joinpath("data/corpus.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
        return Manifest(int(doc["version"]), tuple(doc.get("abelian", ())), tuple(doc.get("nonabelian", ())))
    except (KeyError, TypeError, ValueError) as exc:
        raise GroupError(f"malformed corpus manifest: {exc}") from None


@lru_cache(maxsize=None)
def _build(spec: str) -> FamilyGroup:
    return build_family(spec)


def corpus_groups(manifest: Manifest | None = None, abelian: bool = True,
                  nonabelian: bool = True) -> list[FamilyGroup]:
    m = manifest or load_manifest()
    specs = (m.abelian if abelian else ()) + (m.nonabelian if nonabelian else ())
    return [_build(s) for s in specs]


def corpus_pairs(manifest: Manifest | None = None) -> list[tuple[str, str, FamilyGroup, object]]:
    """``(E, N)`` pairs: ``N`` in ``{1, gamma_2(E), E}`` plus any family subgroup."""
    out = []
    for fam in corpus_groups(manifest, abelian=False):
        E = fam.group
        if fam.subgroup is not None:
            out.append((fam.spec, "N", fam, fam.subgroup))
        out.append((fam.spec, "1", fam, E.trivial()))
        out.append((fam.spec, "gamma2", fam, E.derived_subgroup))
        out.append((fam.spec, "E", fam, E.whole()))
    return out


__all__ = ["Manifest", "load_manifest", "corpus_groups", "corpus_pairs"]
