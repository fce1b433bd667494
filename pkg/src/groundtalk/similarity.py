"""Word and phrase similarity providers gating all graph matching.

Three interchangeable providers:

* ``exact``   - normalized string equality only.
* ``lexicon`` - equality plus a symmetric synonym pair list.
* ``vectors`` - cosine similarity over a static word vector file, remapped
  from [-1, 1] to [0, 1]; multiword phrases average their token vectors.

A pair matches when it is equal after normalization, marked synonymous by
the lexicon, or scores at least the configured threshold (default 0.8).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ProviderUnavailable
from .model import normalize_token

DEFAULT_THRESHOLD = 0.8
PROVIDERS = ("exact", "lexicon", "vectors")

_DATA_DIR = Path(__file__).parent / "data"


def bundled_lexicon_path() -> Path:
    return _DATA_DIR / "lexicon.tsv"


def bundled_vectors_path() -> Path:
    return _DATA_DIR / "vectors.txt"


@dataclass(frozen=True)
class SimilarityConfig:
    threshold: float = DEFAULT_THRESHOLD
    provider: str = "lexicon"
    lexicon_path: Optional[Path] = None
    vectors_path: Optional[Path] = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must be in [0, 1], got {self.threshold}")
        if self.provider not in PROVIDERS:
            raise ValueError(f"provider must be one of {PROVIDERS}, got {self.provider!r}")
        if self.provider == "vectors" and self.vectors_path is None:
            raise ValueError("provider=vectors requires vectors_path")


def _load_lexicon(path: Path) -> frozenset[frozenset[str]]:
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ProviderUnavailable(f"lexicon file unreadable: {path} ({exc})") from exc
    pairs = set()
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ProviderUnavailable(
                f"lexicon line {lineno}: expected 'word_a<TAB>word_b', got {line!r}"
            )
        a, b = (normalize_token(p) for p in parts)
        if a != b:
            pairs.add(frozenset((a, b)))
    return frozenset(pairs)


def _load_vectors(path: Path) -> dict[str, np.ndarray]:
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ProviderUnavailable(f"vector file unreadable: {path} ({exc})") from exc
    vectors: dict[str, np.ndarray] = {}
    dim: Optional[int] = None
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise ProviderUnavailable(f"vector line {lineno}: token plus values expected")
        token = normalize_token(parts[0])
        try:
            values = np.array([float(v) for v in parts[1:]], dtype=np.float64)
        except ValueError as exc:
            raise ProviderUnavailable(f"vector line {lineno}: bad number ({exc})") from exc
        if dim is None:
            dim = values.size
        elif values.size != dim:
            raise ProviderUnavailable(
                f"vector line {lineno}: dimension {values.size} != {dim}"
            )
        vectors[token] = values
    if not vectors:
        raise ProviderUnavailable(f"vector file has no entries: {path}")
    return vectors


class SimilarityProvider:
    """Read-only matcher; safe to share across threads once constructed."""

    def __init__(self, config: SimilarityConfig | None = None):
        self.config = config or SimilarityConfig()
        self.threshold = self.config.threshold
        self._lexicon: frozenset[frozenset[str]] = frozenset()
        self._vectors: dict[str, np.ndarray] = {}
        kind = self.config.provider
        if kind == "lexicon":
            path = Path(self.config.lexicon_path or bundled_lexicon_path())
            self._lexicon = _load_lexicon(path)
        elif kind == "vectors":
            assert self.config.vectors_path is not None
            self._vectors = _load_vectors(Path(self.config.vectors_path))
            if self.config.lexicon_path is not None:
                self._lexicon = _load_lexicon(Path(self.config.lexicon_path))

    def _phrase_vector(self, phrase: str) -> Optional[np.ndarray]:
        words = phrase.split()
        rows = []
        for w in words:
            vec = self._vectors.get(w)
            if vec is None:
                return None  # fail closed on any out-of-vocabulary word
            rows.append(vec)
        return np.mean(rows, axis=0)

    def _in_lexicon(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self._lexicon

    def similarity(self, a: str, b: str) -> float:
        """Score in [0, 1]; symmetric; 1.0 for identical normalized tokens."""
        a, b = normalize_token(a), normalize_token(b)
        if a == b:
            return 1.0
        if self.config.provider == "exact":
            return 0.0
        if self.config.provider == "lexicon":
            return 1.0 if self._in_lexicon(a, b) else 0.0
        va, vb = self._phrase_vector(a), self._phrase_vector(b)
        if va is None or vb is None:
            return 0.0
        denom = float(np.linalg.norm(va)) * float(np.linalg.norm(vb))
        if denom == 0.0:
            return 0.0
        cosine = float(np.dot(va, vb)) / denom
        return (cosine + 1.0) / 2.0

    def is_match(self, a: str, b: str) -> bool:
        """Equality, then lexicon, then thresholded similarity, in that order."""
        a, b = normalize_token(a), normalize_token(b)
        if a == b:
            return True
        if self._in_lexicon(a, b):
            return True
        return self.similarity(a, b) >= self.threshold

    def is_exact(self, a: str, b: str) -> bool:
        """Normalized string equality, ignoring the similarity gate."""
        return normalize_token(a) == normalize_token(b)


def build_provider(
    spec: str = "lexicon",
    threshold: float = DEFAULT_THRESHOLD,
) -> SimilarityProvider:
    """Construct a provider from a CLI-style spec string.

    Accepted forms: ``exact``, ``lexicon``, ``lexicon:<path>``,
    ``vectors`` (bundled file), ``vectors:<path>``.
    """
    kind, _, path = spec.partition(":")
    kind = kind.strip().lower()
    path = path.strip()
    if kind == "exact":
        config = SimilarityConfig(threshold=threshold, provider="exact")
    elif kind == "lexicon":
        config = SimilarityConfig(
            threshold=threshold,
            provider="lexicon",
            lexicon_path=Path(path) if path else None,
        )
    elif kind == "vectors":
        config = SimilarityConfig(
            threshold=threshold,
            provider="vectors",
            vectors_path=Path(path) if path else bundled_vectors_path(),
        )
    else:
        raise ValueError(f"unknown similarity provider spec: {spec!r}")
    return SimilarityProvider(config)
