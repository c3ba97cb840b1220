"""
Rank Cache

Boundary ranks are recomputed constantly: the same base boundary shows up
for every trivial cover, restrictions repeat across cover families, and
each Betti number needs two ranks. Ranks are cached by a content digest of
the matrix plus the field tag.
"""

from typing import Dict, Optional
import hashlib
import threading

from homology.linalg import Field, SparseMatrix, rank


class RankCache:
    """In-memory rank cache keyed by sha256 of the matrix entries.

    The key covers shape and every entry, so two different matrices never
    share a rank in practice.
    """

    def __init__(self, max_entries: int = 100_000):
        self.max_entries = max_entries
        self._cache: Dict[str, int] = {}
        self._hits = 0
        self._misses = 0
        self._lock = threading.Lock()

    def get(self, matrix: SparseMatrix, field: Field) -> Optional[int]:
        key = self._key(matrix, field)
        with self._lock:
            if key in self._cache:
                self._hits += 1
                return self._cache[key]
            self._misses += 1
            return None

    def set(self, matrix: SparseMatrix, field: Field, value: int):
        key = self._key(matrix, field)
        with self._lock:
            if len(self._cache) >= self.max_entries:
                self._cache.clear()
            self._cache[key] = value

    def rank(self, matrix: SparseMatrix, field: Field) -> int:
        """Cached rank; computes and stores on a miss."""
        if matrix.n_rows == 0 or matrix.n_cols == 0:
            return 0
        cached = self.get(matrix, field)
        if cached is not None:
            return cached
        value = rank(matrix, field)
        self.set(matrix, field, value)
        return value

    def clear(self):
        with self._lock:
            self._cache.clear()
            self._hits = 0
            self._misses = 0

    @staticmethod
    def _key(matrix: SparseMatrix, field: Field) -> str:
        return hashlib.sha256(f"{field.tag}:{matrix.digest()}".encode()).hexdigest()

    def stats(self) -> Dict[str, float]:
        total = self._hits + self._misses
        hit_rate = self._hits / total if total > 0 else 0
        return {
            "hits": self._hits,
            "misses": self._misses,
            "hit_rate": hit_rate,
            "size": len(self._cache),
        }


default_rank_cache = RankCache()
