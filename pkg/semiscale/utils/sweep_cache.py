"""
Memory cache for difference profiles.

A profile is the matrix |T(t)f - f| (or |lambda R(lambda)f - f|) sampled on the
estimation grid for every probe parameter. Favard, little-Hölder, bi-continuous,
exponent and interpolation estimates of one function share the same profile.
"""

import logging
import threading
from collections import OrderedDict
from collections.abc import Callable, Hashable
from typing import Any

import numpy as np

from ..config import Config

logger = logging.getLogger(__name__)


class SweepCache:
    """
    LRU cache of profile matrices keyed by (family, function, grid, parameter grid).

    Features:
    - LRU eviction when the entry limit is reached
    - Per-entry size limit; oversized profiles are computed but not stored
    - Thread-safe get/put so runner workers may share one instance
    """

    def __init__(self, max_entries: int | None = None, max_mb: int | None = None):
        """
        Initialize the cache.

        Args:
            max_entries: Maximum number of profiles kept; defaults to config cache_max_entries
            max_mb: Maximum size in MB of a single profile; defaults to config cache_max_mb
        """
        config = Config()
        self.max_entries = int(max_entries if max_entries is not None else config.get("cache_max_entries"))
        self.max_mb = int(max_mb if max_mb is not None else config.get("cache_max_mb"))
        self.max_bytes = self.max_mb * 1024 * 1024
        self.cache: OrderedDict[Hashable, np.ndarray] = OrderedDict()
        self._lock = threading.Lock()

        # Statistics
        self.hits = 0
        self.misses = 0
        self.evictions = 0
        self.size_rejections = 0

    def get(self, key: Hashable) -> np.ndarray | None:
        """Return the cached profile or None."""
        with self._lock:
            if key in self.cache:
                self.cache.move_to_end(key)
                self.hits += 1
                logger.debug(f"[Cache] Profile hit ({len(self.cache)} cached)")
                return self.cache[key]
            self.misses += 1
            return None

    def put(self, key: Hashable, profile: np.ndarray) -> bool:
        """
        Store a profile.

        Returns:
            True if cached, False if the profile exceeds the size limit
        """
        size = self._estimate_size(profile)
        if size > self.max_bytes:
            with self._lock:
                self.size_rejections += 1
            logger.warning(f"[Cache] Skipping profile of {size / 1024 / 1024:.1f}MB > {self.max_mb}MB limit")
            return False

        profile = np.array(profile, copy=True)
        profile.setflags(write=False)
        with self._lock:
            if key in self.cache:
                self.cache.pop(key)
            while self.max_entries > 0 and len(self.cache) >= self.max_entries:
                self.cache.popitem(last=False)
                self.evictions += 1
                logger.debug("[Cache] Evicted least recently used profile")
            if self.max_entries > 0:
                self.cache[key] = profile
        return self.max_entries > 0

    def get_or_compute(self, key: Hashable, compute: Callable[[], np.ndarray]) -> np.ndarray:
        """Return the cached profile, computing and storing it on a miss."""
        cached = self.get(key)
        if cached is not None:
            return cached
        profile = compute()
        self.put(key, profile)
        return profile

    def invalidate(self, key: Hashable) -> bool:
        """Remove one profile; True if it was cached."""
        with self._lock:
            if key in self.cache:
                del self.cache[key]
                return True
            return False

    def clear(self):
        """Clear all cached profiles."""
        with self._lock:
            count = len(self.cache)
            self.cache.clear()
        logger.debug(f"[Cache] Cleared {count} profiles")

    def get_stats(self) -> dict[str, Any]:
        """
        Get cache statistics.

        Returns:
            Dictionary with cache metrics
        """
        with self._lock:
            total = sum(self._estimate_size(p) for p in self.cache.values())
            lookups = self.hits + self.misses
            return {
                "profiles_cached": len(self.cache),
                "max_entries": self.max_entries,
                "total_size_mb": total / 1024 / 1024,
                "hits": self.hits,
                "misses": self.misses,
                "hit_rate": (self.hits / lookups) * 100 if lookups else 0.0,
                "evictions": self.evictions,
                "size_rejections": self.size_rejections,
            }

    def _estimate_size(self, profile: np.ndarray) -> int:
        return int(np.asarray(profile).nbytes)
