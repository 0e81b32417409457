"""On-disk cache for exact integer q-expansions.

One file per (kind, ring) pair holds the longest expansion computed so far:

    upslopes-series 1 kind=<kind> ring=<exact|p> low=<low> qprec=<qprec> sha256=<digest>
    <coefficient of q^low>
    ...

Writes go to a temporary file in the same directory and are renamed into
place, so concurrent jobs never observe a half-written entry.  Unreadable
entries (bad header, wrong length or digest mismatch) are treated as misses.
"""
from __future__ import annotations

import hashlib
import logging
import os
import re
import tempfile
from pathlib import Path
from typing import Callable

from .qseries import ZZ, LaurentSeries

FORMAT_VERSION = 1
ENV_VAR = "UPSLOPES_CACHE_DIR"

log = logging.getLogger(__name__)

_HEADER = re.compile(
    r"^upslopes-series (\d+) kind=([\w.-]+) ring=([\w]+) low=(-?\d+) qprec=(-?\d+) sha256=([0-9a-f]{64})$"
)


def _digest(lines: list[str]) -> str:
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()


class SeriesCache:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)

    def _path(self, kind: str, ring: str) -> Path:
        return self.directory / f"{kind}-{ring}.v{FORMAT_VERSION}.txt"

    def _read(self, path: Path, kind: str, ring: str) -> LaurentSeries | None:
        try:
            text = path.read_text()
        except FileNotFoundError:
            return None
        except OSError as exc:
            log.warning("cannot read cache entry %s: %s", path, exc)
            return None
        lines = text.splitlines()
        m = _HEADER.match(lines[0]) if lines else None
        try:
            if not m:
                raise ValueError("bad header")
            version, k, r, low, qprec, digest = m.groups()
            if int(version) != FORMAT_VERSION or k != kind or r != ring:
                raise ValueError("header does not match the key")
            if _digest(lines[1:]) != digest:
                raise ValueError("digest mismatch")
            low, qprec = int(low), int(qprec)
            coeffs = [int(x) for x in lines[1:]]
            if len(coeffs) != qprec - low:
                raise ValueError("wrong number of coefficients")
        except ValueError as exc:
            log.warning("ignoring corrupt cache entry %s (%s)", path, exc)
            return None
        return LaurentSeries(ZZ, low, coeffs, qprec)

    def get(self, kind: str, ring: str, qprec: int) -> LaurentSeries | None:
        """The stored series truncated to ``qprec``, or None when absent or too short."""
        f = self._read(self._path(kind, ring), kind, ring)
        if f is None or f.qprec < qprec:
            return None
        return f.truncate(qprec)

    def put(self, kind: str, ring: str, series: LaurentSeries) -> None:
        if series.ring is not ZZ:
            raise TypeError("only integer series are cached")
        path = self._path(kind, ring)
        old = self._read(path, kind, ring)
        if old is not None and old.qprec >= series.qprec:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        coeffs = [str(c) for c in series.coeffs]
        header = (
            f"upslopes-series {FORMAT_VERSION} kind={kind} ring={ring} "
            f"low={series.low} qprec={series.qprec} sha256={_digest(coeffs)}"
        )
        body = [header] + coeffs
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".txt")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write("\n".join(body) + "\n")
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def get_or_compute(self, kind: str, ring: str, qprec: int, compute: Callable[[int], LaurentSeries]) -> LaurentSeries:
        hit = self.get(kind, ring, qprec)
        if hit is not None:
            return hit
        f = compute(qprec)
        self.put(kind, ring, f)
        return f


def cache_get(cache: SeriesCache, key: tuple[str, str, int]) -> LaurentSeries | None:
    return cache.get(*key)


def cache_put(cache: SeriesCache, key: tuple[str, str], series: LaurentSeries) -> None:
    cache.put(*key, series)


def default_cache(flag: str | None = None) -> SeriesCache | None:
    """The flag wins over the environment; neither means no cache."""
    directory = flag or os.environ.get(ENV_VAR)
    return SeriesCache(directory) if directory else None
