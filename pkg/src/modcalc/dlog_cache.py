"""
Power tables for discrete logarithms, cached as JSON documents on disk.

A table for (p, m, e) lists e^0, e^1, ... mod p^m over one full period.
Files are written through a temporary file and os.replace, so readers see
either nothing or a whole document. Unreadable or inconsistent files are
rebuilt.
"""
import json
import logging
import os
import tempfile
import threading
from math import isqrt
from pathlib import Path

from src.modcalc.core_ring import DomainError

logger = logging.getLogger(__name__)

# mod-p logs above this prime use baby-step/giant-step instead of a table
TABLE_LIMIT = 10 ** 4


def bsgs(g, h, n, order):
    """Smallest x in [0, order) with g^x == h (mod n), or None."""
    h %= n
    if order <= 0:
        return None
    step = isqrt(order)
    if step * step < order:
        step += 1

    baby = {}
    pw = 1
    for j in range(step):
        baby.setdefault(pw, j)
        pw = pw * g % n

    giant = pow(g, -step, n)
    gamma = h
    for i in range(step + 1):
        if gamma in baby:
            x = i * step + baby[gamma]
            if x < order:
                return x
        gamma = gamma * giant % n
    return None


class DlogCache:
    def __init__(self, directory=".cache/dlog", enabled=True):
        self.directory = Path(directory)
        self.enabled = enabled
        self._tables = {}
        self._lock = threading.Lock()

    def path_for(self, p, m, e):
        return self.directory / f"dlog_p{p}_m{m}_e{e}.json"

    def powers(self, p, m, e):
        """Power table of e mod p^m, loaded from memory, disk, or built."""
        key = (p, m, e)
        with self._lock:
            if key in self._tables:
                return self._tables[key]
        table = self._load(p, m, e) if self.enabled else None
        if table is None:
            table = self._build(p, m, e)
            if self.enabled:
                self._store(p, m, e, table)
        with self._lock:
            self._tables.setdefault(key, table)
            return self._tables[key]

    def index(self, p, m, e):
        """Inverse map value -> exponent for the power table."""
        return {v: j for j, v in enumerate(self.powers(p, m, e))}

    def log_mod_p(self, x, p, e):
        """Exponent j in [0, p-1) with e^j == x (mod p)."""
        if x % p == 0:
            raise DomainError(f"{x} is not a unit mod {p}")
        if p >= TABLE_LIMIT:
            j = bsgs(e, x, p, p - 1)
            if j is None:
                raise DomainError(f"{e} does not reach {x} mod {p}")
            return j
        return self.index(p, 1, e % p)[x % p]

    def _build(self, p, m, e):
        n = p ** m
        logger.info(f"Building power table for e={e} mod {p}^{m}")
        table = [1]
        value = e % n
        while value != 1:
            table.append(value)
            value = value * e % n
            if len(table) > n:
                raise DomainError(f"{e} is not a unit mod {n}")
        return table

    def _load(self, p, m, e):
        path = self.path_for(p, m, e)
        if not path.exists():
            return None
        try:
            with open(path, 'r', encoding='utf-8') as f:
                doc = json.load(f)
            powers = doc["powers"]
            n = p ** m
            if (doc["p"], doc["m"], doc["e"], doc["modulus"]) != (p, m, e, n):
                raise ValueError("header mismatch")
            if not powers or powers[0] != 1 or (len(powers) > 1 and powers[1] != e % n):
                raise ValueError("bad power sequence")
            if powers[-1] * e % n != 1:
                raise ValueError("table does not close")
            return powers
        except (OSError, ValueError, KeyError, TypeError) as err:
            logger.warning(f"Discarding corrupt cache file {path}: {err}")
            return None

    def _store(self, p, m, e, table):
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path_for(p, m, e)
        doc = {"p": p, "m": m, "e": e, "modulus": p ** m, "powers": table}
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, 'w', encoding='utf-8') as f:
                json.dump(doc, f)
            os.replace(tmp, path)
        except OSError as err:
            logger.warning(f"Could not write cache file {path}: {err}")
            if os.path.exists(tmp):
                os.remove(tmp)

    def inspect(self):
        """Summary of every cache file in the directory."""
        entries = []
        if not self.directory.exists():
            return entries
        for path in sorted(self.directory.glob("dlog_*.json")):
            try:
                with open(path, 'r', encoding='utf-8') as f:
                    doc = json.load(f)
                entries.append({
                    'file': path.name, 'p': doc.get("p"), 'm': doc.get("m"), 'e': doc.get("e"),
                    'size': len(doc.get("powers", [])), 'valid': self._load(doc["p"], doc["m"], doc["e"]) is not None,
                })
            except (OSError, ValueError, KeyError) as err:
                entries.append({'file': path.name, 'valid': False, 'error': str(err)})
        return entries

    def clear(self):
        removed = 0
        if self.directory.exists():
            for path in self.directory.glob("dlog_*.json"):
                path.unlink()
                removed += 1
        with self._lock:
            self._tables.clear()
        logger.info(f"Removed {removed} cache files from {self.directory}")
        return removed


_default_cache = DlogCache(enabled=False)


def default_cache():
    return _default_cache


def configure_default_cache(directory, enabled):
    """Point the process-wide cache at a directory (called once by the CLI)."""
    global _default_cache
    _default_cache = DlogCache(directory, enabled)
    return _default_cache
