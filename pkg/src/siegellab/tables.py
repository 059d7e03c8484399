"""Dense arithmetic-function tables and their flat binary serialization.

An ArithTable stores f(1..limit) in a numpy array of length limit+1; index 0 is
a dead slot kept at zero so that values[n] is f(n) without offset bookkeeping.
Integer tables are exact int64, real tables are float64.  The provenance string
fully determines the contents: rebuilding from the same provenance reproduces
the table bit for bit, which is what makes it usable as a cache key.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import CapacityError

MAGIC = b"SLTB1\n"

# Hard cap on table indices; guards against accidental memory blowups.
DEFAULT_LIMIT_CAP = 10**8

_KIND_DTYPE = {"integer": np.dtype("<i8"), "real": np.dtype("<f8")}


def ensure_capacity(limit: int, cap: int | None = None) -> None:
    budget = DEFAULT_LIMIT_CAP if cap is None else cap
    if limit > budget:
        raise CapacityError(f"limit {limit} exceeds capacity budget {budget}")


def provenance_hash(provenance: str) -> str:
    return hashlib.sha256(provenance.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class ArithTable:
    name: str
    limit: int
    values: np.ndarray
    value_kind: str  # "integer" | "real"
    provenance: str

    def __post_init__(self):
        if self.value_kind not in _KIND_DTYPE:
            raise ValueError(f"unknown value_kind {self.value_kind!r}")
        if self.limit < 1:
            raise ValueError("limit must be >= 1")
        if self.values.shape != (self.limit + 1,):
            raise ValueError(
                f"values length {self.values.shape} does not match limit {self.limit}"
            )
        want = _KIND_DTYPE[self.value_kind]
        if self.values.dtype != want:
            raise ValueError(f"{self.value_kind} table requires dtype {want}")
        self.values.flags.writeable = False

    def __getitem__(self, n):
        return self.values[n]

    @property
    def provenance_hash(self) -> str:
        return provenance_hash(self.provenance)

    def content_hash(self) -> str:
        return hashlib.sha256(self.values.tobytes()).hexdigest()[:16]

    def save(self, path: str | Path) -> None:
        header = {
            "name": self.name,
            "limit": self.limit,
            "value_kind": self.value_kind,
            "provenance": self.provenance,
            "provenance_hash": self.provenance_hash,
            "dtype": str(self.values.dtype),
        }
        blob = json.dumps(header, sort_keys=True).encode("utf-8")
        tmp = Path(str(path) + ".tmp")
        with open(tmp, "wb") as fh:
            fh.write(MAGIC)
            fh.write(len(blob).to_bytes(4, "big"))
            fh.write(blob)
            fh.write(self.values.tobytes())
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str | Path) -> "ArithTable":
        with open(path, "rb") as fh:
            if fh.read(len(MAGIC)) != MAGIC:
                raise ValueError(f"{path}: not a table file")
            hlen = int.from_bytes(fh.read(4), "big")
            header = json.loads(fh.read(hlen).decode("utf-8"))
            raw = fh.read()
        dtype = _KIND_DTYPE[header["value_kind"]]
        values = np.frombuffer(raw, dtype=dtype)
        if values.shape[0] != header["limit"] + 1:
            raise ValueError(f"{path}: body length does not match header limit")
        return cls(
            name=header["name"],
            limit=header["limit"],
            values=values.copy(),
            value_kind=header["value_kind"],
            provenance=header["provenance"],
        )


@dataclass(frozen=True)
class SpfTable:
    """Smallest-prime-factor table: spf[n] for 2 <= n <= limit, spf[0] = spf[1] = 0."""

    limit: int
    spf: np.ndarray

    def __post_init__(self):
        if self.spf.shape != (self.limit + 1,):
            raise ValueError("spf length does not match limit")
        self.spf.flags.writeable = False

    def __getitem__(self, n) -> int:
        return int(self.spf[n])

    @property
    def provenance(self) -> str:
        return f"spf(limit={self.limit})"

    def as_table(self) -> ArithTable:
        return ArithTable("spf", self.limit, self.spf.astype("<i8"), "integer", self.provenance)

    @classmethod
    def from_table(cls, table: ArithTable) -> "SpfTable":
        return cls(limit=table.limit, spf=table.values)


class TableCache:
    """Disk-backed table store keyed by provenance hash.

    With root=None the cache degrades to per-process memoization only.
    """

    def __init__(self, root: str | Path | None = None):
        self.root = Path(root) if root is not None else None
        if self.root is not None:
            self.root.mkdir(parents=True, exist_ok=True)
        self._memo: dict[str, ArithTable] = {}

    def path_for(self, provenance: str) -> Path | None:
        if self.root is None:
            return None
        return self.root / f"{provenance_hash(provenance)}.tbl"

    def get(self, provenance: str, builder: Callable[[], ArithTable]) -> ArithTable:
        hit = self._memo.get(provenance)
        if hit is not None:
            return hit
        path = self.path_for(provenance)
        if path is not None and path.exists():
            table = ArithTable.load(path)
            if table.provenance != provenance:
                raise ValueError(
                    f"{path}: stored provenance {table.provenance!r} != requested {provenance!r}"
                )
            self._memo[provenance] = table
            return table
        table = builder()
        if table.provenance != provenance:
            raise ValueError(
                f"builder produced provenance {table.provenance!r}, expected {provenance!r}"
            )
        if path is not None:
            table.save(path)
        self._memo[provenance] = table
        return table
