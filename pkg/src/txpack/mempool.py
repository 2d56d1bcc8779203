"""Domain types for transactions and mempools, plus JSON ingestion.

Wire format: ``{"transactions": [{"id": int, "gas_price": num, "size": num}, ...]}``
with ``size`` defaulting to 1.0. Input order is preserved and acts as the
canonical tie-break order everywhere else in the package.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class Transaction:
    """One mempool order: id, bid per unit capacity, and capacity usage."""

    id: int
    gas_price: float
    size: float = 1.0

    def __post_init__(self):
        if not isinstance(self.id, (int, np.integer)) or self.id < 0:
            raise ValidationError(f"transaction id must be a non-negative integer, got {self.id!r}")
        if not self.gas_price > 0:
            raise ValidationError(f"transaction {self.id}: gas_price must be > 0, got {self.gas_price!r}")
        if not self.size > 0:
            raise ValidationError(f"transaction {self.id}: size must be > 0, got {self.size!r}")

    @property
    def gas_fee(self) -> float:
        return self.gas_price * self.size


class Mempool:
    """Immutable ordered collection of transactions with unique ids.

    Exposes numpy views (prices, sizes, log-prices) aligned to input order;
    all solver math is vectorized over these arrays.
    """

    def __init__(self, transactions):
        txs = tuple(transactions)
        seen = set()
        for tx in txs:
            if tx.id in seen:
                raise ValidationError(f"duplicate transaction id {tx.id}")
            seen.add(tx.id)
        self._txs = txs
        self.ids = np.array([tx.id for tx in txs], dtype=np.int64)
        self.prices = np.array([tx.gas_price for tx in txs], dtype=np.float64)
        self.sizes = np.array([tx.size for tx in txs], dtype=np.float64)
        self.log_prices = np.log(self.prices)
        for arr in (self.ids, self.prices, self.sizes, self.log_prices):
            arr.setflags(write=False)
        self._index = {tx.id: i for i, tx in enumerate(txs)}

    @classmethod
    def from_arrays(cls, ids, gas_prices, sizes=None) -> "Mempool":
        """Bulk constructor that validates vectorized, skipping per-object checks."""
        ids = np.asarray(ids, dtype=np.int64)
        prices = np.asarray(gas_prices, dtype=np.float64)
        sizes = np.ones_like(prices) if sizes is None else np.asarray(sizes, dtype=np.float64)
        if np.any(ids < 0):
            raise ValidationError("transaction ids must be non-negative")
        if len(np.unique(ids)) != len(ids):
            raise ValidationError("duplicate transaction ids")
        if np.any(prices <= 0):
            bad = ids[prices <= 0][0]
            raise ValidationError(f"transaction {bad}: gas_price must be > 0")
        if np.any(sizes <= 0):
            bad = ids[sizes <= 0][0]
            raise ValidationError(f"transaction {bad}: size must be > 0")
        self = cls.__new__(cls)
        self._txs = None  # materialized lazily
        self.ids = ids
        self.prices = prices
        self.sizes = sizes
        self.log_prices = np.log(prices)
        for arr in (self.ids, self.prices, self.sizes, self.log_prices):
            arr.setflags(write=False)
        self._index = None
        return self

    @property
    def transactions(self) -> tuple:
        if self._txs is None:
            self._txs = tuple(
                Transaction(int(i), float(v), float(s))
                for i, v, s in zip(self.ids, self.prices, self.sizes)
            )
        return self._txs

    @property
    def total_size(self) -> float:
        # Recomputed on access so it can never go stale.
        return float(self.sizes.sum())

    @property
    def is_unit_size(self) -> bool:
        return bool(np.all(self.sizes == 1.0))

    def index_of(self, txid: int) -> int:
        if self._index is None:
            self._index = {int(i): n for n, i in enumerate(self.ids)}
        return self._index[txid]

    def __len__(self):
        return len(self.ids)

    def __iter__(self):
        return iter(self.transactions)

    def __getitem__(self, i):
        return self.transactions[i]

    def __eq__(self, other):
        if not isinstance(other, Mempool):
            return NotImplemented
        return self.transactions == other.transactions

    def __repr__(self):
        return f"Mempool({len(self)} txs, total_size={self.total_size:g})"

    def to_dict(self) -> dict:
        return {
            "transactions": [
                {"id": int(tx.id), "gas_price": float(tx.gas_price), "size": float(tx.size)}
                for tx in self.transactions
            ]
        }


@dataclass(frozen=True)
class GameParams:
    """Block capacity k and expected competing blocks per latency window."""

    k: float
    lam: float

    def __post_init__(self):
        if not self.k > 0:
            raise ValidationError(f"k must be > 0, got {self.k!r}")
        if self.lam < 0:
            raise ValidationError(f"lambda must be >= 0, got {self.lam!r}")

    def require_integer_k(self):
        if self.k != int(self.k):
            raise ValidationError(f"fixed-size mode requires integer k, got {self.k!r}")
        return int(self.k)


def load_mempool(source) -> Mempool:
    """Parse the JSON wire format into a validated Mempool.

    Accepts a file-like object, bytes, or str. Ordering of the input array
    is preserved.
    """
    if hasattr(source, "read"):
        raw = source.read()
    else:
        raw = source
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ValidationError(f"malformed mempool JSON: {e}") from e
    if not isinstance(doc, dict) or "transactions" not in doc:
        raise ValidationError('mempool JSON must be an object with a "transactions" array')
    records = doc["transactions"]
    if not isinstance(records, list):
        raise ValidationError('"transactions" must be an array')
    txs = []
    for n, rec in enumerate(records):
        if not isinstance(rec, dict) or "id" not in rec or "gas_price" not in rec:
            raise ValidationError(f'transaction record #{n} must have "id" and "gas_price"')
        txs.append(Transaction(rec["id"], float(rec["gas_price"]), float(rec.get("size", 1.0))))
    return Mempool(txs)


def load_mempool_file(path) -> Mempool:
    with io.open(path, "rb") as fh:
        return load_mempool(fh)


def dump_mempool(mempool: Mempool) -> str:
    return json.dumps(mempool.to_dict())
