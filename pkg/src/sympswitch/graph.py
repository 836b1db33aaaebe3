"""Immutable bitset-adjacency graphs and the symplectic graph Sp(2nu, 2)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .gf2 import check_nu

# rows of the vectorised adjacency build processed per chunk
_BUILD_CHUNK = 2048


class SympGraph:
    """Simple undirected graph on vertices ``0 .. n-1``.

    Adjacency is held as packed bit rows (``packed[i]`` is the neighbourhood of
    ``i``, little-endian bit order).  Graphs built from vectors carry ``nu`` and
    a label array: vertex ``i`` is the vector whose integer encoding is
    ``labels[i]``.  For Sp(2nu, 2) itself ``labels[i] == i + 1``.

    Instances are read-only; switching produces a new graph.
    """

    def __init__(
        self,
        packed: np.ndarray,
        n: int,
        *,
        nu: int = 0,
        labels: np.ndarray | None = None,
        name: str = "",
        check: bool = True,
    ) -> None:
        packed = np.ascontiguousarray(packed, dtype=np.uint8)
        if packed.shape != (n, (n + 7) // 8):
            raise ValueError(f"packed adjacency has shape {packed.shape}, expected {(n, (n + 7) // 8)}")
        packed.setflags(write=False)
        if labels is not None:
            labels = np.asarray(labels, dtype=np.int64)
            if labels.shape != (n,):
                raise ValueError("labels must have one entry per vertex")
            labels.setflags(write=False)
        self.n = n
        self.nu = nu
        self.packed = packed
        self.labels = labels
        self.name = name
        if check:
            dense = self.dense()
            if np.any(np.diag(dense)):
                raise ValueError("adjacency has a nonzero diagonal")
            if not np.array_equal(dense, dense.T):
                raise ValueError("adjacency is not symmetric")

    @classmethod
    def from_dense(cls, adj: np.ndarray, **kwargs) -> "SympGraph":
        adj = np.asarray(adj, dtype=bool)
        n = adj.shape[0]
        return cls(np.packbits(adj, axis=1, bitorder="little"), n, **kwargs)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], **kwargs) -> "SympGraph":
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            adj[u, v] = adj[v, u] = True
        return cls.from_dense(adj, **kwargs)

    def dense(self) -> np.ndarray:
        """0/1 adjacency matrix as ``uint8``."""
        return np.unpackbits(self.packed, axis=1, count=self.n, bitorder="little")

    @cached_property
    def rows(self) -> tuple[int, ...]:
        """Neighbourhoods as Python-int bitsets (bit ``j`` set iff ``i ~ j``)."""
        return tuple(int.from_bytes(r.tobytes(), "little") for r in self.packed)

    @cached_property
    def words(self) -> np.ndarray:
        """Neighbourhoods as ``uint64`` word arrays, for vectorised popcounts."""
        nbytes = self.packed.shape[1]
        pad = (-nbytes) % 8
        buf = np.pad(self.packed, ((0, 0), (0, pad))) if pad else self.packed
        return np.ascontiguousarray(buf).view("<u8")

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def labeled(self) -> bool:
        return self.labels is not None

    def adjacent(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def neighbors(self, v: int) -> list[int]:
        return bits_to_list(self.rows[v])

    def num_edges(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def index_of(self, label: int) -> int:
        """Vertex index carrying the vector ``label``."""
        try:
            return self._label_index[int(label)]
        except KeyError:
            raise KeyError(f"no vertex carries label {label}") from None

    @cached_property
    def _label_index(self) -> dict[int, int]:
        if self.labels is None:
            raise ValueError("graph is not labeled by vectors")
        return {int(x): i for i, x in enumerate(self.labels)}

    def label_of(self, v: int) -> int:
        return int(self.labels[v]) if self.labels is not None else v

    def with_toggles(self, packed: np.ndarray, name: str) -> "SympGraph":
        """Same labeling, new adjacency (used by switching)."""
        return SympGraph(packed, self.n, nu=self.nu, labels=self.labels, name=name, check=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SympGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.packed, other.packed)

    def __hash__(self) -> int:
        return hash((self.n, self.packed.tobytes()))

    def __repr__(self) -> str:
        name = f" {self.name!r}" if self.name else ""
        return f"<SympGraph{name} n={self.n} nu={self.nu} edges={self.num_edges()}>"


def bits_to_list(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def list_to_bits(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def _swap_pairs(a: np.ndarray) -> np.ndarray:
    even = np.int64(int("01" * 16, 2))
    return ((a & even) << 1) | ((a >> 1) & even)


def build_symplectic(nu: int) -> SympGraph:
    """Sp(2nu, 2): nonzero vectors of F_2^{2nu}, ``x ~ y`` iff ``x^T K y = 1``."""
    check_nu(nu)
    n = (1 << (2 * nu)) - 1
    labels = np.arange(1, n + 1, dtype=np.int64)
    swapped = _swap_pairs(labels)
    packed = np.empty((n, (n + 7) // 8), dtype=np.uint8)
    for start in range(0, n, _BUILD_CHUNK):
        block = labels[start:start + _BUILD_CHUNK, None] & swapped[None, :]
        adj = (np.bitwise_count(block) & 1).astype(bool)
        packed[start:start + _BUILD_CHUNK] = np.packbits(adj, axis=1, bitorder="little")
    return SympGraph(packed, n, nu=nu, labels=labels, name="X", check=False)


@dataclass(frozen=True)
class SrgCertificate:
    n: int
    k: int
    lambda_: int
    mu: int

    @property
    def params(self) -> tuple[int, int, int, int]:
        return (self.n, self.k, self.lambda_, self.mu)

    def __bool__(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {"ok": True, "n": self.n, "k": self.k, "lambda": self.lambda_, "mu": self.mu}


@dataclass(frozen=True)
class SrgFailure:
    reason: str
    pair: tuple[int, int]
    detail: str = ""

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"ok": False, "reason": self.reason, "pair": list(self.pair), "detail": self.detail}


def srg_parameters(nu: int) -> tuple[int, int, int, int]:
    """Parameters shared by Sp(2nu, 2) and all its switched relatives."""
    return ((1 << 2 * nu) - 1, 1 << (2 * nu - 1), 1 << (2 * nu - 2), 1 << (2 * nu - 2))


def verify_srg(g: SympGraph) -> SrgCertificate | SrgFailure:
    """Check strong regularity exhaustively over all vertex pairs.

    Returns a certificate, or a failure naming the first offending pair.
    """
    if g.n < 3:
        raise ValueError("strong regularity needs at least 3 vertices")
    a = g.dense().astype(np.float32)
    deg = a.sum(axis=1).astype(np.int64)
    if np.any(deg != deg[0]):
        v = int(np.flatnonzero(deg != deg[0])[0])
        return SrgFailure("not regular", (0, v), f"deg(0)={deg[0]}, deg({v})={deg[v]}")
    common = (a @ a).astype(np.int64)
    adj = a.astype(bool)
    off = ~np.eye(g.n, dtype=bool)
    non = off & ~adj
    if not adj.any() or not non.any():
        return SrgFailure("complete or edgeless", (0, 1))
    lam = int(common[adj][0])
    mu = int(common[non][0])
    for mask, want, what in ((adj, lam, "lambda"), (non, mu, "mu")):
        bad = np.argwhere(mask & (common != want))
        if len(bad):
            u, v = (int(t) for t in bad[0])
            return SrgFailure(
                f"{what} not constant", (u, v),
                f"pair ({u},{v}) has {common[u, v]} common neighbours, expected {want}",
            )
    return SrgCertificate(g.n, int(deg[0]), lam, mu)


def common_neighbor_mask(g: SympGraph, a: Iterable[int] = (), b: Iterable[int] = ()) -> int:
    """Bitset of ``N[A|B]``: adjacent to all of ``a``, none of ``b``, outside both."""
    a, b = set(a), set(b)
    if a & b:
        raise ValueError(f"A and B overlap in {sorted(a & b)}")
    rows = g.rows
    full = g.full_mask
    mask = full
    for v in a:
        mask &= rows[v]
    for v in b:
        mask &= ~rows[v]
    return mask & full & ~list_to_bits(a | b)


def common_neighbors(g: SympGraph, a: Iterable[int] = (), b: Iterable[int] = ()) -> frozenset[int]:
    return frozenset(bits_to_list(common_neighbor_mask(g, a, b)))


def edge_difference(g: SympGraph, h: SympGraph) -> set[tuple[int, int]]:
    """Vertex pairs ``(u, v)``, ``u < v``, that are edges in exactly one graph."""
    if g.n != h.n:
        raise ValueError(f"graphs differ in order: {g.n} vs {h.n}")
    diff = np.triu(g.dense() ^ h.dense(), k=1)
    return {(int(u), int(v)) for u, v in np.argwhere(diff)}
