"""Orbit partitions of Sp(2nu, 2) under two automorphism subgroups.

* the stabiliser of the standard basis, whose orbits are the block-weight
  classes ``O(i, j, k)``;
* the stabiliser of a special 4-set ``S = {v1, v2, v3, v1+v2+v3}``, whose
  orbits are ``S, T, S0 minus (S u T), S2, S4``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import factorial
from typing import Hashable, Iterable, NamedTuple, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .gf2 import Gf2Matrix, block_weights, pair_swap, rank, symp_form
from .graph import SympGraph, list_to_bits

S_CELL_ORDER = ("S", "T", "S0MinusST", "S2", "S4")
S_GM_CELLS = ("S", "S0MinusST", "S4")
AH_CELLS = ("S", "VminusS")


@dataclass(frozen=True)
class Cell:
    id: int
    label: str
    members: tuple[int, ...]
    mask: int = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class VertexPartition:
    """Ordered, disjoint, nonempty cells covering ``0 .. n-1``.

    ``dropped`` lists labels of cells that were empty and therefore omitted.
    """

    cells: tuple[Cell, ...]
    membership: tuple[int, ...]
    designated: int | None = None
    dropped: tuple[str, ...] = ()

    @classmethod
    def from_keys(
        cls,
        keys: Sequence[Hashable],
        *,
        order: Sequence[Hashable] | None = None,
        names: dict | None = None,
        designated: Hashable | None = None,
    ) -> "VertexPartition":
        """Group vertices by ``keys[v]``; cells follow ``order`` (default: sorted keys)."""
        groups: dict = {}
        for v, k in enumerate(keys):
            groups.setdefault(k, []).append(v)
        order = list(order) if order is not None else sorted(groups)
        unknown = set(groups) - set(order)
        if unknown:
            raise ValueError(f"keys missing from order: {sorted(map(str, unknown))}")
        names = names or {}
        cells, dropped = [], []
        membership = [0] * len(keys)
        for key in order:
            label = names.get(key, str(key))
            members = groups.get(key)
            if not members:
                dropped.append(label)
                continue
            cid = len(cells)
            for v in members:
                membership[v] = cid
            cells.append(Cell(cid, label, tuple(members), list_to_bits(members)))
        part = cls(tuple(cells), tuple(membership), None, tuple(dropped))
        if designated is not None:
            label = names.get(designated, str(designated))
            if label not in part.dropped:
                part = part.with_designated(label)
        return part

    @property
    def n(self) -> int:
        return len(self.membership)

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def cell(self, key: int | str) -> Cell:
        if isinstance(key, str):
            for c in self.cells:
                if c.label == key:
                    return c
            raise KeyError(f"no cell labeled {key!r}")
        return self.cells[key]

    def cell_of(self, v: int) -> Cell:
        return self.cells[self.membership[v]]

    def labels(self) -> list[str]:
        return [c.label for c in self.cells]

    def with_designated(self, key: int | str | None) -> "VertexPartition":
        cid = None if key is None else self.cell(key).id
        return VertexPartition(self.cells, self.membership, cid, self.dropped)

    def as_sets(self) -> set[frozenset[int]]:
        return {frozenset(c.members) for c in self.cells}

    def to_json(self) -> dict:
        return {
            "cells": [{"id": c.id, "label": c.label, "size": c.size} for c in self.cells],
            "designated": None if self.designated is None else self.cells[self.designated].label,
            "dropped": list(self.dropped),
        }


# --- standard-basis stabiliser -------------------------------------------------


class OrbitLabelE(NamedTuple):
    i: int
    j: int
    k: int
    parity: str | None  # "even"/"odd" count of [10] blocks; None when j == 0

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.i, self.j, self.k)


def orbit_name(key: tuple[int, int, int]) -> str:
    return "O({},{},{})".format(*key)


def classify_E(x: int, nu: int) -> OrbitLabelE:
    """Block-weight class of a nonzero vector, with the parity of its [10] blocks."""
    x = int(x)
    if x == 0:
        raise ValueError("the zero vector is not a vertex")
    if x >> (2 * nu):
        raise ValueError(f"{x:#x} is not a vector of F_2^{2 * nu}")
    w = block_weights(x, nu)
    i, j = w.count(2), w.count(1)
    # block [10]^T means first coordinate set: low bit of the block
    tens = sum(1 for l in range(nu) if (x >> (2 * l)) & 3 == 1)
    parity = None if j == 0 else ("even" if tens % 2 == 0 else "odd")
    return OrbitLabelE(i, j, nu - i - j, parity)


def orbit_size_E(nu: int, i: int, j: int, k: int) -> int:
    return factorial(nu) // (factorial(i) * factorial(j) * factorial(k)) * 2**j


def _require_labeled(g: SympGraph) -> None:
    if g.labels is None or not g.nu:
        raise ValueError("graph must be labeled by vectors of F_2^{2nu}")


def orbit_partition_E(g: SympGraph) -> VertexPartition:
    """Cells ``O(i,j,k)`` in lexicographic order; ``O(0,nu,0)`` designated."""
    _require_labeled(g)
    nu = g.nu
    keys = [classify_E(int(x), nu).key for x in g.labels]
    return VertexPartition.from_keys(
        keys,
        names={k: orbit_name(k) for k in set(keys)},
        designated=(0, nu, 0),
    )


def generate_autE_group(nu: int) -> list[np.ndarray]:
    """All block-monomial symplectic maps as vertex permutations of Sp(2nu, 2).

    Each map permutes the blocks and optionally swaps the two coordinates of
    each block.  Every generated matrix is checked to preserve the form and
    to permute the standard basis.  ``perm[v]`` is the image of vertex ``v``.
    """
    if nu > 5:
        raise ValueError(f"group has nu!*2^nu elements; nu={nu} is too large (max 5)")
    if nu < 1:
        raise ValueError("nu must be positive")
    dim = 2 * nu
    labels = np.arange(1, 1 << dim, dtype=np.int64)
    basis = {1 << b for b in range(dim)}
    perms = []
    for sigma in itertools.permutations(range(nu)):
        for flips in range(1 << nu):
            # image of e_{2l+1}, e_{2l+2}: block l moves to block sigma[l]
            cols = []
            for l in range(nu):
                lo, hi = 1 << (2 * sigma[l]), 1 << (2 * sigma[l] + 1)
                cols += [hi, lo] if (flips >> l) & 1 else [lo, hi]
            if set(cols) != basis:
                raise AssertionError("generated map does not permute the standard basis")
            for a, b in itertools.combinations_with_replacement(range(dim), 2):
                if symp_form(cols[a], cols[b]) != symp_form(1 << a, 1 << b):
                    raise AssertionError("generated map does not preserve the symplectic form")
            image = np.zeros_like(labels)
            for b, col in enumerate(cols):
                image ^= ((labels >> b) & 1) * col
            perms.append(image - 1)
    return perms


def orbit_closure(perms: Iterable[np.ndarray], n: int | None = None) -> VertexPartition:
    """Orbits of the group generated by ``perms`` (connected components of v -> g(v))."""
    perms = [np.asarray(p, dtype=np.int64) for p in perms]
    if not perms:
        raise ValueError("need at least one permutation")
    n = len(perms[0]) if n is None else n
    src = np.concatenate([np.arange(n)] * len(perms))
    dst = np.concatenate(perms)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, comp = connected_components(graph, directed=True, connection="weak")
    # number orbits by their smallest vertex
    first: dict[int, int] = {}
    for v, c in enumerate(comp):
        first.setdefault(int(c), v)
    keys = [first[int(c)] for c in comp]
    return VertexPartition.from_keys(keys, names={k: f"orbit@{k}" for k in set(keys)})


# --- 4-set stabiliser ----------------------------------------------------------


@dataclass(frozen=True)
class SpecialQuadruple:
    """``S = {v1, v2, v3, v4}`` with v1..v3 independent, mutually orthogonal, v4 their sum."""

    v1: int
    v2: int
    v3: int
    v4: int
    nu: int

    def __post_init__(self) -> None:
        vs = (self.v1, self.v2, self.v3)
        dim = 2 * self.nu
        if any(v <= 0 or v >> dim for v in vs):
            raise ValueError("v1, v2, v3 must be nonzero vectors of F_2^{2nu}")
        if rank(list(vs), dim) != 3:
            raise ValueError("v1, v2, v3 are not linearly independent")
        for a, b in itertools.combinations(vs, 2):
            if symp_form(a, b):
                raise ValueError(f"symp_form({a:#x}, {b:#x}) = 1, need 0")
        if self.v4 != self.v1 ^ self.v2 ^ self.v3:
            raise ValueError("v4 must equal v1 + v2 + v3")

    @classmethod
    def from_triple(cls, v1: int, v2: int, v3: int, nu: int) -> "SpecialQuadruple":
        return cls(v1, v2, v3, v1 ^ v2 ^ v3, nu)

    @property
    def vectors(self) -> tuple[int, int, int, int]:
        return (self.v1, self.v2, self.v3, self.v4)

    @property
    def t_vectors(self) -> tuple[int, int, int]:
        return (self.v1 ^ self.v2, self.v2 ^ self.v3, self.v3 ^ self.v1)

    def form_matrix(self) -> Gf2Matrix:
        return Gf2Matrix.form_rows((self.v1, self.v2, self.v3), 2 * self.nu)


def canonical_quadruple(nu: int) -> SpecialQuadruple:
    """``{e1, e3, e5, e1+e3+e5}``: three first coordinates of distinct blocks."""
    if nu < 3:
        raise ValueError("a special quadruple needs nu >= 3")
    return SpecialQuadruple.from_triple(1, 1 << 2, 1 << 4, nu)


class OrbitLabelS(NamedTuple):
    kind: str  # one of S_CELL_ORDER
    pair: tuple[int, int] | None = None  # (i, j), 1-based, for kind "S2"


def classify_S(x: int, quad: SpecialQuadruple) -> OrbitLabelS:
    x = int(x)
    if x == 0:
        raise ValueError("the zero vector is not a vertex")
    kx = pair_swap(x)
    hits = [i + 1 for i, v in enumerate(quad.vectors) if (kx & v).bit_count() & 1]
    if len(hits) == 4:
        return OrbitLabelS("S4")
    if len(hits) == 2:
        return OrbitLabelS("S2", (hits[0], hits[1]))
    if len(hits):
        raise AssertionError("form values against S must have even weight")
    if x in quad.vectors:
        return OrbitLabelS("S")
    if x in quad.t_vectors:
        return OrbitLabelS("T")
    return OrbitLabelS("S0MinusST")


def orbit_partition_S(
    g: SympGraph,
    quad: SpecialQuadruple,
    designated: str | None = None,
) -> VertexPartition:
    """Cells ``S, T, S0MinusST, S2, S4`` (empty ones dropped)."""
    _require_labeled(g)
    if quad.nu != g.nu:
        raise ValueError(f"quadruple is for nu={quad.nu}, graph has nu={g.nu}")
    keys = [classify_S(int(x), quad).kind for x in g.labels]
    return VertexPartition.from_keys(keys, order=S_CELL_ORDER, designated=designated)


def ah_partition(g: SympGraph, quad: SpecialQuadruple) -> VertexPartition:
    """Two-cell partition ``{S, V \\ S}`` with ``V \\ S`` designated."""
    _require_labeled(g)
    members = set(quad.vectors)
    keys = ["S" if int(x) in members else "VminusS" for x in g.labels]
    return VertexPartition.from_keys(keys, order=AH_CELLS, designated="VminusS")


def s2_subcells(g: SympGraph, quad: SpecialQuadruple) -> dict[tuple[int, int], list[int]]:
    """Refinement of ``S2`` into ``S2(i, j)``, keyed by the 1-based pair."""
    out: dict[tuple[int, int], list[int]] = {p: [] for p in itertools.combinations(range(1, 5), 2)}
    for v, x in enumerate(g.labels):
        lab = classify_S(int(x), quad)
        if lab.kind == "S2":
            out[lab.pair].append(v)
    return out
