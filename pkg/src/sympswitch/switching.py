"""Godsil-McKay partition checks and switching."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .graph import SympGraph, build_symplectic
from .orbits import (
    SpecialQuadruple,
    VertexPartition,
    ah_partition,
    canonical_quadruple,
    orbit_partition_E,
    orbit_partition_S,
)

VARIANTS = ("base", "S", "O", "S4", "S0MinusST", "AH2cell")
SWITCHED_VARIANTS = ("S", "O", "S4", "S0MinusST")

# MIXED: the count varies over D; OTHER: constant but not 0, |C|/2 or |C|
ZERO, HALF, FULL, MIXED, OTHER = "zero", "half", "full", "mixed", "other"


def neighbor_counts(g: SympGraph, partition: VertexPartition) -> np.ndarray:
    """``counts[v, c] = |N(v) & C_c|`` for every vertex and cell."""
    ind = np.zeros((g.n, len(partition)), dtype=np.float32)
    ind[np.arange(g.n), partition.membership] = 1
    return (g.dense().astype(np.float32) @ ind).astype(np.int64)


class EquitableReport(NamedTuple):
    ok: bool
    # (from cell id, to cell id, x, x') with different counts into the target
    counterexample: tuple[int, int, int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def _check_equitable(counts: np.ndarray, partition: VertexPartition, skip: set[int]) -> EquitableReport:
    keep = [c.id for c in partition if c.id not in skip]
    for cid in keep:
        members = np.asarray(partition.cells[cid].members)
        block = counts[np.ix_(members, keep)]
        bad = np.argwhere(block != block[0])
        if len(bad):
            r, col = bad[0]
            return EquitableReport(False, (cid, keep[col], int(members[0]), int(members[r])))
    return EquitableReport(True)


def is_equitable(g: SympGraph, partition: VertexPartition) -> EquitableReport:
    if partition.n != g.n:
        raise ValueError("partition does not cover the graph's vertex set")
    return _check_equitable(neighbor_counts(g, partition), partition, set())


@dataclass(frozen=True)
class CellRelation:
    cell: int
    label: str
    size: int
    observed: frozenset[int]
    verdict: str


@dataclass(frozen=True)
class GmCellReport:
    """How each vertex of a candidate cell ``D`` sees every other cell."""

    designated: int
    label: str
    condition_i: EquitableReport
    relations: tuple[CellRelation, ...]
    # (x, cell id) where x has a count other than 0, |C|/2, |C|
    violation: tuple[int, int] | None

    @property
    def is_gm_cell(self) -> bool:
        return bool(self.condition_i) and self.violation is None

    @property
    def nontrivial(self) -> bool:
        """Switching on this cell changes the graph (some vertex of D sees half of a cell)."""
        return self.violation is None and any(
            2 * v == r.size for r in self.relations for v in r.observed
        )

    @property
    def half_cells(self) -> tuple[int, ...]:
        return tuple(r.cell for r in self.relations if r.verdict == HALF)

    @property
    def uniform(self) -> bool:
        """Every other cell is seen identically by all of ``D``."""
        return all(r.verdict != MIXED for r in self.relations)

    def relation(self, label: str) -> CellRelation:
        for r in self.relations:
            if r.label == label:
                return r
        raise KeyError(label)

    def to_json(self) -> dict:
        return {
            "cell": self.label,
            "gm_cell": self.is_gm_cell,
            "nontrivial": self.nontrivial,
            "condition_i": self.condition_i.ok,
            "relations": {
                r.label: {"observed": sorted(r.observed), "size": r.size, "verdict": r.verdict}
                for r in self.relations
            },
        }


def _verdict(observed: frozenset[int], size: int) -> str:
    if len(observed) != 1:
        return MIXED
    (v,) = observed
    if v == 0:
        return ZERO
    if v == size:
        return FULL
    if 2 * v == size:
        return HALF
    return OTHER


def gm_cell_reports(g: SympGraph, partition: VertexPartition) -> list[GmCellReport]:
    """Evaluate the two Godsil-McKay conditions with every cell as candidate ``D``."""
    counts = neighbor_counts(g, partition)
    reports = []
    for d in partition:
        cond_i = _check_equitable(counts, partition, {d.id})
        members = np.asarray(d.members)
        relations, violation = [], None
        for c in partition:
            if c.id == d.id:
                continue
            col = counts[members, c.id]
            observed = frozenset(int(t) for t in np.unique(col))
            relations.append(CellRelation(c.id, c.label, c.size, observed, _verdict(observed, c.size)))
            if violation is None:
                ok = (col == 0) | (col == c.size) | (2 * col == c.size)
                if not ok.all():
                    violation = (int(members[np.argmin(ok)]), c.id)
        reports.append(GmCellReport(d.id, d.label, cond_i, tuple(relations), violation))
    return reports


def find_gm_cells(g: SympGraph, partition: VertexPartition) -> list[GmCellReport]:
    """Reports for exactly those cells that qualify as Godsil-McKay cells."""
    return [r for r in gm_cell_reports(g, partition) if r.is_gm_cell]


def neighbor_count_table(g: SympGraph, partition: VertexPartition) -> dict[tuple[str, str], Fraction | None]:
    """``|N(x) & C| / |C|`` per (cell of x, target cell C); None if not constant."""
    counts = neighbor_counts(g, partition)
    table = {}
    for a in partition:
        rows = counts[np.asarray(a.members)]
        for c in partition:
            col = rows[:, c.id]
            table[a.label, c.label] = Fraction(int(col[0]), c.size) if np.all(col == col[0]) else None
    return table


class SwitchRecord:
    """Which pairs a switch toggled.

    ``halves`` maps each target cell to the vertices of ``D`` whose adjacency
    to that whole cell was complemented.
    """

    def __init__(
        self,
        designated: str | None,
        flipped_cells: tuple[str, ...],
        halves: tuple[tuple[str, tuple[int, ...], tuple[int, ...]], ...],
        labels: np.ndarray | None = None,
    ) -> None:
        self.designated = designated
        self.flipped_cells = flipped_cells
        self.halves = halves  # (cell label, D-vertices, cell members)
        self._labels = labels

    @property
    def is_noop(self) -> bool:
        return not self.halves

    @cached_property
    def toggles(self) -> frozenset[tuple[int, int]]:
        """Toggled pairs ``(u, v)`` with ``u < v``, as vertex indices."""
        out = set()
        for _, ds, cs in self.halves:
            for x in ds:
                for c in cs:
                    out.add((x, c) if x < c else (c, x))
        return frozenset(out)

    def to_json(self) -> dict:
        lab = (lambda v: int(self._labels[v])) if self._labels is not None else int
        pairs = sorted(tuple(sorted((lab(u), lab(v)))) for u, v in self.toggles)
        return {
            "designated": self.designated,
            "flipped_cells": list(self.flipped_cells),
            "toggles": [list(p) for p in pairs],
        }


class NotGodsilMcKayCell(ValueError):
    pass


def apply_switch(
    g: SympGraph,
    partition: VertexPartition,
    designated: int | str | None = None,
    name: str | None = None,
) -> tuple[SympGraph, SwitchRecord]:
    """Godsil-McKay switch of ``g`` with respect to ``partition`` and cell ``designated``.

    For each ``x`` in D and each other cell C with ``|N(x) & C| = |C|/2``, all
    pairs ``{x, c}``, ``c`` in C, are complemented.  A designated label that
    names a dropped (empty) cell yields an unchanged copy and an empty record.
    """
    if designated is None:
        designated = partition.designated
    if designated is None:
        raise ValueError("no designated cell given")
    if isinstance(designated, str) and designated in partition.dropped:
        return g.with_toggles(g.packed, name or g.name), SwitchRecord(designated, (), (), g.labels)
    d = partition.cell(designated)
    counts = neighbor_counts(g, partition)
    report = next(r for r in gm_cell_reports(g, partition) if r.designated == d.id)
    if not report.condition_i:
        i, j, x, y = report.condition_i.counterexample
        raise NotGodsilMcKayCell(
            f"cells other than {d.label!r} are not equitable: vertices {x} and {y} of "
            f"{partition.cells[i].label!r} differ in neighbours in {partition.cells[j].label!r}"
        )
    if report.violation is not None:
        x, cid = report.violation
        c = partition.cells[cid]
        raise NotGodsilMcKayCell(
            f"{d.label!r} is not a Godsil-McKay cell: vertex {x} has {counts[x, cid]} "
            f"neighbours in {c.label!r} (size {c.size})"
        )
    dense = g.dense()
    members = np.asarray(d.members)
    halves = []
    for c in partition:
        if c.id == d.id:
            continue
        ds = members[2 * counts[members, c.id] == c.size]
        if not len(ds):
            continue
        cs = np.asarray(c.members)
        dense[np.ix_(ds, cs)] ^= 1
        dense[np.ix_(cs, ds)] ^= 1
        halves.append((c.label, tuple(int(v) for v in ds), c.members))
    flipped = tuple(label for label, _, _ in halves)
    packed = np.packbits(dense, axis=1, bitorder="little")
    h = g.with_toggles(packed, name or f"{g.name}^{d.label}")
    return h, SwitchRecord(d.label, flipped, tuple(halves), g.labels)


class Variant(NamedTuple):
    graph: SympGraph
    partition: VertexPartition | None
    record: SwitchRecord | None
    warnings: tuple[str, ...] = ()


def build_variant(
    nu: int,
    variant: str,
    quad: SpecialQuadruple | None = None,
    base: SympGraph | None = None,
) -> Variant:
    """The base graph or one of its switched relatives.

    ``O`` switches on ``O(0,nu,0)`` in the basis-stabiliser partition; ``S``,
    ``S4`` and ``S0MinusST`` switch on that cell of the 4-set partition;
    ``AH2cell`` switches on ``V \\ S`` in the two-cell partition ``{S, V \\ S}``.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {', '.join(VARIANTS)}")
    x = base if base is not None else build_symplectic(nu)
    if variant == "base":
        return Variant(x, None, None)
    if variant == "O":
        part = orbit_partition_E(x)
        h, rec = apply_switch(x, part, part.designated, name="X^O")
        return Variant(h, part, rec)
    quad = quad or canonical_quadruple(nu)
    if variant == "AH2cell":
        part = ah_partition(x, quad)
        h, rec = apply_switch(x, part, "VminusS", name="X^AH")
        return Variant(h, part, rec)
    part = orbit_partition_S(x, quad, designated=variant)
    h, rec = apply_switch(x, part, variant, name=f"X^{variant}")
    warnings = ()
    if rec.is_noop and variant in part.dropped:
        warnings = (f"empty designated cell {variant}; output equals base",)
    return Variant(h, part, rec, warnings)
