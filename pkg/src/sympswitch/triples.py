"""Common neighbours of vertex triples as an isomorphism invariant.

``|N[xyz|]|`` is counted directly with bitset ANDs, predicted for a switched
graph from the unswitched one, and scanned for its smallest nonzero value.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .graph import SympGraph, common_neighbor_mask
from .orbits import VertexPartition
from .switching import GmCellReport, gm_cell_reports

EXHAUSTIVE_MAX_N = 1100
_SAMPLE_BATCH = 1 << 16


def triple_count(g: SympGraph, x: int, y: int, z: int) -> int:
    """``|N(x) & N(y) & N(z)|`` minus ``{x, y, z}``."""
    if len({x, y, z}) != 3:
        raise ValueError(f"vertices must be distinct, got {(x, y, z)}")
    r = g.rows
    return (r[x] & r[y] & r[z] & ~((1 << x) | (1 << y) | (1 << z))).bit_count()


# --- switched-graph prediction -------------------------------------------------

# Regions of the vertex set relative to a switch: D itself, the cells D sees
# half of, and the remaining cells (D sees none or all of them).
D, HALF, REST = "D", "half", "rest"

# Per case: terms (regions, adjacent-to roles, non-adjacent-to roles).
TABLE1: dict[str, tuple[tuple[tuple[str, ...], str, str], ...]] = {
    "1-i": (((REST, HALF, D), "xyz", ""),),
    "1-ii": (((REST, HALF), "xyz", ""), ((D,), "yz", "x")),
    "1-iii": (((REST, HALF), "xyz", ""), ((D,), "z", "xy")),
    "1-iv": (((REST, HALF), "xyz", ""), ((D,), "", "xyz")),
    "2-i": (((REST, D), "xyz", ""), ((HALF,), "yz", "x")),
    "2-ii": (((REST,), "xyz", ""), ((HALF,), "yz", "x"), ((D,), "xz", "y")),
    "2-iii": (((REST,), "xyz", ""), ((HALF,), "yz", "x"), ((D,), "x", "yz")),
    "3-i": (((REST, D), "xyz", ""), ((HALF,), "z", "xy")),
    "3-ii": (((REST,), "xyz", ""), ((HALF,), "z", "xy"), ((D,), "xy", "z")),
    "4": (((REST, D), "xyz", ""), ((HALF,), "", "xyz")),
}


class CellTriple(NamedTuple):
    """Case of a triple, with the triple reordered into the roles ``(x, y, z)``."""

    case: str
    x: int
    y: int
    z: int


class SwitchContext:
    """Partition, designated cell and half cells, as masks over the base graph."""

    def __init__(self, partition: VertexPartition, report: GmCellReport) -> None:
        if not report.uniform:
            raise ValueError(f"cell {report.label!r} does not see every cell uniformly")
        self.partition = partition
        self.report = report
        d = partition.cells[report.designated]
        half = set(report.half_cells)
        self.role = ["R"] * partition.n
        self.masks = {D: d.mask, HALF: 0, REST: 0}
        for c in partition:
            if c.id == d.id:
                region = D
            elif c.id in half:
                region = HALF
            else:
                region = REST
            self.masks[region] |= c.mask
            for v in c.members:
                self.role[v] = {D: "D", HALF: "H", REST: "R"}[region]

    @classmethod
    def for_switch(cls, g: SympGraph, partition: VertexPartition, designated: int | str | None = None) -> "SwitchContext":
        if designated is None:
            designated = partition.designated
        cid = partition.cell(designated).id
        report = next(r for r in gm_cell_reports(g, partition) if r.designated == cid)
        if not report.is_gm_cell:
            raise ValueError(f"{report.label!r} is not a Godsil-McKay cell")
        return cls(partition, report)


def classify_table1_case(ctx: SwitchContext, x: int, y: int, z: int) -> CellTriple:
    """Which row of the switched-count table applies, and in which role order."""
    triple = (x, y, z)
    role = ctx.role
    in_d = [v for v in triple if role[v] == "D"]
    half = [v for v in triple if role[v] == "H"]
    rest = [v for v in triple if role[v] == "R"]
    nd, nh = len(in_d), len(half)
    if nd == 0:
        case = ("1-i", "1-ii", "1-iii", "1-iv")[nh]
        order = half + rest
    elif nd == 1:
        case = ("2-i", "2-ii", "2-iii")[nh]
        order = in_d + half + rest
    elif nd == 2:
        case = ("3-i", "3-ii")[nh]
        order = in_d + half + rest
    else:
        case = "4"
        order = in_d
    return CellTriple(case, *order)


def predict_switched_count(g_base: SympGraph, ctx: SwitchContext, x: int, y: int, z: int) -> int:
    """``|N[xyz|]|`` in the switched graph, evaluated on the base graph."""
    ct = classify_table1_case(ctx, x, y, z)
    named = {"x": ct.x, "y": ct.y, "z": ct.z}
    total = 0
    for regions, adj, nonadj in TABLE1[ct.case]:
        region = 0
        for r in regions:
            region |= ctx.masks[r]
        mask = common_neighbor_mask(g_base, [named[c] for c in adj], [named[c] for c in nonadj])
        total += (mask & region).bit_count()
    return total


# --- scanning ------------------------------------------------------------------


@dataclass
class TripleScanReport:
    graph: str
    mode: str  # "exhaustive" or "sampled"
    min_nonzero: int | None
    witness: tuple[int, int, int] | None
    zero_triples_seen: bool
    triples_examined: int
    samples: int | None = None
    seed: int | None = None
    histogram: dict[int, int] | None = field(default=None)

    def to_json(self, labels: np.ndarray | None = None) -> dict:
        witness = self.witness
        if witness is not None and labels is not None:
            witness = tuple(int(labels[v]) for v in witness)
        out = {
            "graph": self.graph,
            "mode": self.mode,
            "min_nonzero": self.min_nonzero,
            "witness": list(witness) if witness is not None else None,
            "zero_triples_seen": self.zero_triples_seen,
            "triples_examined": self.triples_examined,
        }
        if self.mode == "sampled":
            out["samples"] = self.samples
            out["seed"] = self.seed
        if self.histogram is not None:
            out["histogram"] = {str(k): v for k, v in sorted(self.histogram.items())}
        return out


def _scan_vertex(a: np.ndarray, x: int, want_hist: bool):
    """Min nonzero over triples ``x < y < z`` via one product restricted to N(x)."""
    n = a.shape[0]
    if n - x < 3:
        return None, None, False, 0, None
    nbr = a[x].astype(bool)
    sub = a[nbr][:, x + 1:]
    counts = (sub.T @ sub).astype(np.int64)
    iu = np.triu_indices(n - x - 1, k=1)
    vals = counts[iu]
    hist = np.bincount(vals) if want_hist else None
    zero = bool((vals == 0).any())
    pos = vals[vals > 0]
    if not len(pos):
        return None, None, zero, len(vals), hist
    m = int(pos.min())
    k = int(np.flatnonzero(vals == m)[0])
    # triu_indices is row-major, so k is the lexicographically first (y, z)
    wit = (x, x + 1 + int(iu[0][k]), x + 1 + int(iu[1][k]))
    return m, wit, zero, len(vals), hist


def _merge_hist(total: dict[int, int], hist: np.ndarray | None) -> None:
    if hist is None:
        return
    for value in np.flatnonzero(hist):
        total[int(value)] = total.get(int(value), 0) + int(hist[value])


def scan_exhaustive(g: SympGraph, threads: int = 1, histogram: bool = False) -> TripleScanReport:
    if g.n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive scan refused for n={g.n} > {EXHAUSTIVE_MAX_N}; use sampling")
    a = g.dense().astype(np.float32)
    best: tuple[int, tuple[int, int, int]] | None = None
    zero = False
    examined = 0
    hist: dict[int, int] = {}
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = pool.map(lambda x: _scan_vertex(a, x, histogram), range(g.n))
        for m, wit, z, cnt, h in results:
            zero |= z
            examined += cnt
            _merge_hist(hist, h)
            if m is not None and (best is None or (m, wit) < best):
                best = (m, wit)
    return TripleScanReport(
        graph=g.name,
        mode="exhaustive",
        min_nonzero=best[0] if best else None,
        witness=best[1] if best else None,
        zero_triples_seen=zero,
        triples_examined=examined,
        histogram=hist if histogram else None,
    )


def sample_triples(n: int, count: int, seed: int) -> np.ndarray:
    """``count`` uniform triples of distinct vertices, each sorted ascending."""
    rng = np.random.default_rng(seed)
    out = []
    have = 0
    while have < count:
        batch = rng.integers(0, n, size=(min(_SAMPLE_BATCH, 2 * (count - have) + 16), 3))
        ok = (batch[:, 0] != batch[:, 1]) & (batch[:, 1] != batch[:, 2]) & (batch[:, 0] != batch[:, 2])
        batch = batch[ok][: count - have]
        out.append(batch)
        have += len(batch)
    return np.sort(np.concatenate(out), axis=1)


def triple_counts(g: SympGraph, triples: np.ndarray) -> np.ndarray:
    """Vectorised ``triple_count`` over an ``(m, 3)`` array of distinct triples."""
    w = g.words
    out = np.empty(len(triples), dtype=np.int64)
    for s in range(0, len(triples), _SAMPLE_BATCH):
        t = triples[s:s + _SAMPLE_BATCH]
        both = w[t[:, 0]] & w[t[:, 1]] & w[t[:, 2]]
        out[s:s + _SAMPLE_BATCH] = np.bitwise_count(both).sum(axis=1)
    return out


def scan_sampled(g: SympGraph, samples: int, seed: int, histogram: bool = False) -> TripleScanReport:
    """Minimum nonzero count over seeded random triples (an upper bound on the true minimum)."""
    if samples < 1:
        raise ValueError("need at least one sample")
    if g.n < 3:
        raise ValueError("need at least 3 vertices")
    triples = sample_triples(g.n, samples, seed)
    counts = triple_counts(g, triples)
    pos = counts > 0
    best = None
    if pos.any():
        m = int(counts[pos].min())
        hits = triples[counts == m]
        wit = min(tuple(int(v) for v in t) for t in hits)
        best = (m, wit)
    hist = None
    if histogram:
        bc = np.bincount(counts)
        hist = {int(v): int(bc[v]) for v in np.flatnonzero(bc)}
    return TripleScanReport(
        graph=g.name,
        mode="sampled",
        min_nonzero=best[0] if best else None,
        witness=best[1] if best else None,
        zero_triples_seen=bool((~pos).any()),
        triples_examined=samples,
        samples=samples,
        seed=seed,
        histogram=hist,
    )


def scan_min_nonzero(
    g: SympGraph,
    mode: str = "exhaustive",
    *,
    samples: int | None = None,
    seed: int | None = None,
    threads: int = 1,
    histogram: bool = False,
) -> TripleScanReport:
    if mode == "exhaustive":
        return scan_exhaustive(g, threads=threads, histogram=histogram)
    if mode == "sampled":
        if samples is None or seed is None:
            raise ValueError("sampled mode needs samples and seed")
        return scan_sampled(g, samples, seed, histogram=histogram)
    raise ValueError(f"unknown scan mode {mode!r}")


# --- closed forms --------------------------------------------------------------


def table52_expected(variant: str, nu: int) -> int:
    """Closed-form nonzero minimum of ``|N[xyz|]|`` for each family."""
    if variant in ("base", "X"):
        return 2 ** (2 * nu - 3)
    if variant in ("S", "AH2cell"):
        return 1
    if variant == "O":
        return 2 ** (nu - 2)
    if variant == "S4":
        return 2 ** (2 * nu - 5)
    if variant == "S0MinusST":
        return 2 ** (2 * nu - 5) - 2
    raise ValueError(f"unknown variant {variant!r}")


def degeneracy_notes(nu: int) -> list[str]:
    """Ways the closed forms fail to separate the families at this ``nu``."""
    notes = []
    if table52_expected("S0MinusST", nu) <= 0:
        notes.append(
            f"S0MinusST: cell is empty at nu={nu} (size 2^(2nu-3)-8 = {2 ** (2 * nu - 3) - 8}); "
            f"the switch is a no-op and the closed form gives {table52_expected('S0MinusST', nu)}"
        )
    if table52_expected("O", nu) == table52_expected("S4", nu):
        notes.append(f"O and S4: closed forms coincide at nu={nu} (both {table52_expected('O', nu)})")
    return notes
