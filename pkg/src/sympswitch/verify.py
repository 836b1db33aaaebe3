"""The full invariant suite for one ``nu``; each check yields a JSON-able verdict."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable

from .graph import SympGraph, build_symplectic, edge_difference, srg_parameters, verify_srg
from .graph6 import Graph6Error, graph6_decode, graph6_encode
from .orbits import (
    S_GM_CELLS,
    SpecialQuadruple,
    VertexPartition,
    ah_partition,
    canonical_quadruple,
    classify_E,
    generate_autE_group,
    orbit_closure,
    orbit_partition_E,
    orbit_partition_S,
    orbit_size_E,
    s2_subcells,
)
from .switching import (
    VARIANTS,
    apply_switch,
    build_variant,
    find_gm_cells,
    gm_cell_reports,
    is_equitable,
    neighbor_count_table,
    neighbor_counts,
)

HALF = Fraction(1, 2)

# |N(x) & P| / |P| for x in the row cell, from the three Godsil-McKay cells of
# the 4-set partition
S_PARTITION_FRACTIONS = {
    "S": {"T": 0, "S0MinusST": 0, "S4": 1, "S2": HALF},
    "S4": {"T": 0, "S": 1, "S2": HALF, "S0MinusST": HALF},
    "S0MinusST": {"S": 0, "T": 0, "S2": HALF, "S4": HALF},
}

CLOSURE_MAX_NU = 5


def e_partition_fraction(key: tuple[int, int, int]) -> Fraction:
    """Share of ``O(i,j,k)`` adjacent to any vertex of ``O(0,nu,0)``."""
    i, j, _ = key
    if j >= 1:
        return HALF
    return Fraction(1) if i % 2 else Fraction(0)


def _parse_orbit(label: str) -> tuple[int, int, int]:
    return tuple(int(t) for t in label[2:-1].split(","))


def double_counting_ok(g: SympGraph, part: VertexPartition) -> tuple[bool, str]:
    counts = neighbor_counts(g, part)
    for a, b in itertools.product(part, repeat=2):
        lhs = a.size * counts[a.members[0], b.id]
        rhs = b.size * counts[b.members[0], a.id]
        if lhs != rhs:
            return False, f"{a.label}->{b.label}: {lhs} != {rhs}"
    return True, ""


class Suite:
    def __init__(self, nu: int, quad: SpecialQuadruple | None = None, graph6_path: str | None = None) -> None:
        self.nu = nu
        self.quad = quad or canonical_quadruple(nu)
        self.graph6_path = graph6_path
        self.x = build_symplectic(nu)
        self.results: list[dict] = []

    def check(self, name: str, fn: Callable[[], tuple[bool, object]]) -> None:
        ok, detail = fn()
        self.results.append({"check": name, "ok": bool(ok), "detail": detail})

    @property
    def ok(self) -> bool:
        return all(r["ok"] for r in self.results)

    def run(self) -> list[dict]:
        nu, x, quad = self.nu, self.x, self.quad
        want = srg_parameters(nu)
        part_e = orbit_partition_E(x)
        part_s = orbit_partition_S(x, quad)

        if self.graph6_path:
            def srg_file():
                try:
                    with open(self.graph6_path, "rb") as fh:
                        g = graph6_decode(fh.read(), name=self.graph6_path)
                except (OSError, Graph6Error) as exc:
                    return False, {"reason": f"unreadable graph6 file: {exc}"}
                if g.n != want[0]:
                    return False, {"reason": f"n={g.n}, expected {want[0]}"}
                cert = verify_srg(g)
                return bool(cert) and cert.params == want, cert.to_json()

            self.check("srg:file", srg_file)

        variants = {}
        for v in VARIANTS:
            variants[v] = build_variant(nu, v, quad, base=x)

            def srg(v=v):
                cert = verify_srg(variants[v].graph)
                return bool(cert) and cert.params == want, cert.to_json()

            self.check(f"srg:{v}", srg)

        for v, var in variants.items():
            def round_trip(var=var):
                back = graph6_decode(graph6_encode(var.graph), nu=nu)
                return back == var.graph, None

            self.check(f"graph6_round_trip:{v}", round_trip)

        self.check("equitable:E", lambda: _equitable(x, part_e))
        self.check("equitable:S", lambda: _equitable(x, part_s))

        def e_sizes():
            bad = [c.label for c in part_e if c.size != orbit_size_E(nu, *_parse_orbit(c.label))]
            return not bad and sum(c.size for c in part_e) == x.n, {"mismatched": bad}

        self.check("cell_sizes:E", e_sizes)

        def parity_balance():
            tally: dict = {}
            for lab in x.labels:
                o = classify_E(int(lab), nu)
                if o.parity:
                    tally.setdefault(o.key, [0, 0])[o.parity == "odd"] += 1
            bad = [key for key, (ev, od) in tally.items() if ev != od]
            return not bad, {"unbalanced": [list(b) for b in bad]}

        self.check("even_odd_balance:E", parity_balance)

        if nu <= CLOSURE_MAX_NU:
            def closure():
                orbits = orbit_closure(generate_autE_group(nu), x.n)
                return orbits.as_sets() == part_e.as_sets(), {"orbits": len(orbits)}

            self.check("orbit_closure:E", closure)

        def gm_e():
            cells = find_gm_cells(x, part_e)
            nontrivial = [r.label for r in cells if r.nontrivial]
            trivial = [r.label for r in cells if not r.nontrivial]
            table = neighbor_count_table(x, part_e)
            d = f"O(0,{nu},0)"
            wrong = [
                c.label for c in part_e
                if c.label != d and table[d, c.label] != e_partition_fraction(_parse_orbit(c.label))
            ]
            return nontrivial == [d] and not wrong, {"gm_cells": nontrivial, "trivial_gm_cells": trivial, "table_mismatch": wrong}

        self.check("gm_cells:E", gm_e)

        def gm_s():
            reports = {r.label: r for r in gm_cell_reports(x, part_s)}
            cells = sorted(r.label for r in reports.values() if r.is_gm_cell)
            expected = sorted(c for c in S_GM_CELLS if c not in part_s.dropped)
            fr = neighbor_count_table(x, part_s)
            two_thirds = fr["S2", "T"] == Fraction(2, 3) and fr["T", "S2"] == Fraction(2, 3)
            wrong = [
                f"{a}->{b}"
                for a, row in S_PARTITION_FRACTIONS.items() if a in reports
                for b, f in row.items() if b in reports and fr[a, b] != f
            ]
            ok = cells == expected and two_thirds and not wrong
            return ok, {"gm_cells": cells, "rejected": sorted(set(reports) - set(cells)),
                        "two_thirds": two_thirds, "table_mismatch": wrong}

        self.check("gm_cells:S", gm_s)

        def s_sizes():
            sizes = {c.label: c.size for c in part_s}
            sizes.update({lab: 0 for lab in part_s.dropped})
            sub = s2_subcells(x, quad)
            expected = {
                "S": 4, "T": 3,
                "S0MinusST": 2 ** (2 * nu - 3) - 8,
                "S2": 3 * 2 ** (2 * nu - 2),
                "S4": 2 ** (2 * nu - 3),
            }
            s0 = sizes["S"] + sizes["T"] + sizes["S0MinusST"]
            ok = (sizes == expected and s0 == 2 ** (2 * nu - 3) - 1
                  and all(6 * len(m) == sizes["S2"] for m in sub.values()))
            return ok, {"sizes": sizes, "S0": s0}

        self.check("cell_sizes:S", s_sizes)

        self.check("double_counting:E", lambda: double_counting_ok(x, part_e))
        self.check("double_counting:S", lambda: double_counting_ok(x, part_s))

        def cor48():
            _, rec_s = apply_switch(x, part_s, "S")
            _, rec_ah = apply_switch(x, ah_partition(x, quad), "VminusS")
            diff = edge_difference(variants["S"].graph, variants["AH2cell"].graph)
            return rec_s.toggles == rec_ah.toggles and not diff, {"toggles": len(rec_s.toggles)}

        self.check("ah_equality", cor48)
        return self.results


def _equitable(g: SympGraph, part: VertexPartition) -> tuple[bool, object]:
    rep = is_equitable(g, part)
    return rep.ok, {"counterexample": list(rep.counterexample) if rep.counterexample else None}


def run_suite(nu: int, quad: SpecialQuadruple | None = None, graph6_path: str | None = None) -> Suite:
    suite = Suite(nu, quad, graph6_path)
    suite.run()
    return suite
