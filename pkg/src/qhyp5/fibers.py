"""Singular fiber types, their dual graphs, and fiber census of an equation."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx

from .normal import NormalizedEquation


@dataclass(frozen=True)
class FiberType:
    label: str  # "C(a,b)"
    nu_label: str
    euler: int
    e_value: int
    index: int  # b in C(a,b); 0 for the general fiber
    n_components: int

    @property
    def short(self) -> str:
        return "C" + self.label[2:-1].replace(",", "")

    @property
    def reducible(self) -> bool:
        return self.n_components > 1

    def __str__(self) -> str:
        return self.label


def _ft(a: int, b: int, nu: str, euler: int, e: int) -> FiberType:
    return FiberType(f"C({a},{b})", nu, euler, e, b, a)


TYPES: dict[int, FiberType] = {
    1: _ft(1, 0, "I", 2, 1),
    2: _ft(5, 1, "VIII-1", 6, 2),
    3: _ft(9, 2, "IX-1", 10, 3),
    4: _ft(3, 3, "VIII-2", 4, 4),
    6: _ft(11, 5, "IX-2", 12, 6),
    7: _ft(4, 6, "IX-3", 5, 7),
    8: _ft(9, 7, "VIII-3", 10, 8),
    9: _ft(13, 8, "IX-4", 14, 9),
}
BY_LABEL = {t.label: t for t in TYPES.values()}
BY_INDEX = {t.index: t for t in TYPES.values()}
REDUCIBLE_INDICES = (1, 2, 3, 5, 6, 7, 8)

# fiber at infinity by d mod 10, read off the terminal configurations
INFINITY_BY_RESIDUE: dict[int, str] = {
    1: "C(13,8)",
    2: "C(9,7)",
    3: "C(4,6)",
    4: "C(11,5)",
    6: "C(3,3)",
    7: "C(9,2)",
    8: "C(5,1)",
    9: "C(1,0)",
}


class FiberTypeError(ValueError):
    pass


def classify_e(e: int) -> FiberType:
    if e not in TYPES:
        hint = " (resolve e = 5 with the local shift first)" if e == 5 else ""
        raise FiberTypeError(f"no fiber type for e = {e}{hint}")
    return TYPES[e]


def parse_type(text: str) -> FiberType:
    """Accept ``C(3,3)``, ``C33`` or ``3,3`` style names."""
    key = "".join(ch for ch in text if ch.isdigit())
    for t in TYPES.values():
        if key == f"{t.n_components}{t.index}":
            return t
    raise FiberTypeError(f"unknown fiber type {text!r}")


def infinity_type(d: int) -> FiberType:
    if d < 1 or d % 5 == 0:
        raise FiberTypeError(f"degree {d} must be positive and prime to 5")
    return BY_LABEL[INFINITY_BY_RESIDUE[d % 10]]


# ---------------------------------------------------------------------------
# dual graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Component:
    id: int
    self_int: int
    mult: int
    is_identity: bool = False

    @property
    def name(self) -> str:
        return f"R{self.id}"


@dataclass(frozen=True)
class Edge:
    a: int
    b: int
    weight: int = 1
    point: int | None = None  # edges sharing a point label meet at one point


@dataclass(frozen=True)
class DualGraph:
    components: tuple[Component, ...]
    edges: tuple[Edge, ...]
    gamma: tuple[tuple[int, int], ...] = ()  # (component id, Gamma . R)
    label: str = ""
    notes: tuple[str, ...] = field(default=())

    # -- basic queries ------------------------------------------------------
    def ids(self) -> list[int]:
        return [c.id for c in self.components]

    def component(self, cid: int) -> Component:
        for c in self.components:
            if c.id == cid:
                return c
        raise KeyError(cid)

    @property
    def identity(self) -> Component:
        ids = [c for c in self.components if c.is_identity]
        if len(ids) != 1:
            raise ValueError("dual graph must have exactly one identity component")
        return ids[0]

    def intersection(self, a: int, b: int) -> int:
        if a == b:
            return self.component(a).self_int
        return sum(e.weight for e in self.edges if {e.a, e.b} == {a, b})

    def matrix(self, ids: Iterable[int] | None = None) -> list[list[int]]:
        ids = self.ids() if ids is None else list(ids)
        return [[self.intersection(a, b) for b in ids] for a in ids]

    def non_identity_ids(self) -> list[int]:
        return [c.id for c in self.components if not c.is_identity]

    def fiber_products(self) -> dict[int, int]:
        """F . R_j for every component, F = sum mult_i R_i."""
        return {
            j: sum(c.mult * self.intersection(c.id, j) for c in self.components)
            for j in self.ids()
        }

    def fiber_square(self) -> int:
        fp = self.fiber_products()
        return sum(c.mult * fp[c.id] for c in self.components)

    def gamma_degree(self) -> int:
        return sum(self.component(cid).mult * g for cid, g in self.gamma)

    def euler(self) -> int:
        """2 per rational component minus (branches - 1) per intersection point."""
        points: dict[object, set[int]] = {}
        for n, e in enumerate(self.edges):
            key = ("p", e.point) if e.point is not None else ("e", n)
            points.setdefault(key, set()).update((e.a, e.b))
        return 2 * len(self.components) - sum(len(s) - 1 for s in points.values())

    def is_connected(self) -> bool:
        return nx.is_connected(self.to_networkx()) if self.components else False

    # -- conversions ----------------------------------------------------------
    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        for c in self.components:
            g.add_node(c.id, self_int=c.self_int, mult=c.mult, identity=c.is_identity)
        for e in self.edges:
            if g.has_edge(e.a, e.b):
                g[e.a][e.b]["weight"] += e.weight
            else:
                g.add_edge(e.a, e.b, weight=e.weight)
        return g

    def isomorphic(self, other: "DualGraph") -> bool:
        return nx.is_isomorphic(
            self.to_networkx(),
            other.to_networkx(),
            node_match=lambda a, b: (a["self_int"], a["mult"], a["identity"])
            == (b["self_int"], b["mult"], b["identity"]),
            edge_match=lambda a, b: a["weight"] == b["weight"],
        )

    def to_dot(self, name: str | None = None) -> str:
        gname = (name or self.label or "fiber").replace("(", "_").replace(",", "_").replace(")", "")
        lines = [f'graph "{gname}" {{', "  node [shape=circle];"]
        for c in self.components:
            shape = ", shape=doublecircle" if c.is_identity else ""
            lines.append(f'  R{c.id} [label="R{c.id}\\n{c.self_int}, x{c.mult}"{shape}];')
        for e in self.edges:
            lines.append(f'  R{e.a} -- R{e.b} [label="{e.weight}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "components": [
                {"id": c.id, "self_intersection": c.self_int, "multiplicity": c.mult,
                 "identity": c.is_identity}
                for c in self.components
            ],
            "edges": [{"a": e.a, "b": e.b, "weight": e.weight} for e in self.edges],
            "gamma_incidence": [{"id": i, "value": v} for i, v in self.gamma],
        }


def _graph(label, mults, self_ints, edges, gamma, points=None) -> DualGraph:
    comps = tuple(
        Component(i, self_ints.get(i, -2), m, i == 0) for i, m in enumerate(mults)
    )
    points = points or {}
    es = tuple(Edge(a, b, w, points.get((a, b))) for a, b, w in edges)
    return DualGraph(comps, es, tuple(sorted(gamma.items())), label)


def _chain(ids: list[int]) -> list[tuple[int, int, int]]:
    return [(a, b, 1) for a, b in zip(ids, ids[1:])]


_TEMPLATES: dict[str, DualGraph] = {
    "C(1,0)": _graph("C(1,0)", [1], {0: 0}, [], {0: 5}),
    "C(5,1)": _graph(
        "C(5,1)",
        [1, 2, 1, 2, 1],
        {0: -4},
        [(0, 1, 1), (0, 3, 1), (1, 3, 1), (1, 2, 1), (3, 4, 1)],
        {0: 1, 1: 1, 3: 1},
        points={(0, 1): 0, (0, 3): 0, (1, 3): 0},
    ),
    "C(9,2)": _graph(
        "C(9,2)",
        [1, 4, 7, 10, 5, 8, 6, 4, 2],
        {0: -4},
        _chain([0, 1, 2, 3]) + [(3, 4, 1), (3, 5, 1)] + _chain([5, 6, 7, 8]),
        {4: 1},
    ),
    "C(3,3)": _graph(
        "C(3,3)",
        [1, 1, 1],
        {1: -3, 2: -3},
        [(0, 1, 1), (0, 2, 1), (1, 2, 2)],
        {0: 1, 1: 2, 2: 2},
        points={(0, 1): 0, (0, 2): 0, (1, 2): 0},
    ),
    "C(11,5)": _graph(
        "C(11,5)",
        [1, 2, 5, 4, 3, 2, 1, 4, 3, 2, 1],
        {1: -3},
        _chain([0, 1, 2, 3, 4, 5, 6]) + [(2, 7, 1)] + _chain([7, 8, 9, 10]),
        {2: 1},
    ),
    "C(4,6)": _graph(
        "C(4,6)",
        [1, 2, 3, 2],
        {3: -3},
        _chain([0, 1, 2]) + [(2, 3, 2)],
        {2: 1, 3: 1},
    ),
    "C(9,7)": _graph(
        "C(9,7)",
        [1, 2, 3, 4, 5, 3, 1, 3, 1],
        {6: -3, 8: -3},
        _chain([0, 1, 2, 3, 4, 5, 6]) + [(4, 7, 1), (7, 8, 1)],
        {4: 1},
    ),
    "C(13,8)": _graph(
        "C(13,8)",
        [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 5, 6, 2],
        {12: -3},
        _chain(list(range(10))) + [(9, 10, 1), (9, 11, 1), (11, 12, 1)],
        {10: 1},
    ),
}


def template(ft: FiberType | str) -> DualGraph:
    label = ft.label if isinstance(ft, FiberType) else parse_type(ft).label
    return _TEMPLATES[label]


# ---------------------------------------------------------------------------
# census
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiberCensus:
    affine: tuple[tuple[int, int], ...]  # (index b, count) for reducible affine fibers
    infinity: FiberType
    general_places: int = 0  # critical points whose fiber is nevertheless general

    def n(self, b: int) -> int:
        return dict(self.affine).get(b, 0)

    def N(self, b: int) -> int:
        return self.n(b) + (1 if self.infinity.index == b and self.infinity.reducible else 0)

    def fibers(self) -> list[FiberType]:
        """All reducible fibers, affine first then infinity."""
        out = [BY_INDEX[b] for b, c in self.affine for _ in range(c)]
        if self.infinity.reducible:
            out.append(self.infinity)
        return out

    def multiset(self) -> Counter:
        return Counter(ft.label for ft in self.fibers())

    def describe(self) -> list[str]:
        ms = self.multiset()
        return [f"{lab} x {ms[lab]}" for lab in sorted(ms, key=lambda s: BY_LABEL[s].index)]

    def to_json(self) -> dict:
        return {
            "affine": {f"n{b}": self.n(b) for b in REDUCIBLE_INDICES},
            "infinity": self.infinity.label,
            "total": {f"N{b}": self.N(b) for b in REDUCIBLE_INDICES},
            "fibers": self.describe(),
        }


def census(eq: NormalizedEquation) -> FiberCensus:
    counts: Counter = Counter()
    general = 0
    for place in eq.places:
        ft = classify_e(place.effective_e)
        if ft.reducible:
            counts[ft.index] += place.degree
        else:
            general += place.degree
    return FiberCensus(tuple(sorted(counts.items())), infinity_type(eq.d), general)
