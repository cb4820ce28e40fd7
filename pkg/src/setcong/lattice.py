"""The implication lattice of satisfiability properties and system classification."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import InconsistentEvidence
from .finite import Sat, is_connected, is_prime, search_family, sort_words, witness_tuples
from .systems import (
    CongruenceSystem,
    Statement,
    is_consistent,
    is_weak,
    make_cp,
    make_unc,
    numeric_consistency,
)

SAT_NODES = ("OSF", "FSF", "DSF", "OSI", "FSI", "DSI", "OPS", "FPS", "DPS", "FFG", "PFG", "FFQ")
NODES = SAT_NODES + ("w", "nc", "c")

DESCRIPTIONS = {
    "OSF": "open subsets of the sphere, free rotations",
    "FSF": "finite subsets of the sphere, free rotations",
    "DSF": "open subsets of the sphere with dense union, free rotations",
    "OSI": "open subsets of the sphere, arbitrary rotations",
    "FSI": "finite subsets of the sphere, arbitrary rotations",
    "DSI": "open subsets of the sphere with dense union, arbitrary rotations",
    "OPS": "open subsets of a suitable space",
    "FPS": "finite subsets of a suitable space",
    "DPS": "open subsets of a suitable space with dense union",
    "FFG": "finite subsets of a free group",
    "PFG": "finite subsets of a free group with connected prime union",
    "FFQ": "finite subsets of a quotient of a free group by a cyclic subgroup",
    "w": "weak",
    "nc": "numerically consistent",
    "c": "consistent",
}

_ARROWS = [
    ("PFG", "FFG"), ("PFG", "DPS"), ("FFG", "FPS"), ("FPS", "FFG"), ("FFG", "FFQ"),
    ("DPS", "OPS"), ("FPS", "OPS"), ("DPS", "DSF"), ("OPS", "OSF"), ("FPS", "FSF"),
    ("DSF", "w"), ("DSF", "OSF"), ("FSF", "OSF"), ("OSF", "FSF"), ("FFQ", "FSF"),
    ("FSF", "FFQ"), ("DSF", "DSI"), ("OSF", "OSI"), ("FSF", "FSI"), ("DSI", "OSI"),
    ("FSI", "OSI"), ("OSI", "FSI"), ("OSI", "nc"), ("nc", "c"),
]
# these three hold only for "not all empty", not for "all nonempty"
LIGHT = {("OSF", "FSF"), ("FSF", "FFQ"), ("OSI", "FSI")}
# arrows whose converse is unresolved
OPEN_CONVERSE = {("OSI", "nc"), ("DSI", "OSI"), ("FPS", "OPS"), ("PFG", "DPS"), ("DPS", "DSF")}


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    light: bool = False
    open_converse: bool = False


def implication_edges() -> list[Edge]:
    return [Edge(a, b, (a, b) in LIGHT, (a, b) in OPEN_CONVERSE) for a, b in _ARROWS]


def reachable(node: str) -> set[str]:
    succ: dict[str, list[str]] = {}
    for a, b in _ARROWS:
        succ.setdefault(a, []).append(b)
    seen = {node}
    stack = [node]
    while stack:
        for y in succ.get(stack.pop(), []):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def to_dot() -> str:
    lines = ["digraph implications {"]
    for e in implication_edges():
        attrs = []
        if e.light:
            attrs.append("color=gray")
        if e.open_converse:
            attrs.append('label="converse open"')
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f'  "{e.src}" -> "{e.dst}"{suffix};')
    lines.append("}")
    return "\n".join(lines)


# --- fixtures -------------------------------------------------------------


@dataclass(frozen=True)
class Fixture:
    name: str
    system: CongruenceSystem
    expected: dict[str, bool]
    open_nodes: tuple[str, ...] = ()


def _cong(*pairs) -> tuple[Statement, ...]:
    return tuple(Statement.cong(a, b) for a, b in pairs)


def fixture_catalog() -> list[Fixture]:
    return [
        Fixture(
            "robinson-wagon",
            CongruenceSystem(4, _cong(({1}, {1, 3, 4}), ({3}, {1, 2, 3}))),
            {"w": True, "c": False},
        ),
        Fixture(
            "five-set",
            CongruenceSystem(5, _cong(({1}, {2}), ({2}, {3}), ({3}, {4}), ({4}, {5}), ({1, 2}, {1, 3, 4}))),
            {"w": True, "c": True, "nc": False},
        ),
        Fixture("two-set", CongruenceSystem(2, _cong(({1}, {2}),)), {"w": False, "FFG": True, "DSI": True}),
        Fixture("cp3", make_cp(3), {"w": True, "FSI": True, "DSI": True, "OSF": False}),
        Fixture(
            "three-chain",
            CongruenceSystem(3, _cong(({1}, {2}), ({2}, {3}), ({1, 2}, {1, 3}))),
            {"w": True, "FFG": True, "DSI": True, "DSF": False},
        ),
        Fixture(
            "dense-not-prime",
            CongruenceSystem(3, _cong(({1}, {3}), ({1, 2}, {1, 3}))),
            {"DSF": True, "FFG": True, "PFG": False},
            open_nodes=("DPS",),
        ),
        Fixture(
            "dense-not-finite",
            CongruenceSystem(4, _cong(({1}, {3}), ({1, 2}, {1, 3}), ({1, 3}, {1, 4}))),
            {"DSF": True, "FFG": False},
            open_nodes=("DPS", "OPS"),
        ),
        Fixture("hausdorff", CongruenceSystem(3, _cong(({1}, {2}), ({2}, {3}), ({3}, {2, 3}))), {"c": False}),
        Fixture("unc6", make_unc(6), {"nc": True, "w": False}, open_nodes=("OSI",)),
    ]


def _signature(sys: CongruenceSystem):
    keys = set()
    for st in sys.statements:
        if st.is_congruence:
            keys.add((st.kind, frozenset((st.left, st.right))))
        else:
            keys.add((st.kind, st.left, st.right))
    return sys.r, sys.mode, frozenset(keys)


def match_fixture(sys: CongruenceSystem) -> Optional[Fixture]:
    sig = _signature(sys)
    return next((f for f in fixture_catalog() if _signature(f.system) == sig), None)


# --- classification -------------------------------------------------------


@dataclass(frozen=True)
class SearchBudget:
    max_len: int = 2
    radius: int = 3
    m: int = 2
    max_tuples: int = 20_000
    max_statements: int = 12  # one witness word per statement; larger tuples are not enumerated


@dataclass
class NodeStatus:
    value: Optional[bool] = None
    provenance: str = "unknown"

    def label(self) -> str:
        return {True: "true", False: "false", None: "unknown"}[self.value]


@dataclass
class PropertyReport:
    system: CongruenceSystem
    properties: dict[str, NodeStatus] = field(default_factory=lambda: {n: NodeStatus() for n in NODES})
    checks: list[str] = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)
    open_nodes: tuple[str, ...] = ()

    def value(self, node: str) -> Optional[bool]:
        return self.properties[node].value

    def set(self, node: str, value: bool, provenance: str) -> bool:
        st = self.properties[node]
        if st.value is None:
            st.value, st.provenance = value, provenance
            return True
        if st.value != value:
            raise InconsistentEvidence(
                f"{node} is {st.label()} by {st.provenance} but {str(value).lower()} by {provenance}"
            )
        return False

    def propagate(self) -> None:
        succ: dict[str, list[str]] = {}
        pred: dict[str, list[str]] = {}
        for a, b in _ARROWS:
            succ.setdefault(a, []).append(b)
            pred.setdefault(b, []).append(a)
        queue = [n for n in NODES if self.value(n) is not None]
        while queue:
            x = queue.pop(0)
            v = self.value(x)
            if v:
                for y in succ.get(x, []):
                    if self.set(y, True, f"implied({x}->{y})"):
                        queue.append(y)
            else:
                for y in pred.get(x, []):
                    if self.set(y, False, f"contrapositive({y}->{x})"):
                        queue.append(y)


def classify(
    sys: CongruenceSystem,
    budget: Optional[SearchBudget] = None,
    use_fixtures: bool = True,
) -> PropertyReport:
    budget = budget or SearchBudget()
    rep = PropertyReport(sys)
    rep.set("w", is_weak(sys), "checked(is_weak)")
    rep.set("c", is_consistent(sys), "checked(is_consistent)")
    wit = numeric_consistency(sys)
    nc_name = "checked(numeric_consistency, extended-nc)" if any(not s.is_congruence for s in sys.statements) else "checked(numeric_consistency)"
    rep.set("nc", wit is not None, nc_name)
    if wit is not None:
        rep.artifacts["mu"] = [str(v) for v in wit.mu]
    rep.checks += [f"w={rep.value('w')}", f"c={rep.value('c')}", f"nc={rep.value('nc')}"]
    rep.propagate()

    if rep.value("FFG") is not False:
        _search(rep, sys, budget)
        rep.propagate()

    if use_fixtures:
        fx = match_fixture(sys)
        if fx is not None:
            rep.open_nodes = fx.open_nodes
            rep.checks.append(f"fixture {fx.name}")
            for node, val in fx.expected.items():
                rep.set(node, val, f"fixture({fx.name})")
            rep.propagate()
    return rep


def _search(rep: PropertyReport, sys: CongruenceSystem, budget: SearchBudget) -> None:
    if len(sys.statements) > budget.max_statements:
        rep.checks.append(
            f"search skipped: {len(sys.statements)} statements exceed the budget of {budget.max_statements}"
        )
        return
    tried = 0
    sat_found = 0
    exhausted = True
    for wt in witness_tuples(budget.m, budget.max_len, len(sys.statements)):
        if tried >= budget.max_tuples:
            exhausted = False
            break
        tried += 1
        res = search_family(sys, wt, budget.radius, m=budget.m)
        if not isinstance(res, Sat):
            continue
        sat_found += 1
        union = res.family.union()
        if "family" not in rep.artifacts:
            rep.artifacts["family"] = [sort_words(s) for s in res.family.sets]
            rep.artifacts["witnesses"] = list(wt.words)
            rep.set("FFG", True, "checked(search_family)")
        if is_connected(union) and is_prime(union):
            rep.artifacts["prime_family"] = [sort_words(s) for s in res.family.sets]
            rep.artifacts["prime_witnesses"] = list(wt.words)
            rep.set("PFG", True, "checked(search_family, connected prime union)")
            break
    rep.checks.append(
        f"search: {tried} witness tuples (words <= {budget.max_len}, radius {budget.radius}), "
        f"{sat_found} satisfiable, {'all' if exhausted else 'partial'} enumeration"
    )


def render_report(rep: PropertyReport, system_text: Optional[str] = None) -> dict:
    def enc(x):
        if isinstance(x, tuple):
            return list(x)
        if isinstance(x, list):
            return [enc(v) for v in x]
        return x

    return {
        "system": system_text,
        "properties": {
            n: {
                "status": s.label(),
                "provenance": s.provenance,
                **({"note": "open"} if n in rep.open_nodes and s.value is None else {}),
            }
            for n, s in rep.properties.items()
        },
        "checks": list(rep.checks),
        "artifacts": {k: enc(v) for k, v in rep.artifacts.items()},
        "open_converses": sorted(f"{a}->{b}" for a, b in OPEN_CONVERSE),
    }
