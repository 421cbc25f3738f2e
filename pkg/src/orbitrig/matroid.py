"""Signed-graphic matroids and their union.

An edge set of a +-1-labeled multigraph is independent when every connected
component contains at most one cycle and that cycle, if present, has
negative sign product.  Rank follows the component formula
``sum(|V(X)| - 1 + alpha(X))`` where alpha marks components containing a
negative cycle.  The union over the C(d+1,2) induced labelings is computed
by an augmenting-path partition algorithm that emits a decomposition
certificate and, on the deficient side, a rank witness set.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import ConsistencyError, InputError
from .gaingraph import EdgeId, GainGraph, VertexId, remove_zero_loops
from .symmetry import (
    Element,
    PointRepresentation,
    induced_labeling,
    screw_pairs,
    trivial_motion_dim,
)

PairLabel = tuple[int, int]


@dataclass(frozen=True)
class SignedEdge:
    id: EdgeId
    tail: VertexId
    head: VertexId
    sign: int

    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class SignedGraph:
    vertices: tuple[VertexId, ...]
    edges: tuple[SignedEdge, ...]

    def __post_init__(self):
        for e in self.edges:
            if e.sign not in (1, -1):
                raise InputError(f"edge {e.id} sign must be +-1, got {e.sign}")

    def edge_map(self) -> dict[EdgeId, SignedEdge]:
        return {e.id: e for e in self.edges}

    @staticmethod
    def from_gain_graph(h: GainGraph, labeling: Mapping[Element, int]) -> "SignedGraph":
        edges = tuple(SignedEdge(e.id, e.tail, e.head, labeling[e.gain]) for e in h.edges)
        return SignedGraph(h.vertices, edges)


class _SignedForest:
    """Incremental tracker for signed-graphic independence.

    Union-find with a +-1 potential per vertex (relative sign to the
    component root, no path compression) plus a per-component cycle flag.
    """

    def __init__(self):
        self.parent: dict[VertexId, VertexId] = {}
        self.pot: dict[VertexId, int] = {}
        self.size: dict[VertexId, int] = {}
        self.cycles: dict[VertexId, int] = {}
        self.unbalanced: dict[VertexId, bool] = {}
        self.cycle_edge: dict[VertexId, SignedEdge] = {}
        # spanning-forest adjacency, for witness cycle reconstruction
        self.tree: dict[VertexId, list[tuple[EdgeId, VertexId, int]]] = {}

    def _ensure(self, v: VertexId) -> None:
        if v not in self.parent:
            self.parent[v] = v
            self.pot[v] = 1
            self.size[v] = 1
            self.cycles[v] = 0
            self.unbalanced[v] = False
            self.tree[v] = []

    def find(self, v: VertexId) -> tuple[VertexId, int]:
        self._ensure(v)
        sign = 1
        while self.parent[v] != v:
            sign *= self.pot[v]
            v = self.parent[v]
        return v, sign

    def add(self, e: SignedEdge) -> tuple[str, int]:
        """Insert an edge and classify it.

        Returns (kind, cycle_sign) where kind is 'tree' (joined two
        components) or 'cycle' (closed a cycle of the given sign); the
        component bookkeeping is updated either way.
        """
        ru, su = self.find(e.tail)
        rv, sv = self.find(e.head)
        if ru != rv:
            keep, drop = (ru, rv) if self.size[ru] >= self.size[rv] else (rv, ru)
            # potential from drop-root to keep-root making tail->head compose to e.sign
            self.parent[drop] = keep
            self.pot[drop] = su * e.sign * sv
            self.size[keep] += self.size[drop]
            self.cycles[keep] += self.cycles[drop]
            self.unbalanced[keep] = self.unbalanced[keep] or self.unbalanced[drop]
            if drop in self.cycle_edge and keep not in self.cycle_edge:
                self.cycle_edge[keep] = self.cycle_edge[drop]
            self.tree[e.tail].append((e.id, e.head, e.sign))
            self.tree[e.head].append((e.id, e.tail, e.sign))
            return "tree", 0
        cycle_sign = su * e.sign * sv
        self.cycles[ru] += 1
        self.cycle_edge.setdefault(ru, e)
        if cycle_sign == -1:
            self.unbalanced[ru] = True
        return "cycle", cycle_sign

    def tree_path(self, u: VertexId, v: VertexId) -> list[EdgeId]:
        """Edge ids of the forest path from u to v (empty if u == v)."""
        if u == v:
            return []
        prev: dict[VertexId, tuple[EdgeId, VertexId]] = {u: (None, None)}
        q = deque([u])
        while q:
            x = q.popleft()
            for eid, y, _sign in self.tree.get(x, ()):
                if y not in prev:
                    prev[y] = (eid, x)
                    if y == v:
                        q.clear()
                        break
                    q.append(y)
        path = []
        cur = v
        while cur != u:
            eid, nxt = prev[cur]
            path.append(eid)
            cur = nxt
        path.reverse()
        return path


@dataclass(frozen=True)
class DependenceWitness:
    kind: str  # 'positive_cycle' | 'second_cycle'
    edges: tuple[EdgeId, ...]


def is_independent_signed(
    sg: SignedGraph, subset: Iterable[EdgeId] | None = None
) -> tuple[bool, DependenceWitness | None]:
    """Signed-graphic independence of an edge subset, with a witness cycle
    on failure (a positive cycle, or the cycle that makes a second one in
    its component)."""
    emap = sg.edge_map()
    ids = [e.id for e in sg.edges] if subset is None else list(subset)
    forest = _SignedForest()
    for eid in ids:
        e = emap[eid]
        ru, su = forest.find(e.tail)
        rv, sv = forest.find(e.head)
        if ru != rv:
            if forest.cycles[ru] + forest.cycles[rv] > 1:
                ce = forest.cycle_edge[rv if forest.cycles[rv] else ru]
                cyc = forest.tree_path(ce.tail, ce.head) + [ce.id]
                return False, DependenceWitness("second_cycle", tuple(cyc))
            forest.add(e)
            continue
        cycle_sign = su * e.sign * sv
        cyc = forest.tree_path(e.tail, e.head) + [e.id]
        if cycle_sign == 1:
            return False, DependenceWitness("positive_cycle", tuple(cyc))
        if forest.cycles[ru] > 0:
            return False, DependenceWitness("second_cycle", tuple(cyc))
        forest.add(e)
    return True, None


def signed_rank(sg: SignedGraph, subset: Iterable[EdgeId] | None = None) -> int:
    """Rank by the component formula: for every connected component X of the
    subset, |V(X)| - 1, plus 1 when X contains a negative cycle."""
    emap = sg.edge_map()
    ids = list(emap) if subset is None else list(subset)
    forest = _SignedForest()
    for eid in ids:
        forest.add(emap[eid])
    roots = {forest.find(v)[0] for v in forest.parent}
    rank = 0
    for r in roots:
        rank += forest.size[r] - 1 + (1 if forest.unbalanced[r] else 0)
    return rank


def incidence_matrix(sg: SignedGraph) -> list[list[Fraction]]:
    """Row per edge: -sign at the tail and 1 at the head for a non-loop,
    1 - sign at the vertex of a loop.  Row independence over the rationals
    matches signed-graphic independence."""
    vindex = {v: i for i, v in enumerate(sg.vertices)}
    rows = []
    for e in sg.edges:
        row = [Fraction(0)] * len(sg.vertices)
        if e.is_loop():
            row[vindex[e.tail]] = Fraction(1 - e.sign)
        else:
            row[vindex[e.tail]] = Fraction(-e.sign)
            row[vindex[e.head]] = Fraction(1)
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# matroid union


@dataclass(frozen=True)
class UnionDecomposition:
    """Assignment of an independent subset to the constituent matroids."""

    parts: dict[PairLabel, tuple[EdgeId, ...]]
    assignment: dict[EdgeId, PairLabel]
    unassigned: tuple[EdgeId, ...]

    def size(self) -> int:
        return len(self.assignment)

    def validate(self, labeled_sgs: Sequence[tuple[PairLabel, SignedGraph]]) -> None:
        sg_by_label = dict(labeled_sgs)
        seen: set[EdgeId] = set()
        for label, ids in self.parts.items():
            for eid in ids:
                if eid in seen:
                    raise ConsistencyError(f"edge {eid!r} assigned twice")
                seen.add(eid)
                if self.assignment.get(eid) != label:
                    raise ConsistencyError(f"assignment map disagrees at {eid!r}")
            ok, witness = is_independent_signed(sg_by_label[label], ids)
            if not ok:
                raise ConsistencyError(f"part {label} not independent: {witness}")
        if seen != set(self.assignment):
            raise ConsistencyError("assignment map and parts disagree")


@dataclass(frozen=True)
class UnionRankResult:
    """Union rank plus certificates: a decomposition of a maximum
    independent subset, and a witness set X with
    rank == |S \\ X| + sum_i r_i(X) (tight by construction)."""

    rank: int
    decomposition: UnionDecomposition
    witness: tuple[EdgeId, ...]


def _is_part_independent(sg_edges: Mapping[EdgeId, SignedEdge], ids: Sequence[EdgeId]) -> bool:
    forest = _SignedForest()
    for eid in ids:
        e = sg_edges[eid]
        ru, su = forest.find(e.tail)
        rv, sv = forest.find(e.head)
        if ru != rv:
            if forest.cycles[ru] + forest.cycles[rv] > 1:
                return False
        elif su * e.sign * sv == 1 or forest.cycles[ru] > 0:
            return False
        forest.add(e)
    return True


def _independent_plus(
    sg_edges: Mapping[EdgeId, SignedEdge], part: Sequence[EdgeId], extra: EdgeId
) -> bool:
    """Whether (independent) ``part`` stays independent with ``extra`` added."""
    forest = _SignedForest()
    for eid in part:
        forest.add(sg_edges[eid])
    e = sg_edges[extra]
    ru, su = forest.find(e.tail)
    rv, sv = forest.find(e.head)
    if ru != rv:
        return forest.cycles[ru] + forest.cycles[rv] <= 1
    return su * e.sign * sv == -1 and forest.cycles[ru] == 0


def matroid_union_rank(
    labeled_sgs: Sequence[tuple[PairLabel, SignedGraph]],
    elements: Sequence[EdgeId] | None = None,
) -> UnionRankResult:
    """Rank of an edge set in the union of signed-graphic matroids on a
    common ground set, via incremental augmenting paths in the exchange
    graph (breadth-first, deterministic tie-breaking).

    Returns the rank, a decomposition of a maximum independent subset, and
    the set X of elements reachable from the unassigned ones, which
    certifies optimality: rank = |S \\ X| + sum_i r_i(X).
    """
    if not labeled_sgs:
        raise InputError("need at least one matroid")
    edge_maps = [sg.edge_map() for _, sg in labeled_sgs]
    if elements is None:
        elements = [e.id for e in labeled_sgs[0][1].edges]
    elements = list(elements)
    unknown = [e for e in elements if e not in edge_maps[0]]
    if unknown:
        raise InputError(f"elements not on the ground set: {unknown!r}")

    parts: list[list[EdgeId]] = [[] for _ in labeled_sgs]
    part_of: dict[EdgeId, int] = {}
    unassigned: list[EdgeId] = []

    def arcs_and_terminal(x: EdgeId, visited: set[EdgeId]):
        """Yield ('insert', i) for a free slot or ('arc', y) for exchanges."""
        for i, emap in enumerate(edge_maps):
            if part_of.get(x) == i:
                continue
            if _independent_plus(emap, parts[i], x):
                yield ("insert", i)
                continue
            for y in parts[i]:
                if y in visited:
                    continue
                trial = [z for z in parts[i] if z != y]
                if _independent_plus(emap, trial, x):
                    yield ("arc", y)

    def try_augment(source: EdgeId) -> bool:
        prev: dict[EdgeId, EdgeId | None] = {source: None}
        q = deque([source])
        while q:
            x = q.popleft()
            for kind, val in arcs_and_terminal(x, prev.keys()):
                if kind == "insert":
                    _cascade(x, val, prev)
                    return True
                if val not in prev:
                    prev[val] = x
                    q.append(val)
        return False

    def _cascade(x: EdgeId, target: int, prev: Mapping[EdgeId, EdgeId | None]) -> None:
        while True:
            old = part_of.get(x)
            if old is not None:
                parts[old].remove(x)
            parts[target].append(x)
            part_of[x] = target
            p = prev[x]
            if p is None:
                break
            x, target = p, old
        for i, emap in enumerate(edge_maps):
            if not _is_part_independent(emap, parts[i]):
                raise ConsistencyError(f"augmentation broke part {labeled_sgs[i][0]}")

    for e in elements:
        if not try_augment(e):
            unassigned.append(e)

    # optimality witness: elements reachable from the unassigned ones
    reach: set[EdgeId] = set(unassigned)
    q = deque(unassigned)
    while q:
        x = q.popleft()
        for kind, val in arcs_and_terminal(x, reach):
            if kind == "insert":
                raise ConsistencyError("free slot reachable after augmentation finished")
            if val not in reach:
                reach.add(val)
                q.append(val)

    decomposition = UnionDecomposition(
        parts={label: tuple(parts[i]) for i, (label, _) in enumerate(labeled_sgs)},
        assignment={eid: labeled_sgs[i][0] for eid, i in part_of.items()},
        unassigned=tuple(unassigned),
    )
    rank = len(part_of)
    witness = tuple(e for e in elements if e in reach)
    return UnionRankResult(rank, decomposition, witness)


def union_rank_by_formula(
    labeled_sgs: Sequence[tuple[PairLabel, SignedGraph]],
    subset: Sequence[EdgeId],
    witness: Sequence[EdgeId],
) -> int:
    """Evaluate |S \\ X| + sum_i r_i(X) for a witness set X."""
    xset = set(witness)
    total = len([e for e in subset if e not in xset])
    for _, sg in labeled_sgs:
        total += signed_rank(sg, [e for e in subset if e in xset])
    return total


# ---------------------------------------------------------------------------
# the counting oracle and the full combinatorial verdict


@dataclass(frozen=True)
class CountingViolation:
    edges: tuple[EdgeId, ...]
    size: int
    bound: int
    alphas: dict[PairLabel, int]


def _has_negative_cycle(sg_edges: Mapping[EdgeId, SignedEdge], ids: Sequence[EdgeId]) -> bool:
    forest = _SignedForest()
    for eid in ids:
        forest.add(sg_edges[eid])
    return any(forest.unbalanced[r] for r in forest.parent if forest.parent[r] == r)


def check_counting_condition(
    labeled_sgs: Sequence[tuple[PairLabel, SignedGraph]],
    subset: Sequence[EdgeId] | None = None,
    max_size: int = 20,
) -> CountingViolation | None:
    """Brute-force check of the per-subset count
    ``|F| <= B|V(F)| - B + sum alpha(F)`` with B the number of matroids.
    Exponential; guarded to small ground sets.  Returns the first violation
    in subset-enumeration order, or None."""
    edge_maps = [sg.edge_map() for _, sg in labeled_sgs]
    all_edges = labeled_sgs[0][1].edge_map()
    ids = list(all_edges) if subset is None else list(subset)
    if len(ids) > max_size:
        raise InputError(f"counting oracle limited to {max_size} edges, got {len(ids)}")
    b = len(labeled_sgs)
    for mask in range(1, 1 << len(ids)):
        f = [ids[i] for i in range(len(ids)) if mask >> i & 1]
        verts = set()
        for eid in f:
            e = all_edges[eid]
            verts.add(e.tail)
            verts.add(e.head)
        alphas = {
            label: (1 if _has_negative_cycle(edge_maps[i], f) else 0)
            for i, (label, _) in enumerate(labeled_sgs)
        }
        bound = b * len(verts) - b + sum(alphas.values())
        if len(f) > bound:
            return CountingViolation(tuple(f), len(f), bound, alphas)
    return None


@dataclass(frozen=True)
class CombinatorialVerdict:
    """Outcome of the signed-matroid union test for one character label."""

    irrep: Element
    d: int
    edges: int
    target: int
    rank: int
    rigid: bool
    deficiency: int
    removed_loops: tuple[EdgeId, ...]
    decomposition: UnionDecomposition
    witness: tuple[EdgeId, ...]

    @property
    def count_matches_target(self) -> bool:
        return self.edges == self.target

    def to_json(self) -> dict:
        return {
            "irrep": list(self.irrep),
            "edges": self.edges,
            "target": self.target,
            "rank": self.rank,
            "rigid": self.rigid,
            "deficiency": self.deficiency,
            "count_matches_target": self.count_matches_target,
            "removed_loops": [_edge_id_json(e) for e in self.removed_loops],
            "decomposition": {
                f"({label[0]},{label[1]})": [_edge_id_json(e) for e in ids]
                for label, ids in self.decomposition.parts.items()
            },
            "unassigned": [_edge_id_json(e) for e in self.decomposition.unassigned],
            "witness": [_edge_id_json(e) for e in self.witness],
        }


def _edge_id_json(eid: EdgeId):
    if isinstance(eid, tuple):
        return [_edge_id_json(x) for x in eid]
    return eid


def labeled_signed_graphs(
    h: GainGraph, rep: PointRepresentation, g: Element
) -> list[tuple[PairLabel, SignedGraph]]:
    """The C(d+1,2) signed graphs on ``h`` under the labelings induced by
    the twisted screw representation for character ``g``."""
    out = []
    for pair in screw_pairs(rep.d):
        labeling = induced_labeling(rep, g, pair)
        out.append((pair, SignedGraph.from_gain_graph(h, labeling)))
    return out


def combinatorial_verdict(
    h: GainGraph, rep: PointRepresentation, g: Element, d: int | None = None
) -> CombinatorialVerdict:
    """Signed-matroid union test for one character label: remove the zero
    loops, build the induced labelings, compare the union rank of the
    remaining edges against the count of non-fixed screw dimensions."""
    rep.require_combinatorial()
    if d is None:
        d = rep.d
    if d != rep.d:
        raise InputError(f"dimension {d} disagrees with representation dimension {rep.d}")
    g = rep.group.canon(g)
    h.validate_gains(rep.group)
    h_g = remove_zero_loops(h, rep, g)
    removed = tuple(e.id for e in h.edges if e.id not in {x.id for x in h_g.edges})
    labeled = labeled_signed_graphs(h_g, rep, g)
    result = matroid_union_rank(labeled)
    result.decomposition.validate(labeled)
    b = comb(d + 1, 2)
    target = b * len(h.vertices) - trivial_motion_dim(rep, g)
    rank = result.rank
    return CombinatorialVerdict(
        irrep=g,
        d=d,
        edges=len(h_g.edges),
        target=target,
        rank=rank,
        rigid=rank >= target,
        deficiency=max(0, target - rank),
        removed_loops=removed,
        decomposition=result.decomposition,
        witness=result.witness,
    )
