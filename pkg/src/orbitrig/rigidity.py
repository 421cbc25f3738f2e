"""Rigidity matrices of body-bar frameworks and the per-character orbit
matrices of their quotients.

The screw of a body is a grade-2 coordinate vector; a bar row pairs screws
with the bar's grade-2 coordinates by the plain coordinatewise product
(the duality pairing composed with the star identification; one fixed
convention, exercised against the dimension-3 formulas in the tests).  A
framework is infinitesimally rigid exactly when every character block
leaves no motions beyond its fixed screws.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping

from .algebra import Scalar, is_exact
from .errors import ConsistencyError, InputError
from .gaingraph import CoveredGraph, EdgeId, GainGraph, VertexId
from .genframe import BarConfiguration, BarEntry, lift_bars, random_generic_bars, verify_loop_form
from .linalg import matrix_rank, nullspace_exact, rank_exact
from .symmetry import (
    Element,
    PointRepresentation,
    fixed_subspace_basis,
    irrep_is_real,
    tau_hat2_j,
    trivial_motion_dim,
)

__all__ = [
    "OrbitMatrix",
    "Flex",
    "IrrepReport",
    "RigidityReport",
    "matrix_rank",
    "rigidity_matrix",
    "orbit_matrix",
    "analyze",
    "analyze_generic",
    "extract_flex",
    "crosscheck_block_ranks",
]


def rigidity_matrix(
    cov: CoveredGraph, bars: Mapping[tuple, BarEntry], d: int
) -> list[list[Scalar]]:
    """Row per lifted bar: its grade-2 coordinates at the tail block and
    their negation at the head block."""
    b = comb(d + 1, 2)
    vindex = {v: i for i, v in enumerate(cov.vertices)}
    rows = []
    for e in cov.edges:
        try:
            vec = bars[e.id].vector
        except KeyError:
            raise InputError(f"no bar for lifted edge {e.id!r}")
        row = [Fraction(0)] * (b * len(cov.vertices))
        tb = vindex[e.tail] * b
        hb = vindex[e.head] * b
        for t in range(b):
            row[tb + t] += vec[t]
            row[hb + t] -= vec[t]
        rows.append(row)
    return rows


@dataclass(frozen=True)
class OrbitMatrix:
    """Quotient-sized block of the rigidity matrix for one character label."""

    irrep: Element
    d: int
    vertices: tuple[VertexId, ...]
    edge_ids: tuple[EdgeId, ...]
    rows: tuple[tuple[Scalar, ...], ...]

    @property
    def block_size(self) -> int:
        return comb(self.d + 1, 2)

    @property
    def ncols(self) -> int:
        return self.block_size * len(self.vertices)

    def is_exact(self) -> bool:
        return all(is_exact(x) for row in self.rows for x in row)

    def row_of(self, eid: EdgeId) -> tuple[Scalar, ...]:
        return self.rows[self.edge_ids.index(eid)]

    def rank(self) -> int:
        return matrix_rank([list(r) for r in self.rows])


def orbit_matrix(
    h: GainGraph, config: BarConfiguration, rep: PointRepresentation, g: Element
) -> OrbitMatrix:
    """Row per quotient edge: the bar vector at the tail block and minus the
    inverse twisted screw image of the bar at the head block; a loop row
    collapses both entries onto its single vertex.  Rows of non-free loops
    whose character value is -1 vanish identically."""
    h.validate_gains(rep.group)
    verify_loop_form(h, rep, config)
    g = rep.group.canon(g)
    b = comb(rep.d + 1, 2)
    vindex = {v: i for i, v in enumerate(h.vertices)}
    rows = []
    for e in h.edges:
        vec = config.vector(e.id)
        inv = tau_hat2_j(rep, g, rep.group.inverse(e.gain))
        moved = inv.apply(vec)
        row: list[Scalar] = [Fraction(0)] * (b * len(h.vertices))
        tb = vindex[e.tail] * b
        hb = vindex[e.head] * b
        for t in range(b):
            row[tb + t] += vec[t]
            row[hb + t] -= moved[t]
        rows.append(tuple(row))
    return OrbitMatrix(
        irrep=g,
        d=rep.d,
        vertices=tuple(h.vertices),
        edge_ids=tuple(e.id for e in h.edges),
        rows=tuple(rows),
    )


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class IrrepReport:
    irrep: Element
    rank: int
    trivial: int
    flex: int

    @property
    def rigid(self) -> bool:
        return self.flex == 0

    def to_json(self) -> dict:
        return {
            "irrep": list(self.irrep),
            "rank": self.rank,
            "trivial": self.trivial,
            "flex": self.flex,
            "rigid": self.rigid,
        }


@dataclass(frozen=True)
class RigidityReport:
    d: int
    group_orders: tuple[int, ...]
    quotient_vertices: int
    quotient_edges: int
    lifted_edges: int
    irreps: tuple[IrrepReport, ...]
    samples_agree: bool = True
    meta: dict = field(default_factory=dict)

    @property
    def rigid(self) -> bool:
        return all(r.rigid for r in self.irreps)

    @property
    def isostatic(self) -> bool:
        return self.rigid and sum(r.rank for r in self.irreps) == self.lifted_edges

    def irrep_report(self, g: Element) -> IrrepReport:
        for r in self.irreps:
            if r.irrep == tuple(g):
                return r
        raise InputError(f"no report for irrep {g}")

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "group": {"orders": list(self.group_orders)},
            "quotient": {"vertices": self.quotient_vertices, "edges": self.quotient_edges},
            "lifted_edges": self.lifted_edges,
            "irreps": [r.to_json() for r in self.irreps],
            "rigid": self.rigid,
            "isostatic": self.isostatic,
            "samples_agree": self.samples_agree,
            "meta": self.meta,
        }


def _lifted_edge_count(h: GainGraph, order: int) -> int:
    n = 0
    for e in h.edges:
        n += order // 2 if e.id in h.loops_l else order
    return n


def analyze(
    h: GainGraph, rep: PointRepresentation, config: BarConfiguration
) -> RigidityReport:
    """Per-character ranks for one fixed configuration: the flex count of a
    block is the column count minus its rank minus its fixed-screw
    dimension."""
    b = comb(rep.d + 1, 2)
    nv = len(h.vertices)
    reports = []
    for g in rep.group.elements():
        om = orbit_matrix(h, config, rep, g)
        rank = om.rank()
        trivial = trivial_motion_dim(rep, g)
        flex = b * nv - rank - trivial
        if flex < 0:
            raise ConsistencyError(
                f"negative flex count in irrep {g}: rank {rank}, trivial {trivial}"
            )
        reports.append(IrrepReport(irrep=g, rank=rank, trivial=trivial, flex=flex))
    return RigidityReport(
        d=rep.d,
        group_orders=rep.group.orders,
        quotient_vertices=nv,
        quotient_edges=len(h.edges),
        lifted_edges=_lifted_edge_count(h, rep.group.order()),
        irreps=tuple(reports),
        meta=dict(config.meta),
    )


def analyze_generic(
    h: GainGraph,
    rep: PointRepresentation,
    seed: int,
    samples: int = 2,
    bound: int = 10 ** 6,
) -> RigidityReport:
    """Analyze at a random symmetric configuration, sampling ``samples``
    independent seeds and keeping the per-character maximum rank.  Exact
    rank agreement across the samples is the practical genericity surrogate
    and is reported, not enforced."""
    if samples < 1:
        raise InputError("need at least one sample")
    per_sample = []
    for t in range(samples):
        config = random_generic_bars(h, rep, seed + t, bound=bound)
        per_sample.append(analyze(h, rep, config))
    base = per_sample[0]
    agree = all(
        [r.rank for r in rep_t.irreps] == [r.rank for r in base.irreps] for rep_t in per_sample
    )
    merged = []
    for i, r in enumerate(base.irreps):
        best = max(rep_t.irreps[i].rank for rep_t in per_sample)
        b = comb(rep.d + 1, 2)
        flex = b * base.quotient_vertices - best - r.trivial
        merged.append(IrrepReport(irrep=r.irrep, rank=best, trivial=r.trivial, flex=flex))
    return RigidityReport(
        d=base.d,
        group_orders=base.group_orders,
        quotient_vertices=base.quotient_vertices,
        quotient_edges=base.quotient_edges,
        lifted_edges=base.lifted_edges,
        irreps=tuple(merged),
        samples_agree=agree,
        meta={"seed": seed, "samples": samples, "bound": bound, "prng": "python-random-mt19937"},
    )


# ---------------------------------------------------------------------------
# flexes


@dataclass(frozen=True)
class Flex:
    """A nontrivial motion in one character block: a screw per quotient
    vertex, orthogonalized against the fixed screws."""

    irrep: Element
    vertices: tuple[VertexId, ...]
    assignment: dict[VertexId, tuple[Scalar, ...]]

    def stacked(self) -> list[Scalar]:
        out: list[Scalar] = []
        for v in self.vertices:
            out.extend(self.assignment[v])
        return out

    def to_json(self) -> dict:
        return {
            "irrep": list(self.irrep),
            "assignment": {
                str(v): [_scalar_json(x) for x in vec] for v, vec in self.assignment.items()
            },
        }


def _scalar_json(x: Scalar):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


def trivial_space_vectors(
    rep: PointRepresentation, g: Element, nverts: int
) -> list[tuple[Scalar, ...]]:
    """Constant assignments of each fixed screw to every vertex: the
    j-symmetric trivial motions on the quotient."""
    out = []
    for t in fixed_subspace_basis(rep, g):
        out.append(tuple(t) * nverts)
    return out


def extract_flex(om: OrbitMatrix, rep: PointRepresentation) -> Flex | None:
    """A kernel vector of the orbit matrix outside the trivial subspace,
    orthogonalized against it; None when the kernel is exactly the trivial
    space."""
    if not om.is_exact():
        raise InputError("flex extraction is implemented for the exact rational path")
    nv = len(om.vertices)
    kernel = nullspace_exact([list(r) for r in om.rows], om.ncols)
    trivial = [list(v) for v in trivial_space_vectors(rep, om.irrep, nv)]
    t_rank = rank_exact(trivial) if trivial else 0
    # orthogonal basis of the trivial space for exact projection
    ortho: list[list[Fraction]] = []
    for t in trivial:
        vec = [Fraction(x) for x in t]
        for u in ortho:
            num = sum(a * b for a, b in zip(vec, u))
            den = sum(a * a for a in u)
            vec = [a - num / den * b for a, b in zip(vec, u)]
        if any(x != 0 for x in vec):
            ortho.append(vec)
    for k in kernel:
        if rank_exact(trivial + [list(k)]) > t_rank:
            vec = [Fraction(x) for x in k]
            for u in ortho:
                num = sum(a * b for a, b in zip(vec, u))
                den = sum(a * a for a in u)
                vec = [a - num / den * b for a, b in zip(vec, u)]
            scale = None
            for x in vec:
                if x != 0:
                    scale = 1 / x
                    break
            if scale is not None:
                vec = [x * scale for x in vec]
            b = om.block_size
            assignment = {
                v: tuple(vec[i * b : (i + 1) * b]) for i, v in enumerate(om.vertices)
            }
            return Flex(irrep=om.irrep, vertices=om.vertices, assignment=assignment)
    return None


def flex_residuals(om: OrbitMatrix, flex: Flex) -> list[Scalar]:
    """Re-substitution check: the orbit matrix applied to the flex."""
    stacked = flex.stacked()
    return [sum(a * b for a, b in zip(row, stacked)) for row in om.rows]


# ---------------------------------------------------------------------------
# rank additivity against the lifted framework


@dataclass(frozen=True)
class CrosscheckResult:
    lifted_rank: int
    block_ranks: dict[Element, int]

    @property
    def additive(self) -> bool:
        return self.lifted_rank == sum(self.block_ranks.values())


def crosscheck_block_ranks(
    h: GainGraph, config: BarConfiguration, rep: PointRepresentation
) -> CrosscheckResult:
    """Exact rank of the lifted rigidity matrix against the sum of the
    orbit-matrix ranks across characters.  Restricted to representations
    whose characters are all real so both sides stay rational."""
    for g in rep.group.elements():
        if not irrep_is_real(rep.group, g):
            raise InputError("rank additivity crosscheck needs all-real characters")
    cov, bars = lift_bars(h, config, rep)
    lifted = rigidity_matrix(cov, bars, rep.d)
    lifted_rank = rank_exact(lifted)
    blocks = {}
    for g in rep.group.elements():
        blocks[g] = orbit_matrix(h, config, rep, g).rank()
    return CrosscheckResult(lifted_rank=lifted_rank, block_ranks=blocks)
