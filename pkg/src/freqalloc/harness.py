"""Adversarial instance generation and end-to-end ratio measurement.

The truncated universal graph has a vertex (t, k) on each side for every
1 <= k <= t <= T, with an edge between (t, k) on one side and (t', k') on
the other exactly when k + k' <= max(t, t').  Issuing k requests to every
level-t vertex in phase t drives the static optimum to exactly t per phase,
which turns any allocator run into a competitive-ratio measurement.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .allocation import Allocator, BipartiteInstance
from .frequencies import Side
from .golden import GoldenNumber
from .systems import FSystemSpec


class ResourceGuardError(Exception):
    """A requested construction would not fit in memory or on disk."""


class ScaleCapError(Exception):
    def __init__(self, theta: int, lam: int, t_theta: int, cap: int) -> None:
        super().__init__(
            f"largest scale 6*{theta}*{lam}*2^{theta} = {t_theta} exceeds the "
            f"cap {cap}"
        )
        self.t_theta = t_theta


def vertex_id(side: Side, t: int, k: int) -> str:
    return f"{side.value}:{t},{k}"


def parse_vertex_id(vid: str) -> tuple[Side, int, int]:
    side_text, rest = vid.split(":")
    t_text, k_text = rest.split(",")
    return Side(side_text), int(t_text), int(k_text)


@dataclass(frozen=True)
class UniversalGraph:
    """The truncated universal bipartite graph up to level T (lazy edges)."""

    horizon: int

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")

    def vertex_ids(self) -> Iterator[str]:
        for side in (Side.A, Side.B):
            for t in range(1, self.horizon + 1):
                for k in range(1, t + 1):
                    yield vertex_id(side, t, k)

    def vertex_count(self) -> int:
        return self.horizon * (self.horizon + 1)

    @staticmethod
    def adjacent(t: int, k: int, t2: int, k2: int) -> bool:
        """Edge rule between opposite-side vertices."""
        return k + k2 <= max(t, t2)

    def neighbors(self, side: Side, t: int, k: int) -> Iterator[str]:
        other = side.other
        for t2 in range(1, self.horizon + 1):
            top = min(t2, max(t, t2) - k)
            for k2 in range(1, top + 1):
                yield vertex_id(other, t2, k2)

    def edge_count(self) -> int:
        """Number of edges: each (A-level, B-level) pair contributes the
        count of index pairs satisfying the rule."""
        total = 0
        for t in range(1, self.horizon + 1):
            for t2 in range(1, self.horizon + 1):
                m = max(t, t2)
                for k2 in range(1, t2 + 1):
                    total += max(0, min(t, m - k2))
        return total

    def materialize(self, *, max_edges: int = 5_000_000) -> BipartiteInstance:
        """Explicit instance with all edges; guarded, they grow as T^4."""
        # quarter of T^4 underestimates the count; refuse huge T before
        # spending time counting exactly
        if self.horizon**4 // 4 > 4 * max_edges:
            raise ResourceGuardError(
                f"universal graph at T={self.horizon} has on the order of "
                f"{self.horizon**4 // 4} edges, over the guard of {max_edges}"
            )
        est = self.edge_count()
        if est > max_edges:
            raise ResourceGuardError(
                f"universal graph at T={self.horizon} has {est} edges, "
                f"over the guard of {max_edges}"
            )
        vertices = list(self.vertex_ids())
        sides = {v: parse_vertex_id(v)[0] for v in vertices}
        edges = []
        for t in range(1, self.horizon + 1):
            for k in range(1, t + 1):
                u = vertex_id(Side.A, t, k)
                for t2 in range(1, self.horizon + 1):
                    top = min(t2, max(t, t2) - k)
                    for k2 in range(1, top + 1):
                        edges.append((u, vertex_id(Side.B, t2, k2)))
        return BipartiteInstance.from_edges(vertices, edges, sides=sides)

    def phase_requests(self, t: int) -> Iterator[str]:
        """The k requests to each level-t vertex, in (side, k) order."""
        for side in (Side.A, Side.B):
            for k in range(1, t + 1):
                vid = vertex_id(side, t, k)
                for _ in range(k):
                    yield vid

    def request_stream(self) -> Iterator[str]:
        for t in range(1, self.horizon + 1):
            yield from self.phase_requests(t)


def universal_graph(t_max: int) -> UniversalGraph:
    return UniversalGraph(horizon=t_max)


class _PrefixMax:
    """Fenwick tree for prefix maxima under increasing point updates."""

    def __init__(self, size: int) -> None:
        self.size = size
        self.tree = [0] * (size + 1)

    def update(self, index: int, value: int) -> None:
        while index <= self.size:
            if self.tree[index] < value:
                self.tree[index] = value
            index += index & (-index)

    def query(self, index: int) -> int:
        best = 0
        index = min(index, self.size)
        while index > 0:
            if self.tree[index] > best:
                best = self.tree[index]
            index -= index & (-index)
        return best


class UniversalInstance(BipartiteInstance):
    """Lazy-adjacency instance over the universal graph.

    Neighbour maxima are answered from per-side prefix-max trees over the
    k-index, which is exact as long as requests arrive in nondecreasing
    level order (the phase schedule): then every loaded opposite vertex has
    level at most the current one, and the eligible partners of (t, k) are
    exactly the opposite indices up to t - k.
    """

    def __init__(self, graph: UniversalGraph) -> None:
        self.graph = graph
        self.vertices = ()
        self.adjacency = {}
        self.loads = {}
        self.sides = {}
        self._meta: dict[str, tuple[Side, int, int]] = {}
        self._prefix = {Side.A: _PrefixMax(graph.horizon),
                        Side.B: _PrefixMax(graph.horizon)}
        self._top_level = 0

    def side(self, v: str) -> Side:
        return self._touch(v)[0]

    def _touch(self, v: str) -> tuple[Side, int, int]:
        meta = self._meta.get(v)
        if meta is None:
            meta = parse_vertex_id(v)
            side, t, k = meta
            if not (1 <= k <= t <= self.graph.horizon):
                raise ValueError(f"vertex {v} is outside the universal graph")
            self._meta[v] = meta
            self.loads.setdefault(v, 0)
            self.sides[v] = side
        return meta

    def neighbors(self, v: str) -> Iterator[str]:  # type: ignore[override]
        side, t, k = self._touch(v)
        return self.graph.neighbors(side, t, k)

    def bump_load(self, v: str) -> int:
        side, t, k = self._touch(v)
        if t < self._top_level:
            raise ValueError(
                "universal replay requires nondecreasing levels; "
                f"got level {t} after {self._top_level}"
            )
        self._top_level = t
        self.loads[v] = self.loads.get(v, 0) + 1
        self._prefix[side].update(k, self.loads[v])
        return self.loads[v]

    def opt_candidate(self, v: str) -> int:
        side, t, k = self._touch(v)
        best = self._prefix[side.other].query(t - k) if t > k else 0
        return self.loads[v] + best

    def independent_opt(self, phase: int) -> int:
        """Recompute the optimum of the loaded graph after a phase from the
        recorded loads and the edge rule, without reusing the allocator's
        running counter.

        All loaded vertices have level <= phase, and every loaded index m
        has a witness vertex at level phase, so the partners of a loaded
        (t, k) are exactly the opposite indices up to phase - k and the best
        partner load is a prefix maximum over the index.
        """
        by_index = {s: [0] * (phase + 1) for s in (Side.A, Side.B)}
        for v, load in self.loads.items():
            if load <= 0:
                continue
            side, _, k = self._touch(v)
            if load > by_index[side][k]:
                by_index[side][k] = load
        prefix = {}
        for s in (Side.A, Side.B):
            acc = 0
            row = [0] * (phase + 1)
            for m in range(1, phase + 1):
                acc = max(acc, by_index[s][m])
                row[m] = acc
            prefix[s] = row
        best = 0
        for v, load in self.loads.items():
            if load <= 0:
                continue
            side, _, k = self._touch(v)
            partner = prefix[side.other][max(0, min(phase, phase - k))]
            if load + partner > best:
                best = load + partner
        return best


@dataclass
class PhaseRecord:
    t: int
    opt: int
    distinct_used: int
    bound: int
    within_bound: bool

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "opt": self.opt,
            "used": self.distinct_used,
            "bound": self.bound,
            "ok": self.within_bound,
        }


@dataclass
class RunReport:
    system: str
    ratio: GoldenNumber
    lam: int
    phases: list[PhaseRecord] = field(default_factory=list)

    def all_within_bound(self) -> bool:
        return all(p.within_bound for p in self.phases)

    def to_json(self) -> dict:
        return {
            "system": self.system,
            "claims": {"r": str(self.ratio), "lambda": self.lam},
            "phases": [p.to_json() for p in self.phases],
            "all_within_bound": self.all_within_bound(),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "opt", "used", "bound"])
        for p in self.phases:
            writer.writerow([p.t, p.opt, p.distinct_used, p.bound])
        return buf.getvalue()


class CollisionError(Exception):
    def __init__(self, detail: str) -> None:
        super().__init__(detail)


def run_universal(
    system: FSystemSpec,
    t_max: int,
    *,
    ratio: Optional[GoldenNumber] = None,
    lam: Optional[int] = None,
) -> RunReport:
    """Replay the phase schedule on the truncated universal graph.

    Every assignment is checked against the opposite side on the fly: a
    frequency used at opposite index k' collides with a request at (t, k)
    exactly when k' <= t - k.  Any collision or size-floor shortfall aborts
    with a witness; per phase, the optimum is recomputed independently and
    the count of distinct frequencies is compared with floor(r*t) + lambda.
    """
    r = ratio if ratio is not None else system.claimed_ratio
    add = lam if lam is not None else system.claimed_lambda
    graph = universal_graph(t_max)
    inst = UniversalInstance(graph)
    alloc = Allocator(inst, system)
    # smallest opposite k-index using each frequency, with a witness vertex
    min_index: dict[Side, dict[int, tuple[int, str]]] = {Side.A: {}, Side.B: {}}
    report = RunReport(system=system.name, ratio=r, lam=add)
    for t in range(1, t_max + 1):
        for side in (Side.A, Side.B):
            for k in range(1, t + 1):
                vid = vertex_id(side, t, k)
                for _ in range(k):
                    f = alloc.request(vid)
                    enc = f.encode()
                    hit = min_index[side.other].get(enc)
                    if hit is not None and hit[0] <= t - k:
                        raise CollisionError(
                            f"frequency {f} assigned to {vid} is already used "
                            f"at adjacent {hit[1]}"
                        )
                    mine = min_index[side].get(enc)
                    if mine is None or k < mine[0]:
                        min_index[side][enc] = (k, vid)
        opt = inst.independent_opt(t)
        used = alloc.distinct_used()
        bound = (r * t).floor() + add
        report.phases.append(
            PhaseRecord(
                t=t,
                opt=opt,
                distinct_used=used,
                bound=bound,
                within_bound=used <= bound,
            )
        )
        if opt != t:
            raise CollisionError(
                f"independent optimum after phase {t} is {opt}, expected {t}"
            )
    return report


def measure_ratio(report: RunReport, lam: int) -> Fraction:
    """Largest (distinct used - lambda) / optimum over the recorded phases."""
    if not report.phases:
        raise ValueError("cannot measure an empty run")
    return max(
        Fraction(p.distinct_used - lam, p.opt) for p in report.phases
    )


def lower_bound_scales(theta: int, lam: int) -> list[int]:
    return [6 * theta * lam * (2**i) for i in range(theta + 1)]


def lower_bound_instance(
    theta: int, lam: int, scale_cap: int = 1_000_000
) -> tuple[BipartiteInstance, list[str]]:
    """The finite sub-instance of the universal graph that carries the
    doubling-recurrence argument at scales t_i = 6*theta*lambda*2^i.

    Only the vertex families (t_i, t_i), (2t_i, t_i), (3t_i, 2t_i) and
    (3t_i/2, t_i) on both sides are included (duplicates across scales are
    merged), with the edge rule restricted to them and the phase-ordered
    request stream touching only those vertices.
    """
    if theta < 1 or lam < 1:
        raise ValueError("theta and lambda must be >= 1")
    t_theta = 6 * theta * lam * (2**theta)
    if t_theta > scale_cap:
        raise ScaleCapError(theta, lam, t_theta, scale_cap)
    families: set[tuple[int, int]] = set()
    for t in lower_bound_scales(theta, lam):
        families.add((t, t))
        families.add((2 * t, t))
        families.add((3 * t, 2 * t))
        families.add((3 * t // 2, t))
    ordered = sorted(families)
    vertices = []
    sides = {}
    for side in (Side.A, Side.B):
        for t, k in ordered:
            vid = vertex_id(side, t, k)
            vertices.append(vid)
            sides[vid] = side
    edges = []
    for t, k in ordered:
        for t2, k2 in ordered:
            if UniversalGraph.adjacent(t, k, t2, k2):
                edges.append(
                    (vertex_id(Side.A, t, k), vertex_id(Side.B, t2, k2))
                )
    inst = BipartiteInstance.from_edges(vertices, edges, sides=sides)
    requests = []
    levels = sorted({t for t, _ in ordered})
    for level in levels:  # phase order: level, then side, then index
        ks = sorted(k for t, k in ordered if t == level)
        for side in (Side.A, Side.B):
            for k in ks:
                requests.extend([vertex_id(side, level, k)] * k)
    return inst, requests


def requests_to_jsonl(requests: list[str]) -> str:
    return "".join(json.dumps({"vertex": v}) + "\n" for v in requests)
