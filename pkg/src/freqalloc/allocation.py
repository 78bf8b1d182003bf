"""Bipartite instances, the static optimum, and the incremental allocator.

On a bipartite graph the minimum number of frequencies for a load vector is
the maximum load sum over an edge (extended here by the maximum single
vertex load, which covers vertices without neighbours).  The incremental
allocator serves requests one at a time by drawing, for a request at a
side-c vertex with new load k while the running optimum is t, the smallest
unused frequency of the system's (c, t, k) set; the size floor of a sound
system guarantees one exists, and cross-side disjointness guarantees
neighbours never share.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .frequencies import Frequency, FrequencySet, PoolTag, Side
from .systems import FSystemSpec


class NotBipartiteError(Exception):
    def __init__(self, cycle: Sequence[str]) -> None:
        super().__init__(f"graph contains an odd cycle: {' - '.join(cycle)}")
        self.cycle = list(cycle)


class BudgetExceededError(Exception):
    pass


class AllocationError(Exception):
    """The system under-delivered (size floor breach) or produced a clash."""


def bipartition(
    vertices: Sequence[str], adjacency: dict[str, Sequence[str]]
) -> dict[str, Side]:
    """Two-colour each component by BFS; deterministic for a fixed id order.

    The lowest-id vertex of each component (isolated vertices included)
    gets side A.  An odd cycle raises NotBipartiteError with a witness.
    """
    sides: dict[str, Side] = {}
    parents: dict[str, Optional[str]] = {}
    for root in sorted(vertices):
        if root in sides:
            continue
        sides[root] = Side.A
        parents[root] = None
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in sorted(adjacency.get(u, ())):
                if w not in sides:
                    sides[w] = sides[u].other
                    parents[w] = u
                    queue.append(w)
                elif sides[w] is sides[u]:
                    raise NotBipartiteError(_odd_cycle(u, w, parents))
    return sides


def _odd_cycle(
    u: str, w: str, parents: dict[str, Optional[str]]
) -> list[str]:
    path_u = _root_path(u, parents)
    path_w = _root_path(w, parents)
    shared = 0
    while (
        shared < len(path_u)
        and shared < len(path_w)
        and path_u[shared] == path_w[shared]
    ):
        shared += 1
    pivot = path_u[shared - 1]
    return list(reversed(path_u[shared:])) + [pivot] + path_w[shared:]


def _root_path(v: str, parents: dict[str, Optional[str]]) -> list[str]:
    path = [v]
    while parents[path[-1]] is not None:
        path.append(parents[path[-1]])  # type: ignore[arg-type]
    path.reverse()
    return path


@dataclass
class BipartiteInstance:
    vertices: tuple[str, ...]
    adjacency: dict[str, tuple[str, ...]]
    sides: dict[str, Side]
    loads: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for v in self.vertices:
            self.loads.setdefault(v, 0)

    @classmethod
    def from_edges(
        cls,
        vertices: Iterable[str],
        edges: Iterable[tuple[str, str]],
        sides: Optional[dict[str, Side]] = None,
        loads: Optional[dict[str, int]] = None,
    ) -> "BipartiteInstance":
        verts = tuple(dict.fromkeys(vertices))
        known = set(verts)
        adjacency: dict[str, set[str]] = {v: set() for v in verts}
        for u, w in edges:
            if u not in known or w not in known:
                raise ValueError(f"edge ({u}, {w}) references an unknown vertex")
            if u == w:
                raise NotBipartiteError([u, u])
            adjacency[u].add(w)
            adjacency[w].add(u)
        adj = {v: tuple(sorted(adjacency[v])) for v in verts}
        computed = bipartition(verts, adj)
        if sides:
            for v in sides:
                if v not in known:
                    raise ValueError(f"side given for unknown vertex {v}")
            # honour given labels by flipping whole components; a conflict
            # means the labels cannot be completed into any 2-colouring
            flip: dict[int, bool] = {}
            comp = _components(verts, adj)
            for v, s in sides.items():
                c = comp[v]
                want_flip = computed[v] is not s
                if flip.setdefault(c, want_flip) != want_flip:
                    raise ValueError(
                        f"given sides are inconsistent with the edges near {v}"
                    )
            computed = {
                v: computed[v].other if flip.get(comp[v]) else computed[v]
                for v in verts
            }
        inst = cls(
            vertices=verts,
            adjacency=adj,
            sides=computed,
            loads=dict(loads or {}),
        )
        return inst

    @classmethod
    def from_json(cls, doc: dict) -> "BipartiteInstance":
        vertices = []
        sides = {}
        for entry in doc.get("vertices", []):
            vid = entry["id"]
            vertices.append(vid)
            if "side" in entry and entry["side"] is not None:
                sides[vid] = Side(entry["side"])
        edges = [(u, w) for u, w in doc.get("edges", [])]
        return cls.from_edges(vertices, edges, sides=sides or None)

    def to_json(self) -> dict:
        seen = set()
        edges = []
        for u in self.vertices:
            for w in self.adjacency[u]:
                if (w, u) not in seen:
                    seen.add((u, w))
                    edges.append([u, w])
        return {
            "vertices": [
                {"id": v, "side": self.sides[v].value} for v in self.vertices
            ],
            "edges": edges,
        }

    def side(self, v: str) -> Side:
        return self.sides[v]

    def neighbors(self, v: str) -> tuple[str, ...]:
        return self.adjacency[v]

    def bump_load(self, v: str) -> int:
        self.loads[v] += 1
        return self.loads[v]

    def opt_candidate(self, v: str) -> int:
        """Load of v plus the largest neighbour load (covers lone vertices)."""
        lv = self.loads[v]
        best = 0
        for w in self.adjacency[v]:
            lw = self.loads[w]
            if lw > best:
                best = lw
        return lv + best


def _components(
    verts: Sequence[str], adj: dict[str, tuple[str, ...]]
) -> dict[str, int]:
    comp: dict[str, int] = {}
    n = 0
    for root in verts:
        if root in comp:
            continue
        comp[root] = n
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in comp:
                    comp[w] = n
                    queue.append(w)
        n += 1
    return comp


def static_opt(instance: BipartiteInstance) -> int:
    """Minimum number of frequencies for the instance's load vector."""
    best = max(instance.loads.values(), default=0)
    for u in instance.vertices:
        lu = instance.loads[u]
        for w in instance.adjacency[u]:
            s = lu + instance.loads[w]
            if s > best:
                best = s
    return best


def static_allocate(instance: BipartiteInstance) -> dict[str, FrequencySet]:
    """Closed-form optimal assignment: side A counts up from 1, side B
    counts down from the optimum, so edge sums never overlap."""
    omega = static_opt(instance)
    out: dict[str, FrequencySet] = {}
    for v in instance.vertices:
        lv = instance.loads[v]
        if lv == 0:
            out[v] = FrequencySet.empty()
        elif instance.sides[v] is Side.A:
            out[v] = FrequencySet([(PoolTag.PLAIN, 1, lv + 1)])
        else:
            out[v] = FrequencySet([(PoolTag.PLAIN, omega - lv + 1, omega + 1)])
    return out


def assignment_valid(
    instance: BipartiteInstance, assignment: dict[str, FrequencySet]
) -> bool:
    """Each vertex holds exactly its load and no edge shares a frequency."""
    empty = FrequencySet.empty()
    for v in instance.vertices:
        if len(assignment.get(v, empty)) != instance.loads[v]:
            return False
    for u in instance.vertices:
        for w in instance.adjacency[u]:
            if u < w and not assignment.get(u, empty).isdisjoint(
                assignment.get(w, empty)
            ):
                return False
    return True


def brute_force_opt(instance: BipartiteInstance, budget_cap: int = 10) -> int:
    """Exact optimum by exhaustive search; independent of static_opt.

    Tries palette sizes upward from the largest single load, assigning each
    vertex a combination of palette frequencies disjoint from its already
    assigned neighbours.  Declines instances whose total load exceeds the
    budget cap.
    """
    total = sum(instance.loads.values())
    if total > budget_cap:
        raise BudgetExceededError(
            f"total load {total} exceeds the search budget {budget_cap}"
        )
    if total == 0:
        return 0
    order = [v for v in sorted(instance.vertices) if instance.loads[v] > 0]

    def feasible(m: int) -> bool:
        palette = range(1, m + 1)

        def place(i: int, chosen: dict[str, frozenset[int]]) -> bool:
            if i == len(order):
                return True
            v = order[i]
            forbidden: set[int] = set()
            for w in instance.adjacency[v]:
                forbidden |= chosen.get(w, frozenset())
            allowed = [f for f in palette if f not in forbidden]
            need = instance.loads[v]
            if len(allowed) < need:
                return False
            for combo in itertools.combinations(allowed, need):
                chosen[v] = frozenset(combo)
                if place(i + 1, chosen):
                    return True
            del chosen[v]
            return False

        return place(0, {})

    m = max(instance.loads.values())
    while not feasible(m):
        m += 1
    return m


class Allocator:
    """Sequential request server built from any F-system.

    Tracks the running optimum t (largest edge load sum, floored by the
    largest single load), and answers the k-th request at a vertex with the
    smallest canonical frequency of the (side, t, k) set not yet used there.
    """

    def __init__(
        self,
        instance: BipartiteInstance,
        system: FSystemSpec,
        *,
        validate: str = "none",
    ) -> None:
        if validate not in ("none", "neighbors", "full"):
            raise ValueError(f"unknown validate mode {validate!r}")
        self.instance = instance
        self.system = system
        self.validate = validate
        self.t = 0
        self.assignment: dict[str, list[Frequency]] = {}
        self._used_enc: dict[str, set[int]] = {}
        self._all_enc: set[int] = set()

    def request(self, v: str) -> Frequency:
        side = self.instance.side(v)
        k = self.instance.bump_load(v)
        cand = self.instance.opt_candidate(v)
        if cand > self.t:
            self.t = cand
        fs = self.system.sets(side, self.t, k)
        used = self._used_enc.setdefault(v, set())
        pick: Optional[Frequency] = None
        for enc, pool, index in fs.iter_encoded():
            if enc not in used:
                pick = Frequency(pool, index)
                used.add(enc)
                break
        if pick is None:
            raise AllocationError(
                f"system {self.system.name!r} offers only {len(fs)} frequencies "
                f"for side {side}, t={self.t}, k={k}; the size floor requires {k}"
            )
        self.assignment.setdefault(v, []).append(pick)
        self._all_enc.add(pick.encode())
        if self.validate == "neighbors":
            enc = pick.encode()
            for w in self.instance.neighbors(v):
                if enc in self._used_enc.get(w, ()):
                    raise AllocationError(
                        f"frequency {pick} assigned to {v} is already used at "
                        f"adjacent {w}"
                    )
        elif self.validate == "full":
            self._check_valid(v, pick)
        return pick

    def distinct_used(self) -> int:
        return len(self._all_enc)

    def assignment_sets(self) -> dict[str, FrequencySet]:
        return {
            v: FrequencySet.from_frequencies(fs)
            for v, fs in self.assignment.items()
        }

    def _check_valid(self, v: str, new: Frequency) -> None:
        sets = self.assignment_sets()
        for u, fs in sets.items():
            if len(fs) != self.instance.loads[u]:
                raise AllocationError(
                    f"vertex {u} holds {len(fs)} frequencies for load "
                    f"{self.instance.loads[u]}"
                )
        for u in self.instance.vertices:
            for w in self.instance.adjacency[u]:
                if u < w:
                    su = sets.get(u, FrequencySet.empty())
                    sw = sets.get(w, FrequencySet.empty())
                    if not su.isdisjoint(sw):
                        clash = su & sw
                        raise AllocationError(
                            f"edge ({u}, {w}) shares {clash!r} after assigning "
                            f"{new} to {v}"
                        )


def assignment_to_json(assignment: dict[str, FrequencySet]) -> dict:
    return {
        v: [f.encode() for f in fs] for v, fs in sorted(assignment.items())
    }


def load_requests(lines: Iterable[str]) -> list[str]:
    """Parse a JSON-lines request stream of {"vertex": id} records."""
    out = []
    for i, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        doc = json.loads(line)
        if not isinstance(doc, dict) or "vertex" not in doc:
            raise ValueError(f"request line {i} lacks a 'vertex' field: {line!r}")
        out.append(str(doc["vertex"]))
    return out
