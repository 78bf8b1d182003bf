"""Property checking for F-systems: size floors, cross-side disjointness,
competitiveness, shared-frequency statistics, and the doubling-recurrence
falsifier for claimed ratios below 10/7.

Every reported violation carries the parameters and both sides of the
failed inequality, so re-evaluating the named inequality on the named
parameters reproduces the failure.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional

from .frequencies import SIDES, FrequencySet, Side, union_all
from .golden import GoldenNumber
from .systems import FSystemSpec

TEN_SEVENTHS = GoldenNumber(Fraction(10, 7))


class ViolationKind(Enum):
    F1 = "f1"
    F2 = "f2"
    COMPETITIVENESS = "competitiveness"
    # |S_t| >= (2-R)t - lambda
    SHARED_LOWER = "shared_lower"
    # |S_{2t,t}| >= (6-4R)t - 2*lambda
    SHARED_SPLIT_LOWER = "shared_split_lower"
    # |S_2t \ Z_{3t,2t}| >= |S_t u Z_{3t/2,t}| + |S_{2t,t}|
    SHARED_PACKING = "shared_packing"
    # |Z_{3t,2t}| >= |S_t u Z_{3t/2,t}| - (3R-4)t - lambda
    CARRY_LOWER = "carry_lower"
    # |S_2t u Z_{3t,2t}| >= 2|S_t u Z_{3t/2,t}| + (10-7R)t - 3*lambda
    RECURRENCE = "recurrence"
    GAMMA_STEP = "gamma_step"
    GAMMA_CAP = "gamma_cap"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    params: dict
    lhs: str
    rhs: str
    witness: Optional[FrequencySet] = None

    def render(self) -> str:
        ps = ", ".join(f"{k}={v}" for k, v in self.params.items())
        msg = f"{self.kind.value} violated at {ps}: {self.lhs} < {self.rhs}"
        if self.witness is not None and self.witness:
            msg += f"; witness {self.witness!r}"
        return msg

    def to_json(self) -> dict:
        doc = {
            "kind": self.kind.value,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "lhs": self.lhs,
            "rhs": self.rhs,
            "detail": self.render(),
        }
        if self.witness is not None:
            doc["witness"] = [f.encode() for f in self.witness]
        return doc


def _jsonable(v: object) -> object:
    if isinstance(v, (GoldenNumber, Fraction, Side)):
        return str(v)
    return v


def check_f1(
    sys: FSystemSpec, t_max: int, *, jobs: int = 1, limit: Optional[int] = None
) -> list[Violation]:
    """Size floor: |F(c,t,k)| >= k for both sides and all 1 <= k <= t <= t_max."""
    if t_max < 1:
        raise ValueError("t_max must be >= 1")

    def scan(t_range: range) -> list[Violation]:
        out = []
        for t in t_range:
            for side in SIDES:
                sizes = sys.row_sizes(side, t)
                for k in range(1, t + 1):
                    n = sizes[k - 1]
                    if n < k:
                        # recover the witness from the generator proper
                        fs = sys.sets(side, t, k)
                        out.append(
                            Violation(
                                kind=ViolationKind.F1,
                                params={"side": side, "t": t, "k": k},
                                lhs=f"|F| = {len(fs)}",
                                rhs=f"k = {k}",
                                witness=fs,
                            )
                        )
                        if limit and len(out) >= limit:
                            return out
        return out

    if jobs <= 1:
        return scan(range(1, t_max + 1))
    chunk = max(1, (t_max + jobs - 1) // jobs)
    ranges = [
        range(lo, min(lo + chunk, t_max + 1))
        for lo in range(1, t_max + 1, chunk)
    ]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(scan, ranges))
    return [v for part in parts for v in part]


def check_f2(
    sys: FSystemSpec, t_max: int, *, limit: Optional[int] = None
) -> list[Violation]:
    """Cross-side disjointness for every quadruple with k + k' <= max(t, t').

    The sweep fixes the larger level t and tests each level-t set against
    the union of all opposite-side sets F(c', t', k') with t' <= t and
    k' <= t - k; by the symmetry of the condition in the two sides this
    covers every quadruple up to t_max exactly once.  Witnesses are
    recovered by re-scanning the offending range.
    """
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    out: list[Violation] = []
    # cols[side][k'] accumulates the union over t' of F(side, t', k')
    cols: dict[Side, list[FrequencySet]] = {
        s: [FrequencySet.empty()] * (t_max + 1) for s in SIDES
    }

    def prefixes(side: Side, t: int) -> list[FrequencySet]:
        acc = FrequencySet.empty()
        pref = [acc]
        for m in range(1, t + 1):
            acc = acc | cols[side][m]
            pref.append(acc)
        return pref

    def witness_pair(
        side: Side, t: int, k: int, horizon: int
    ) -> Optional[Violation]:
        mine = sys.sets(side, t, k)
        for tp in range(1, horizon + 1):
            for kp in range(1, min(tp, t - k) + 1):
                hit = mine & sys.sets(side.other, tp, kp)
                if hit:
                    return Violation(
                        kind=ViolationKind.F2,
                        params={
                            "side": side,
                            "t": t,
                            "k": k,
                            "t_other": tp,
                            "k_other": kp,
                        },
                        lhs=f"|F(t,k) & F'(t',k')| = {len(hit)}",
                        rhs="0",
                        witness=hit,
                    )
        return None

    for t in range(1, t_max + 1):
        rows = {s: [sys.sets(s, t, k) for k in range(1, t + 1)] for s in SIDES}
        # side A row versus side B history including level t itself
        for m in range(1, t + 1):
            cols[Side.B][m] = cols[Side.B][m] | rows[Side.B][m - 1]
        prefB = prefixes(Side.B, t - 1) if t > 1 else [FrequencySet.empty()]
        for k in range(1, t):
            if not rows[Side.A][k - 1].isdisjoint(prefB[t - k]):
                v = witness_pair(Side.A, t, k, t)
                if v is not None:
                    out.append(v)
                    if limit and len(out) >= limit:
                        return out
        # side B row versus strictly earlier side A history (level-t pairs
        # were already covered above)
        prefA = prefixes(Side.A, t - 1) if t > 1 else [FrequencySet.empty()]
        for k in range(1, t):
            if not rows[Side.B][k - 1].isdisjoint(prefA[t - k]):
                v = witness_pair(Side.B, t, k, t - 1)
                if v is not None:
                    out.append(v)
                    if limit and len(out) >= limit:
                        return out
        for m in range(1, t + 1):
            cols[Side.A][m] = cols[Side.A][m] | rows[Side.A][m - 1]
    return out


def check_f2_exhaustive(sys: FSystemSpec, t_max: int) -> list[Violation]:
    """Unreduced quadruple sweep; cross-check oracle for small horizons."""
    out = []
    for t in range(1, t_max + 1):
        for k in range(1, t + 1):
            fa = sys.sets(Side.A, t, k)
            for tp in range(1, t_max + 1):
                for kp in range(1, tp + 1):
                    if k + kp > max(t, tp):
                        continue
                    hit = fa & sys.sets(Side.B, tp, kp)
                    if hit:
                        out.append(
                            Violation(
                                kind=ViolationKind.F2,
                                params={
                                    "side": Side.A,
                                    "t": t,
                                    "k": k,
                                    "t_other": tp,
                                    "k_other": kp,
                                },
                                lhs=f"|F & F'| = {len(hit)}",
                                rhs="0",
                                witness=hit,
                            )
                        )
    return out


def union_sizes(sys: FSystemSpec, t_max: int) -> Iterator[tuple[int, int]]:
    """Yield (t, |U_t|) where U_t unions every set of level at most t."""
    acc = FrequencySet.empty()
    for t in range(1, t_max + 1):
        acc = acc | sys.row_union(Side.A, t) | sys.row_union(Side.B, t)
        yield t, len(acc)


def union_at(sys: FSystemSpec, t: int) -> FrequencySet:
    """From-scratch U_t by folding the raw generator; checker oracle."""
    return union_all(
        sys.sets(side, tau, k)
        for side in SIDES
        for tau in range(1, t + 1)
        for k in range(1, tau + 1)
    )


def check_competitiveness(
    sys: FSystemSpec,
    r: GoldenNumber,
    lam: int,
    t_max: int,
    *,
    limit: Optional[int] = None,
) -> list[Violation]:
    """|U_t| <= r*t + lambda for every t <= t_max, compared exactly."""
    if r < 1:
        raise ValueError("competitive ratio must be >= 1")
    out = []
    for t, size in union_sizes(sys, t_max):
        if GoldenNumber(size - lam) > r * t:
            out.append(
                Violation(
                    kind=ViolationKind.COMPETITIVENESS,
                    params={"t": t},
                    lhs=f"|U_t| = {size}",
                    rhs=f"r*t + lambda = {r * t + lam}",
                )
            )
            if limit and len(out) >= limit:
                break
    return out


def min_lambda(sys: FSystemSpec, r: GoldenNumber, t_max: int) -> GoldenNumber:
    """Smallest additive constant making the system r-competitive up to t_max:
    the maximum of |U_t| - r*t over the horizon (may be negative)."""
    if r < 1:
        raise ValueError("competitive ratio must be >= 1")
    best: Optional[GoldenNumber] = None
    for t, size in union_sizes(sys, t_max):
        excess = GoldenNumber(size) - r * t
        if best is None or excess > best:
            best = excess
    if best is None:
        raise ValueError("t_max must be >= 1")
    return best


@dataclass
class SharedStats:
    """Shared-frequency statistics at an even level t.

    f_union_a/b are the cumulative per-side unions up to level t; s_t their
    intersection; s_2t_t the part of the level-2t shared set that the
    (2t, t) sets actually use; z_3t2_t the overlap of the two (3t/2, t) sets.
    """

    t: int
    f_union_a: FrequencySet
    f_union_b: FrequencySet
    s_t: FrequencySet
    s_2t_t: FrequencySet
    z_3t2_t: FrequencySet


def _cumulative(sys: FSystemSpec, side: Side, t: int) -> FrequencySet:
    acc = FrequencySet.empty()
    for tau in range(1, t + 1):
        acc = acc | sys.row_union(side, tau)
    return acc


def shared_stats(sys: FSystemSpec, t: int) -> SharedStats:
    if t < 2 or t % 2:
        raise ValueError("t must be even and >= 2")
    fa = _cumulative(sys, Side.A, t)
    fb = _cumulative(sys, Side.B, t)
    fa2 = fa
    fb2 = fb
    for tau in range(t + 1, 2 * t + 1):
        fa2 = fa2 | sys.row_union(Side.A, tau)
        fb2 = fb2 | sys.row_union(Side.B, tau)
    s_t = fa & fb
    s_2t = fa2 & fb2
    used = sys.sets(Side.A, 2 * t, t) | sys.sets(Side.B, 2 * t, t)
    z = sys.sets(Side.A, 3 * t // 2, t) & sys.sets(Side.B, 3 * t // 2, t)
    return SharedStats(
        t=t,
        f_union_a=fa,
        f_union_b=fb,
        s_t=s_t,
        s_2t_t=s_2t & used,
        z_3t2_t=z,
    )


def _ge_exact(lhs: int, rhs: GoldenNumber) -> bool:
    return GoldenNumber(lhs) >= rhs


def lemma_chain_check(
    sys: FSystemSpec, r: GoldenNumber, lam: int, t_max: int
) -> list[Violation]:
    """The shared-frequency inequality chain at every even t <= t_max.

    Each inequality is a consequence of the size floor, disjointness and
    r-competitiveness on levels up to 3t, so for a system that genuinely has
    those properties the result is empty; a violation therefore indicates
    that the assumed properties fail somewhere on that horizon.  Generator
    queries reach level 3*t_max.
    """
    out: list[Violation] = []
    if t_max < 2:
        return out
    # cumulative unions and their intersections at every even level <= 2*t_max
    s_at: dict[int, FrequencySet] = {}
    fa = FrequencySet.empty()
    fb = FrequencySet.empty()
    for tau in range(1, 2 * t_max + 1):
        fa = fa | sys.row_union(Side.A, tau)
        fb = fb | sys.row_union(Side.B, tau)
        if tau % 2 == 0:
            s_at[tau] = fa & fb

    for t in range(2, t_max + 1, 2):
        s_t = s_at[t]
        s_2t = s_at[2 * t]
        row_a = sys.sets(Side.A, 2 * t, t)
        row_b = sys.sets(Side.B, 2 * t, t)
        if not row_a.isdisjoint(row_b):
            out.append(
                Violation(
                    kind=ViolationKind.F2,
                    params={"side": Side.A, "t": 2 * t, "k": t,
                            "t_other": 2 * t, "k_other": t},
                    lhs=f"|overlap| = {len(row_a & row_b)}",
                    rhs="0",
                    witness=row_a & row_b,
                )
            )
        s_2t_t = s_2t & (row_a | row_b)
        z_mid = sys.sets(Side.A, 3 * t // 2, t) & sys.sets(Side.B, 3 * t // 2, t)
        z_top = sys.sets(Side.A, 3 * t, 2 * t) & sys.sets(Side.B, 3 * t, 2 * t)
        s_u_z = s_t | z_mid
        checks = (
            (
                ViolationKind.SHARED_LOWER,
                len(s_t),
                (GoldenNumber(2) - r) * t - lam,
                f"|S_t| = {len(s_t)}",
                "(2-R)t - lambda",
            ),
            (
                ViolationKind.SHARED_SPLIT_LOWER,
                len(s_2t_t),
                (GoldenNumber(6) - r * 4) * t - 2 * lam,
                f"|S_2t,t| = {len(s_2t_t)}",
                "(6-4R)t - 2*lambda",
            ),
            (
                ViolationKind.SHARED_PACKING,
                len(s_2t - z_top),
                GoldenNumber(len(s_u_z) + len(s_2t_t)),
                f"|S_2t \\ Z_3t,2t| = {len(s_2t - z_top)}",
                f"|S_t u Z| + |S_2t,t| = {len(s_u_z) + len(s_2t_t)}",
            ),
            (
                ViolationKind.CARRY_LOWER,
                len(z_top),
                GoldenNumber(len(s_u_z)) - (r * 3 - 4) * t - lam,
                f"|Z_3t,2t| = {len(z_top)}",
                "|S_t u Z| - (3R-4)t - lambda",
            ),
            (
                ViolationKind.RECURRENCE,
                len(s_2t | z_top),
                GoldenNumber(2 * len(s_u_z)) + (GoldenNumber(10) - r * 7) * t
                - 3 * lam,
                f"|S_2t u Z_3t,2t| = {len(s_2t | z_top)}",
                "2|S_t u Z| + (10-7R)t - 3*lambda",
            ),
        )
        for kind, lhs, rhs, lhs_text, rhs_text in checks:
            if not _ge_exact(lhs, rhs):
                out.append(
                    Violation(
                        kind=kind,
                        params={"t": t, "lambda": lam},
                        lhs=lhs_text,
                        rhs=f"{rhs_text} = {rhs}",
                    )
                )
    return out


@dataclass
class GammaEntry:
    i: int
    t: int
    numerator_size: int
    gamma: Fraction

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "t": self.t,
            "set_size": self.numerator_size,
            "gamma": str(self.gamma),
        }


@dataclass
class GammaTrace:
    """Measured values gamma_i = |S_{t_i} u Z_{3t_i/2,t_i}| / t_i at the
    doubling scales t_i = 6*theta*lambda*2^i."""

    theta: int
    lam: int
    entries: list[GammaEntry] = field(default_factory=list)
    violations: list[Violation] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "theta": self.theta,
            "lambda": self.lam,
            "entries": [e.to_json() for e in self.entries],
            "violations": [v.to_json() for v in self.violations],
        }


def gamma_trace(
    sys: FSystemSpec, r: GoldenNumber, lam: int, theta: int, steps: int
) -> GammaTrace:
    """Measure the gamma sequence for i = 0..steps and verify, exactly, the
    per-step growth and cap that r-competitiveness forces on it.

    Step i uses the doubling recurrence at t_i: the level-(2t_i) numerator
    must gain at least (10 - 7R)t_i - 3*lambda over twice the level-t_i one,
    and every numerator is capped by |S_{2t_i}| <= 2R*t_i + lambda.
    """
    if theta < 1 or lam < 1:
        raise ValueError("theta and lambda must be >= 1")
    if steps > theta:
        raise ValueError("trace cannot exceed theta steps")
    trace = GammaTrace(theta=theta, lam=lam)
    scales = [6 * theta * lam * (2**i) for i in range(steps + 1)]
    numerators: list[FrequencySet] = []
    s_sets: dict[int, FrequencySet] = {}
    fa = FrequencySet.empty()
    fb = FrequencySet.empty()
    top = 2 * scales[-1]
    wanted = set(scales) | {2 * s for s in scales}
    for tau in range(1, top + 1):
        fa = fa | sys.row_union(Side.A, tau)
        fb = fb | sys.row_union(Side.B, tau)
        if tau in wanted:
            s_sets[tau] = fa & fb
    for i, t in enumerate(scales):
        z = sys.sets(Side.A, 3 * t // 2, t) & sys.sets(Side.B, 3 * t // 2, t)
        num = s_sets[t] | z
        numerators.append(num)
        trace.entries.append(
            GammaEntry(
                i=i, t=t, numerator_size=len(num), gamma=Fraction(len(num), t)
            )
        )
        cap = r * (2 * t) + lam
        if GoldenNumber(len(num)) > cap or GoldenNumber(len(s_sets[2 * t])) > cap:
            trace.violations.append(
                Violation(
                    kind=ViolationKind.GAMMA_CAP,
                    params={"i": i, "t": t},
                    lhs=f"|S u Z| = {len(num)}, |S_2t| = {len(s_sets[2 * t])}",
                    rhs=f"2R*t + lambda = {cap}",
                )
            )
    for i in range(len(scales) - 1):
        t = scales[i]
        gained = GoldenNumber(len(numerators[i + 1]))
        needed = (
            GoldenNumber(2 * len(numerators[i]))
            + (GoldenNumber(10) - r * 7) * t
            - 3 * lam
        )
        if gained < needed:
            trace.violations.append(
                Violation(
                    kind=ViolationKind.GAMMA_STEP,
                    params={"i": i, "t": t},
                    lhs=f"|S u Z at 2t| = {len(numerators[i + 1])}",
                    rhs=f"2|S u Z at t| + (10-7R)t - 3*lambda = {needed}",
                )
            )
    return trace


@dataclass
class CheckReport:
    """Verdicts for the defining properties of one system, serializable."""

    system: str
    claimed_r: GoldenNumber
    claimed_lambda: int
    horizons: dict
    violations: list[Violation]
    min_lambda_on_horizon: Optional[GoldenNumber] = None
    trace: Optional[GammaTrace] = None

    def clean(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "system": self.system,
            "claims": {"r": str(self.claimed_r), "lambda": self.claimed_lambda},
            "horizons": self.horizons,
            "violations": [v.to_json() for v in self.violations],
            "violation_count": len(self.violations),
            "min_lambda_on_horizon": (
                str(self.min_lambda_on_horizon)
                if self.min_lambda_on_horizon is not None
                else None
            ),
            "gamma_trace": self.trace.to_json() if self.trace else None,
        }


def run_checks(
    sys: FSystemSpec,
    *,
    f1_t_max: Optional[int] = None,
    f2_t_max: Optional[int] = None,
    comp_t_max: Optional[int] = None,
    lemma_t_max: Optional[int] = None,
    jobs: int = 1,
) -> CheckReport:
    """Run the selected property checks against the system's own claims.

    A horizon of None skips that check; competitiveness also records the
    smallest additive constant that would have sufficed on its horizon.
    """
    r, lam = sys.claimed_ratio, sys.claimed_lambda
    violations: list[Violation] = []
    horizons: dict = {}
    min_lam: Optional[GoldenNumber] = None
    if f1_t_max is not None:
        violations += check_f1(sys, f1_t_max, jobs=jobs)
        horizons["f1"] = f1_t_max
    if f2_t_max is not None:
        violations += check_f2(sys, f2_t_max)
        horizons["f2"] = f2_t_max
    if comp_t_max is not None:
        violations += check_competitiveness(sys, r, lam, comp_t_max)
        min_lam = min_lambda(sys, r, comp_t_max)
        horizons["competitiveness"] = comp_t_max
    if lemma_t_max is not None:
        violations += lemma_chain_check(sys, r, lam, lemma_t_max)
        horizons["lemma_chain"] = lemma_t_max
    return CheckReport(
        system=sys.name,
        claimed_r=r,
        claimed_lambda=lam,
        horizons=horizons,
        violations=violations,
        min_lambda_on_horizon=min_lam,
    )


@dataclass
class FalsifyVerdict:
    system: str
    claimed_r: GoldenNumber
    claimed_lambda: int
    status: str  # "refuted" or "certificate"
    horizons: dict
    violations: list[Violation]
    trace: Optional[GammaTrace]
    certificate: Optional[dict]
    caveats: list[str]

    def to_json(self) -> dict:
        return {
            "system": self.system,
            "claims": {"r": str(self.claimed_r), "lambda": self.claimed_lambda},
            "status": self.status,
            "horizons": self.horizons,
            "violations": [v.to_json() for v in self.violations],
            "gamma_trace": self.trace.to_json() if self.trace else None,
            "certificate": self.certificate,
            "caveats": self.caveats,
        }


def falsify(
    sys: FSystemSpec,
    claimed_r: GoldenNumber,
    claimed_lambda: int,
    t_max: int,
    *,
    f2_t_max: Optional[int] = None,
) -> FalsifyVerdict:
    """Refute a claimed ratio below 10/7, or emit a contradiction certificate.

    Runs the direct checks (size floor and competitiveness to t_max,
    disjointness to f2_t_max); any hit refutes the claim outright.
    Otherwise the gamma sequence is traced as far as the horizon allows
    (t_theta <= t_max / 3): a sub-10/7 ratio forces each step to grow by a
    fixed positive amount while staying capped, so either a measured step
    breaks in-horizon or the guaranteed growth is extrapolated to the index
    where it must exceed the cap, which no actual system can satisfy.
    """
    if claimed_r >= TEN_SEVENTHS:
        raise ValueError(
            f"claimed ratio {claimed_r} is not below 10/7; nothing to falsify"
        )
    if claimed_r < 1:
        raise ValueError("competitive ratio must be >= 1")
    if f2_t_max is None:
        f2_t_max = min(t_max, 100)
    caveats: list[str] = []
    violations: list[Violation] = []
    violations += check_f1(sys, t_max, limit=5)
    violations += check_f2(sys, f2_t_max, limit=5)
    violations += check_competitiveness(
        sys, claimed_r, claimed_lambda, t_max, limit=5
    )
    horizons = {"f1": t_max, "f2": f2_t_max, "competitiveness": t_max}
    if violations:
        return FalsifyVerdict(
            system=sys.name,
            claimed_r=claimed_r,
            claimed_lambda=claimed_lambda,
            status="refuted",
            horizons=horizons,
            violations=violations,
            trace=None,
            certificate=None,
            caveats=caveats,
        )

    lam_eff = max(1, claimed_lambda)
    if lam_eff != claimed_lambda:
        caveats.append(
            "additive constant 0 was raised to 1 for the trace scales; any "
            "(r, 0)-competitive system is (r, 1)-competitive"
        )
    # smallest theta with claimed_r < 10/7 - 1/theta, i.e. theta > 1/gap
    gap = TEN_SEVENTHS - claimed_r  # > 0
    theta = max(1, (GoldenNumber(1) / gap).floor() + 1)
    # cap the measured steps so generator queries stay within the horizon
    budget = t_max // 3
    steps = 0
    while steps < theta and 6 * theta * lam_eff * (2 ** (steps + 1)) <= budget:
        steps += 1
    feasible = 6 * theta * lam_eff <= budget
    trace = None
    if feasible:
        trace = gamma_trace(sys, claimed_r, lam_eff, theta, steps)
        violations += trace.violations
        if trace.violations:
            return FalsifyVerdict(
                system=sys.name,
                claimed_r=claimed_r,
                claimed_lambda=claimed_lambda,
                status="refuted",
                horizons=horizons,
                violations=violations,
                trace=trace,
                certificate=None,
                caveats=caveats,
            )
    if steps < theta:
        t_theta = (
            str(6 * theta * lam_eff * 2**theta)
            if theta <= 64
            else f"6*{theta}*{lam_eff}*2^{theta}"
        )
        caveats.append(
            f"gamma trace measured {steps + 1 if feasible else 0} of "
            f"{theta + 1} scales; t_theta = {t_theta} exceeds the horizon "
            f"budget {budget}"
        )
    caveats.append(
        f"disjointness was verified only to level {f2_t_max}; the "
        "extrapolation assumes the direct properties persist beyond the horizon"
    )
    certificate = _extrapolate(claimed_r, lam_eff, theta, trace)
    return FalsifyVerdict(
        system=sys.name,
        claimed_r=claimed_r,
        claimed_lambda=claimed_lambda,
        status="certificate",
        horizons=horizons,
        violations=[],
        trace=trace,
        certificate=certificate,
        caveats=caveats,
    )


def _extrapolate(
    r: GoldenNumber, lam: int, theta: int, trace: Optional[GammaTrace]
) -> dict:
    """Project the guaranteed per-step growth until it must exceed the cap.

    Step i adds at least c - 3*lambda/(2*t_i) to gamma with c = 5 - 7R/2 > 0,
    and gamma_i is capped by 2R + lambda/t_i.  The loss terms over all steps
    from t_start sum to less than 3*lambda/t_start and the cap never exceeds
    2R + lambda/t_start, so n steps certainly break the cap once
    n*c > 2R + 4*lambda/t_start - gamma_start.  The contradiction index is
    computed in closed form; the scale 6*theta*lambda*2^i can be astronomic
    and is reported symbolically when it would not print comfortably.
    """
    if trace is not None and trace.entries:
        start_i = trace.entries[-1].i
        g0 = GoldenNumber(trace.entries[-1].gamma)
    else:
        start_i = 0
        g0 = GoldenNumber(0)  # gamma_0 >= 0 for any system
    t_start = 6 * theta * lam * (2**start_i)
    c = GoldenNumber(5) - r * Fraction(7, 2)  # > 0 since r < 10/7
    need = r * 2 + Fraction(4 * lam, t_start) - g0
    n = max(1, (need / c).floor() + 1)
    i_star = start_i + n
    if i_star <= 64:
        scale = str(6 * theta * lam * (2**i_star))
    else:
        scale = f"6*{theta}*{lam}*2^{i_star}"
    return {
        "theta": theta,
        "from_index": start_i,
        "steps_needed": n,
        "contradiction_index": i_star,
        "contradiction_scale": scale,
        "statement": (
            "assuming the verified properties persist beyond the horizon, "
            f"gamma must rise from {g0} at index {start_i} past its cap by "
            f"index {i_star} (scale {scale}), which no frequency-set family "
            "can satisfy"
        ),
    }
