"""Exact minimisation of |A (+)_R B| over degree-constrained relations.

Reduction: A (+)_R B = (A + B) minus F(R), where F(R) is the set of sums all of
whose representations lie in R.  Every representation of a sum in F(R) is in R,
so the forced pairs of F(R) are a sub-relation of R and F(R) is feasible for the
constraint (feasibility is downward closed in the relation).  Conversely the
forced pairs of any feasible F realise exactly F as removed sums.  Hence

    min_R |A (+)_R B| = |A + B| - max { |F| : F feasible }.

The maximum is found by branch-and-bound over the sums, fewest representations
first, with a capacity bound: each kept sum spends one unit of degree budget per
representation, on both sides when both are constrained.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

from .core import (
    AnySet,
    IntegerSet,
    Relation,
    RelationConstraint,
    ResidueSet,
    add_fn,
    like,
    restricted_sumset,
    sumset,
)


@dataclass(frozen=True)
class AvoidingSet:
    F: AnySet
    forced: Relation


@dataclass
class SearchResult:
    min_value: int
    witness_r: Relation
    optimal: bool
    nodes_explored: int
    budget_exhausted: bool
    avoiding: AvoidingSet | None = None


def forced_pairs(A: AnySet, B: AnySet, F: Iterable[int]) -> Relation:
    """All (a, b) in A x B with a + b in F."""
    F = set(F)
    S = set(sumset(A, B))
    if not F <= S:
        raise ValueError(f"avoiding set not inside the sumset: {sorted(F - S)}")
    add = add_fn(A)
    return Relation(frozenset((a, b) for a in A for b in B if add(a, b) in F))


def avoiding_set(A: AnySet, B: AnySet, F: Iterable[int]) -> AvoidingSet:
    Fs = like(A, F)
    return AvoidingSet(Fs, forced_pairs(A, B, Fs))


def feasible(F: AvoidingSet | Relation, c: RelationConstraint) -> bool:
    R = F.forced if isinstance(F, AvoidingSet) else F
    return c.admits(R)


class _Instance:
    """Sums of A + B with their representation masks over indexed A and B."""

    def __init__(self, A: AnySet, B: AnySet):
        self.A, self.B = A, B
        self.a_list = list(A)
        self.b_list = list(B)
        add = add_fn(A)
        reps: dict[int, list[tuple[int, int]]] = {}
        for i, a in enumerate(self.a_list):
            for j, b in enumerate(self.b_list):
                reps.setdefault(add(a, b), []).append((i, j))
        # fewest representations first, ties by value
        self.sums = sorted(reps, key=lambda s: (len(reps[s]), s))
        self.reps = [reps[s] for s in self.sums]
        self.mask_a = [sum(1 << i for i, _ in r) for r in self.reps]
        self.mask_b = [sum(1 << j for _, j in r) for r in self.reps]
        self.weight = [len(r) for r in self.reps]


class _BranchAndBound:
    def __init__(self, inst: _Instance, c: RelationConstraint, budget: int | None):
        self.inst = inst
        self.cap_b = c.bound_b
        self.cap_a = c.bound_a
        self.budget = budget
        self.nodes = 0
        self.exhausted = False
        n = len(inst.sums)
        self.n = n
        self.best: list[int] = []
        self.use_b = [0] * len(inst.b_list)
        self.use_a = [0] * len(inst.a_list)

    def _fits(self, k: int, sat_b: int, sat_a: int) -> bool:
        if self.inst.mask_b[k] & sat_b:
            return False
        return self.cap_a is None or not (self.inst.mask_a[k] & sat_a)

    def _bound(self, start: int, sat_b: int, sat_a: int, room_b: int, room_a: int) -> int:
        # candidates are in ascending weight order; spend the room greedily
        w = self.inst.weight
        count = 0
        room = room_b if self.cap_a is None else min(room_b, room_a)
        for k in range(start, self.n):
            if self._fits(k, sat_b, sat_a):
                if w[k] > room:
                    break
                room -= w[k]
                count += 1
        return count

    def _take(self, k: int, sat_b: int, sat_a: int) -> tuple[int, int]:
        for i, j in self.inst.reps[k]:
            self.use_b[j] += 1
            if self.use_b[j] >= self.cap_b:
                sat_b |= 1 << j
            if self.cap_a is not None:
                self.use_a[i] += 1
                if self.use_a[i] >= self.cap_a:
                    sat_a |= 1 << i
        return sat_b, sat_a

    def _untake(self, k: int) -> None:
        for i, j in self.inst.reps[k]:
            self.use_b[j] -= 1
            if self.cap_a is not None:
                self.use_a[i] -= 1

    def greedy(self) -> list[int]:
        sat_b = sat_a = 0
        chosen = []
        for k in range(self.n):
            if self._fits(k, sat_b, sat_a):
                sat_b, sat_a = self._take(k, sat_b, sat_a)
                chosen.append(k)
        for k in chosen:
            self._untake(k)
        return chosen

    def run(self) -> None:
        self.best = self.greedy()
        room_b = self.cap_b * len(self.inst.b_list)
        room_a = (self.cap_a or 0) * len(self.inst.a_list)
        self._dfs(0, [], 0, 0, room_b, room_a)

    def _dfs(self, k, chosen, sat_b, sat_a, room_b, room_a) -> None:
        if self.exhausted:
            return
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            self.exhausted = True
            return
        while k < self.n and not self._fits(k, sat_b, sat_a):
            k += 1
        if k >= self.n:
            if len(chosen) > len(self.best):
                self.best = list(chosen)
            return
        if len(chosen) + self._bound(k, sat_b, sat_a, room_b, room_a) <= len(self.best):
            return
        w = self.inst.weight[k]
        nb, na = self._take(k, sat_b, sat_a)
        chosen.append(k)
        self._dfs(k + 1, chosen, nb, na, room_b - w, room_a - w)
        chosen.pop()
        self._untake(k)
        self._dfs(k + 1, chosen, sat_b, sat_a, room_b, room_a)


def max_avoiding_set(
    A: AnySet, B: AnySet, c: RelationConstraint, budget: int | None = None
) -> tuple[AvoidingSet, bool, int]:
    """Largest feasible avoiding set. Returns (F, optimal, nodes explored)."""
    if not A or not B:
        raise ValueError("A and B must be non-empty")
    inst = _Instance(A, B)
    bb = _BranchAndBound(inst, c, budget)
    bb.run()
    F = like(A, (inst.sums[k] for k in bb.best))
    return AvoidingSet(F, forced_pairs(A, B, F)), not bb.exhausted, bb.nodes


def extend_to_total(A: AnySet, B: AnySet, R: Relation, c: RelationConstraint) -> Relation:
    """Give every uncovered b an image when c asks for a total function/matching.

    Extra forbidden pairs can only remove sums, so minima are unaffected.
    For matchings the extension needs |A| >= |B|; otherwise R is returned as is.
    """
    if not c.total:
        return R
    covered = set(R.deg_b)
    pairs = set(R.pairs)
    if c.kind == "function_b":
        a0 = min(A)
        pairs |= {(a0, b) for b in B if b not in covered}
        return Relation(frozenset(pairs))
    if len(A) < len(B):
        return R
    free = sorted(set(A) - set(R.deg_a))
    it = iter(free)
    for b in B:
        if b not in covered:
            pairs.add((next(it), b))
    return Relation(frozenset(pairs))


def min_restricted_sumset(
    A: AnySet, B: AnySet, c: RelationConstraint, budget: int | None = None
) -> SearchResult:
    F, optimal, nodes = max_avoiding_set(A, B, c, budget)
    full = len(sumset(A, B))
    value = full - len(F.F)
    R = extend_to_total(A, B, F.forced, c)
    got = len(restricted_sumset(A, B, R))
    if got != value:
        # extension could only lower the value, which contradicts maximality of F
        raise AssertionError(f"witness gives {got}, expected {value}")
    return SearchResult(value, R, optimal, nodes, not optimal, F)


# ---- conjecture scans -------------------------------------------------

SCAN_KINDS = ("lev", "lev_cases", "a_plus_2b", "z_fiveDhalf", "sum_bound")


def _rot_min(bits: int, p: int) -> int:
    mask = (1 << p) - 1
    best = bits
    x = bits
    for _ in range(p - 1):
        x = ((x << 1) | (x >> (p - 1))) & mask
        if x < best:
            best = x
    return best


def _dilate_bits(bits: int, t: int, p: int) -> int:
    out = 0
    i = 0
    while bits:
        if bits & 1:
            out |= 1 << (i * t % p)
        bits >>= 1
        i += 1
    return out


def residue_orbits(p: int, size_ok) -> Iterator[tuple[int, int]]:
    """Orbit representatives of pairs (A, B) of non-empty subsets of F_p under
    independent translations of A and B and a common unit dilation.

    Yields (bitsA, bitsB), each the lexicographic minimum of its orbit after
    rotating both sets to their minimal rotation.
    size_ok(|A|, |B|) filters pairs before any canonicalisation.
    """
    full = (1 << p) - 1
    necklaces = sorted({_rot_min(x, p) for x in range(1, full + 1)})
    by_size: dict[int, list[int]] = {}
    for x in necklaces:
        by_size.setdefault(x.bit_count(), []).append(x)
    units = range(2, p)
    for sa in sorted(by_size):
        for sb in sorted(by_size):
            if not size_ok(sa, sb):
                continue
            for xa in by_size[sa]:
                dil_a = [_rot_min(_dilate_bits(xa, t, p), p) for t in units]
                if any(d < xa for d in dil_a):
                    continue
                fixing = [t for t, da in zip(units, dil_a) if da == xa]
                for xb in by_size[sb]:
                    if all(_rot_min(_dilate_bits(xb, t, p), p) >= xb for t in fixing):
                        yield xa, xb


def _bits_members(bits: int) -> list[int]:
    return [i for i in range(bits.bit_length()) if bits >> i & 1]


@dataclass
class ScanSpec:
    kind: str
    p: int | None = None
    n: int | None = None
    D: int = 1
    k: int = 2

    def constraint(self) -> RelationConstraint:
        if self.kind in ("lev", "lev_cases"):
            return RelationConstraint.matching_b_to_a()
        if self.kind in ("a_plus_2b", "sum_bound"):
            return RelationConstraint.function_b_to_a()
        return RelationConstraint.degree_on_b(self.D)

    def size_ok(self, sa: int, sb: int) -> bool:
        p = self.p
        if self.kind == "lev":
            return sb <= sa and sa + sb <= p
        if self.kind == "lev_cases":
            return sb <= sa and sa + sb >= p + 1
        if self.kind == "a_plus_2b":
            return sb <= sa and sa + 2 * sb <= p
        if self.kind == "sum_bound":
            return sa + sb >= (2 * self.k * p) // (2 * self.k - 1) + 1
        return sb <= sa

    def bound(self, sa: int, sb: int) -> int:
        p = self.p
        if self.kind in ("lev", "a_plus_2b"):
            return sa + sb - 3
        if self.kind == "lev_cases":
            return p - 3 if sa + sb == p + 1 else p - 2
        if self.kind == "sum_bound":
            return p - self.k + 1
        return sa + sb - 1 - (5 * self.D) // 2

    def params(self) -> dict[str, Any]:
        d = {"kind": self.kind}
        if self.kind == "z_fiveDhalf":
            d.update(n=self.n, D=self.D)
        else:
            d["p"] = self.p
            if self.kind == "sum_bound":
                d["k"] = self.k
        return d


def scan_instances(spec: ScanSpec) -> list[tuple[AnySet, AnySet]]:
    """Canonical instance list in deterministic order."""
    if spec.kind not in SCAN_KINDS:
        raise ValueError(f"unknown scan kind {spec.kind!r}")
    if spec.kind == "z_fiveDhalf":
        n = spec.n
        # translation-reduced: both sets contain 1 = their minimum, inside [1, n]
        out = []
        subsets = [
            IntegerSet((1,) + rest)
            for m in range(n)
            for rest in itertools.combinations(range(2, n + 1), m)
        ]
        for A in subsets:
            for B in subsets:
                if spec.size_ok(len(A), len(B)):
                    out.append((A, B))
        return out
    p = spec.p
    return [(ResidueSet(p, xa), ResidueSet(p, xb)) for xa, xb in residue_orbits(p, spec.size_ok)]


def scan_row(spec: ScanSpec, A: AnySet, B: AnySet, budget: int | None) -> dict[str, Any]:
    c = spec.constraint()
    res = min_restricted_sumset(A, B, c, budget)
    bound = spec.bound(len(A), len(B))
    inst = {"A": list(A), "B": list(B)}
    if isinstance(A, ResidueSet):
        inst = {"p": A.modulus, **inst}
    return {
        "instance": inst,
        "constraint": c.label(),
        "minValue": res.min_value,
        "bound": bound,
        "optimal": res.optimal,
        "nodes": res.nodes_explored,
        "witnessR": [list(pr) for pr in res.witness_r],
        "avoiding": list(res.avoiding.F),
        "tight": res.min_value == bound,
        "violation": res.optimal and res.min_value < bound,
    }


def _row_key(row: dict[str, Any]) -> tuple:
    inst = row["instance"]
    return (len(inst["A"]), len(inst["B"]), inst["A"], inst["B"])


def _work(args):
    spec, A, B, budget = args
    return scan_row(spec, A, B, budget)


def scan_conjectures(spec: ScanSpec, budget: int | None = None, jobs: int = 1) -> dict[str, Any]:
    """Exhaustive scan over orbit representatives. Rows come back in canonical order
    regardless of jobs."""
    instances = scan_instances(spec)
    tasks = [(spec, A, B, budget) for A, B in instances]
    if jobs > 1 and len(tasks) > 1:
        import multiprocessing as mp

        with mp.get_context("fork").Pool(jobs) as pool:
            rows = pool.map(_work, tasks, chunksize=max(1, len(tasks) // (8 * jobs)))
    else:
        rows = [_work(t) for t in tasks]
    rows.sort(key=_row_key)
    violations = [r for r in rows if r["violation"]]
    incomplete = [r for r in rows if not r["optimal"]]
    return {
        "scan": spec.params(),
        "constraint": spec.constraint().label(),
        "orbits": len(rows),
        "violations": len(violations),
        "tight": sum(r["tight"] for r in rows),
        "incomplete": len(incomplete),
        "complete": not incomplete,
        "rows": rows,
    }
