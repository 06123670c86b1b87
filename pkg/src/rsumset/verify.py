"""Counting identities for avoiding sets, the staircase witness over Z, and Sidon checks."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .core import (
    IntegerSet,
    Relation,
    RelationConstraint,
    ResidueSet,
    _same_modulus,
    restricted_sumset,
)


@dataclass(frozen=True)
class RProfile:
    """r[i] = #{x in F_p : |(F + x) & A| = i} for i = 0..k, k = |F|."""

    k: int
    r: tuple[int, ...]
    p: int
    size_a: int

    def identities_hold(self) -> bool:
        return sum(self.r) == self.p and sum(i * v for i, v in enumerate(self.r)) == self.k * self.size_a


def r_profile(A: ResidueSet, F: ResidueSet) -> RProfile:
    _same_modulus(A, F)
    if not F:
        raise ValueError("F must be non-empty")
    p, k = A.modulus, len(F)
    r = [0] * (k + 1)
    for x in range(p):
        r[(F.shift(x).bits & A.bits).bit_count()] += 1
    prof = RProfile(k, tuple(r), p, len(A))
    if not prof.identities_hold():
        raise AssertionError(f"counting identities fail for {prof}")
    return prof


def candidate_b_set(A: ResidueSet, F: ResidueSet, D: int = 1) -> ResidueSet:
    """{b : |(F - b) & A| <= D}.

    b <-> x = -b maps this onto the translates F + x counted by r_profile(A, F),
    so for D = 1 its size is r_0 + r_1 of that profile.
    """
    _same_modulus(A, F)
    p = A.modulus
    return ResidueSet.of(p, (b for b in range(p) if (F.shift(-b).bits & A.bits).bit_count() <= D))


def is_sidon(F) -> bool:
    """All differences x - y of distinct members are distinct (mod p for residue sets)."""
    xs = list(F)
    p = getattr(F, "modulus", None)
    seen = set()
    for x in xs:
        for y in xs:
            if x == y:
                continue
            d = x - y if p is None else (x - y) % p
            if d in seen:
                return False
            seen.add(d)
    return True


def sidon_size_bound_ok(F: ResidueSet) -> bool:
    """Distinct nonzero differences force |F|(|F|-1) <= p - 1."""
    n = len(F)
    return n * (n - 1) <= F.modulus - 1


def staircase_witness(A: IntegerSet, B: IntegerSet, R: Relation, D: int | None = None) -> dict[str, Any]:
    """Path of |A| + |B| - 1 strictly increasing sums, kept where the pair is allowed.

    Case "L": a_1 has degree <= D; walk (a_1, b_1..b_n) then (a_2..a_m, b_n).
    Case "staircase": walk (a_1..a_i, b_1), (a_i, b_2..b_n), (a_{i+1}..a_m, b_n)
    with i the smallest index of degree < D.
    """
    if not A or not B:
        raise ValueError("A and B must be non-empty")
    if len(B) > len(A):
        raise ValueError("need |B| <= |A|")
    R.check_within(A, B)
    db = max(R.deg_b.values(), default=0)
    if D is None:
        D = db
    elif db > D:
        raise ValueError(f"degree on B is {db} > {D}")
    a, b = list(A), list(B)
    m, n = len(a), len(b)
    deg_a = R.deg_a
    if deg_a.get(a[0], 0) <= D:
        case = "L"
        path = [(a[0], y) for y in b] + [(x, b[-1]) for x in a[1:]]
        guaranteed = m + n - 1 - 2 * D
    else:
        case = "staircase"
        i = next(j for j in range(m) if deg_a.get(a[j], 0) < D)
        path = [(x, b[0]) for x in a[: i + 1]] + [(a[i], y) for y in b[1:]] + [(x, b[-1]) for x in a[i + 1 :]]
        guaranteed = m + n - 3 * D
    kept = [x + y for x, y in path if (x, y) not in R]
    return {
        "case": case,
        "D": D,
        "path": path,
        "witness": IntegerSet(tuple(kept)),
        "guaranteed": guaranteed,
    }


def sum_bound_threshold(p: int, k: int) -> int:
    return (2 * k * p) // (2 * k - 1) + 1


def sum_bound_check(A: ResidueSet, B: ResidueSet, k: int, budget: int | None = None) -> dict[str, Any]:
    """Size threshold |A| + |B| >= floor(2kp/(2k-1)) + 1 against the exact minimum under
    functions B -> A, with the counting chain evaluated on a k-element avoiding set."""
    from .search import min_restricted_sumset

    _same_modulus(A, B)
    if k < 1:
        raise ValueError("k must be at least 1")
    p = A.modulus
    threshold = sum_bound_threshold(p, k)
    hyp = len(A) + len(B) >= threshold
    res = min_restricted_sumset(A, B, RelationConstraint.function_b_to_a(), budget)
    target = p - k + 1
    out: dict[str, Any] = {
        "p": p,
        "k": k,
        "sizeA": len(A),
        "sizeB": len(B),
        "threshold": threshold,
        "hypothesis": hyp,
        "minValue": res.min_value,
        "target": target,
        "optimal": res.optimal,
        "holds": (not hyp) or res.min_value >= target,
    }
    F = list(res.avoiding.F)
    if len(F) >= k:
        Fk = ResidueSet.of(p, F[:k])
        prof = r_profile(A, Fk)
        r01 = prof.r[0] + prof.r[1]
        out["trace"] = {
            "F": list(Fk),
            "r": list(prof.r),
            "r0+r1": r01,
            "B<=r0+r1": len(B) <= r01,
            "kp-(k-1)(r0+r1)>=k|A|": k * p - (k - 1) * r01 >= k * len(A),
            "B<=A": len(B) <= len(A),
            "sizeSumBound": str(Fraction(2 * k * p, 2 * k - 1)),
            "A+B<=2kp/(2k-1)": (2 * k - 1) * (len(A) + len(B)) <= 2 * k * p,
        }
    else:
        out["trace"] = {"F": F, "note": "no avoiding set of size k; min >= p - k + 1 directly"}
    return out


def witness_subset_ok(A: IntegerSet, B: IntegerSet, R: Relation, w: dict[str, Any]) -> bool:
    S = set(restricted_sumset(A, B, R))
    return set(w["witness"]) <= S and len(w["witness"]) >= w["guaranteed"]
