"""Generators for the explicit extremal constructions.

Each generator returns a ConstructionOutput carrying (A, B, R), the predicted
size of the restricted sumset, and the auxiliary objects of the construction
(removed sum blocks, witnesses) so that intermediate claims can be checked.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .core import (
    AnySet,
    IntegerSet,
    Relation,
    RelationConstraint,
    ResidueSet,
    degree_profile,
    is_prime,
    restricted_sumset,
)

PATTERN = (0, 1, 2, 3, 5, 6)
PROBE = (0, 1, 4)
# residue class of the period-11 pattern -> translate x of PROBE isolating it
PATTERN_WITNESS = {0: -4, 1: -3, 2: -2, 3: 3, 5: 4, 6: 6}


class ConstructionError(ValueError):
    pass


@dataclass
class ConstructionOutput:
    A: AnySet
    B: AnySet
    R: Relation
    predicted_value: int
    family: str
    params: dict[str, Any]
    constraint: RelationConstraint
    exact: bool = True
    aux: dict[str, Any] = field(default_factory=dict)
    audit: dict[str, Any] = field(default_factory=dict)

    @property
    def audit_ok(self) -> bool:
        return bool(self.audit.get("ok", True))

    def evaluate(self) -> AnySet:
        return restricted_sumset(self.A, self.B, self.R)

    def to_json(self) -> dict[str, Any]:
        value = len(self.evaluate())
        out = {
            "family": self.family,
            "params": {k: str(v) if isinstance(v, Fraction) else v for k, v in self.params.items()},
            "modulus": getattr(self.A, "modulus", None),
            "A": list(self.A),
            "B": list(self.B),
            "R": [list(pr) for pr in self.R],
            "sizeA": len(self.A),
            "sizeB": len(self.B),
            "constraint": self.constraint.label(),
            "predictedValue": self.predicted_value,
            "value": value,
            "auditReport": self.audit,
        }
        for k, v in self.aux.items():
            if isinstance(v, (IntegerSet, ResidueSet)):
                out[k] = list(v)
            elif isinstance(v, Fraction):
                out[k] = str(v)
            else:
                out[k] = v
        return out


def _degree_audit(R: Relation, constraint: RelationConstraint) -> dict[str, Any]:
    da, db = degree_profile(R)
    over_b = sorted(b for b, d in R.deg_b.items() if d > constraint.bound_b)
    report = {"maxDegA": da, "maxDegB": db, "bound": constraint.D, "ok": not over_b}
    if over_b:
        report["violations"] = [{"b": b, "degree": R.deg_b[b]} for b in over_b]
    if constraint.bound_a is not None:
        over_a = sorted(a for a, d in R.deg_a.items() if d > constraint.bound_a)
        if over_a:
            report["ok"] = False
            report["violationsA"] = [{"a": a, "degree": R.deg_a[a]} for a in over_a]
    return report


def _forbid_sums(A, B, targets, add) -> Relation:
    return Relation(frozenset((a, b) for a in A for b in B if add(a, b) in targets))


def construct_interval_corner(n: int, D: int) -> ConstructionOutput:
    """A = B = {1..n}; forbid the D x D corners at both ends."""
    if D < 1 or n < 2 * D:
        raise ConstructionError(f"need n >= 2D >= 2, got n={n}, D={D}")
    A = IntegerSet.interval(1, n)
    low = range(1, D + 1)
    high = range(n - D + 1, n + 1)
    R = Relation(frozenset([(a, b) for a in low for b in low] + [(a, b) for a in high for b in high]))
    c = RelationConstraint.degree_both(D)
    out = ConstructionOutput(
        A, A, R, 2 * n - 1 - 2 * D, "corner", {"n": n, "D": D}, c,
        aux={"expectedSumset": IntegerSet.interval(D + 2, 2 * n - D)},
    )
    out.audit = _degree_audit(R, c)
    return out


def construct_z_gap(n: int, D: int) -> ConstructionOutput:
    """Two intervals with a gap of D - r in A, r = floor(D/2); B = {1..n}.

    Forbidden pairs are every representation of the blocks C (two runs of
    length r) and the end blocks (D sums at each end of A + B).
    The degree audit is reported, not enforced: for small n relative to D a
    translate A + b can meet more than D removed sums.
    """
    if D < 1 or n < 2 * D:
        raise ConstructionError(f"need n >= 2D >= 2, got n={n}, D={D}")
    r = D // 2
    A = IntegerSet(tuple(range(1, n - D + 1)) + tuple(range(n - D + r + 1, n + r + 1)))
    B = IntegerSet.interval(1, n)
    C = IntegerSet(tuple(range(n - D + 2, n - D + r + 2)) + tuple(range(2 * n - D + 1, 2 * n - D + r + 1)))
    ends = IntegerSet(tuple(range(2, D + 2)) + tuple(range(2 * n + r - D + 1, 2 * n + r + 1)))
    removed = C | ends
    R = _forbid_sums(A, B, set(removed), lambda a, b: a + b)
    c = RelationConstraint.degree_on_b(D)
    out = ConstructionOutput(
        A, B, R, 2 * n - 1 - (5 * D) // 2, "zgap", {"n": n, "D": D}, c,
        aux={"r": r, "C": C, "endBlocks": ends, "blocksDisjoint": not (set(C) & set(ends))},
    )
    out.audit = _degree_audit(R, c)
    return out


def fp_function_range(p: int, k: int) -> range:
    """Valid ell for construct_fp_function."""
    return range(1, (p - k - 1) // (2 * k - 1) + 1)


def construct_fp_function(p: int, k: int, ell: int) -> ConstructionOutput:
    """Arithmetic progression of step k glued to an interval; B a run of -1 steps.

    Every translate A + b meets C = {0..k-1} exactly once, so a function
    B -> A can remove all of C from the sumset.
    """
    if not is_prime(p):
        raise ConstructionError(f"{p} is not prime")
    if k < 1 or ell not in fp_function_range(p, k):
        raise ConstructionError(f"ell={ell} out of range for p={p}, k={k}")
    A = ResidueSet.of(p, list(range(0, ell * k + 1, k)) + list(range((ell + 1) * k, p)))
    B = ResidueSet.of(p, (-j for j in range(ell * k + 2)))
    C = ResidueSet.of(p, range(k))
    pairs = []
    hits = {}
    for b in B:
        hit = [a for a in A if (a + b) % p in C]
        hits[b] = len(hit)
        pairs.extend((a, b) for a in hit)
    R = Relation(frozenset(pairs))
    c = RelationConstraint.function_b_to_a()
    out = ConstructionOutput(
        A, B, R, p - k, "fpfun", {"p": p, "k": k, "ell": ell}, c,
        aux={
            "C": C,
            "predictedSizeA": p - (k - 1) * ell - k + 1,
            "predictedSizeB": k * ell + 2,
            "singletonHits": all(v == 1 for v in hits.values()),
        },
    )
    out.audit = _degree_audit(R, c)
    out.audit["ok"] = out.audit["ok"] and out.aux["singletonHits"] and set(R.deg_b) == set(B)
    return out


def _matching_blocks(i_lo: int, i_hi: int, j_lo: int, j_hi: int) -> list[tuple[int, int]]:
    """Pairs summing to 2 (i in [i_lo, i_hi]) and to -2, -1 (i in [j_lo, j_hi]), over Z."""
    pairs = []
    for i in range(i_lo, i_hi + 1):
        pairs += [(11 * i, -11 * i + 2), (11 * i + 1, -11 * i + 1), (11 * i + 2, -11 * i)]
    for i in range(j_lo, j_hi + 1):
        pairs += [
            (11 * i + 3, -11 * (i + 1) + 6),
            (11 * i + 5, -11 * (i + 1) + 5),
            (11 * i + 6, -11 * (i + 1) + 3),
        ]
    return pairs


def _pattern_block(i_lo: int, i_hi: int) -> list[int]:
    return [s + 11 * i for i in range(i_lo, i_hi + 1) for s in PATTERN]


def construct_fp_matching(p: int) -> ConstructionOutput:
    """Symmetric matching on A with |A| = 6 floor(p/11) - 3 and A (+)_R A = F_p minus {-2, -1, 2}."""
    if not is_prime(p):
        raise ConstructionError(f"{p} is not prime")
    if p < 23:
        raise ConstructionError("need p >= 23")
    q = p // 11
    t = q // 2
    if q % 2 == 0:
        members = _pattern_block(-(t - 1), t - 1) + [-11 * t + 3, -11 * t + 5, -11 * t + 6]
        pairs = _matching_blocks(-t + 1, t - 1, -t, t - 1)
        case = "even"
    else:
        members = _pattern_block(-t, t - 1) + [11 * t, 11 * t + 1, 11 * t + 2]
        pairs = _matching_blocks(-t, t, -t, t - 1)
        case = "odd"
    # all arithmetic above is in Z; reduce once
    A = ResidueSet.of(p, members)
    R = Relation.of(pairs, p)
    c = RelationConstraint.matching_b_to_a()
    out = ConstructionOutput(
        A, A, R, p - 3, "fpmatch", {"p": p}, c,
        aux={
            "case": case,
            "t": t,
            "predictedSizeA": 6 * q - 3,
            "avoided": ResidueSet.of(p, [-2, -1, 2]),
            "distinctMembers": len(A) == len(members),
        },
    )
    out.audit = _degree_audit(R, c)
    out.audit["symmetric"] = R.is_symmetric()
    out.audit["ok"] = out.audit["ok"] and out.audit["symmetric"] and out.aux["distinctMembers"]
    return out


def construct_fp_unbalanced(p: int, eps) -> ConstructionOutput:
    """Period-11 block B of size about eps p, A = B plus a long interval.

    Sizes satisfy |B| <= eps p and |A| + |B| > (1 + eps/6) p - c with the
    slack c reported in aux (c = 8 always suffices).
    """
    eps = Fraction(eps)
    if not is_prime(p):
        raise ConstructionError(f"{p} is not prime")
    if not (0 < eps <= Fraction(6, 11)):
        raise ConstructionError("need 0 < eps <= 6/11")
    t = int(eps * p / 12)
    if t < 1:
        raise ConstructionError(f"t = floor(eps p / 12) = 0 for p={p}, eps={eps}")
    b_members = _pattern_block(-(t - 1), t - 1) + [-11 * t + 3, -11 * t + 5, -11 * t + 6]
    B = ResidueSet.of(p, b_members)
    A = B | ResidueSet.of(p, range(11 * t, p - 11 * t))
    R = Relation.of(_matching_blocks(-t + 1, t - 1, -t, t - 1), p)
    c = RelationConstraint.degree_both(1)
    total = len(A) + len(B)
    target = (1 + eps / 6) * p
    out = ConstructionOutput(
        A, B, R, p - 3, "fpunb", {"p": p, "eps": eps}, c,
        aux={
            "t": t,
            "delta": eps / 6,
            "avoided": ResidueSet.of(p, [-2, -1, 2]),
            "sizeBound": eps * p,
            "slack": target - total,
            "slackBound": 8,
        },
    )
    out.audit = _degree_audit(R, c)
    out.audit["sizeB<=eps*p"] = len(B) <= eps * p
    out.audit["sum>(1+eps/6)p-8"] = total > target - 8
    out.audit["ok"] = out.audit["ok"] and out.audit["sizeB<=eps*p"] and out.audit["sum>(1+eps/6)p-8"]
    return out


def in_pattern(x: int) -> bool:
    return x % 11 in PATTERN


def pattern_window(L: int) -> tuple[IntegerSet, dict[int, int]]:
    """({0,1,2,3,5,6} + 11Z) cut to [0, L), and for each member a a translate
    x with ({0,1,4} + x) meeting the periodic set only in a."""
    if L < 11:
        raise ConstructionError("window length must be at least 11")
    A = IntegerSet(tuple(x for x in range(L) if in_pattern(x)))
    witness = {a: a - a % 11 + PATTERN_WITNESS[a % 11] for a in A}
    return A, witness


def check_pattern_witness(a: int, x: int) -> bool:
    hit = [x + d for d in PROBE if in_pattern(x + d)]
    return hit == [a]


FAMILIES = ("corner", "zgap", "fpfun", "fpmatch", "fpunb", "pattern")
