"""Dilation certificates that lift subsets of F_p to Z preserving sum equalities."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .core import (
    IntegerSet,
    Relation,
    ResidueSet,
    _same_modulus,
    least_abs_residue,
    restricted_sumset,
    sumset,
)


@dataclass(frozen=True)
class RectifyCertificate:
    """x -> lift(t x - shift) for each side; shifts are 0 for pure dilations.

    kind is "single-set", "pair" or "order-k".
    """

    modulus: int
    t: int
    image_a: IntegerSet
    image_b: IntegerSet
    kind: str
    shift_a: int = 0
    shift_b: int = 0
    centered: bool = True

    def map_a(self, x: int) -> int:
        return self._lift(x, self.shift_a)

    def map_b(self, x: int) -> int:
        return self._lift(x, self.shift_b)

    def _lift(self, x: int, shift: int) -> int:
        y = self.t * x - shift
        if self.centered:
            return least_abs_residue(y, self.modulus)
        return y % self.modulus


def _quarter_ok(values: np.ndarray, p: int) -> np.ndarray:
    # least absolute residues within [-p/4, p/4]  <=>  4|r| <= p
    r = values % p
    r = np.where(2 * r > p, r - p, r)
    return np.all(4 * np.abs(r) <= p, axis=-1)


def _dilations_in_quarter(X: list[int], p: int) -> np.ndarray:
    t = np.arange(1, p, dtype=np.int64)[:, None]
    x = np.asarray(X, dtype=np.int64)[None, :]
    return np.nonzero(_quarter_ok(t * x, p))[0] + 1


def find_rectifying_dilation(X: ResidueSet) -> RectifyCertificate | None:
    """Smallest t in 1..p-1 with every least absolute residue of tX in [-p/4, p/4]."""
    if not X:
        raise ValueError("X must be non-empty")
    p = X.modulus
    good = _dilations_in_quarter(list(X), p)
    if len(good) == 0:
        return None
    t = int(good[0])
    image = IntegerSet.of(least_abs_residue(t * x, p) for x in X)
    return RectifyCertificate(p, t, image, image, "single-set")


def sum_collisions(A, B, add) -> int:
    """#{(a, b, a', b') : a + b = a' + b'} under the given addition."""
    rep = Counter(add(a, b) for a in A for b in B)
    return sum(v * v for v in rep.values())


def check_pair_certificate(A: ResidueSet, B: ResidueSet, cert: RectifyCertificate) -> bool:
    """Sum equalities of (A, B) in F_p and of the images in Z agree.

    Integer equality of images implies equality mod p, so the integer sum
    partition refines the modular one; equal collision counts force equality.
    Injectivity is checked separately.
    """
    fa = [cert.map_a(a) for a in A]
    fb = [cert.map_b(b) for b in B]
    if len(set(fa)) != len(A) or len(set(fb)) != len(B):
        return False
    p = A.modulus
    mod = sum_collisions(A, B, lambda a, b: (a + b) % p)
    lifted = sum_collisions(fa, fb, lambda a, b: a + b)
    return mod == lifted


def _min_arc_start(xs: list[int], p: int) -> int:
    """Start of the shortest cyclic arc covering xs (after the largest gap)."""
    xs = sorted(xs)
    if len(xs) == 1:
        return xs[0]
    gaps = [(xs[(i + 1) % len(xs)] - xs[i]) % p for i in range(len(xs))]
    i = max(range(len(xs)), key=lambda i: (gaps[i], -i))
    return xs[(i + 1) % len(xs)]


def certificate_for_dilation(A: ResidueSet, B: ResidueSet, t: int, centered: bool = True):
    """Certificate for a fixed t, or None if the lift fails the sum-equality test.

    centered=True uses least absolute residues of tA, tB; otherwise each side is
    translated so that its shortest covering arc starts at 0.
    """
    _same_modulus(A, B)
    p = A.modulus
    if t % p == 0:
        raise ValueError("t must be a unit")
    if centered:
        sa = sb = 0
    else:
        sa = _min_arc_start([t * a % p for a in A], p)
        sb = _min_arc_start([t * b % p for b in B], p)
    probe = RectifyCertificate(p, t % p, IntegerSet(), IntegerSet(), "pair", sa, sb, centered)
    cert = RectifyCertificate(
        p, t % p,
        IntegerSet.of(probe.map_a(a) for a in A),
        IntegerSet.of(probe.map_b(b) for b in B),
        "pair", sa, sb, centered,
    )
    return cert if check_pair_certificate(A, B, cert) else None


def certify_rectifiable_pair(A: ResidueSet, B: ResidueSet) -> RectifyCertificate | None:
    """Search dilations for a pair certificate.

    First pass: smallest t putting every least absolute residue of tA and tB in
    [-p/4, p/4]. Second pass: smallest t for which the arc-normalised images
    pass the collision test. None is not a proof of non-rectifiability.
    """
    _same_modulus(A, B)
    if not A or not B:
        raise ValueError("A and B must be non-empty")
    p = A.modulus
    union = sorted(set(A) | set(B))
    for t in _dilations_in_quarter(union, p):
        cert = certificate_for_dilation(A, B, int(t))
        if cert is not None:
            return cert
    for t in range(1, p):
        cert = certificate_for_dilation(A, B, t, centered=False)
        if cert is not None:
            return cert
    return None


def green_ruzsa_check(A: ResidueSet, k: int) -> tuple[Fraction, Fraction, bool]:
    """K = |A+A|/|A|, alpha = |A|/p, and whether alpha <= (16kK)^(-12K^2).

    Exact when 12K^2 is a small integer, otherwise compared in log space with
    60-digit precision.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if not A:
        raise ValueError("A must be non-empty")
    K = Fraction(len(sumset(A, A)), len(A))
    alpha = Fraction(len(A), A.modulus)
    expo = 12 * K * K
    base = 16 * k * K
    if expo.denominator == 1 and expo <= 20000:
        # alpha * base^expo <= 1
        satisfied = alpha * base ** int(expo) <= 1
    else:
        with mpmath.workdps(60):
            lhs = mpmath.log(mpmath.mpf(alpha.numerator) / alpha.denominator)
            rhs = -mpmath.mpf(expo.numerator) / expo.denominator * mpmath.log(
                mpmath.mpf(base.numerator) / base.denominator
            )
            satisfied = bool(lhs <= rhs)
    return K, alpha, satisfied


def lift_instance(A: ResidueSet, B: ResidueSet, R: Relation, cert: RectifyCertificate):
    """Lift (A, B, R) along a pair certificate; returns integer sets and relation.

    Raises if the certificate does not cover (A, B) or the restricted-sumset
    size is not preserved.
    """
    _same_modulus(A, B)
    if cert.modulus != A.modulus:
        raise ValueError("certificate modulus differs")
    fa = {a: cert.map_a(a) for a in A}
    fb = {b: cert.map_b(b) for b in B}
    if set(fa.values()) != set(cert.image_a) or set(fb.values()) != set(cert.image_b):
        raise ValueError("certificate does not cover (A, B)")
    if not check_pair_certificate(A, B, cert):
        raise ValueError("certificate fails the sum-equality test for (A, B)")
    R.check_within(A, B)
    LA = IntegerSet.of(fa.values())
    LB = IntegerSet.of(fb.values())
    LR = Relation(frozenset((fa[a], fb[b]) for a, b in R.pairs))
    if len(restricted_sumset(LA, LB, LR)) != len(restricted_sumset(A, B, R)):
        raise AssertionError("lift changed the restricted sumset size")
    return LA, LB, LR


def small_set_threshold(n: int) -> int:
    """p must exceed 4^n for every n-element set to admit a quarter dilation."""
    return 4 ** n


def log_green_ruzsa_threshold(k: int, K: Fraction) -> float:
    """Natural log of (16kK)^(-12K^2), as a float (only for display)."""
    return -12 * float(K) ** 2 * math.log(16 * k * float(K))
