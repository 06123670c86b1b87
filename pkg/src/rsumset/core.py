"""Exact set arithmetic over Z and Z/pZ, and the restricted-sumset evaluator.

Residue sets are stored as Python ints used as bit-vectors of length p
(bit i set iff residue i is a member); a sumset is the OR of rotated copies.
Integer sets are sorted tuples, converted to offset bitmasks for arithmetic.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Union


class ModulusError(ValueError):
    pass


class EmptySetError(ValueError):
    pass


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def next_prime(n: int) -> int:
    """Least prime strictly greater than n."""
    m = n + 1
    while not is_prime(m):
        m += 1
    return m


def least_abs_residue(x: int, p: int) -> int:
    """Representative of x mod p in (-p/2, p/2]."""
    r = x % p
    return r - p if 2 * r > p else r


def _rotl(bits: int, k: int, p: int, mask: int) -> int:
    k %= p
    if k == 0:
        return bits
    return ((bits << k) | (bits >> (p - k))) & mask


@dataclass(frozen=True)
class ResidueSet:
    modulus: int
    bits: int = 0

    def __post_init__(self):
        if not is_prime(self.modulus):
            raise ModulusError(f"modulus {self.modulus} is not prime")
        if self.bits < 0 or self.bits >> self.modulus:
            raise ValueError("bit-vector longer than modulus")

    @classmethod
    def of(cls, p: int, members: Iterable[int]) -> "ResidueSet":
        if not is_prime(p):
            raise ModulusError(f"modulus {p} is not prime")
        bits = 0
        for x in members:
            bits |= 1 << (x % p)
        return cls(p, bits)

    @classmethod
    def full(cls, p: int) -> "ResidueSet":
        return cls(p, (1 << p) - 1)

    @property
    def mask(self) -> int:
        return (1 << self.modulus) - 1

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(self)

    def __iter__(self) -> Iterator[int]:
        b = self.bits
        while b:
            low = b & -b
            yield low.bit_length() - 1
            b ^= low

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, x: int) -> bool:
        return bool(self.bits >> (x % self.modulus) & 1)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __or__(self, other: "ResidueSet") -> "ResidueSet":
        _same_modulus(self, other)
        return ResidueSet(self.modulus, self.bits | other.bits)

    def __and__(self, other: "ResidueSet") -> "ResidueSet":
        _same_modulus(self, other)
        return ResidueSet(self.modulus, self.bits & other.bits)

    def __sub__(self, other: "ResidueSet") -> "ResidueSet":
        _same_modulus(self, other)
        return ResidueSet(self.modulus, self.bits & ~other.bits)

    def __le__(self, other: "ResidueSet") -> bool:
        _same_modulus(self, other)
        return self.bits & ~other.bits == 0

    def complement(self) -> "ResidueSet":
        return ResidueSet(self.modulus, self.mask & ~self.bits)

    def __neg__(self) -> "ResidueSet":
        return ResidueSet.of(self.modulus, (-x for x in self))

    def shift(self, x: int) -> "ResidueSet":
        return ResidueSet(self.modulus, _rotl(self.bits, x, self.modulus, self.mask))

    def __repr__(self) -> str:
        return f"ResidueSet(p={self.modulus}, {list(self)})"


@dataclass(frozen=True)
class IntegerSet:
    members: tuple[int, ...] = ()

    def __post_init__(self):
        m = tuple(self.members)
        object.__setattr__(self, "members", m)
        if any(x >= y for x, y in zip(m, m[1:])):
            raise ValueError("IntegerSet members must be strictly increasing")

    @classmethod
    def of(cls, members: Iterable[int]) -> "IntegerSet":
        return cls(tuple(sorted(set(members))))

    @classmethod
    def interval(cls, lo: int, hi: int) -> "IntegerSet":
        """{lo, ..., hi} inclusive."""
        return cls(tuple(range(lo, hi + 1)))

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self._lookup

    @property
    def _lookup(self) -> frozenset:
        # cached on first use; frozen dataclass needs object.__setattr__
        try:
            return self.__dict__["_lk"]
        except KeyError:
            s = frozenset(self.members)
            object.__setattr__(self, "_lk", s)
            return s

    def __bool__(self) -> bool:
        return bool(self.members)

    def __or__(self, other: "IntegerSet") -> "IntegerSet":
        return IntegerSet.of(self.members + other.members)

    def __and__(self, other: "IntegerSet") -> "IntegerSet":
        return IntegerSet.of(x for x in self.members if x in other)

    def __sub__(self, other: "IntegerSet") -> "IntegerSet":
        return IntegerSet(tuple(x for x in self.members if x not in other))

    def __le__(self, other: "IntegerSet") -> bool:
        return all(x in other for x in self.members)

    def __neg__(self) -> "IntegerSet":
        return IntegerSet(tuple(-x for x in reversed(self.members)))

    def shift(self, x: int) -> "IntegerSet":
        return IntegerSet(tuple(y + x for y in self.members))

    def _bitmask(self) -> tuple[int, int]:
        lo = self.members[0]
        bits = 0
        for x in self.members:
            bits |= 1 << (x - lo)
        return lo, bits

    def __repr__(self) -> str:
        return f"IntegerSet({list(self.members)})"


AnySet = Union[ResidueSet, IntegerSet]


def _from_bitmask(lo: int, bits: int) -> IntegerSet:
    out = []
    while bits:
        low = bits & -bits
        out.append(lo + low.bit_length() - 1)
        bits ^= low
    return IntegerSet(tuple(out))


def _same_modulus(X: ResidueSet, Y: ResidueSet) -> None:
    if X.modulus != Y.modulus:
        raise ModulusError(f"modulus mismatch: {X.modulus} vs {Y.modulus}")


def _check_pair(A: AnySet, B: AnySet) -> None:
    if isinstance(A, ResidueSet) and isinstance(B, ResidueSet):
        _same_modulus(A, B)
    elif not (isinstance(A, IntegerSet) and isinstance(B, IntegerSet)):
        raise TypeError("operands must both be IntegerSet or both ResidueSet")
    if not A or not B:
        raise EmptySetError("operands must be non-empty")


def like(X: AnySet, members: Iterable[int]) -> AnySet:
    """Build a set in the same universe as X."""
    if isinstance(X, ResidueSet):
        return ResidueSet.of(X.modulus, members)
    return IntegerSet.of(members)


def modulus_of(X: AnySet) -> int | None:
    return X.modulus if isinstance(X, ResidueSet) else None


def add_fn(X: AnySet):
    """Element addition in the universe of X."""
    if isinstance(X, ResidueSet):
        p = X.modulus
        return lambda a, b: (a + b) % p
    return lambda a, b: a + b


def sumset(A: AnySet, B: AnySet) -> AnySet:
    _check_pair(A, B)
    if isinstance(A, ResidueSet):
        if len(B) > len(A):
            A, B = B, A
        p, mask, out = A.modulus, A.mask, 0
        for b in B:
            out |= _rotl(A.bits, b, p, mask)
        return ResidueSet(p, out)
    la, ba = A._bitmask()
    lb, bb = B._bitmask()
    if len(B) > len(A):
        la, ba, lb, bb = lb, bb, la, ba
    out = 0
    b = bb
    while b:
        low = b & -b
        out |= ba << (low.bit_length() - 1)
        b ^= low
    return _from_bitmask(la + lb, out)


@dataclass(frozen=True)
class Relation:
    """Forbidden pairs R of A x B, with degree counts on both sides."""

    pairs: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset((int(a), int(b)) for a, b in self.pairs))

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]], p: int | None = None) -> "Relation":
        if p is not None:
            pairs = ((a % p, b % p) for a, b in pairs)
        return cls(frozenset(pairs))

    @property
    def deg_a(self) -> Counter:
        return Counter(a for a, _ in self.pairs)

    @property
    def deg_b(self) -> Counter:
        return Counter(b for _, b in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __or__(self, other: "Relation") -> "Relation":
        return Relation(self.pairs | other.pairs)

    def inverse(self) -> "Relation":
        return Relation(frozenset((b, a) for a, b in self.pairs))

    def is_symmetric(self) -> bool:
        return all((b, a) in self.pairs for a, b in self.pairs)

    def check_within(self, A: AnySet, B: AnySet) -> None:
        for a, b in self.pairs:
            if a not in A or b not in B:
                raise ValueError(f"relation pair ({a}, {b}) lies outside A x B")


def degree_profile(R: Relation) -> tuple[int, int]:
    """(max degree on A, max degree on B); (0, 0) for the empty relation."""
    da, db = R.deg_a, R.deg_b
    return (max(da.values(), default=0), max(db.values(), default=0))


@dataclass(frozen=True)
class RelationConstraint:
    """Degree regime on forbidden relations.

    kind is one of "degree_b", "degree_both", "function_b", "matching".
    A function B -> A behaves as degree <= 1 on B and a matching as degree <= 1
    on both sides; both also ask for totality on B, which only ever shrinks the
    restricted sumset and so does not change minima.
    """

    kind: str
    D: int = 1

    KINDS = ("degree_b", "degree_both", "function_b", "matching")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        if self.kind in ("function_b", "matching"):
            object.__setattr__(self, "D", 1)
        if self.D < 1:
            raise ValueError("degree bound must be positive")

    @classmethod
    def degree_on_b(cls, D: int) -> "RelationConstraint":
        return cls("degree_b", D)

    @classmethod
    def degree_both(cls, D: int) -> "RelationConstraint":
        return cls("degree_both", D)

    @classmethod
    def function_b_to_a(cls) -> "RelationConstraint":
        return cls("function_b")

    @classmethod
    def matching_b_to_a(cls) -> "RelationConstraint":
        return cls("matching")

    @property
    def bound_b(self) -> int:
        return self.D

    @property
    def bound_a(self) -> int | None:
        return self.D if self.kind in ("degree_both", "matching") else None

    @property
    def total(self) -> bool:
        return self.kind in ("function_b", "matching")

    def admits(self, R: Relation) -> bool:
        da, db = degree_profile(R)
        if db > self.bound_b:
            return False
        return self.bound_a is None or da <= self.bound_a

    @classmethod
    def parse(cls, text: str) -> "RelationConstraint":
        """'function-b', 'matching', 'degree-b:D', 'degree-both:D'."""
        name, _, d = text.partition(":")
        name = name.strip().replace("-", "_")
        if name == "degree_on_b":
            name = "degree_b"
        if name in ("degree_b", "degree_both"):
            if not d:
                raise ValueError(f"constraint {text!r} needs a degree, e.g. {name.replace('_', '-')}:2")
            return cls(name, int(d))
        return cls(name)

    def label(self) -> str:
        if self.kind in ("degree_b", "degree_both"):
            return f"{self.kind.replace('_', '-')}:{self.D}"
        return self.kind.replace("_", "-")


def restricted_sumset(A: AnySet, B: AnySet, R: Relation) -> AnySet:
    """{a + b : a in A, b in B, (a, b) not in R}."""
    _check_pair(A, B)
    R.check_within(A, B)
    if not R.pairs:
        return sumset(A, B)
    banned: dict[int, list[int]] = {}
    for a, b in R.pairs:
        banned.setdefault(a, []).append(b)
    if isinstance(A, ResidueSet):
        p, mask, out = A.modulus, A.mask, 0
        for a in A:
            bits = B.bits
            for b in banned.get(a, ()):
                bits &= ~(1 << b)
            out |= _rotl(bits, a, p, mask)
        return ResidueSet(p, out)
    lb, bb = B._bitmask()
    out = 0
    la = A.members[0]
    for a in A:
        bits = bb
        for b in banned.get(a, ()):
            bits &= ~(1 << (b - lb))
        out |= bits << (a - la)
    return _from_bitmask(la + lb, out)


def dilate(X: ResidueSet, t: int) -> ResidueSet:
    if t % X.modulus == 0:
        raise ValueError("dilation factor must be a unit mod p")
    return ResidueSet.of(X.modulus, (t * x for x in X))


def translate(X: AnySet, x: int) -> AnySet:
    return X.shift(x)


def _fold(B: AnySet, m: int) -> AnySet:
    out = like(B, [0])
    for _ in range(m):
        out = sumset(out, B)
    return out


def iterated_span(B: AnySet, m: int, n: int) -> AnySet:
    """mB - nB."""
    if m < 0 or n < 0:
        raise ValueError("m, n must be non-negative")
    if m + n == 0:
        raise ValueError("m + n must be at least 1")
    if not B:
        raise EmptySetError("B must be non-empty")
    return sumset(_fold(B, m), -_fold(B, n))


def representation_counts(A: AnySet, B: AnySet) -> Counter:
    """s -> #{(a, b) in A x B : a + b = s}."""
    add = add_fn(A)
    return Counter(add(a, b) for a in A for b in B)


# ---- text formats -------------------------------------------------------

def parse_set_literal(text: str) -> list[int]:
    """'0,1,4' -> [0, 1, 4]. Whitespace tolerated; empty string -> []."""
    text = text.strip()
    if not text:
        return []
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        raise ValueError(f"ill-formed set literal {text!r}") from None


def parse_relation_literal(text: str) -> list[tuple[int, int]]:
    """'0:2;1:1;2:0' -> [(0, 2), (1, 1), (2, 0)]."""
    text = text.strip()
    if not text:
        return []
    out = []
    for tok in text.split(";"):
        a, sep, b = tok.partition(":")
        if not sep:
            raise ValueError(f"ill-formed relation pair {tok!r}")
        try:
            out.append((int(a), int(b)))
        except ValueError:
            raise ValueError(f"ill-formed relation pair {tok!r}") from None
    return out


def format_set(X: Iterable[int]) -> str:
    return ",".join(str(x) for x in X)


def format_relation(R: Relation) -> str:
    return ";".join(f"{a}:{b}" for a, b in R)
