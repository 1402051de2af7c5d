"""Points, subsets, and structured set generators for the group Z_N^d.

Everything here is exact integer arithmetic: residues are canonical,
membership queries are set lookups, and set contents are kept sorted in
lexicographic coordinate order so that outputs are deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Iterable, Iterator

from .errors import CapacityError, StructureError

# Dense enumerations of Z_N^d stop here; explicit small sets are unguarded.
DENSE_LIMIT = 2**24


@dataclass(frozen=True)
class GroupParams:
    """Ambient group Z_N^d: modulus N >= 2 and dimension d >= 1."""

    modulus: int
    dimension: int

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")

    @property
    def size(self) -> int:
        """Number of points N^d."""
        return self.modulus**self.dimension

    def require_dense(self, what: str = "dense enumeration") -> None:
        if self.size > DENSE_LIMIT:
            raise CapacityError(
                f"{what} needs N^d <= {DENSE_LIMIT}, got N^d = {self.size}"
            )

    def vector(self, coords: Iterable[int]) -> RingVector:
        v = RingVector(tuple(coords), self.modulus)
        if len(v.coords) != self.dimension:
            raise ValueError(
                f"expected {self.dimension} coordinates, got {len(v.coords)}"
            )
        return v

    def zero(self) -> RingVector:
        return RingVector((0,) * self.dimension, self.modulus)

    def points(self) -> Iterator[RingVector]:
        """All points of Z_N^d in row-major (lexicographic) order."""
        self.require_dense("point enumeration")
        for coords in product(range(self.modulus), repeat=self.dimension):
            yield RingVector(coords, self.modulus)

    def flat_index(self, v: RingVector) -> int:
        """Row-major index of a point, matching dense signal storage."""
        idx = 0
        for c in v.coords:
            idx = idx * self.modulus + c
        return idx

    def from_flat(self, idx: int) -> RingVector:
        if not 0 <= idx < self.size:
            raise ValueError(f"flat index {idx} out of range for size {self.size}")
        coords = []
        for _ in range(self.dimension):
            coords.append(idx % self.modulus)
            idx //= self.modulus
        return RingVector(tuple(reversed(coords)), self.modulus)


@dataclass(frozen=True)
class RingVector:
    """A point (or frequency) of Z_N^d with canonical residue coordinates."""

    coords: tuple[int, ...]
    modulus: int

    def __post_init__(self) -> None:
        if not self.coords:
            raise ValueError("a point needs at least one coordinate")
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        object.__setattr__(
            self, "coords", tuple(int(c) % self.modulus for c in self.coords)
        )

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def _check_compatible(self, other: RingVector) -> None:
        if self.modulus != other.modulus or len(self.coords) != len(other.coords):
            raise ValueError("points live in different groups")

    def __add__(self, other: RingVector) -> RingVector:
        self._check_compatible(other)
        return RingVector(
            tuple((a + b) % self.modulus for a, b in zip(self.coords, other.coords)),
            self.modulus,
        )

    def __neg__(self) -> RingVector:
        return RingVector(tuple(-a % self.modulus for a in self.coords), self.modulus)

    def __sub__(self, other: RingVector) -> RingVector:
        return self + (-other)

    def scale(self, k: int) -> RingVector:
        return RingVector(tuple(k * a % self.modulus for a in self.coords), self.modulus)

    def dot(self, other: RingVector) -> int:
        """Inner product sum_i x_i y_i reduced mod N."""
        self._check_compatible(other)
        return sum(a * b for a, b in zip(self.coords, other.coords)) % self.modulus


@dataclass(frozen=True)
class SupportSet:
    """A finite subset of Z_N^d, duplicate-free and lexicographically sorted.

    Construction normalizes: members may arrive in any order (with
    duplicates); they are canonicalized, deduplicated, and sorted.
    """

    params: GroupParams
    members: tuple[RingVector, ...]

    def __post_init__(self) -> None:
        seen: dict[tuple[int, ...], RingVector] = {}
        for v in self.members:
            if v.modulus != self.params.modulus or v.dimension != self.params.dimension:
                raise ValueError("member does not live in the declared group")
            seen[v.coords] = v
        ordered = tuple(seen[c] for c in sorted(seen))
        object.__setattr__(self, "members", ordered)
        object.__setattr__(self, "_lookup", frozenset(seen))

    @classmethod
    def from_coords(
        cls, params: GroupParams, coords: Iterable[Iterable[int]]
    ) -> SupportSet:
        return cls(params, tuple(params.vector(c) for c in coords))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[RingVector]:
        return iter(self.members)

    def __contains__(self, v: RingVector) -> bool:
        return (
            v.modulus == self.params.modulus
            and v.coords in self._lookup  # type: ignore[attr-defined]
        )

    def contains_coords(self, coords: tuple[int, ...]) -> bool:
        return coords in self._lookup  # type: ignore[attr-defined]

    def flat_indices(self) -> list[int]:
        """Row-major indices of the members (sorted, since members are)."""
        return [self.params.flat_index(v) for v in self.members]


def make_interval_grid(params: GroupParams, m: int) -> SupportSet:
    """The Cartesian power {0, ..., m-1}^d inside Z_N^d."""
    if not 1 <= m < params.modulus:
        raise ValueError(f"interval length must satisfy 1 <= m < N, got m={m}")
    return SupportSet.from_coords(
        params, product(range(m), repeat=params.dimension)
    )


def make_cyclic_subgroup(params: GroupParams, generator: RingVector) -> SupportSet:
    """The cyclic subgroup {k * g : k >= 0} generated by one element."""
    if generator.modulus != params.modulus:
        raise ValueError("generator does not live in the declared group")
    members = [params.zero()]
    current = params.vector(generator.coords)
    while current.coords != members[0].coords:
        members.append(current)
        current = current + generator
    return SupportSet(params, tuple(members))


def product_set(a: SupportSet, b: SupportSet) -> SupportSet:
    """Cartesian product of two sets over the same modulus (dimensions add)."""
    if a.params.modulus != b.params.modulus:
        raise ValueError("product requires equal moduli")
    params = GroupParams(a.params.modulus, a.params.dimension + b.params.dimension)
    return SupportSet.from_coords(
        params, (x.coords + y.coords for x in a for y in b)
    )


def shift_set(a: SupportSet, t: RingVector) -> SupportSet:
    """Translate: {x + t : x in A}. Cardinality is preserved."""
    return SupportSet(a.params, tuple(x + t for x in a))


def negate_set(a: SupportSet) -> SupportSet:
    """Pointwise negation {-x : x in A}."""
    return SupportSet(a.params, tuple(-x for x in a))


def is_subgroup(a: SupportSet) -> bool:
    """True iff A contains 0 and is closed under addition."""
    if len(a) == 0 or a.params.zero() not in a:
        return False
    return all((x + y) in a for x in a for y in a)


def annihilator(h: SupportSet) -> SupportSet:
    """All frequencies m with m . x = 0 for every x in the subgroup H.

    Satisfies |H| * |annihilator(H)| = N^d. Raises StructureError when H
    is not a subgroup.
    """
    if not is_subgroup(h):
        raise StructureError("annihilator requires a subgroup (0 in H, closed under +)")
    h.params.require_dense("annihilator scan")
    members = tuple(
        m for m in h.params.points() if all(m.dot(x) == 0 for x in h)
    )
    return SupportSet(h.params, members)


def all_cyclic_subgroups(params: GroupParams) -> list[SupportSet]:
    """Every distinct subgroup generated by a single element, sorted by size."""
    params.require_dense("subgroup enumeration")
    seen: dict[tuple[tuple[int, ...], ...], SupportSet] = {}
    for g in params.points():
        sub = make_cyclic_subgroup(params, g)
        seen.setdefault(tuple(v.coords for v in sub), sub)
    return sorted(seen.values(), key=lambda s: (len(s), tuple(v.coords for v in s)))


def complement(a: SupportSet) -> SupportSet:
    a.params.require_dense("complement")
    return SupportSet(a.params, tuple(p for p in a.params.points() if p not in a))


def set_to_json_dict(a: SupportSet) -> dict:
    return {
        "N": a.params.modulus,
        "d": a.params.dimension,
        "members": [list(v.coords) for v in a],
    }


def set_from_json_dict(data: dict) -> SupportSet:
    params = GroupParams(int(data["N"]), int(data["d"]))
    return SupportSet.from_coords(params, data["members"])


def save_set(a: SupportSet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(set_to_json_dict(a), indent=2) + "\n")


def load_set(path: str | Path) -> SupportSet:
    return set_from_json_dict(json.loads(Path(path).read_text()))
