"""Finite labeled sample spaces, their event algebra, and scalar measures.

Atoms are UTF-8 labels kept in lexicographic order; every per-atom output in
the package follows that canonical order, and sums accumulate left-to-right in
it so that repeated evaluations are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import math

from .errors import SpaceMismatchError, ValidationError


@dataclass(frozen=True)
class DiscreteBorelSpace:
    """Finite set of distinct atom labels, stored sorted."""

    atoms: tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(self.atoms)
        if not labels:
            raise ValidationError("a sample space needs at least one atom")
        if not all(isinstance(label, str) for label in labels):
            raise ValidationError("atom labels must be strings")
        if len(set(labels)) != len(labels):
            raise ValidationError("atom labels must be distinct")
        object.__setattr__(self, "atoms", tuple(sorted(labels)))

    @property
    def size(self) -> int:
        return len(self.atoms)

    def index(self, label: str) -> int:
        try:
            return self.atoms.index(label)
        except ValueError:
            raise ValidationError(f"unknown atom {label!r}") from None

    def event(self, members) -> "Event":
        return Event(self, frozenset(members))

    def atom_event(self, label: str) -> "Event":
        return Event(self, frozenset((label,)))

    def whole(self) -> "Event":
        return Event(self, frozenset(self.atoms))

    def empty(self) -> "Event":
        return Event(self, frozenset())

    def require_same(self, other: "DiscreteBorelSpace") -> None:
        if self.atoms != other.atoms:
            raise SpaceMismatchError("operands are defined over different sample spaces")


@dataclass(frozen=True)
class Event:
    """Subset of a space's atoms."""

    space: DiscreteBorelSpace
    members: frozenset[str]

    def __post_init__(self) -> None:
        members = frozenset(self.members)
        stray = members - set(self.space.atoms)
        if stray:
            raise ValidationError(f"event members {sorted(stray)} are not atoms of the space")
        object.__setattr__(self, "members", members)

    def intersect(self, other: "Event") -> "Event":
        self.space.require_same(other.space)
        return Event(self.space, self.members & other.members)

    def union(self, other: "Event") -> "Event":
        self.space.require_same(other.space)
        return Event(self.space, self.members | other.members)

    def complement(self) -> "Event":
        return Event(self.space, frozenset(self.space.atoms) - self.members)

    def sorted_members(self) -> tuple[str, ...]:
        """Members in canonical atom order."""
        return tuple(a for a in self.space.atoms if a in self.members)

    def is_disjoint(self, other: "Event") -> bool:
        self.space.require_same(other.space)
        return not (self.members & other.members)


@dataclass(frozen=True)
class ScalarMeasure:
    """Nonnegative weight per atom, aligned with the canonical atom order."""

    space: DiscreteBorelSpace
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        weights = tuple(float(w) for w in self.weights)
        if len(weights) != self.space.size:
            raise ValidationError(
                f"expected {self.space.size} weights, got {len(weights)}"
            )
        for label, weight in zip(self.space.atoms, weights):
            if not math.isfinite(weight):
                raise ValidationError(f"weight at atom {label!r} is not finite")
            if weight < 0.0:
                raise ValidationError(f"nonnegative weight: atom {label!r} has {weight!r}")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_dict(cls, space: DiscreteBorelSpace, mapping) -> "ScalarMeasure":
        missing = set(space.atoms) - set(mapping)
        if missing:
            raise ValidationError(f"measure is missing weights for atoms {sorted(missing)}")
        return cls(space, tuple(float(mapping[a]) for a in space.atoms))

    def weight(self, label: str) -> float:
        return self.weights[self.space.index(label)]

    def total(self) -> float:
        return measure_of(self, self.space.whole())


def measure_of(measure: ScalarMeasure, event: Event) -> float:
    """Sum of weights over the event, accumulated in canonical atom order."""
    measure.space.require_same(event.space)
    total = 0.0
    for label, weight in zip(measure.space.atoms, measure.weights):
        if label in event.members:
            total += weight
    return total
