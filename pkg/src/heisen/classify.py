"""Counting Heisenberg groups of a given phase-space size."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod

from sympy import factorint
from sympy.utilities.iterables import partitions

from .errors import BoundExceededError, InvariantError
from .finab import FiniteAbelianGroup
from .forms import enumerate_forms, transform
from .reduction import exists_nondegenerate, orbit_automorphism, symplectic_reduce

MAX_CLASSIFY_ORDER = 10**12


def enumerate_abelian_groups(order: int) -> list[FiniteAbelianGroup]:
    """All abelian groups of the given order up to isomorphism, sorted by invariant factors."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if order > MAX_CLASSIFY_ORDER:
        raise BoundExceededError(f"order {order} exceeds the factorization budget")
    per_prime = []
    for p, a in sorted(factorint(order).items()):
        shapes = []
        for part in partitions(a):
            parts = sorted((k for k, mult in part.items() for _ in range(mult)), reverse=True)
            shapes.append([p**k for k in parts])
        per_prime.append(shapes)
    groups = []
    for combo in itertools.product(*per_prime):
        rank = max((len(s) for s in combo), default=0)
        factors = tuple(
            prod(s[i] for s in combo if i < len(s)) for i in range(rank)
        )
        groups.append(FiniteAbelianGroup(factors))
    return sorted(groups, key=lambda g: g.factors)


@dataclass
class ClassificationRecord:
    order_n: int
    phase_groups: list[FiniteAbelianGroup]
    count: int
    bases: list[FiniteAbelianGroup] = field(default_factory=list)
    orbits_checked: bool = False

    def to_json(self) -> dict:
        return {
            "order_n": self.order_n,
            "count": self.count,
            "phase_groups": [str(g) for g in self.phase_groups],
            "bases": [str(g) for g in self.bases],
            "orbits_checked": self.orbits_checked,
        }


def single_orbit(group: FiniteAbelianGroup) -> bool:
    """Every non-degenerate form on ``group`` is carried to the first by an explicit automorphism."""
    forms = enumerate_forms(group, nondegenerate_only=True)
    first = next(forms, None)
    if first is None:
        return False
    ref = symplectic_reduce(first)
    for e in forms:
        alpha = orbit_automorphism(first, e, ref)
        if transform(first, alpha) != e:
            return False
    return True


def classify_heisenberg(n: int, check_orbits: bool = False) -> ClassificationRecord:
    """Phase groups of order ``n**2`` carrying a Heisenberg group, one class each.

    With ``check_orbits`` every non-degenerate form on every phase group is
    reduced and shown to lie in one automorphism orbit.
    """
    phase = [k for k in enumerate_abelian_groups(n * n) if exists_nondegenerate(k)]
    bases = [FiniteAbelianGroup(k.factors[0::2]) for k in phase]
    expected = enumerate_abelian_groups(n)
    if len(set(bases)) != len(bases) or set(bases) != set(expected):
        raise InvariantError(f"phase groups of order {n * n} do not match abelian groups of order {n}")
    if check_orbits:
        for k in phase:
            if not single_orbit(k):
                raise InvariantError(f"non-degenerate forms on {k} split into several orbits")
    return ClassificationRecord(n, phase, len(phase), bases, check_orbits)
