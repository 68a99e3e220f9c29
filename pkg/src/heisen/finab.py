"""Finite abelian groups in invariant-factor form.

A group is ``Z/d1 x ... x Z/dn`` with ``d_{i+1} | d_i``. The same value
presents its Pontryagin dual: the character attached to ``y`` sends ``x`` to
``zeta ** pairing(x, y)`` where ``zeta`` is a primitive ``d1``-th root of unity.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd, prod
from typing import Iterator, Sequence

import numpy as np

from . import config
from .errors import BoundExceededError, ConstraintError, GroupMismatchError, ParseError
from .exact_arith import smith_normal_form
from .kernels import backend


def _is_chain(factors: Sequence[int]) -> bool:
    return all(factors[i] % factors[i + 1] == 0 for i in range(len(factors) - 1))


@dataclass(frozen=True)
class FiniteAbelianGroup:
    factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(d) for d in self.factors)
        if any(d < 2 for d in factors):
            raise ConstraintError(f"invariant factors must be >= 2: {factors}")
        if not _is_chain(factors):
            raise ConstraintError(f"factors do not form a divisibility chain: {factors}")
        object.__setattr__(self, "factors", factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def exponent(self) -> int:
        """The largest factor ``d1`` (1 for the trivial group)."""
        return self.factors[0] if self.factors else 1

    def __str__(self):
        if not self.factors:
            return "1"
        return " x ".join(f"Z/{d}" for d in self.factors)

    def __len__(self):
        return self.order

    def element(self, coeffs: Sequence[int]) -> GroupElement:
        return GroupElement(self, tuple(coeffs))

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank)

    def generator(self, i: int) -> GroupElement:
        return GroupElement(self, tuple(int(j == i) for j in range(self.rank)))

    def generators(self) -> list[GroupElement]:
        return [self.generator(i) for i in range(self.rank)]

    def check_bound(self, limit: int | None = None) -> None:
        limit = config.max_order() if limit is None else limit
        if self.order > limit:
            raise BoundExceededError(
                f"group of order {self.order} exceeds exhaustive bound {limit}"
            )

    @cached_property
    def coords(self) -> np.ndarray:
        """All elements as an (order, rank) int64 array in lexicographic order."""
        self.check_bound()
        if not self.factors:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices(self.factors, dtype=np.int64)
        return np.ascontiguousarray(grids.reshape(self.rank, -1).T)

    @cached_property
    def moduli(self) -> np.ndarray:
        return np.array(self.factors, dtype=np.int64)

    def index(self, x: GroupElement | Sequence[int]) -> int:
        """Position of an element in the lexicographic enumeration."""
        coeffs = x.coeffs if isinstance(x, GroupElement) else x
        idx = 0
        for c, d in zip(coeffs, self.factors):
            idx = idx * d + c % d
        return idx

    def from_index(self, idx: int) -> GroupElement:
        coeffs = []
        for d in reversed(self.factors):
            idx, r = divmod(idx, d)
            coeffs.append(r)
        return GroupElement(self, tuple(reversed(coeffs)))

    def pairing_scales(self) -> list[int]:
        """``d1 / d_i`` for each factor."""
        return [self.exponent // d for d in self.factors]

    def direct_square(self) -> FiniteAbelianGroup:
        """``A x A^`` in the interleaved presentation (a1, a1^, a2, a2^, ...)."""
        return FiniteAbelianGroup(tuple(d for d in self.factors for _ in range(2)))


@dataclass(frozen=True)
class GroupElement:
    group: FiniteAbelianGroup
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.group.rank:
            raise GroupMismatchError(
                f"expected {self.group.rank} coordinates, got {len(self.coeffs)}"
            )
        reduced = tuple(int(c) % d for c, d in zip(self.coeffs, self.group.factors))
        object.__setattr__(self, "coeffs", reduced)

    def __add__(self, other: GroupElement) -> GroupElement:
        return element_add(self, other)

    def __neg__(self) -> GroupElement:
        return GroupElement(self.group, tuple(-c for c in self.coeffs))

    def __sub__(self, other: GroupElement) -> GroupElement:
        return element_add(self, -other)

    def __rmul__(self, k: int) -> GroupElement:
        return GroupElement(self.group, tuple(k * c for c in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def order(self) -> int:
        o = 1
        for c, d in zip(self.coeffs, self.group.factors):
            o = o * (d // gcd(c, d)) // gcd(o, d // gcd(c, d))
        return o


def make_group(factors: Sequence[int]) -> FiniteAbelianGroup:
    """Canonical invariant-factor form of ``Z/f1 x Z/f2 x ...``."""
    fs = [int(f) for f in factors]
    if any(f < 1 for f in fs):
        raise ConstraintError(f"cyclic orders must be >= 1: {fs}")
    fs = sorted((f for f in fs if f != 1), reverse=True)
    if not _is_chain(fs):
        n = len(fs)
        _, d, _ = smith_normal_form([[fs[i] if i == j else 0 for j in range(n)] for i in range(n)])
        fs = sorted((d[i][i] for i in range(n) if d[i][i] != 1), reverse=True)
    return FiniteAbelianGroup(tuple(fs))


_LITERAL_TERM = re.compile(r"^\s*Z\s*/\s*(\d+)\s*$")


def parse_group(text: str) -> FiniteAbelianGroup:
    """Parse ``Z/4 x Z/2`` (``x`` or ``*`` separators); ``1`` is the trivial group."""
    stripped = text.strip()
    if stripped in ("1", "0", ""):
        return make_group([])
    factors = []
    for term in re.split(r"[x*]", stripped):
        m = _LITERAL_TERM.match(term)
        if not m:
            raise ParseError(f"bad group literal term {term.strip()!r} in {text!r}")
        d = int(m.group(1))
        if d < 1:
            raise ParseError(f"cyclic order must be >= 1 in term {term.strip()!r}")
        factors.append(d)
    return make_group(factors)


def _same_group(a: GroupElement, b: GroupElement) -> None:
    if a.group != b.group:
        raise GroupMismatchError(f"elements of {a.group} and {b.group}")


def element_add(a: GroupElement, b: GroupElement) -> GroupElement:
    _same_group(a, b)
    return GroupElement(a.group, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def pairing(x: GroupElement, y: GroupElement) -> int:
    """Exponent ``t`` in ``[0, d1)`` with ``chi_y(x) = zeta ** t``."""
    _same_group(x, y)
    g = x.group
    return sum(a * b * s for a, b, s in zip(x.coeffs, y.coeffs, g.pairing_scales())) % g.exponent


def enumerate_elements(group: FiniteAbelianGroup) -> Iterator[GroupElement]:
    group.check_bound()
    for coeffs in itertools.product(*(range(d) for d in group.factors)):
        yield GroupElement(group, coeffs)


@lru_cache(maxsize=256)
def hom_steps(source: FiniteAbelianGroup, target: FiniteAbelianGroup) -> tuple[tuple[int, ...], ...]:
    """``d_i / gcd(d_i, d_j)``: entry (i, j) of a hom matrix must be a multiple of this."""
    return tuple(tuple(di // gcd(di, dj) for dj in source.factors) for di in target.factors)


@dataclass(frozen=True)
class HomMatrix:
    """Homomorphism ``source -> target``; ``entries[i][j]`` is the x_i-coefficient of alpha(x_j).

    Entry (i, j) is reduced modulo the target order ``d_i`` and must be
    divisible by ``d_i / gcd(d_i, d_j)``.
    """

    source: FiniteAbelianGroup
    target: FiniteAbelianGroup
    entries: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        rows = [list(r) for r in self.entries]
        if self.target.rank and not rows:
            rows = [[0] * self.source.rank for _ in range(self.target.rank)]
        if len(rows) != self.target.rank or any(len(r) != self.source.rank for r in rows):
            raise GroupMismatchError(
                f"matrix shape does not match {self.target.rank}x{self.source.rank}"
            )
        steps = hom_steps(self.source, self.target)
        out = []
        for i, (row, di, srow) in enumerate(zip(rows, self.target.factors, steps)):
            new_row = tuple(int(a) % di for a in row)
            for j, (a, step) in enumerate(zip(new_row, srow)):
                if a % step:
                    raise ConstraintError(f"entry ({i},{j})={a} not divisible by {step}")
            out.append(new_row)
        object.__setattr__(self, "entries", tuple(out))

    @classmethod
    def identity(cls, group: FiniteAbelianGroup) -> HomMatrix:
        n = group.rank
        return cls(group, group, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, source: FiniteAbelianGroup, target: FiniteAbelianGroup | None = None) -> HomMatrix:
        target = source if target is None else target
        return cls(source, target, tuple((0,) * source.rank for _ in range(target.rank)))

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.target.rank, self.source.rank)

    def __call__(self, x: GroupElement) -> GroupElement:
        return hom_apply(self, x)

    def __matmul__(self, other: HomMatrix) -> HomMatrix:
        return hom_compose(self, other)

    def image_indices(self) -> np.ndarray:
        """Target index of alpha(x) for every source element x, in enumeration order."""
        return backend.image_indices(self.source.coords, self.as_array(), self.target.moduli)


def hom_apply(alpha: HomMatrix, x: GroupElement) -> GroupElement:
    if x.group != alpha.source:
        raise GroupMismatchError(f"element of {x.group} applied to hom from {alpha.source}")
    return GroupElement(
        alpha.target,
        tuple(sum(a * c for a, c in zip(row, x.coeffs)) for row in alpha.entries),
    )


def hom_compose(beta: HomMatrix, alpha: HomMatrix) -> HomMatrix:
    """``beta o alpha`` (apply alpha first)."""
    if alpha.target != beta.source:
        raise GroupMismatchError("target of alpha must equal source of beta")
    a, b = alpha.entries, beta.entries
    inner = alpha.target.rank
    entries = tuple(
        tuple(sum(b[i][k] * a[k][j] for k in range(inner)) for j in range(alpha.source.rank))
        for i in range(beta.target.rank)
    )
    # HomMatrix validates the divisibility constraint; composition always satisfies it
    return HomMatrix(alpha.source, beta.target, entries)


def hom_transpose(alpha: HomMatrix) -> HomMatrix:
    """Matrix of the dual map, characterized by
    ``pairing(alpha(x), y) == pairing(x, alpha_star(y))``.

    Solving ``(d1/d_i) * a*_ij = (d1/d_j) * a_ji`` gives ``a*_ij = a_ji * d_i / d_j``,
    which is an integer thanks to the divisibility constraint on ``a_ji``.
    Source and target dual groups have the same exponent here.
    """
    src, tgt = alpha.source, alpha.target
    if src.exponent != tgt.exponent and src.rank and tgt.rank:
        raise GroupMismatchError("transpose requires groups with equal exponent")
    entries = []
    for i, di in enumerate(src.factors):
        row = []
        for j, dj in enumerate(tgt.factors):
            num = alpha.entries[j][i] * di
            if num % dj:
                raise ConstraintError(f"entry ({j},{i}) breaks the transpose scaling")
            row.append(num // dj)
        entries.append(tuple(row))
    return HomMatrix(tgt, src, tuple(entries))


def is_automorphism(alpha: HomMatrix, method: str | None = None) -> bool:
    """Whether alpha is a bijective endomorphism.

    ``method`` is 'exhaustive' (bijectivity scan), 'snf' (surjectivity from
    the Smith form of ``[alpha | diag(d)]``) or None to pick by size.
    """
    if alpha.source != alpha.target:
        return False
    g = alpha.source
    if method is None:
        method = "exhaustive" if g.order <= 4096 else "snf"
    if method == "exhaustive":
        return backend.is_permutation(alpha.image_indices())
    if method == "snf":
        # coker of alpha on Z^n / D Z^n is Z^n / (A Z^n + D Z^n); trivial iff surjective
        n = g.rank
        if n == 0:
            return True
        block = [
            list(alpha.entries[i]) + [g.factors[i] if i == j else 0 for j in range(n)]
            for i in range(n)
        ]
        _, d, _ = smith_normal_form(block)
        return all(d[i][i] == 1 for i in range(n))
    raise ValueError(f"unknown method {method!r}")


def hom_inverse(alpha: HomMatrix) -> HomMatrix:
    """Inverse automorphism, read off from the images of the generators."""
    g = alpha.source
    if not is_automorphism(alpha):
        raise ConstraintError("matrix is not an automorphism")
    idx = alpha.image_indices()
    inv = np.empty_like(idx)
    inv[idx] = np.arange(len(idx))
    cols = [g.from_index(int(inv[g.index(x)])).coeffs for x in g.generators()]
    entries = tuple(tuple(cols[j][i] for j in range(g.rank)) for i in range(g.rank))
    return HomMatrix(g, g, entries)


def enumerate_homs(source: FiniteAbelianGroup, target: FiniteAbelianGroup | None = None) -> Iterator[HomMatrix]:
    """Every constrained matrix ``source -> target``."""
    target = source if target is None else target
    choices = []
    for di in target.factors:
        for dj in source.factors:
            step = di // gcd(di, dj)
            choices.append(range(0, di, step))
    total = prod(len(c) for c in choices)
    if total > config.max_order():
        raise BoundExceededError(f"{total} homomorphisms exceed the exhaustive bound")
    n, m = target.rank, source.rank
    for flat in itertools.product(*choices):
        yield HomMatrix(source, target, tuple(tuple(flat[i * m:(i + 1) * m]) for i in range(n)))
