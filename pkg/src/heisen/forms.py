"""Alternating bicharacters stored as exponent matrices.

``q[i][j]`` is the exponent with ``e(x_i, x_j) = zeta ** q[i][j]`` for a fixed
primitive ``d1``-th root of unity ``zeta``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, prod
from typing import Iterator, Sequence

import numpy as np

from . import config
from .errors import (
    BoundExceededError,
    InvariantError,
    ConstraintError,
    GroupMismatchError,
    ParseError,
)
from .finab import (
    FiniteAbelianGroup,
    GroupElement,
    HomMatrix,
    hom_apply,
    is_automorphism,
    parse_group,
)
from .kernels import backend


@lru_cache(maxsize=256)
def form_steps(group: FiniteAbelianGroup) -> tuple[tuple[int, ...], ...]:
    """``d1 / gcd(d_i, d_j)``: exponent q_ij must be a multiple of this."""
    d1 = group.exponent
    return tuple(tuple(d1 // gcd(di, dj) for dj in group.factors) for di in group.factors)


@dataclass(frozen=True)
class AlternatingForm:
    group: FiniteAbelianGroup
    q: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = self.group
        n, d1 = g.rank, g.exponent
        rows = [list(r) for r in self.q]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ConstraintError(f"q must be {n}x{n} for {g}")
        q = [[int(x) % d1 for x in r] for r in rows]
        steps = form_steps(g)
        for i in range(n):
            if q[i][i]:
                raise ConstraintError(f"diagonal entry q[{i}][{i}]={q[i][i]} must be 0")
            for j in range(n):
                step = steps[i][j]
                if q[i][j] % step:
                    raise ConstraintError(
                        f"entry q[{i}][{j}]={q[i][j]} not divisible by {step}"
                    )
                if (q[i][j] + q[j][i]) % d1:
                    raise ConstraintError(
                        f"entries q[{i}][{j}]={q[i][j]} and q[{j}][{i}]={q[j][i]} are not skew"
                    )
        object.__setattr__(self, "q", tuple(tuple(r) for r in q))

    @classmethod
    def from_upper(cls, group: FiniteAbelianGroup, upper: Sequence[int]) -> AlternatingForm:
        """Build from the strict upper triangle, read row by row."""
        n, d1 = group.rank, group.exponent
        q = [[0] * n for _ in range(n)]
        it = iter(upper)
        for i in range(n):
            for j in range(i + 1, n):
                v = next(it) % d1
                q[i][j] = v
                q[j][i] = -v % d1
        return cls(group, tuple(tuple(r) for r in q))

    @classmethod
    def zero(cls, group: FiniteAbelianGroup) -> AlternatingForm:
        return cls(group, tuple((0,) * group.rank for _ in range(group.rank)))

    @property
    def modulus(self) -> int:
        return self.group.exponent

    def as_array(self) -> np.ndarray:
        n = self.group.rank
        return np.array(self.q, dtype=np.int64).reshape(n, n)

    def __call__(self, k: GroupElement, l: GroupElement) -> int:
        return form_eval(self, k, l)

    def table(self) -> np.ndarray:
        """All values ``e(k, l)`` indexed by element enumeration order."""
        g = self.group
        if g.order > config.PAIR_TABLE_LIMIT:
            raise BoundExceededError(f"pair table for order {g.order} is too large")
        return backend.bilinear_table(g.coords, self.as_array(), self.modulus)

    def to_json(self) -> dict:
        return {"group": str(self.group), "q": [list(r) for r in self.q]}

    @classmethod
    def from_json(cls, doc) -> AlternatingForm:
        if isinstance(doc, str):
            try:
                doc = json.loads(doc)
            except json.JSONDecodeError as exc:
                raise ParseError(f"form document is not valid JSON: {exc}") from None
        if not isinstance(doc, dict) or "group" not in doc or "q" not in doc:
            raise ParseError("form document needs 'group' and 'q' fields")
        group = parse_group(doc["group"])
        q = doc["q"]
        if not isinstance(q, list) or not all(isinstance(r, list) for r in q):
            raise ParseError("'q' must be an array of arrays of integers")
        for i, row in enumerate(q):
            for j, v in enumerate(row):
                if not isinstance(v, int) or isinstance(v, bool):
                    raise ParseError(f"entry q[{i}][{j}]={v!r} is not an integer")
        try:
            return cls(group, tuple(tuple(r) for r in q))
        except ConstraintError as exc:
            raise ParseError(str(exc)) from None


def form_eval(e: AlternatingForm, k: GroupElement, l: GroupElement) -> int:
    if k.group != e.group or l.group != e.group:
        raise GroupMismatchError(f"elements must belong to {e.group}")
    n = e.group.rank
    return sum(k.coeffs[i] * l.coeffs[j] * e.q[i][j] for i in range(n) for j in range(n)) % e.modulus


def flat(e: AlternatingForm) -> HomMatrix:
    """Matrix ``h`` of ``l -> e(., l)`` with ``pairing(k, h(l)) == e(k, l)``.

    From ``(d1/d_i) h_ij = q_ij`` we get ``h_ij = q_ij / (d1/d_i)``.
    """
    g = e.group
    scales = g.pairing_scales()
    entries = tuple(
        tuple(e.q[i][j] // scales[i] for j in range(g.rank)) for i in range(g.rank)
    )
    return HomMatrix(g, g, entries)


def is_nondegenerate(e: AlternatingForm) -> bool:
    return is_automorphism(flat(e))


def transform(e: AlternatingForm, alpha: HomMatrix) -> AlternatingForm:
    """The form ``(k, l) -> e(alpha(k), alpha(l))``, via ``alpha^T Q alpha``."""
    g = e.group
    if alpha.source != g or alpha.target != g:
        raise GroupMismatchError("transform needs an endomorphism of the form's group")
    n, d1 = g.rank, g.exponent
    a, q = alpha.entries, e.q
    qa = [[sum(q[i][k] * a[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    new = tuple(
        tuple(sum(a[k][i] * qa[k][j] for k in range(n)) % d1 for j in range(n))
        for i in range(n)
    )
    out = AlternatingForm(g, new)
    # pointwise on generators: e(alpha x_i, alpha x_j), columns of alpha as elements
    images = np.ascontiguousarray(alpha.as_array().T % g.moduli) if n else np.zeros((0, 0), np.int64)
    if n and not np.array_equal(backend.bilinear_table(images, e.as_array(), d1), out.as_array()):
        raise InvariantError("matrix congruence disagrees with pointwise evaluation")
    return out


def _elementary(g: FiniteAbelianGroup, changes: dict[tuple[int, int], int]) -> HomMatrix:
    n = g.rank
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for (i, j), v in changes.items():
        rows[i][j] = v
    return HomMatrix(g, g, tuple(tuple(r) for r in rows))


def op_scale(e: AlternatingForm, i: int, sigma: int) -> tuple[AlternatingForm, HomMatrix]:
    """Multiply row and column ``i`` by a unit ``sigma`` mod ``d_i``."""
    g = e.group
    if gcd(sigma, g.factors[i]) != 1:
        raise ConstraintError(f"sigma={sigma} is not a unit modulo d_{i}={g.factors[i]}")
    alpha = _elementary(g, {(i, i): sigma})
    return transform(e, alpha), alpha


def op_swap(e: AlternatingForm, i: int, j: int) -> tuple[AlternatingForm, HomMatrix]:
    """Interchange rows and columns ``i`` and ``j`` (needs ``d_i == d_j``)."""
    g = e.group
    if g.factors[i] != g.factors[j]:
        raise ConstraintError(f"cannot swap factors of orders {g.factors[i]} and {g.factors[j]}")
    if i == j:
        return e, HomMatrix.identity(g)
    alpha = _elementary(g, {(i, i): 0, (j, j): 0, (i, j): 1, (j, i): 1})
    return transform(e, alpha), alpha


def op_shear(e: AlternatingForm, i: int, j: int, sigma: int) -> tuple[AlternatingForm, HomMatrix]:
    """Add ``sigma`` times row/column ``i`` to row/column ``j``; ``x_j -> x_j + sigma x_i``."""
    g = e.group
    if i == j:
        raise ConstraintError("shear needs distinct indices")
    di, dj = g.factors[i], g.factors[j]
    step = di // gcd(di, dj)
    if sigma % step:
        raise ConstraintError(f"sigma={sigma} not divisible by d_i/(d_i,d_j)={step}")
    alpha = _elementary(g, {(i, j): sigma})
    new = transform(e, alpha)
    # the row/column reading of the same move must agree
    n, d1 = g.rank, g.exponent
    q = [list(r) for r in e.q]
    for k in range(n):
        q[j][k] += sigma * q[i][k]
    for k in range(n):
        q[k][j] += sigma * q[k][i]
    assert tuple(tuple(x % d1 for x in r) for r in q) == new.q
    return new, alpha


def form_count(group: FiniteAbelianGroup) -> int:
    f = group.factors
    return prod(gcd(f[i], f[j]) for i in range(len(f)) for j in range(i + 1, len(f)))


def _upper_choices(group: FiniteAbelianGroup) -> list[range]:
    f, d1 = group.factors, group.exponent
    return [
        range(0, d1, d1 // gcd(f[i], f[j]))
        for i in range(len(f))
        for j in range(i + 1, len(f))
    ]


def form_at(group: FiniteAbelianGroup, index: int) -> AlternatingForm:
    """The ``index``-th form in :func:`enumerate_forms` order (unfiltered)."""
    choices = _upper_choices(group)
    upper = []
    for c in reversed(choices):
        index, r = divmod(index, len(c))
        upper.append(c[r])
    return AlternatingForm.from_upper(group, list(reversed(upper)))


def enumerate_forms(group: FiniteAbelianGroup, nondegenerate_only: bool = False) -> Iterator[AlternatingForm]:
    total = form_count(group)
    if total > config.max_order():
        raise BoundExceededError(f"{total} forms exceed the exhaustive bound")
    for upper in itertools.product(*_upper_choices(group)):
        e = AlternatingForm.from_upper(group, upper)
        if not nondegenerate_only or is_nondegenerate(e):
            yield e


def standard_form(base: FiniteAbelianGroup) -> AlternatingForm:
    """``e((x,chi),(x',chi')) = chi'(x) - chi(x')`` on ``A x A^`` (interleaved)."""
    k = base.direct_square()
    d1 = k.exponent
    n = k.rank
    q = [[0] * n for _ in range(n)]
    for b, d in enumerate(base.factors):
        q[2 * b][2 * b + 1] = d1 // d
        q[2 * b + 1][2 * b] = (d1 - d1 // d) % d1
    return AlternatingForm(k, tuple(tuple(r) for r in q))
