"""Reduction of a non-degenerate alternating form to the standard symplectic shape.

The reduction works one hyperbolic pair at a time. In block ``b`` (rows
``p = 2b`` and ``p + 1``, local order ``D = d_p``) it

1. finds the first entry of row ``p`` right of the diagonal whose exponent,
   divided by ``d1 / D``, is a unit mod ``D``. When ``D`` is composite no
   single entry may qualify even though the row is primitive; shears
   ``x_{p+1} -> x_{p+1} + t x_k`` then fold the row into column ``p + 1``;
2. scales generator ``p`` so that entry becomes ``d1 / D``;
3. swaps its column into position ``p + 1``;
4. shears the remaining entries of rows ``p`` and ``p + 1`` to zero.

Every move is an automorphism of the group and is recorded in the trace.
Composing them gives ``phi`` with ``transform(e, phi) == standard_form(A)``,
so ``e(phi(u), phi(v))`` is the standard form on ``A x A^``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable

import numpy as np

from . import config
from .errors import DegenerateFormError, InvariantError, ParseError
from .exact_arith import mod_inverse, smith_normal_form
from .finab import (
    FiniteAbelianGroup,
    GroupElement,
    HomMatrix,
    hom_apply,
    hom_compose,
    is_automorphism,
    parse_group,
)
from .forms import AlternatingForm, flat, form_eval, is_nondegenerate, standard_form, transform
from .kernels import backend

KINDS = ("beta", "pi", "alpha")


@dataclass(frozen=True)
class TraceStep:
    """One elementary move: ``beta`` (scale i by sigma), ``pi`` (swap i, j),
    ``alpha`` (x_j -> x_j + sigma x_i). Indices are 0-based."""

    kind: str
    i: int
    j: int | None = None
    sigma: int | None = None

    def matrix(self, group: FiniteAbelianGroup) -> HomMatrix:
        n = group.rank
        rows = [[int(r == c) for c in range(n)] for r in range(n)]
        if self.kind == "beta":
            rows[self.i][self.i] = self.sigma
        elif self.kind == "pi":
            rows[self.i][self.i] = rows[self.j][self.j] = 0
            rows[self.i][self.j] = rows[self.j][self.i] = 1
        elif self.kind == "alpha":
            rows[self.i][self.j] = self.sigma
        else:
            raise ValueError(f"unknown move {self.kind!r}")
        return HomMatrix(group, group, tuple(tuple(r) for r in rows))

    def inverse(self, group: FiniteAbelianGroup) -> TraceStep:
        if self.kind == "beta":
            return TraceStep("beta", self.i, None, mod_inverse(self.sigma, group.factors[self.i]))
        if self.kind == "pi":
            return self
        return TraceStep("alpha", self.i, self.j, -self.sigma)

    def to_json(self) -> dict:
        return {"kind": self.kind, "i": self.i, "j": self.j, "sigma": self.sigma}

    @classmethod
    def from_json(cls, doc: dict) -> TraceStep:
        try:
            kind = doc["kind"]
            i = doc["i"]
        except (KeyError, TypeError):
            raise ParseError(f"trace record {doc!r} needs 'kind' and 'i'") from None
        if kind not in KINDS:
            raise ParseError(f"unknown trace kind {kind!r}")
        return cls(kind, int(i), doc.get("j"), doc.get("sigma"))


@dataclass(frozen=True)
class Decomposition:
    """``phi: A x A^ -> K`` (interleaved basis a1, a1^, a2, a2^, ...) and the moves producing it."""

    base: FiniteAbelianGroup
    phi: HomMatrix
    trace: tuple[TraceStep, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "base": str(self.base),
            "phi": [list(r) for r in self.phi.entries],
            "trace": [s.to_json() for s in self.trace],
        }

    @classmethod
    def from_json(cls, doc) -> Decomposition:
        if isinstance(doc, str):
            try:
                doc = json.loads(doc)
            except json.JSONDecodeError as exc:
                raise ParseError(f"decomposition is not valid JSON: {exc}") from None
        if not isinstance(doc, dict) or "base" not in doc or "phi" not in doc:
            raise ParseError("decomposition needs 'base' and 'phi' fields")
        base = parse_group(doc["base"])
        k = base.direct_square()
        try:
            phi = HomMatrix(k, k, tuple(tuple(r) for r in doc["phi"]))
        except (ValueError, TypeError) as exc:
            raise ParseError(f"bad phi matrix: {exc}") from None
        trace = tuple(TraceStep.from_json(s) for s in doc.get("trace", []))
        return cls(base, phi, trace)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""
    counterexample: tuple | None = None

    def __bool__(self):
        return self.ok


def exists_nondegenerate(group: FiniteAbelianGroup) -> bool:
    """True iff the invariant factors pair up: d1 = d2, d3 = d4, ..."""
    f = group.factors
    return len(f) % 2 == 0 and all(f[i] == f[i + 1] for i in range(0, len(f), 2))


def kernel_witness(h: HomMatrix) -> GroupElement | None:
    """A nonzero element of ker(h), or None if h is injective."""
    g = h.source
    if g.order <= config.max_order():
        idx = h.image_indices()
        zero_hits = np.flatnonzero(idx == 0)
        nonzero = zero_hits[zero_hits != 0]
        if len(nonzero):
            return g.from_index(int(nonzero[0]))
        return None
    # integer nullspace of [H | diag(d)] projected onto the first block
    n = g.rank
    block = [list(h.entries[i]) + [h.target.factors[i] if i == j else 0 for j in range(n)]
             for i in range(n)]
    _, d, v = smith_normal_form(block)
    rank = sum(1 for i in range(n) if d[i][i] != 0)
    for col in range(rank, 2 * n):
        x = g.element([v[r][col] for r in range(n)])
        if not x.is_zero():
            return x
    return None


def _apply_step(q, cols, step: TraceStep, d1: int) -> None:
    """Apply a move to the exponent matrix and right-compose it onto ``cols``."""
    n = len(q)
    i, j, s = step.i, step.j, step.sigma
    if step.kind == "beta":
        for k in range(n):
            q[i][k] = q[i][k] * s % d1
            q[k][i] = q[k][i] * s % d1
        for r in cols:
            r[i] *= s
    elif step.kind == "pi":
        q[i], q[j] = q[j], q[i]
        for r in q:
            r[i], r[j] = r[j], r[i]
        for r in cols:
            r[i], r[j] = r[j], r[i]
    else:
        for k in range(n):
            q[j][k] = (q[j][k] + s * q[i][k]) % d1
        for k in range(n):
            q[k][j] = (q[k][j] + s * q[k][i]) % d1
        for r in cols:
            r[j] += s * r[i]


def _find_pivot(q, p: int, s: int, big: int):
    """First column j > p with q[p][j] = s * u, u a unit mod ``big``."""
    for j in range(p + 1, len(q)):
        if q[p][j] % s:
            raise InvariantError(f"q[{p}][{j}] is not a multiple of {s}")
        u = q[p][j] // s
        if gcd(u, big) == 1:
            return j, u
    return None


def _combine(a: int, b: int, mod: int) -> int:
    """Smallest t >= 0 with gcd(a + t b, mod) == gcd(a, b, mod)."""
    goal = gcd(gcd(a, b), mod)
    return next(t for t in range(mod) if gcd(a + t * b, mod) == goal)


def symplectic_reduce(e: AlternatingForm) -> Decomposition:
    """Find ``A`` and ``phi`` with ``e(phi(x,chi), phi(x',chi')) = chi'(x) - chi(x')``."""
    g = e.group
    if not is_nondegenerate(e):
        w = kernel_witness(flat(e))
        raise DegenerateFormError(f"form on {g} is degenerate; kernel contains {w.coeffs if w else '?'}", w)
    f, n, d1 = g.factors, g.rank, g.exponent
    if n % 2:
        raise InvariantError("non-degenerate form on a group of odd rank")
    q = [list(r) for r in e.q]
    cols = [[int(r == c) for c in range(n)] for r in range(n)]
    trace: list[TraceStep] = []

    def move(step):
        trace.append(step)
        _apply_step(q, cols, step, d1)

    for p in range(0, n, 2):
        big = f[p]
        s = d1 // big
        pivot = _find_pivot(q, p, s, big)
        if pivot is None:
            # no single unit entry (possible when d1 is composite): fold the
            # other columns into column p+1 until its entry is a unit
            if f[p + 1] != big:
                raise InvariantError(f"factor {p + 1} has order {f[p + 1]} != {big}")
            a = q[p][p + 1] // s
            for k in range(p + 2, n):
                if gcd(a, big) == 1:
                    break
                sigma = _combine(a, q[p][k] // s, big)
                if sigma:
                    move(TraceStep("alpha", k, p + 1, sigma))
                    a = q[p][p + 1] // s
            pivot = _find_pivot(q, p, s, big)
        if pivot is None:
            raise InvariantError(f"row {p} has no unit combination; form cannot be non-degenerate")
        j, u = pivot
        if f[j] != big:
            raise InvariantError(f"pivot column {j} has order {f[j]} != {big}")
        if u != 1:
            move(TraceStep("beta", p, None, mod_inverse(u, big)))
        if j != p + 1:
            move(TraceStep("pi", p + 1, j))
        for k in range(p + 2, n):
            sigma = -(q[p][k] // s) % big
            if sigma:
                move(TraceStep("alpha", p + 1, k, sigma))
            sigma = (q[p + 1][k] // s) % big
            if sigma:
                move(TraceStep("alpha", p, k, sigma))
        if q[p][p + 1] != s or f[p + 1] != big:
            raise InvariantError(f"block {p // 2} did not reduce to a hyperbolic pair")
        for k in range(p + 2, n):
            if q[p][k] or q[p + 1][k] or q[k][p] or q[k][p + 1]:
                raise InvariantError(f"block {p // 2} is not orthogonal to column {k}")
        if p + 2 < n and big % f[p + 2]:
            raise InvariantError("residual factors break the divisibility chain")

    base = FiniteAbelianGroup(f[0::2])
    phi = HomMatrix(g, g, tuple(tuple(r) for r in cols))
    if transform(e, phi) != standard_form(base):
        raise InvariantError("composite automorphism does not reach the standard form")
    return Decomposition(base, phi, tuple(trace))


def canonical_invariants(e: AlternatingForm) -> tuple[int, ...]:
    return symplectic_reduce(e).base.factors


def trace_automorphism(group: FiniteAbelianGroup, trace: Iterable[TraceStep]) -> HomMatrix:
    """Composite ``alpha_1 o alpha_2 o ... o alpha_r`` of the moves (column operations)."""
    n = group.rank
    m = [[int(r == c) for c in range(n)] for r in range(n)]
    for step in trace:
        i, j, s = step.i, step.j, step.sigma
        for row in m:
            if step.kind == "beta":
                row[i] *= s
            elif step.kind == "pi":
                row[i], row[j] = row[j], row[i]
            else:
                row[j] += s * row[i]
    return HomMatrix(group, group, tuple(tuple(r) for r in m))


def trace_inverse(group: FiniteAbelianGroup, trace: Iterable[TraceStep]) -> HomMatrix:
    """Inverse of :func:`trace_automorphism`, ``alpha_r^-1 o ... o alpha_1^-1`` (row operations)."""
    n = group.rank
    m = [[int(r == c) for c in range(n)] for r in range(n)]
    for step in trace:
        i, j = step.i, step.j
        if step.kind == "beta":
            inv = mod_inverse(step.sigma, group.factors[i])
            m[i] = [x * inv for x in m[i]]
        elif step.kind == "pi":
            m[i], m[j] = m[j], m[i]
        else:
            # (I - sigma E_ij) @ m
            m[i] = [x - step.sigma * y for x, y in zip(m[i], m[j])]
    return HomMatrix(group, group, tuple(tuple(r) for r in m))


def replay_trace(base: FiniteAbelianGroup, trace: Iterable[TraceStep]) -> AlternatingForm:
    """Undo the moves starting from the standard form; recovers the reduced input."""
    e = standard_form(base)
    k = e.group
    for step in reversed(list(trace)):
        e = transform(e, step.inverse(k).matrix(k))
    return e


def orbit_automorphism(
    e1: AlternatingForm, e2: AlternatingForm, d1: Decomposition | None = None
) -> HomMatrix:
    """Automorphism ``alpha`` with ``transform(e1, alpha) == e2``, built from both traces.

    ``d1`` may pass a precomputed reduction of ``e1``.
    """
    d1 = symplectic_reduce(e1) if d1 is None else d1
    d2 = symplectic_reduce(e2)
    if d1.base != d2.base:
        raise InvariantError("forms on one group reduced to different bases")
    return hom_compose(d1.phi, trace_inverse(e2.group, d2.trace))


@lru_cache(maxsize=64)
def _standard_rhs_full(base: FiniteAbelianGroup) -> np.ndarray:
    return _standard_rhs_table(base, base.direct_square().coords)


def _standard_rhs_table(base: FiniteAbelianGroup, coords: np.ndarray) -> np.ndarray:
    """``chi'(x) - chi(x')`` for every pair of interleaved elements (x, chi)."""
    d1 = base.exponent
    scales = np.array([d1 // d for d in base.factors], dtype=np.int64)
    x, chi = coords[:, 0::2], coords[:, 1::2]
    m = ((x * scales) % d1) @ chi.T  # m[a, b] = chi_b(x_a)
    return (m - m.T) % d1


def _split(k: FiniteAbelianGroup, idx: int) -> tuple:
    c = k.from_index(idx).coeffs
    return (c[0::2], c[1::2])


def verify_decomposition(e: AlternatingForm, d: Decomposition, exhaustive: bool | None = None) -> Verdict:
    """Check ``phi`` is bijective and carries ``e`` to the standard pairing form.

    Checks every pair of elements when the group is small enough, otherwise
    generator pairs (both sides are biadditive). A failing identity is
    reported with a counterexample ``(x, chi, x', chi')``.
    """
    k = e.group
    if d.base.direct_square() != k or d.phi.source != k or d.phi.target != k:
        return Verdict(False, f"base {d.base} does not square to {k}")
    if exhaustive is None:
        exhaustive = k.order <= config.VERIFY_PAIRS_LIMIT
    if exhaustive:
        rhs = _standard_rhs_full(d.base)
        bad = backend.first_mismatch(e.table(), d.phi.image_indices(), rhs)
        if bad is not None:
            u, v = bad
            (x, chi), (x2, chi2) = _split(k, u), _split(k, v)
            return Verdict(False, "identity fails", (x, chi, x2, chi2))
    else:
        gens = np.eye(k.rank, dtype=np.int64)
        rhs = _standard_rhs_table(d.base, gens)
        images = np.ascontiguousarray(d.phi.as_array().T % k.moduli)
        got = backend.bilinear_table(images, e.as_array(), e.modulus)
        bad = np.argwhere(got != rhs)
        if len(bad):
            a, b = (tuple(int(v) for v in gens[i]) for i in bad[0])
            return Verdict(False, "identity fails on generators", (a[0::2], a[1::2], b[0::2], b[1::2]))
    if not is_automorphism(d.phi):
        return Verdict(False, "phi is not bijective")
    return Verdict(True)
