"""Finite Heisenberg groups as central extensions ``mu_m x K`` with explicit cocycles.

The circle group is truncated to the ``m``-th roots of unity with
``m = d1(K)``; every cocycle built here takes values there. Cocycles are
bilinear, stored as a matrix ``B`` with ``c(k, l) = sum k_i B_ij l_j (mod m)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import lcm

import numpy as np

from . import config
from .errors import BoundExceededError, DegenerateFormError, GroupMismatchError, InvariantError
from .finab import (
    FiniteAbelianGroup,
    GroupElement,
    enumerate_homs,
    is_automorphism,
)
from .forms import AlternatingForm, is_nondegenerate, standard_form, transform
from .kernels import backend
from .reduction import canonical_invariants, symplectic_reduce, trace_inverse


@dataclass(frozen=True)
class HeisenbergElement:
    z: int
    k: GroupElement


@dataclass(frozen=True)
class HeisenbergGroup:
    phase: FiniteAbelianGroup
    center_order: int
    cocycle: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n, m = self.phase.rank, self.center_order
        b = [[int(x) % m for x in row] for row in self.cocycle]
        if len(b) != n or any(len(r) != n for r in b):
            raise InvariantError("cocycle matrix shape does not match the phase group")
        for i, di in enumerate(self.phase.factors):
            for j, dj in enumerate(self.phase.factors):
                if (di * b[i][j]) % m or (dj * b[i][j]) % m:
                    raise InvariantError(f"cocycle entry ({i},{j}) is not well defined on {self.phase}")
        object.__setattr__(self, "cocycle", tuple(tuple(r) for r in b))

    @property
    def order(self) -> int:
        return self.center_order * self.phase.order

    def c(self, k: GroupElement, l: GroupElement) -> int:
        b = self.cocycle
        lc = [(j, y) for j, y in enumerate(l.coeffs) if y]
        total = 0
        for i, x in enumerate(k.coeffs):
            if x:
                row = b[i]
                total += x * sum(row[j] * y for j, y in lc)
        return total % self.center_order

    def element(self, z: int, k: GroupElement | tuple) -> HeisenbergElement:
        if not isinstance(k, GroupElement):
            k = self.phase.element(k)
        if k.group != self.phase:
            raise GroupMismatchError(f"element of {k.group} in extension of {self.phase}")
        return HeisenbergElement(z % self.center_order, k)

    def identity(self) -> HeisenbergElement:
        return HeisenbergElement(0, self.phase.zero())

    def mul(self, g: HeisenbergElement, h: HeisenbergElement) -> HeisenbergElement:
        return self.element(g.z + h.z + self.c(g.k, h.k), g.k + h.k)

    def inv(self, g: HeisenbergElement) -> HeisenbergElement:
        return self.element(-g.z - self.c(g.k, -g.k), -g.k)

    def commutator(self, g: HeisenbergElement, h: HeisenbergElement) -> HeisenbergElement:
        return self.mul(self.mul(g, h), self.mul(self.inv(g), self.inv(h)))

    def elements(self):
        self.phase.check_bound(config.max_order() // max(1, self.center_order))
        for k in range(self.phase.order):
            kk = self.phase.from_index(k)
            for z in range(self.center_order):
                yield HeisenbergElement(z, kk)

    def cocycle_table(self) -> np.ndarray:
        if self.phase.order > config.PAIR_TABLE_LIMIT:
            raise BoundExceededError(f"cocycle table for order {self.phase.order} is too large")
        b = np.array(self.cocycle, dtype=np.int64).reshape(self.phase.rank, self.phase.rank)
        return backend.bilinear_table(self.phase.coords, b, self.center_order)

    def addition_table(self) -> np.ndarray:
        return backend.addition_table(self.phase.coords, self.phase.moduli)

    def cocycle_violation(self):
        """First triple breaking the 2-cocycle identity (exhaustive), or None."""
        if self.phase.order > config.TRIPLE_SCAN_LIMIT:
            raise BoundExceededError(f"triple scan for order {self.phase.order} is too large")
        return backend.cocycle_violation(self.cocycle_table(), self.addition_table(), self.center_order)

    def order_statistics(self) -> dict[int, int]:
        """Map element order -> number of elements."""
        orders = backend.extension_orders(self.cocycle_table(), self.addition_table(), self.center_order)
        return dict(sorted(Counter(orders.ravel().tolist()).items()))

    def exponent(self) -> int:
        return lcm(*self.order_statistics())

    def center(self) -> list[HeisenbergElement]:
        """Elements commuting with everything: ``mu_m`` times the radical of the commutator form."""
        c = self.cocycle_table()
        radical = np.flatnonzero(np.all((c - c.T) % self.center_order == 0, axis=1))
        return [
            HeisenbergElement(z, self.phase.from_index(int(k)))
            for k in radical
            for z in range(self.center_order)
        ]

    def summary(self) -> dict:
        stats = self.order_statistics()
        return {
            "phase": str(self.phase),
            "order": self.order,
            "center_order": len(self.center()),
            "exponent": lcm(*stats),
            "order_statistics": {str(k): v for k, v in stats.items()},
        }


def standard_heisenberg(base: FiniteAbelianGroup) -> HeisenbergGroup:
    """Extension of ``A x A^`` (interleaved) with ``c((x,chi),(y,xi)) = xi(x)``."""
    k = base.direct_square()
    m = base.exponent
    n = k.rank
    b = [[0] * n for _ in range(n)]
    for i, d in enumerate(base.factors):
        b[2 * i][2 * i + 1] = m // d
    return HeisenbergGroup(k, m, tuple(tuple(r) for r in b))


def from_form(e: AlternatingForm) -> HeisenbergGroup:
    """A Heisenberg group whose commutator form is exactly ``e``.

    Odd exponent: ``c(k, l) = 2 e(k/2, l/2)``, i.e. ``B = q / 2``.
    Even exponent: pull the standard cocycle back along ``phi^-1``.
    """
    if not is_nondegenerate(e):
        raise DegenerateFormError(f"form on {e.group} is degenerate")
    g = e.group
    m, n = g.exponent, g.rank
    if m % 2:
        half = pow(2, -1, m) if m > 1 else 0
        # 2 * e(half k, half l) = 2 * half^2 * e(k, l) = half * e(k, l)
        b = [[(2 * half * half * e.q[i][j]) % m for j in range(n)] for i in range(n)]
        return HeisenbergGroup(g, m, tuple(tuple(r) for r in b))
    d = symplectic_reduce(e)
    std = standard_heisenberg(d.base)
    p = trace_inverse(g, d.trace).entries
    s = std.cocycle
    b = [
        [sum(p[a][i] * s[a][c] * p[c][j] for a in range(n) for c in range(n)) % m for j in range(n)]
        for i in range(n)
    ]
    return HeisenbergGroup(g, m, tuple(tuple(r) for r in b))


def commutator_form(h: HeisenbergGroup) -> AlternatingForm:
    """Commutator form ``e(k, l) = c(k, l) - c(l, k)``, cross-checked by element arithmetic."""
    k = h.phase
    m, n = h.center_order, k.rank
    if m != k.exponent:
        raise InvariantError(f"center order {m} differs from phase exponent {k.exponent}")
    b = h.cocycle
    q = [[(b[i][j] - b[j][i]) % m for j in range(n)] for i in range(n)]
    lifts = [h.element(0, x) for x in k.generators()]
    for i, gi in enumerate(lifts):
        for j, gj in enumerate(lifts):
            comm = h.commutator(gi, gj)
            if not comm.k.is_zero() or comm.z != q[i][j]:
                raise InvariantError(f"commutator of generator lifts {i},{j} disagrees with the cocycle")
    try:
        return AlternatingForm(k, tuple(tuple(r) for r in q))
    except ValueError as exc:
        raise InvariantError(f"cocycle difference is not an alternating bicharacter: {exc}") from None


def extension_equivalent(g1: HeisenbergGroup, g2: HeisenbergGroup) -> bool:
    """Whether some isomorphism of phase groups carries one commutator form to the other."""
    if g1.phase != g2.phase or g1.center_order != g2.center_order:
        return False
    e1, e2 = commutator_form(g1), commutator_form(g2)
    nd1, nd2 = is_nondegenerate(e1), is_nondegenerate(e2)
    if nd1 != nd2:
        return False
    if nd1:
        # all non-degenerate forms on one group form a single orbit
        return canonical_invariants(e1) == canonical_invariants(e2)
    for alpha in enumerate_homs(g1.phase):
        if is_automorphism(alpha) and transform(e2, alpha) == e1:
            return True
    return False


@dataclass(frozen=True)
class WeylOperators:
    """Translations ``T_x f(y) = f(y - x)`` and modulations ``M_chi f(y) = chi(y) f(y)`` on functions on A."""

    group: FiniteAbelianGroup
    translations: np.ndarray  # (|A|, |A|, |A|); translations[x] is T_x
    modulations: np.ndarray  # (|A|, |A|); modulations[chi] is the diagonal of M_chi

    @property
    def dim(self) -> int:
        return self.group.order

    def translation(self, x: int) -> np.ndarray:
        return self.translations[x]

    def modulation(self, chi: int) -> np.ndarray:
        return np.diag(self.modulations[chi])


WEYL_MAX_DIM = 64


def weyl_operators(base: FiniteAbelianGroup, max_dim: int = WEYL_MAX_DIM) -> WeylOperators:
    if base.order > max_dim:
        raise BoundExceededError(f"|A|={base.order} exceeds the dense-matrix budget {max_dim}")
    n_el = base.order
    coords = base.coords
    add = backend.addition_table(coords, base.moduli)
    t = np.zeros((n_el, n_el, n_el), dtype=complex)
    for x in range(n_el):
        # T_x maps basis vector delta_y to delta_{y + x}
        t[x, add[x], np.arange(n_el)] = 1.0
    d1 = base.exponent
    scales = np.array(base.pairing_scales(), dtype=np.int64)
    pair = ((coords * scales) @ coords.T) % d1  # pair[y, chi]
    mod = np.exp(2j * np.pi * pair.T / d1)
    return WeylOperators(base, t, mod)


@dataclass
class WeylReport:
    max_deviation: float
    unitarity_ok: bool
    unitarity_deviation: float
    commutant_dimension: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures and self.unitarity_ok and self.commutant_dimension == 1

    def to_json(self) -> dict:
        return {
            "max_deviation": self.max_deviation,
            "unitarity_ok": self.unitarity_ok,
            "unitarity_deviation": self.unitarity_deviation,
            "commutant_dimension": self.commutant_dimension,
            "failures": self.failures,
        }


def commutant_dimension(ops: list[np.ndarray], rank_tol: float = 1e-8) -> int:
    """Dimension of ``{X : X P = P X for all P in ops}``."""
    dim = ops[0].shape[0] if ops else 1
    if not ops:
        return dim * dim
    eye = np.eye(dim)
    # column-major vec: vec(PX) = (I kron P) vec X, vec(XP) = (P^T kron I) vec X
    system = np.vstack([np.kron(eye, p) - np.kron(p.T, eye) for p in ops])
    sv = np.linalg.svd(system, compute_uv=False)
    return int(dim * dim - np.count_nonzero(sv > rank_tol))


def verify_weyl_relations(w: WeylOperators, tol: float = 1e-12, pair_limit: int = 8) -> WeylReport:
    """Check unitarity, scalar commutators and irreducibility.

    For ``U = T_x M_chi`` and ``V = T_x' M_chi'`` the group commutator
    ``U V U^-1 V^-1`` is the scalar ``chi(x') / chi'(x)``, which is
    ``exp(2 pi i t / d1)`` with ``t`` the standard form evaluated at
    ``((x', chi'), (x, chi))``.
    """
    a = w.group
    n_el = w.dim
    d1 = a.exponent
    eye = np.eye(n_el)
    ops = [w.translation(x) for x in range(n_el)] + [w.modulation(c) for c in range(n_el)]
    udev = max(float(np.abs(u @ u.conj().T - eye).max()) for u in ops)

    std = standard_form(a)
    k = std.group
    if n_el <= pair_limit:
        labels = list(range(k.order))
    else:
        labels = [k.index(g) for g in k.generators()]
    coords = k.coords[labels]
    tab = backend.bilinear_table(np.ascontiguousarray(coords), std.as_array(), d1)
    us = []
    for c in coords:
        x = a.index(tuple(int(v) for v in c[0::2]))
        chi = a.index(tuple(int(v) for v in c[1::2]))
        us.append(w.translations[x] * w.modulations[chi][None, :])
    us = np.array(us)
    inv = np.conj(np.transpose(us, (0, 2, 1)))
    max_dev = 0.0
    failures = []
    for i in range(len(us)):
        comm = np.einsum("ij,bjk,kl,blm->bim", us[i], us, inv[i], inv)
        expected = np.exp(2j * np.pi * tab[:, i] / d1)
        dev = np.abs(comm - expected[:, None, None] * eye).max(axis=(1, 2))
        max_dev = max(max_dev, float(dev.max()))
        for j in np.flatnonzero(dev > tol):
            if len(failures) < 20:
                failures.append({
                    "pair": [list(map(int, coords[i])), list(map(int, coords[j]))],
                    "deviation": float(dev[j]),
                })
    gens = [w.translation(a.index(g)) for g in a.generators()]
    gens += [w.modulation(a.index(g)) for g in a.generators()]
    cdim = commutant_dimension(gens)
    return WeylReport(max_dev, udev <= tol, udev, cdim, failures)
