import itertools
import json
import random

import numpy as np
import pytest

from heisen.classify import enumerate_abelian_groups
from heisen.errors import ConstraintError, GroupMismatchError, ParseError
from heisen.finab import (
    FiniteAbelianGroup,
    HomMatrix,
    enumerate_elements,
    enumerate_homs,
    hom_apply,
    hom_compose,
    hom_steps,
    hom_transpose,
    is_automorphism,
    pairing,
)
from heisen.forms import (
    AlternatingForm,
    enumerate_forms,
    flat,
    form_at,
    form_count,
    form_eval,
    is_nondegenerate,
    op_scale,
    op_shear,
    op_swap,
    standard_form,
    transform,
)

G22 = FiniteAbelianGroup((2, 2))
G33 = FiniteAbelianGroup((3, 3))
G42 = FiniteAbelianGroup((4, 2))
TRIVIAL = FiniteAbelianGroup(())
SWAP22 = AlternatingForm(G22, ((0, 1), (1, 0)))


def groups_upto(n):
    return [g for k in range(1, n + 1) for g in enumerate_abelian_groups(k)]


def random_homs(g, count, seed=0):
    rng = random.Random(seed)
    steps = hom_steps(g, g)
    return [
        HomMatrix(g, g, tuple(
            tuple(rng.randrange(0, di, st) for st in row) for di, row in zip(g.factors, steps)
        ))
        for _ in range(count)
    ]


def sample_forms(g, count, seed=0):
    total = form_count(g)
    if total <= count:
        return list(enumerate_forms(g))
    rng = random.Random(seed)
    return [form_at(g, rng.randrange(total)) for _ in range(count)]


def test_form_eval_examples():
    x1, x2 = G22.generators()
    assert form_eval(SWAP22, x1, x2) == 1
    e = AlternatingForm(G42, ((0, 2), (2, 0)))
    assert form_eval(e, G42.element((1, 0)), G42.element((0, 1))) == 2


def test_form_eval_mismatch():
    with pytest.raises(GroupMismatchError):
        form_eval(SWAP22, G42.zero(), G42.zero())


@pytest.mark.parametrize("g", [g for g in groups_upto(256) if g.rank >= 2][::3])
def test_skew_and_alternating_exhaustive(g):
    for e in sample_forms(g, 6):
        t = e.table()
        assert np.all(np.diag(t) == 0)
        assert np.all((t + t.T) % e.modulus == 0)


def test_form_eval_matches_table():
    g = FiniteAbelianGroup((6, 6, 2))
    e = sample_forms(g, 3, seed=4)[-1]
    t = e.table()
    els = list(enumerate_elements(g))
    for a, k in enumerate(els[::7]):
        for l in els[::5]:
            assert t[g.index(k), g.index(l)] == form_eval(e, k, l)


@pytest.mark.parametrize(
    "q, err",
    [
        (((0, 1), (1, 0)), "divisible"),  # q12 must be a multiple of 2 on (4, 2)
        (((1, 0), (0, 0)), "diagonal"),
        (((0, 2), (0, 0)), "skew"),
    ],
)
def test_form_constraints(q, err):
    with pytest.raises(ConstraintError, match=err):
        AlternatingForm(G42, q)


def test_flat_examples():
    assert flat(AlternatingForm.zero(G42)) == HomMatrix.zero(G42)
    assert flat(SWAP22).entries == ((0, 1), (1, 0))


@pytest.mark.parametrize("e", [SWAP22, AlternatingForm(G42, ((0, 2), (2, 0)))] + sample_forms(FiniteAbelianGroup((6, 6, 2, 2)), 5))
def test_flat_defining_equation(e):
    g = e.group
    h = flat(e)
    for k in enumerate_elements(g):
        for l in enumerate_elements(g):
            assert pairing(k, hom_apply(h, l)) == form_eval(e, k, l)


def test_is_nondegenerate_examples():
    assert not is_nondegenerate(AlternatingForm.zero(G42))
    assert is_nondegenerate(SWAP22)
    assert not any(is_nondegenerate(e) for e in enumerate_forms(G42))
    assert [e.q[0][1] for e in enumerate_forms(G42)] == [0, 2]
    assert is_nondegenerate(AlternatingForm.zero(TRIVIAL))


def test_nondegenerate_matches_radical_scan():
    for g in [G22, G33, FiniteAbelianGroup((2, 2, 2, 2)), FiniteAbelianGroup((6, 6, 2)), FiniteAbelianGroup((4, 4, 2, 2))]:
        for e in sample_forms(g, 40):
            t = e.table()
            radical = [l for l in range(g.order) if not t[:, l].any()]
            assert is_nondegenerate(e) == (radical == [0])


def test_transform_examples():
    assert transform(SWAP22, HomMatrix.identity(G22)) == SWAP22
    swap = HomMatrix(G22, G22, ((0, 1), (1, 0)))
    assert transform(SWAP22, swap) == SWAP22
    e = AlternatingForm(G33, ((0, 1), (2, 0)))
    alpha = HomMatrix(G33, G33, ((2, 0), (0, 1)))
    assert transform(e, alpha).q == ((0, 2), (1, 0))


def test_transform_pointwise_and_functorial():
    rng = random.Random(7)
    for g in [G33, G42, FiniteAbelianGroup((4, 4, 2)), FiniteAbelianGroup((6, 6, 2, 2))]:
        homs = random_homs(g, 30)
        for e in sample_forms(g, 4):
            for _ in range(6):
                a, b = rng.choice(homs), rng.choice(homs)
                ea = transform(e, a)
                for k in g.generators() + [g.from_index(g.order - 1)]:
                    for l in g.generators():
                        assert form_eval(ea, k, l) == form_eval(e, hom_apply(a, k), hom_apply(a, l))
                assert transform(ea, b) == transform(e, hom_compose(a, b))


@pytest.mark.parametrize("g", [G22, G33, G42, FiniteAbelianGroup((4, 4)), FiniteAbelianGroup((6, 6, 2, 2)), FiniteAbelianGroup((2, 2, 2, 2))])
def test_flat_of_transform_is_conjugate(g):
    """(e^alpha)^flat = alpha^* e^flat alpha, as matrices."""
    homs = list(enumerate_homs(g)) if g.order <= 16 and g.rank <= 2 else random_homs(g, 300)
    for e in sample_forms(g, 5):
        for a in homs:
            lhs = flat(transform(e, a))
            rhs = hom_compose(hom_transpose(a), hom_compose(flat(e), a))
            assert lhs == rhs


def test_nondegeneracy_invariant_under_automorphisms():
    g = FiniteAbelianGroup((4, 4, 2))
    autos = [a for a in itertools.islice(enumerate_homs(g), 0, None, 11) if is_automorphism(a)]
    for e in sample_forms(g, 8):
        for a in autos[:20]:
            assert is_nondegenerate(transform(e, a)) == is_nondegenerate(e)


def test_op_scale():
    e = AlternatingForm(G33, ((0, 1), (2, 0)))
    assert op_scale(e, 0, 1)[0] == e
    new, alpha = op_scale(e, 0, 2)
    assert new.q == ((0, 2), (1, 0))
    assert alpha.entries == ((2, 0), (0, 1))
    with pytest.raises(ConstraintError):
        op_scale(SWAP22, 0, 2)


def test_op_swap():
    assert op_swap(SWAP22, 0, 0) == (SWAP22, HomMatrix.identity(G22))
    assert op_swap(SWAP22, 0, 1)[0] == SWAP22
    with pytest.raises(ConstraintError):
        op_swap(AlternatingForm.zero(G42), 0, 1)


def test_op_shear():
    assert op_shear(SWAP22, 0, 1, 0)[0] == SWAP22
    new, alpha = op_shear(SWAP22, 0, 1, 1)
    assert new == SWAP22
    x1, x2 = G22.generators()
    assert hom_apply(alpha, x2) == x2 + x1
    with pytest.raises(ConstraintError):
        op_shear(AlternatingForm.zero(G42), 0, 1, 1)


def test_elementary_ops_are_automorphisms():
    g = FiniteAbelianGroup((6, 6, 2, 2))
    for e in sample_forms(g, 10, seed=2):
        for i in range(g.rank):
            for sigma in (1, 5, 7):
                if sigma % g.factors[i] and np.gcd(sigma, g.factors[i]) == 1:
                    new, a = op_scale(e, i, sigma)
                    assert is_automorphism(a) and new == transform(e, a)
        for i, j in itertools.permutations(range(g.rank), 2):
            if g.factors[i] == g.factors[j]:
                new, a = op_swap(e, i, j)
                assert is_automorphism(a) and new == transform(e, a)
            step = g.factors[i] // np.gcd(g.factors[i], g.factors[j])
            for sigma in (step, 2 * step, 5 * step):
                new, a = op_shear(e, i, j, sigma)
                assert is_automorphism(a) and new == transform(e, a)


@pytest.mark.parametrize(
    "g, total, nondeg",
    [(TRIVIAL, 1, 1), (G22, 2, 1), (G33, 3, 2), (G42, 2, 0), (FiniteAbelianGroup((2, 2, 2, 2)), 64, 28)],
)
def test_enumerate_forms_counts(g, total, nondeg):
    assert len(list(enumerate_forms(g))) == total == form_count(g)
    assert len(list(enumerate_forms(g, nondegenerate_only=True))) == nondeg


def test_nondegenerate_count_elementary_oracle():
    # alternating non-singular 4x4 matrices over F_2: 2^6 total, brute-force determinant mod 2
    g = FiniteAbelianGroup((2, 2, 2, 2))
    count = 0
    for upper in itertools.product(range(2), repeat=6):
        m = np.zeros((4, 4), dtype=int)
        m[np.triu_indices(4, 1)] = upper
        m = m + m.T
        count += round(np.linalg.det(m)) % 2
    assert count == len(list(enumerate_forms(g, True)))


def test_form_at_matches_enumeration():
    g = FiniteAbelianGroup((6, 6, 2))
    assert [form_at(g, i) for i in range(form_count(g))] == list(enumerate_forms(g))


def test_standard_form_shape():
    e = standard_form(FiniteAbelianGroup((4, 2)))
    assert e.group.factors == (4, 4, 2, 2)
    assert e.q == ((0, 1, 0, 0), (3, 0, 0, 0), (0, 0, 0, 2), (0, 0, 2, 0))
    assert is_nondegenerate(e)


def test_form_json_round_trip():
    e = standard_form(FiniteAbelianGroup((6, 2)))
    assert AlternatingForm.from_json(json.dumps(e.to_json())) == e


@pytest.mark.parametrize(
    "doc, needle",
    [
        ('{"group": "Z/4 x Z/2", "q": [[0, 1], [3, 0]]}', "q[0][1]"),
        ('{"group": "Z/3 x Z/3", "q": [[0, 1], [1, 0]]}', "q[0][1]"),
        ('{"group": "Z/3 x Z/3", "q": [[0, 1], [2, "a"]]}', "q[1][1]"),
        ('{"group": "Z/3", "q": [[1]]}', "q[0][0]"),
        ('{"q": []}', "group"),
        ("not json", "JSON"),
    ],
)
def test_form_loader_diagnostics(doc, needle):
    with pytest.raises(ParseError, match=needle.replace("[", r"\[").replace("]", r"\]")):
        AlternatingForm.from_json(doc)
