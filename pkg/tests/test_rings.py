"""Finite rings, idempotents, atoms and stalks."""

import itertools

import pytest

from ringfv.formula import parse_ring_formula
from ringfv.rings import (RingError, Stalk, atom_stalks, atoms, idempotents,
                          is_connected, modular_ring, product_ring, stalk,
                          table_ring)
from ringfv.semantics import eval_direct

GF4_ADD = [[a ^ b for b in range(4)] for a in range(4)]
_GF4 = {(0, 0): 0, (0, 1): 0, (0, 2): 0, (0, 3): 0, (1, 1): 1, (1, 2): 2,
        (1, 3): 3, (2, 2): 3, (2, 3): 1, (3, 3): 2}
GF4_MUL = [[_GF4[min(a, b), max(a, b)] for b in range(4)] for a in range(4)]


def z6_tables():
    add = [[(a + b) % 6 for b in range(6)] for a in range(6)]
    mul = [[a * b % 6 for b in range(6)] for a in range(6)]
    return add, mul


def check_ring_axioms(ring):
    """Exhaustive commutative-unital-ring law check, used as an oracle."""
    elems = list(ring.elements)
    assert ring.zero != ring.one
    for a in elems:
        assert ring.add(a, ring.zero) == a
        assert ring.mul(a, ring.one) == a
        assert ring.add(a, ring.sub(ring.zero, a)) == ring.zero
        assert ring.sub(a, a) == ring.zero
    for a, b in itertools.product(elems, repeat=2):
        assert ring.add(a, b) == ring.add(b, a)
        assert ring.mul(a, b) == ring.mul(b, a)
        assert ring.sub(a, b) == ring.add(a, ring.sub(ring.zero, b))
    for a, b, c in itertools.product(elems, repeat=3):
        assert ring.add(ring.add(a, b), c) == ring.add(a, ring.add(b, c))
        assert ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))
        assert ring.mul(a, ring.add(b, c)) == ring.add(ring.mul(a, b), ring.mul(a, c))


# --- constructors ---

def test_modular_ring_arithmetic(z6):
    assert z6.add(2, 5) == 1
    assert z6.mul(3, 4) == 0
    assert z6.size == 6


def test_modular_ring_z2_is_a_field():
    z2 = modular_ring(2)
    check_ring_axioms(z2)
    assert is_connected(z2)


def test_trivial_ring_rejected():
    with pytest.raises(RingError):
        modular_ring(1)
    with pytest.raises(RingError):
        modular_ring(0)


def test_product_ring_coordinatewise():
    p = product_ring([modular_ring(4), modular_ring(9)])
    assert p.size == 36
    assert p.add((3, 8), (1, 1)) == (0, 0)
    assert p.mul((2, 3), (2, 3)) == (0, 0)


def test_product_singleton():
    p = product_ring([modular_ring(2)])
    assert p.size == 2 and p.one == (1,)


def test_product_element_squares(z2xz3):
    assert z2xz3.mul((1, 0), (1, 0)) == (1, 0)


def test_product_rejects_empty():
    with pytest.raises(RingError):
        product_ring([])


def test_product_carrier_lazy_indexing():
    p = product_ring([modular_ring(4), modular_ring(9), modular_ring(25)])
    elems = p.elements
    assert len(elems) == 900
    assert elems[0] == (0, 0, 0)
    assert elems[899] == (3, 8, 24)
    assert elems[9 * 25] == (1, 0, 0)
    assert list(itertools.islice(iter(elems), 3)) == [(0, 0, 0), (0, 0, 1), (0, 0, 2)]
    with pytest.raises(IndexError):
        elems[900]


def test_table_ring_z2_accepted():
    t = table_ring([[0, 1], [1, 0]], [[0, 0], [0, 1]], 0, 1)
    check_ring_axioms(t)


def test_table_ring_gf4_accepted_and_connected():
    gf4 = table_ring(GF4_ADD, GF4_MUL, 0, 1, label="GF(4)")
    check_ring_axioms(gf4)
    assert is_connected(gf4)


def test_table_ring_rejects_noncommutative_mul():
    bad = [row[:] for row in GF4_MUL]
    bad[2][3] = 2
    with pytest.raises(RingError) as exc:
        table_ring(GF4_ADD, bad, 0, 1)
    assert "witness" in str(exc.value)


def test_table_ring_rejects_zero_equals_one():
    with pytest.raises(RingError):
        table_ring([[0]], [[0]], 0, 0)


# --- idempotents, atoms, stalks ---

def test_idempotents_z6(z6):
    assert idempotents(z6) == (0, 1, 3, 4)


def test_idempotents_z4(z4):
    assert idempotents(z4) == (0, 1)


def test_idempotents_z60(z60):
    assert len(idempotents(z60)) == 8


def test_atoms_examples(z6, z4, z60):
    assert atoms(z6) == (3, 4)
    assert set(atoms(z60)) == {45, 40, 36}
    assert atoms(z4) == (1,)


def test_stalk_z6_at_3(z6):
    s = stalk(z6, 3)
    assert tuple(s.elements) == (0, 3)
    assert s.one == 3 and s.mul(3, 3) == 3 and s.add(3, 3) == 0


def test_stalk_z6_at_4(z6):
    s = stalk(z6, 4)
    assert set(s.elements) == {0, 2, 4}
    assert s.one == 4 and s.mul(2, 4) == 2


def test_stalk_at_one_is_whole_ring(z6):
    assert stalk(z6, 1).size == 6


def test_stalk_rejects_bad_idempotent(z6):
    with pytest.raises(RingError):
        stalk(z6, 0)
    with pytest.raises(RingError):
        stalk(z6, 2)


def test_is_connected_examples(z4, z6):
    assert is_connected(z4)
    assert not is_connected(z6)
    assert not is_connected(product_ring([modular_ring(2), modular_ring(2)]))


# --- invariants ---

def test_stalks_satisfy_ring_axioms(suite_rings):
    for ring in suite_rings:
        for e in idempotents(ring):
            if e == ring.zero:
                continue
            s = stalk(ring, e)
            assert s.one == e
            if s.size <= 16:
                check_ring_axioms(s)


def test_atom_iff_connected_stalk(suite_rings):
    for ring in suite_rings:
        atom_set = set(atoms(ring))
        for e in idempotents(ring):
            if e == ring.zero:
                continue
            assert (e in atom_set) == is_connected(stalk(ring, e))


def test_stalk_kernel(suite_rings):
    # ex = 0 iff x lies in (1-e)R
    for ring in suite_rings[:6]:
        for e in idempotents(ring):
            if e == ring.zero:
                continue
            comp = ring.sub(ring.one, e)
            complement_ideal = {ring.mul(comp, x) for x in ring.elements}
            for x in ring.elements:
                assert (ring.mul(e, x) == ring.zero) == (x in complement_ideal)


def test_atom_stalks_aligned(z6):
    stalks = atom_stalks(z6)
    assert [s.unit for s in stalks] == list(atoms(z6))
    assert all(isinstance(s, Stalk) for s in stalks)


def test_stalk_agrees_with_quotient_presentation():
    """eR and the coset presentation of R/(1-e)R satisfy the same sentences."""
    add, mul = z6_tables()
    ring = table_ring(add, mul, 0, 1, label="Z/6 as tables")
    e = 3
    comp = ring.sub(ring.one, e)
    kernel = sorted({ring.mul(comp, x) for x in ring.elements})
    cosets = []
    for x in ring.elements:
        coset = frozenset(ring.add(x, k) for k in kernel)
        if coset not in cosets:
            cosets.append(coset)
    index = {x: cosets.index(c) for c in cosets for x in c}
    size = len(cosets)
    rep = [min(c) for c in cosets]
    q_add = [[index[ring.add(rep[i], rep[j])] for j in range(size)] for i in range(size)]
    q_mul = [[index[ring.mul(rep[i], rep[j])] for j in range(size)] for i in range(size)]
    quotient = table_ring(q_add, q_mul, index[0], index[1], label="Z/6 mod (1-3)")
    sentences = ["E x0. ~(x0 = 0)", "A x0. x0+x0 = 0", "A x0. x0*x0 = x0",
                 "E x0. x0*x0 = x0 & ~(x0 = 0) & ~(x0 = 1)"]
    s = stalk(ring, e)
    for text in sentences:
        f = parse_ring_formula(text)
        assert eval_direct(s, f) == eval_direct(quotient, f)
