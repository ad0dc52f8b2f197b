import itertools
import random

import pytest

from scfo.boolfun import TruthTable, named_function
from scfo.encoding import (
    Arrangement, SegmentData, WordClassing, all_shift_vectors, build_ilp, input_words, instance_count,
    permute_classing, shift_slots,
)
from scfo.words import apply_insertion, cyclically_equal, gap_vector, rotate, word


def test_xor2_classing():
    c = input_words(named_function("xor2"))
    assert c.class0 == (word("0101"), word("1010"))
    assert c.class1 == (word("0110"), word("1001"))
    assert c.inputs0 == ((0, 0), (1, 1))
    assert c.sizes == (2, 2)


def test_constant_classing():
    c = input_words(TruthTable(1, (0, 0)))
    assert c.sizes == (2, 0)
    assert shift_slots(c) == [(0, 1)]


def test_eq3_class_sizes():
    c = input_words(named_function("eq3"))
    assert c.sizes == (6, 2)
    assert len(shift_slots(c)) == 6


def test_classing_validation():
    with pytest.raises(ValueError):
        WordClassing(1, (word("11"),), (word("01"),))
    with pytest.raises(ValueError):
        WordClassing(1, (word("01"),), (word("01"),))


def test_permute_identity_and_rotation():
    f = named_function("maj3")
    c = input_words(f)
    assert permute_classing(c, Arrangement.identity(6)) == c
    rot = Arrangement(tuple((p + 1) % 6 for p in range(6)))
    pc = permute_classing(c, rot)
    for w in c.class1:
        assert any(cyclically_equal(w, v) for v in pc.class1)
    with pytest.raises(ValueError):
        permute_classing(c, Arrangement.identity(4))


def test_known_arrangement_word():
    # x1 ~x2 x3 ~x1 x2 ~x3
    pi = Arrangement((0, 3, 4, 1, 2, 5))
    assert pi.apply(word("010101")) == word("010101")
    # x = (1, 0, 1)
    assert pi.apply(word("100110")) == word("111000")
    assert pi.one_based() == [1, 4, 5, 2, 3, 6]
    with pytest.raises(ValueError):
        Arrangement((0, 0, 1))


def test_instance_counts():
    assert instance_count(named_function("and2")) == 24 * 2 ** 2
    assert instance_count(named_function("eq3")) == 720 * 3 ** 6
    c = input_words(named_function("xor3"))
    assert sum(1 for _ in all_shift_vectors(c)) == 3 ** 6


def test_row_shape_n3():
    c = input_words(named_function("xor3"))
    inst = build_ilp(c, (0,) * 6)
    assert len(inst.A) == 6 * 3 and len(inst.A[0]) == 6
    assert inst.K0 == inst.K1 == 4
    with pytest.raises(ValueError):
        build_ilp(c, (0,) * 5)
    with pytest.raises(ValueError):
        build_ilp(c, (3,) + (0,) * 5)


def test_text_rendering():
    c = input_words(named_function("and2"))
    inst = build_ilp(c, (0, 0))
    text = inst.to_text()
    assert text.startswith("# I=4 J=2 K0=3 K1=1")
    assert len(text.splitlines()) == 1 + 2 * 2
    assert all(" = " in line for line in text.splitlines()[1:])


def test_no_equations_for_singleton_classes():
    c = WordClassing(1, (word("10"),), (word("01"),))
    inst = build_ilp(c, ())
    assert inst.A == () and inst.d == ()


def _faithful(c, shifts, y):
    """Brute force: does y make every class cyclically uniform with the prescribed shifts?"""
    for (b, k), s in zip(shift_slots(c), shifts):
        g1 = gap_vector(apply_insertion(c.cls(b)[0], y))
        gk = gap_vector(apply_insertion(c.cls(b)[k], y))
        J = len(g1)
        if any(g1[j] != gk[(j + s) % J] for j in range(J)):
            return False
    return True


@pytest.mark.parametrize("name", ["and2", "xor2", "maj3", "mux3", "eq3"])
def test_system_matches_gap_semantics(name):
    rng = random.Random(name)
    f = named_function(name)
    c0 = input_words(f)
    for _ in range(40):
        pi = Arrangement(tuple(rng.sample(range(2 * f.n), 2 * f.n)))
        c = permute_classing(c0, pi)
        shifts = tuple(rng.randrange(f.n) for _ in shift_slots(c))
        inst = build_ilp(c, shifts)
        for _ in range(25):
            y = tuple(rng.randint(0, 2) for _ in range(inst.I))
            lhs = [sum(a * v for a, v in zip(row, y)) for row in inst.A]
            assert (lhs == list(inst.d)) == _faithful(c, shifts, y)


def test_block_rows_cancel():
    c = input_words(named_function("eq3"))
    seg = SegmentData(c)
    for (b, k), s in itertools.product(shift_slots(c), range(3)):
        block = seg.block(b, k, s)
        assert [sum(col) for col in zip(*(r for r, _ in block))] == [0] * 6
        assert sum(d for _, d in block) == 0


def test_solutions_make_classes_rotations():
    c = input_words(named_function("xor2"))
    hits = 0
    for shifts in all_shift_vectors(c):
        inst = build_ilp(c, shifts)
        for y in itertools.product(range(3), repeat=inst.I):
            if any(sum(a * v for a, v in zip(r, y)) != d for r, d in zip(inst.A, inst.d)):
                continue
            hits += 1
            for b in (0, 1):
                head = apply_insertion(c.cls(b)[0], y)
                other = apply_insertion(c.cls(b)[1], y)
                assert any(rotate(head, r) == other for r in range(len(head)))
    assert hits > 0


def test_xor2_infeasible_row():
    c = input_words(named_function("xor2"))
    assert "+y1 +y3 = -2" in build_ilp(c, (0, 0)).to_text().splitlines()
