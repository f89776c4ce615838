import warnings
from collections import Counter

import numpy as np
import pytest

from latticemap import linmap
from latticemap.fermion import (FermionSum, MajoranaFactor, Species, annihilate, create, generic, hubbard, number,
                                relabel, to_majorana)
from latticemap.pauli import PauliSum


def jw(f):
    return linmap.transform(linmap.jordan_wigner(f.n_modes), f)


def test_hubbard_single_site():
    f = hubbard(1, t_h=0, t_v=0, eps=0, U=0.7)
    assert len(f) == 1
    (t,) = f.terms
    assert t.coeff == 0.7
    assert t.factors == ((2, True), (2, False), (1, True), (1, False))


def test_hubbard_2x2_term_census():
    f = hubbard(2, t_h=1.0, t_v=1.0, eps=0.3, U=2.0)
    counts = Counter(t.tag for t in f.terms)
    assert counts == {"hop-h": 8, "hop-v": 8, "onsite": 8, "hubbard": 4}


def test_hubbard_jw_hermitian():
    assert jw(hubbard(2, t_h=1.0, t_v=0.5 + 0.2j, eps=0.1, U=3.0)).is_hermitian()


@pytest.mark.parametrize("L", [0, -1])
def test_hubbard_rejects_bad_size(L):
    with pytest.raises(ValueError):
        hubbard(L)


def test_hubbard_rejects_bad_shape():
    with pytest.raises(ValueError):
        hubbard(2, U=np.ones((3, 3)))


def test_generic_identity_is_number_operator():
    f = generic(np.eye(3))
    assert [t.factors for t in f.terms] == [((j, True), (j, False)) for j in (1, 2, 3)]


def test_generic_single_hopping_pair():
    h = np.zeros((2, 2), complex)
    h[0, 1], h[1, 0] = 0.5j, -0.5j
    assert len(generic(h)) == 2


def test_generic_random_hermitian_maps_hermitian(rng):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert jw(generic(a + a.conj().T)).is_hermitian()


def test_generic_non_hermitian():
    a = np.array([[0, 1], [0, 0]])
    with pytest.raises(ValueError):
        generic(a, strict=True)
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        generic(a)
    assert w


def test_to_majorana_creation():
    out = {m: c for c, m in to_majorana(create(1, 1))}
    assert out == {(MajoranaFactor(1, Species.M),): 0.5, (MajoranaFactor(1, Species.MBAR),): -0.5j}


def test_to_majorana_number_matches_jw():
    expand = to_majorana(number(1, 1))
    e = linmap.jordan_wigner(1)
    total = PauliSum(1)
    for c, mono in expand:
        s = PauliSum.identity(1, c)
        for m in mono:
            s = s * PauliSum.from_string(e.majorana_image(m))
        total = total + s
    assert total.equals(PauliSum.from_labels(1, {"": 0.5, "Z1": -0.5}))


def test_to_majorana_nilpotent():
    assert to_majorana(annihilate(1, 1) * annihilate(1, 1)) == []


def test_factor_order_preserved():
    f = FermionSum(3)
    f.add(1.0, [(3, False), (1, True)])
    assert f.terms[0].factors == ((3, False), (1, True))


def test_mode_range_checked():
    f = FermionSum(2)
    with pytest.raises(ValueError):
        f.add(1.0, [(3, True)])


def test_json_round_trip():
    f = hubbard(2, t_h=0.5 + 0.1j, eps=0.2)
    g = FermionSum.from_json(f.to_json())
    assert [(t.coeff, t.factors, t.tag) for t in g.terms] == [(t.coeff, t.factors, t.tag) for t in f.terms]


def test_relabel_preserves_spectrum():
    f = hubbard(1, eps=0.3, U=1.5)
    g = relabel(f, {1: 3, 2: 1}, 3)
    a = np.linalg.eigvalsh(jw(f).to_matrix())
    b = np.linalg.eigvalsh(jw(g).to_matrix())
    assert np.allclose(np.sort(np.concatenate([a, a])), b)
