from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdcoh.errors import AlgebraAxiomError, MalformedInput, NotEquivariant, NotEquivariantInput, NotWellDefined
from bdcoh.group import FiniteGroup
from bdcoh.modules import (
    AdditiveMap,
    Carrier,
    GAlgebra,
    GModule,
    Subgroup,
    SubgroupMap,
    equivariant_extension_exists,
    image,
    is_ideal,
    kernel,
    restrict,
)


def test_carrier_rejects_small_moduli():
    with pytest.raises(MalformedInput):
        Carrier((1,))


def test_map_well_definedness():
    with pytest.raises(NotWellDefined):
        AdditiveMap(Carrier((3,)), Carrier((9,)), [[1]])
    AdditiveMap(Carrier((3,)), Carrier((9,)), [[3]])


def test_kernel_of_reduction_mod_3():
    k = kernel(AdditiveMap(Carrier((9,)), Carrier((3,)), [[1]]))
    assert k.order == 3
    assert {tuple(e) for e in k.elements().tolist()} == {(0,), (3,), (6,)}


def test_kernel_of_zero_map_is_everything():
    k = kernel(AdditiveMap.zero(Carrier((3,)), Carrier((3,))))
    assert k.order == 3


def test_kernel_in_mixed_carrier():
    f = AdditiveMap(Carrier((2, 4)), Carrier((2,)), [[1, 1]])
    k = kernel(f)
    brute = [v for v in product(range(2), range(4)) if (v[0] + v[1]) % 2 == 0]
    assert k.order == len(brute) == 4
    for v in brute:
        assert k.contains(np.array(v))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 11), min_size=4, max_size=4))
def test_kernel_composed_with_map_is_zero(entries):
    src, tgt = Carrier((4, 6)), Carrier((12, 2))
    m = np.array(entries).reshape(2, 2)
    m[0] = (m[0] * np.array([3, 2])) % 12  # respect orders 4 and 6 into Z/12
    m[1] = m[1] % 2
    f = AdditiveMap(src, tgt, m)
    k = kernel(f)
    assert not f(k.elements()).any()
    assert k.order * image(f).order == src.order


def test_gmodule_action_inverse_property():
    G = FiniteGroup.cyclic(4)
    mats = [np.array([[1, 0], [2 * k % 4, 1]]) for k in range(4)]
    M = GModule(Carrier((2, 4)), G, np.array(mats))
    mods = M.carrier.mod_array[:, None]
    for g in range(4):
        prod = (M.action[g] @ M.action[G.inverse[g]]) % mods
        assert np.array_equal(prod, np.eye(2, dtype=np.int64) % mods)


def test_gmodule_rejects_non_homomorphic_action():
    G = FiniteGroup.cyclic(3)
    with pytest.raises(NotEquivariant):
        GModule(Carrier((3,)), G, np.array([[[1]], [[2]], [[2]]]))


def test_algebra_axioms_detected():
    G = FiniteGroup.trivial()
    with pytest.raises(AlgebraAxiomError):
        GAlgebra(Carrier((3,)), G, np.ones((1, 1, 1)), mult=[[[1]]], unit=[2])


def _field_product_f2():
    # F2 x F2 with componentwise product, unit (1,1)
    mult = np.zeros((2, 2, 2), dtype=np.int64)
    mult[0, 0] = [1, 0]
    mult[1, 1] = [0, 1]
    return GAlgebra(Carrier((2, 2)), FiniteGroup.trivial(), np.eye(2)[None], mult=mult, unit=[1, 1])


def _upper_triangular_f2():
    # basis e11, e12, e22 of upper triangular 2x2 matrices over F2
    mult = np.zeros((3, 3, 3), dtype=np.int64)
    mult[0, 0] = [1, 0, 0]
    mult[0, 1] = [0, 1, 0]
    mult[1, 2] = [0, 1, 0]
    mult[2, 2] = [0, 0, 1]
    return GAlgebra(Carrier((2, 2, 2)), FiniteGroup.trivial(), np.eye(3)[None], mult=mult, unit=[1, 0, 1])


def test_ideal_examples():
    z9 = GAlgebra.trivial_ring(FiniteGroup.trivial(), 9)
    ok, _ = is_ideal(Subgroup(z9.carrier, [[3]]), z9)
    assert ok
    f2f2 = _field_product_f2()
    ok, _ = is_ideal(Subgroup(f2f2.carrier, [[1, 0]]), f2f2)
    assert ok


def test_non_ideal_has_genuine_witness():
    alg = _upper_triangular_f2()
    sub = Subgroup(alg.carrier, [[1, 0, 0]])
    ok, witness = is_ideal(sub, alg)
    assert not ok
    side, k, b = witness
    prod = alg.multiply(b, k) if side == "left" else alg.multiply(k, b)
    assert not sub.contains(prod)


def test_ideal_check_agrees_with_enumeration():
    alg = _upper_triangular_f2()
    elems = alg.carrier.elements()
    for gens in ([[0, 1, 0]], [[1, 0, 0]], [[0, 0, 1]], [[0, 1, 0], [0, 0, 1]]):
        sub = Subgroup(alg.carrier, gens)
        brute = all(
            sub.contains(alg.multiply(a, k)) and sub.contains(alg.multiply(k, a))
            for a in elems
            for k in sub.elements()
        )
        assert is_ideal(sub, alg)[0] == brute


def test_restrictions():
    B = Carrier((9,))
    K = kernel(AdditiveMap(B, Carrier((3,)), [[1]]))
    ident = restrict(AdditiveMap.identity(B), K)
    assert all(np.array_equal(ident(k), k) for k in K.elements())
    pi_on_k = restrict(AdditiveMap(B, Carrier((3,)), [[1]]), K)
    assert pi_on_k.is_zero()
    r = SubgroupMap.from_function(K, Carrier((3,)), lambda b: np.asarray(b) // 3)
    for k in K.elements():
        assert int(r(k)[0]) == int(k[0]) // 3


def test_subgroup_map_rejects_inconsistent_images():
    B = Carrier((9,))
    K = Subgroup(B, [[3]])
    with pytest.raises(NotWellDefined):
        SubgroupMap(K, Carrier((9,)), [[1]])  # 3 has order 3 but 1 has order 9


def _z9_setup():
    G = FiniteGroup.cyclic(3)
    B = GModule.trivial(G, Carrier((9,)))
    A = GModule.trivial(G, Carrier((3,)))
    K = kernel(AdditiveMap(B.carrier, A.carrier, [[1]]))
    return B, A, K


def test_extension_of_zero_exists():
    B, A, K = _z9_setup()
    res = equivariant_extension_exists(SubgroupMap.zero(K, A.carrier), B, A)
    assert res.exists
    assert not res.witness.matrix.any()


def test_extension_of_rx_does_not_exist():
    B, A, K = _z9_setup()
    r_x = SubgroupMap.from_function(K, A.carrier, lambda b: np.asarray(b) // 3)
    assert not equivariant_extension_exists(r_x, B, A).exists


def test_extension_of_rx_plus_rx2_exists():
    B, A, K = _z9_setup()
    r_x = SubgroupMap.from_function(K, A.carrier, lambda b: np.asarray(b) // 3)
    r_x2 = SubgroupMap.from_function(K, A.carrier, lambda b: -(np.asarray(b) // 3))
    res = equivariant_extension_exists(r_x + r_x2, B, A)
    assert res.exists


def test_extension_agrees_with_enumeration_of_all_maps():
    # every additive Z/4 x Z/2 -> Z/2 map, checked against the solver
    G = FiniteGroup.cyclic(2)
    src = GModule(Carrier((4, 2)), G, np.array([np.eye(2), [[1, 0], [1, 1]]]))
    tgt = GModule.trivial(G, Carrier((2,)))
    K = Subgroup(src.carrier, [[2, 0]])
    all_maps = [np.array([[a, b]]) for a in range(2) for b in range(2)]
    equivariant = [m for m in all_maps if src.is_equivariant(AdditiveMap(src.carrier, tgt.carrier, m), tgt)[0]]
    for val in range(2):
        f = SubgroupMap(K, tgt.carrier, [[val]])
        brute = any(int((m @ np.array([2, 0]))[0]) % 2 == val for m in equivariant)
        assert equivariant_extension_exists(f, src, tgt).exists == brute


def test_extension_rejects_non_equivariant_input():
    G = FiniteGroup.cyclic(2)
    src = GModule(Carrier((2, 2)), G, np.array([np.eye(2), [[0, 1], [1, 0]]]))
    tgt = GModule.trivial(G, Carrier((2,)))
    K = Subgroup(src.carrier, [[1, 0], [0, 1]])
    f = SubgroupMap(K, tgt.carrier, [[1, 0]])  # swaps are not respected
    with pytest.raises(NotEquivariantInput):
        equivariant_extension_exists(f, src, tgt)
