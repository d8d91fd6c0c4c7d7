import numpy as np
import pytest

from bdcoh.cohomology import Cochain, CohomologyContext, coboundary
from bdcoh.errors import ContextMismatch, PairingNotBilinear
from bdcoh.group import FiniteGroup
from bdcoh.modules import Carrier, GAlgebra, GModule
from bdcoh.products import CupTable, Pairing, cup_class, cup_cochain
from oracles import all_tuples, cup_values


def _as_dict(phi):
    q = phi.module.group.order
    return {t: tuple(phi.table[i]) for i, t in enumerate(all_tuples(q, phi.degree))}


def _twisted_algebra():
    # F3[e]/(e^2) with the generator of C3 acting by e -> e: trivial on the ring but two-dimensional
    mult = np.zeros((2, 2, 2), dtype=np.int64)
    mult[0, 0] = [1, 0]
    mult[0, 1] = [0, 1]
    mult[1, 0] = [0, 1]
    return GAlgebra(Carrier((3, 3)), FiniteGroup.cyclic(3), np.tile(np.eye(2, dtype=np.int64), (3, 1, 1)), mult=mult, unit=[1, 0])


def _swap_algebra():
    # F2 x F2 with C2 swapping the factors
    mult = np.zeros((2, 2, 2), dtype=np.int64)
    mult[0, 0] = [1, 0]
    mult[1, 1] = [0, 1]
    act = np.array([np.eye(2), [[0, 1], [1, 0]]], dtype=np.int64)
    return GAlgebra(Carrier((2, 2)), FiniteGroup.cyclic(2), act, mult=mult, unit=[1, 1])


@pytest.mark.parametrize("alg_name", ["f3", "twisted", "swap"])
def test_cup_matches_defining_formula(alg_name, f3, rng):
    alg = {"f3": f3, "twisted": _twisted_algebra(), "swap": _swap_algebra()}[alg_name]
    mult = alg.group.mult.tolist()
    for m, n in [(0, 1), (1, 1), (1, 2), (2, 1)]:
        phi, psi = Cochain.random(alg, m, rng), Cochain.random(alg, n, rng)
        mine = _as_dict(cup_cochain(phi, psi))
        brute = cup_values(
            mult,
            lambda g, v: tuple(alg.act(g, np.array(v)).tolist()),
            lambda a, b: tuple(alg.multiply(np.array(a), np.array(b)).tolist()),
            m,
            n,
            _as_dict(phi),
            _as_dict(psi),
        )
        assert mine == brute


@pytest.mark.parametrize("alg_name", ["f3", "swap"])
def test_leibniz_rule_on_cochains(alg_name, f3, rng):
    alg = f3 if alg_name == "f3" else _swap_algebra()
    for m in range(3):
        for n in range(3 - m):
            for _ in range(10):
                a, b = Cochain.random(alg, m, rng), Cochain.random(alg, n, rng)
                lhs = coboundary(cup_cochain(a, b))
                second = cup_cochain(a, coboundary(b))
                rhs = cup_cochain(coboundary(a), b) + (second if m % 2 == 0 else -second)
                assert lhs == rhs


def test_cup_is_independent_of_representatives(f3, rng):
    ctx = CohomologyContext(f3, 4)
    for m, n in [(1, 1), (1, 2), (2, 2), (1, 3)]:
        for a in ctx.basis(m):
            for b in ctx.basis(n):
                ref = ctx.coordinates(cup_cochain(a.representative, b.representative))
                for _ in range(100 // (len(ctx.basis(m)) * len(ctx.basis(n))) // 4 + 1):
                    pa = a.representative + coboundary(Cochain.random(f3, m - 1, rng))
                    pb = b.representative + coboundary(Cochain.random(f3, n - 1, rng))
                    assert np.array_equal(ctx.coordinates(cup_cochain(pa, pb)), ref)


def test_graded_commutativity_on_classes():
    for alg, top in ((GAlgebra.trivial_ring(FiniteGroup.cyclic(3), 3), 5), (_swap_algebra(), 4), (GAlgebra.trivial_ring(FiniteGroup.cyclic(2), 4), 4)):
        ctx = CohomologyContext(alg, top)
        table = CupTable(ctx)
        for m in range(top + 1):
            for n in range(top + 1 - m):
                ab = table.table(m, n)
                ba = table.table(n, m).transpose(1, 0, 2)
                sign = -1 if (m * n) % 2 else 1
                mods = np.array(ctx.invariant_factors(m + n), dtype=np.int64)
                assert np.array_equal(ab % mods, (sign * ba) % mods), (m, n)


def test_ring_structure_of_c3_cohomology(f3):
    """H*(C3, F3) = Lambda(u) (x) F3[v]: u^2 = 0, u v spans H^3, v^2 spans H^4."""
    ctx = CohomologyContext(f3, 5)
    t = CupTable(ctx)
    assert t.table(1, 1)[0, 0].tolist() == [0]
    assert t.table(1, 2)[0, 0].tolist() != [0]
    assert t.table(2, 2)[0, 0].tolist() != [0]
    assert t.table(2, 3)[0, 0].tolist() != [0]
    assert t.table(0, 3)[0, 0].tolist() == [1]


def test_ring_structure_of_c2_cohomology():
    """H*(C2, F2) = F2[u]: every power of u is nonzero."""
    ctx = CohomologyContext(GAlgebra.trivial_ring(FiniteGroup.cyclic(2), 2), 5)
    t = CupTable(ctx)
    for m in range(1, 5):
        assert t.table(1, m)[0, 0].tolist() == [1]


def test_pairing_validation():
    G = FiniteGroup.cyclic(2)
    z4, z2 = GModule.trivial(G, Carrier((4,))), GModule.trivial(G, Carrier((2,)))
    Pairing(z2, z2, z4, [[[2]]])
    with pytest.raises(PairingNotBilinear):
        Pairing(z2, z2, z4, [[[1]]])


def test_explicit_pairing_into_another_module(rng):
    G = FiniteGroup.cyclic(2)
    z2, z4 = GModule.trivial(G, Carrier((2,))), GModule.trivial(G, Carrier((4,)))
    mu = Pairing(z2, z2, z4, [[[2]]])
    a, b = Cochain.random(z2, 1, rng), Cochain.random(z2, 1, rng)
    out = cup_cochain(a, b, mu)
    assert out.module is z4
    expected = (2 * a.table[:, None, 0] * b.table[None, :, 0]).reshape(-1, 1) % 4
    assert np.array_equal(out.table, expected)


def test_cup_class_context_checks(f3):
    c1, c2 = CohomologyContext(f3, 2), CohomologyContext(f3, 2)
    a, b = c1.basis(1)[0], c2.basis(1)[0]
    with pytest.raises(ContextMismatch):
        cup_class(a, b)
    assert cup_class(a, c1.basis(1)[0]).is_zero()
