from itertools import product

import numpy as np
import pytest

from bdcoh.bd import (
    BDAlgebra,
    GradedAlgebraInstance,
    ThetaFamily,
    bd_bracket,
    bd_delta,
    bd_mul,
    literal_antisymmetry_witness,
    safe_verify_bd_axioms,
    theta_x,
    theta_x_cochain,
    validate_situation_starstar,
    verify_bd_axioms,
    verify_pr_axioms,
)
from bdcoh.cohomology import Cochain, coboundary
from bdcoh.connecting import ShortExactSequence
from bdcoh.errors import DegreeOverflow, FamilyNotValidated, NonAbelianGroup, TablesNotClosed, UnknownElement
from bdcoh.examples import build_c3_family
from bdcoh.group import validate_group
from bdcoh.modules import AdditiveMap, GAlgebra
from bdcoh.products import cup_cochain


def _flip_member(family, x, flip_iota):
    m = family.member(x)
    r = -m.retraction
    iota = AdditiveMap(m.A.carrier, m.B.carrier, -m.iota.matrix) if flip_iota else m.iota
    return family.with_member(x, ShortExactSequence(m.A, m.B, iota, m.pi, m.section, r))


def test_c3_family_passes_situation_starstar(c3_family):
    rep = validate_situation_starstar(c3_family, cutoff=5)
    assert rep.passed, rep.to_text()
    assert "9 pairs" in rep.get("retraction_cocycle_condition").detail


def test_retraction_values(c3_family):
    assert int(c3_family.retraction(1)([3])[0]) == 1
    assert int(c3_family.retraction(2)([3])[0]) == 2
    assert not c3_family.retraction(0)([3]).any()


def test_flipped_retraction_breaks_the_member(c3_family):
    bad = _flip_member(c3_family, 1, flip_iota=False)
    rep = validate_situation_starstar(bad, cutoff=4)
    assert not rep.get("member[x].r_iota_is_identity").passed
    assert not rep.get("retraction_cocycle_condition").passed


def test_flipped_pair_keeps_members_valid_but_breaks_the_cocycle_condition(c3_family):
    bad = _flip_member(c3_family, 1, flip_iota=True)
    rep = validate_situation_starstar(bad, cutoff=4)
    assert all(c.passed for c in rep.checks if c.name.startswith("member["))
    check = rep.get("retraction_cocycle_condition")
    assert not check.passed and check.witness is not None


def test_missing_member_reported():
    fam = build_c3_family()
    partial = ThetaFamily(fam.A, fam.B, fam.pi, fam.section, {0: None, 1: fam.member(1)})
    rep = validate_situation_starstar(partial, cutoff=3)
    assert not rep.get("all_members_assigned").passed
    with pytest.raises(UnknownElement):
        partial.member(2)


def test_theta_x_is_additive_in_x(c3_family):
    ctx = c3_family.context(6)
    for n in range(6):
        for c in ctx.basis(n):
            t1 = theta_x(c3_family, 1, c)
            t2 = theta_x(c3_family, 2, c)
            assert (t1 + t2).is_zero()
            assert theta_x(c3_family, 0, c).is_zero()


def test_theta_x_degree_overflow():
    family = build_c3_family()
    ctx = family.context(2)
    with pytest.raises(DegreeOverflow):
        theta_x(family, 1, ctx.basis(2)[0])


def test_operations_match_their_definitions(c3_family, rng):
    """Product, bracket and Delta against cochain-level formulas on all basis pairs."""
    D = 5
    alg = BDAlgebra(c3_family, D)
    ctx = alg.context
    G = alg.group
    for (g, m, i), (h, n, j) in product(alg.basis(2), repeat=2):
        phi = ctx.basis(m)[i].representative + (coboundary(Cochain.random(c3_family.A, m - 1, rng)) if m else Cochain.zero(c3_family.A, 0))
        psi = ctx.basis(n)[j].representative
        u, v = alg.basis_element(g, m, i), alg.basis_element(h, n, j)
        prod = ctx.coordinates(cup_cochain(phi, psi))
        assert bd_mul(u, v) == alg.element({(G.mul(g, h), m + n): prod})
        first = cup_cochain(theta_x_cochain(c3_family, h, phi), psi)
        second = cup_cochain(phi, theta_x_cochain(c3_family, g, psi))
        brk = ctx.coordinates(second + (first if m % 2 == 0 else -first))
        assert bd_bracket(u, v) == alg.element({(G.mul(g, h), m + n + 1): brk})
        assert bd_delta(u) == alg.element({(g, m + 1): ctx.coordinates(theta_x_cochain(c3_family, g, phi))})


def test_unit_and_linearity(c3_family):
    alg = BDAlgebra(c3_family, 4)
    one = alg.one()
    for b in alg.basis(3):
        e = alg.basis_element(*b)
        assert alg.mul(one, e) == e == alg.mul(e, one)
    a, b = alg.basis_element(1, 1, 0), alg.basis_element(2, 2, 0)
    c = alg.basis_element(0, 1, 0)
    assert alg.bracket(a + c, b) == alg.bracket(a, b) + alg.bracket(c, b)
    assert alg.delta(a.scaled(2)) == alg.delta(a).scaled(2)


def test_bd_axioms_pass_for_c3(c3_family):
    rep = verify_bd_axioms(c3_family, cutoff=4)
    assert rep.passed, rep.to_text()
    names = {c.name for c in rep.checks}
    assert {"graded_commutative_algebra", "bracket_antisymmetry", "jacobi", "poisson", "delta_squared_zero", "bd_equation"} <= names


def test_literal_antisymmetry_sign_fails_with_witness(c3_family):
    alg = BDAlgebra(c3_family, 4)
    witness = literal_antisymmetry_witness(alg.to_instance(2))
    assert witness is not None
    a, b = (alg.basis_element(1, 0, 0), alg.basis_element(0, 1, 0))
    # [x(x)1, 1(x)u] is nonzero and the two orders differ by exactly -1
    ab, ba = alg.bracket(a, b), alg.bracket(b, a)
    assert not ab.is_zero()
    assert ab == -ba


def test_negative_control_breaks_the_bd_equation(c3_family):
    bad = _flip_member(c3_family, 1, flip_iota=True)
    with pytest.raises(FamilyNotValidated):
        verify_bd_axioms(bad, cutoff=3)
    rep = verify_bd_axioms(bad, cutoff=3, require_valid=False)
    check = rep.get("bd_equation")
    assert not check.passed
    assert len(check.witness) >= 2
    safe = safe_verify_bd_axioms(bad, cutoff=3)
    assert not safe.passed


def test_non_abelian_group_rejected():
    perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)]
    index = {p: i for i, p in enumerate(perms)}
    G = validate_group([[index[tuple(p[q[k]] for k in range(3))] for q in perms] for p in perms], 0)
    A, B = GAlgebra.trivial_ring(G, 3), GAlgebra.trivial_ring(G, 9)
    pi = AdditiveMap(B.carrier, A.carrier, [[1]])
    fam = ThetaFamily.from_data(A, B, pi, [[0], [1], [2]], {g: None for g in range(6)})
    with pytest.raises(NonAbelianGroup):
        verify_bd_axioms(fam, cutoff=2)


# ------------------------------------------------------ generic axiom engine


def _bv_polyvectors(p, corrupt=False):
    """F_p[x]/(x^p) (x) Lambda(xi), |x| = 0, |xi| = 1, with Delta = d/dx d/dxi (a BV = BD_2 algebra)."""
    basis = [(a, e) for e in (0, 1) for a in range(p)]
    index = {b: i for i, b in enumerate(basis)}
    N = len(basis)
    deg = np.array([e for _, e in basis])
    mult = np.zeros((N, N, N), dtype=np.int64)
    for (i, (a, e)), (j, (b, f)) in product(enumerate(basis), repeat=2):
        if e + f <= 1 and a + b < p:
            mult[i, j, index[(a + b, e + f)]] = 1  # xi x^b = x^b xi, no sign
    op = np.zeros((N, N), dtype=np.int64)
    for i, (a, e) in enumerate(basis):
        if e == 1 and a > 0:
            op[i, index[(a - 1, 0)]] = a % p
    if corrupt:
        # x * x = 2 x^2 keeps commutativity but breaks associativity
        mult[index[(1, 0)], index[(1, 0)]] = 0
        mult[index[(1, 0)], index[(1, 0)], index[(2, 0)]] = 2 % p
    sgn = np.where(deg % 2 == 0, 1, -1)
    ab = np.einsum("ijk,kl->ijl", mult, op)
    da_b = np.einsum("ik,kjl->ijl", op, mult)
    a_db = np.einsum("jk,ikl->ijl", op, mult)
    brk = (sgn[:, None, None] * (ab - da_b) - a_db) % p
    unit = np.zeros(N, dtype=np.int64)
    unit[index[(0, 0)]] = 1
    return GradedAlgebraInstance(deg, mult % p, brk, op % p, p, cutoff=2, unit=unit)


@pytest.mark.parametrize("p", [3, 5])
def test_polyvector_bv_algebra_passes_at_r2(p):
    rep = verify_pr_axioms(_bv_polyvectors(p), r=2)
    assert rep.passed, rep.to_text()


def test_engine_detects_wrong_degree():
    inst = _bv_polyvectors(3)
    rep = verify_pr_axioms(inst, r=0)
    assert not rep.get("bracket_degree").passed


def test_engine_detects_a_broken_product():
    rep = verify_pr_axioms(_bv_polyvectors(3, corrupt=True), r=2)
    assert not rep.passed
    assert any(c.witness is not None for c in rep.failures())


def test_engine_detects_broken_antisymmetry():
    inst = _bv_polyvectors(3)
    inst.bracket = inst.bracket.copy()
    inst.bracket[0, 4, :] = 0
    inst.bracket[0, 4, 1] = 1
    rep = verify_pr_axioms(inst, r=2)
    assert not rep.get("bracket_antisymmetry").passed


def test_engine_rejects_bad_shapes():
    with pytest.raises(TablesNotClosed):
        GradedAlgebraInstance(np.zeros(2), np.zeros((2, 2, 3)), np.zeros((2, 2, 2)), None, 3, 1)


def test_instance_marks_unknown_entries(c3_family):
    alg = BDAlgebra(c3_family, 3)
    inst = alg.to_instance(1)
    top = [i for i, d in enumerate(inst.degrees) if d == 3]
    assert (inst.operator[top] == -1).all()
    assert verify_pr_axioms(inst, r=0).passed
