"""Property suites: cochain-level identities checked on many random inputs.

Runnable on their own with ``pytest tests/test_properties.py``.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdcoh.cohomology import Cochain, CohomologyContext, coboundary
from bdcoh.connecting import bockstein_ses, lemma_checks, lifted_coboundary_in_kernel
from bdcoh.examples import build_c3_family
from bdcoh.group import FiniteGroup
from bdcoh.modules import Carrier, GAlgebra, GModule
from bdcoh.products import cup_cochain

TRIALS = 100


def _f3():
    return GAlgebra.trivial_ring(FiniteGroup.cyclic(3), 3)


def _swap():
    mult = np.zeros((2, 2, 2), dtype=np.int64)
    mult[0, 0] = [1, 0]
    mult[1, 1] = [0, 1]
    act = np.array([np.eye(2), [[0, 1], [1, 0]]], dtype=np.int64)
    return GAlgebra(Carrier((2, 2)), FiniteGroup.cyclic(2), act, mult=mult, unit=[1, 1])


def _sign_z4():
    return GModule(Carrier((4,)), FiniteGroup.cyclic(2), np.array([[[1]], [[3]]], dtype=np.int64))


def _mixed_klein():
    G = FiniteGroup.product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(2))
    swap = [[0, 1], [1, 0]]
    act = np.array([np.eye(2), swap, np.eye(2), swap], dtype=np.int64)
    return GModule(Carrier((2, 2)), G, act)


MODULES = {"f3": _f3, "swap": _swap, "sign_z4": _sign_z4, "klein": _mixed_klein}
ALGEBRAS = {"f3": _f3, "swap": _swap, "f2": lambda: GAlgebra.trivial_ring(FiniteGroup.cyclic(2), 2)}


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.mark.parametrize("name", sorted(MODULES))
@pytest.mark.parametrize("degree", [0, 1, 2, 3])
def test_coboundary_squares_to_zero(name, degree, rng):
    module = MODULES[name]()
    for _ in range(TRIALS):
        phi = Cochain.random(module, degree, rng)
        assert coboundary(coboundary(phi)).is_zero()


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), degree=st.integers(0, 3))
def test_coboundary_squares_to_zero_hypothesis(seed, degree):
    phi = Cochain.random(_sign_z4(), degree, np.random.default_rng(seed))
    assert coboundary(coboundary(phi)).is_zero()


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_cup_is_independent_of_representatives(name, rng):
    alg = ALGEBRAS[name]()
    ctx = CohomologyContext(alg, 4)
    pairs = [(m, n) for m in range(5) for n in range(5 - m) if ctx.dimension(m) and ctx.dimension(n)]
    for trial in range(TRIALS):
        m, n = pairs[trial % len(pairs)]
        a = ctx.basis(m)[trial % ctx.dimension(m)].representative
        b = ctx.basis(n)[(trial // 2) % ctx.dimension(n)].representative
        ref = ctx.coordinates(cup_cochain(a, b))
        da = coboundary(Cochain.random(alg, m - 1, rng)) if m else Cochain.zero(alg, 0)
        db = coboundary(Cochain.random(alg, n - 1, rng)) if n else Cochain.zero(alg, 0)
        assert np.array_equal(ctx.coordinates(cup_cochain(a + da, b + db)), ref), (m, n, trial)


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_class_level_graded_commutativity(name):
    alg = ALGEBRAS[name]()
    ctx = CohomologyContext(alg, 5)
    for m in range(6):
        for n in range(6 - m):
            for a in ctx.basis(m):
                for b in ctx.basis(n):
                    ab = cup_cochain(a.representative, b.representative)
                    ba = cup_cochain(b.representative, a.representative)
                    diff = ab - ba if (m * n) % 2 == 0 else ab + ba
                    assert ctx.is_coboundary(diff), (m, n, a.coords.tolist(), b.coords.tolist())


def _sequences():
    fam = build_c3_family()
    return {
        "c3_x": fam.member(1),
        "c3_x2": fam.member(2),
        "bockstein_2": bockstein_ses(2),
        "bockstein_5": bockstein_ses(5),
    }


@pytest.mark.parametrize("name", ["c3_x", "c3_x2", "bockstein_2", "bockstein_5"])
def test_kernel_and_section_cup_identities(name, rng):
    ses = _sequences()[name]
    B = ses.B
    K = ses.kernel_pi
    failures = []
    for trial in range(TRIALS):
        m, n = trial % 3, (trial // 3) % 3
        kern = Cochain(m, B, K.elements()[rng.integers(0, K.order, size=B.group.order**m)])
        other = Cochain.random(B, n, rng)
        for left, right in ((kern, other), (Cochain.random(B, n, rng), Cochain(m, B, kern.table))):
            rep = lemma_checks(ses, left, right)
            failures.extend(c.name for c in rep.failures())
    assert not failures


@pytest.mark.parametrize("name", ["c3_x", "c3_x2", "bockstein_2", "bockstein_5"])
def test_lifted_coboundary_of_a_cocycle_lies_in_the_kernel(name, rng):
    ses = _sequences()[name]
    ctx = CohomologyContext(ses.A, 4)
    for trial in range(TRIALS):
        n = trial % 4
        phi = ctx.basis(n)[0].representative
        if n:
            phi = phi + coboundary(Cochain.random(ses.A, n - 1, rng))
        assert lifted_coboundary_in_kernel(ses, phi)
