"""Short exact sequences 0 -> A -> B -> A -> 0 with a chosen section and retraction.

The connecting map sends a cocycle phi to r o d_B(s o phi): lift values
along the set-theoretic section s, take the coboundary in B (it lands in
Ker pi), and pull back along the retraction r: Ker pi -> A.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .cohomology import Cochain, CohomologyClass, CohomologyContext, coboundary, is_cocycle
from .errors import LemmaViolation, MalformedInput, NotACocycle, NotPrime, SituationNotValidated
from .group import FiniteGroup, tuple_decode
from .modules import (
    AdditiveMap,
    GAlgebra,
    Subgroup,
    SubgroupMap,
    image,
    is_ideal,
    kernel,
)
from .products import cup_cochain
from .report import Report

# above this many (b1, b2, g) triples the retraction identities are checked on generators only
TRIPLE_LIMIT = 2_000_000


@dataclass(eq=False)
class ShortExactSequence:
    A: GAlgebra
    B: GAlgebra
    iota: AdditiveMap
    pi: AdditiveMap
    section: np.ndarray
    retraction: SubgroupMap

    def __post_init__(self):
        if self.iota.source != self.A.carrier or self.iota.target != self.B.carrier:
            raise MalformedInput("iota must map A -> B")
        if self.pi.source != self.B.carrier or self.pi.target != self.A.carrier:
            raise MalformedInput("pi must map B -> A")
        s = np.asarray(self.section, dtype=np.int64).reshape(self.A.carrier.order, self.B.dim)
        self.section = self.B.carrier.normalize(s)
        if self.retraction.target != self.A.carrier or self.retraction.domain.ambient != self.B.carrier:
            raise MalformedInput("r must map a subgroup of B into A")

    @property
    def group(self) -> FiniteGroup:
        return self.A.group

    @cached_property
    def kernel_pi(self) -> Subgroup:
        return kernel(self.pi)

    def s(self, values) -> np.ndarray:
        """Apply the section to A-values (any leading shape)."""
        return self.section[self.A.carrier.encode(values)]

    def r(self, values) -> tuple[np.ndarray, np.ndarray]:
        """Apply the retraction; returns (images, in_kernel_mask)."""
        return self.retraction.evaluate_many(values)

    @cached_property
    def star_report(self) -> Report:
        return validate_situation_star(self)

    def with_section(self, section) -> "ShortExactSequence":
        return ShortExactSequence(self.A, self.B, self.iota, self.pi, section, self.retraction)

    def with_retraction(self, retraction: SubgroupMap) -> "ShortExactSequence":
        return ShortExactSequence(self.A, self.B, self.iota, self.pi, self.section, retraction)

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "iota": self.iota.matrix.tolist(),
            "pi": self.pi.matrix.tolist(),
            "s": self.section.tolist(),
            "r": self.retraction.to_json(),
        }


def _first(mask: np.ndarray):
    hit = np.argwhere(mask)
    return tuple(int(x) for x in hit[0]) if len(hit) else None


def _operands(sub_elems_all, sub_gens, full_elems, full_gens, group_order):
    if len(sub_elems_all) * len(full_elems) * group_order <= TRIPLE_LIMIT:
        return sub_elems_all, full_elems, "exhaustive"
    return sub_gens, full_gens, "generators (bilinear)"


def validate_situation_star(ses: ShortExactSequence) -> Report:
    """Check exactness, section/retraction identities, the ideal condition and the product identities.

    Every failing check carries a witness.  Nothing raises.
    """
    A, B, G = ses.A, ses.B, ses.group
    rep = Report("Situation star")
    K = ses.kernel_pi

    rep.add("A_acts_by_automorphisms", *A.check_automorphisms())
    ok, w = A.is_equivariant(ses.iota, B)
    rep.add("iota_equivariant", ok, w)
    ok, w = B.is_equivariant(ses.pi, A)
    rep.add("pi_equivariant", ok, w)

    rep.add("iota_injective", ses.iota.is_injective())
    rep.add("pi_surjective", ses.pi.is_surjective())
    im = image(ses.iota)
    rep.add("exact_at_B", im == K, detail=f"|im iota|={im.order}, |ker pi|={K.order}")

    a_elems = A.carrier.elements()
    back = ses.pi(ses.section)
    bad = np.flatnonzero((back != a_elems).any(axis=1))
    rep.add("pi_s_is_identity", not len(bad), a_elems[bad[0]].tolist() if len(bad) else None)

    r_iota, mask = ses.r(ses.iota(a_elems))
    bad = np.flatnonzero(~mask | (r_iota != a_elems).any(axis=1))
    rep.add("r_iota_is_identity", not len(bad), a_elems[bad[0]].tolist() if len(bad) else None)

    ok, w = is_ideal(K, B)
    rep.add("kernel_is_ideal", ok, w)

    k_all = K.elements()
    b_all = B.carrier.elements()
    k_gens = K.howell_generators
    b_gens = B.carrier.generators()

    # r(b1 (g b2)) = r(b1) (g pi(b2)),  b1 in Ker pi, b2 in B
    b1s, b2s, mode = _operands(k_all, k_gens, b_all, b_gens, G.order)
    rep.add("retraction_left_identity", *_bilinear_identity(ses, b1s, b2s, left_in_kernel=True), detail=mode)
    # r(b1' (g b2')) = pi(b1') (g r(b2')),  b1' in B, b2' in Ker pi
    b2s, b1s, mode = _operands(k_all, k_gens, b_all, b_gens, G.order)
    rep.add("retraction_right_identity", *_bilinear_identity(ses, b1s, b2s, left_in_kernel=False), detail=mode)

    rep.add("section_defect_in_kernel", *_section_defect(ses))

    homo = _pi_is_ring_hom(ses)
    rep.flags["pi_is_ring_homomorphism"] = homo
    if homo:
        rep.notes.append("pi is a ring homomorphism: the section defect and ideal conditions hold automatically")
    return rep


def _bilinear_identity(ses: ShortExactSequence, lefts: np.ndarray, rights: np.ndarray, left_in_kernel: bool):
    A, B = ses.A, ses.B
    for g in range(ses.group.order):
        g_right = B.act(g, rights)
        prod = B.multiply(lefts[:, None, :], g_right[None, :, :])
        lhs, inside = ses.r(prod)
        if left_in_kernel:
            r_left, _ = ses.r(lefts)
            rhs = A.multiply(r_left[:, None, :], A.act(g, ses.pi(rights))[None, :, :])
        else:
            r_right, _ = ses.r(rights)
            rhs = A.multiply(ses.pi(lefts)[:, None, :], A.act(g, r_right)[None, :, :])
        bad = ~inside | (lhs != rhs).any(axis=-1)
        hit = _first(bad)
        if hit is not None:
            i, j = hit
            return False, {"b1": lefts[i].tolist(), "b2": rights[j].tolist(), "g": g}
    return True, None


def _section_defect(ses: ShortExactSequence):
    A, B = ses.A, ses.B
    a = A.carrier.elements()
    s_all = ses.section
    for g in range(ses.group.order):
        prod = A.multiply(a[:, None, :], A.act(g, a)[None, :, :])
        lhs = ses.s(prod)
        rhs = B.multiply(s_all[:, None, :], B.act(g, s_all)[None, :, :])
        diff = (lhs - rhs) % B.carrier.mod_array
        hit = _first(ses.pi(diff).any(axis=-1))
        if hit is not None:
            i, j = hit
            return False, {"a1": a[i].tolist(), "a2": a[j].tolist(), "g": g}
    return True, None


def _pi_is_ring_hom(ses: ShortExactSequence) -> bool:
    B, A = ses.B, ses.A
    gens = B.carrier.generators()
    if not np.array_equal(ses.pi(B.unit), A.unit):
        return False
    lhs = ses.pi(B.multiply(gens[:, None, :], gens[None, :, :]))
    rhs = A.multiply(ses.pi(gens)[:, None, :], ses.pi(gens)[None, :, :])
    return bool(np.array_equal(lhs, rhs))


def theta_cochain(ses: ShortExactSequence, phi: Cochain, check: bool = True) -> Cochain:
    """r o d_B(s o phi) for a cocycle phi over A."""
    if check and not is_cocycle(phi):
        raise NotACocycle(f"degree-{phi.degree} cochain is not a cocycle")
    lifted = Cochain(phi.degree, ses.B, ses.s(phi.table))
    d = coboundary(lifted)
    values, inside = ses.r(d.table)
    if not inside.all():
        i = int(np.flatnonzero(~inside)[0])
        raise LemmaViolation(
            "d_B(s o phi) leaves Ker pi",
            witness=tuple_decode(i, phi.degree + 1, ses.group.order),
        )
    out = Cochain(phi.degree + 1, ses.A, values)
    if check and not is_cocycle(out):
        raise LemmaViolation("r o d_B(s o phi) is not a cocycle")
    return out


def theta_class(ses: ShortExactSequence, c: CohomologyClass) -> CohomologyClass:
    return c.context.class_of(theta_cochain(ses, c.representative))


def _require_star(ses: ShortExactSequence) -> None:
    if not ses.star_report.passed:
        names = [c.name for c in ses.star_report.failures()]
        raise SituationNotValidated(f"Situation star fails: {names}", witness=names)


def check_derivation(ses: ShortExactSequence, alpha: CohomologyClass, beta: CohomologyClass) -> tuple[bool, dict | None]:
    """theta(a u b) == theta(a) u b + (-1)^m a u theta(b), as classes."""
    _require_star(ses)
    ctx = alpha.context
    a, b = alpha.representative, beta.representative
    m = alpha.degree
    lhs = theta_cochain(ses, cup_cochain(a, b))
    rhs = cup_cochain(theta_cochain(ses, a), b)
    second = cup_cochain(a, theta_cochain(ses, b))
    rhs = rhs + second if m % 2 == 0 else rhs - second
    ok = ctx.is_coboundary(lhs - rhs)
    return ok, None if ok else {"alpha": alpha.coords.tolist(), "beta": beta.coords.tolist(), "degrees": (m, beta.degree)}


def check_differential(ses: ShortExactSequence, context: CohomologyContext, n_max: int | None = None) -> tuple[bool, dict | None]:
    """theta o theta == 0 on every basis class of H^n, n <= n_max - 1."""
    _require_star(ses)
    top = context.max_degree if n_max is None else n_max
    for n in range(0, top):
        for k, c in enumerate(context.basis(n)):
            twice = theta_cochain(ses, theta_cochain(ses, c.representative))
            if not context.is_coboundary(twice):
                return False, {"degree": n, "basis_index": k}
    return True, None


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def bockstein_ses(p: int, group: FiniteGroup | None = None) -> ShortExactSequence:
    """0 -> Z/p -> Z/p^2 -> Z/p -> 0 with trivial action (default group C_p)."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime", witness=p)
    G = group or FiniteGroup.cyclic(p)
    A = GAlgebra.trivial_ring(G, p)
    B = GAlgebra.trivial_ring(G, p * p)
    iota = AdditiveMap(A.carrier, B.carrier, [[p]])
    pi = AdditiveMap(B.carrier, A.carrier, [[1]])
    section = np.arange(p).reshape(p, 1)  # least non-negative representative
    K = kernel(pi)
    r = SubgroupMap.from_function(K, A.carrier, lambda b: np.asarray(b) // p)
    return ShortExactSequence(A, B, iota, pi, section, r)


def retraction_from_iota(iota: AdditiveMap, K: Subgroup) -> SubgroupMap:
    """The inverse of iota corestricted to K (requires iota injective onto K)."""
    def inv(b):
        a = iota.preimage(b)
        if a is None:
            raise MalformedInput(f"{np.asarray(b).tolist()} is not in the image of iota")
        return a

    return SubgroupMap.from_function(K, iota.source, inv)


def lemma_checks(ses: ShortExactSequence, alpha: Cochain, beta: Cochain) -> Report:
    """Pointwise cup identities relating r, pi and s.

    ``alpha``/``beta`` are B-cochains; the kernel-valued identities are
    tested on whichever arguments take values in Ker pi, and the section
    identity on pi o alpha, pi o beta.
    """
    rep = Report("cup identities")
    B = ses.B
    in_k = lambda c: not ses.pi(c.table).any()
    ab = cup_cochain(alpha, beta)
    if in_k(alpha):
        rep.add("kernel_left_stays_in_kernel", in_k(ab))
        r_ab, _ = ses.r(ab.table)
        r_a, _ = ses.r(alpha.table)
        rhs = cup_cochain(Cochain(alpha.degree, ses.A, r_a), Cochain(beta.degree, ses.A, ses.pi(beta.table)))
        rep.add("r_of_cup_left", np.array_equal(r_ab, rhs.table))
    if in_k(beta):
        rep.add("kernel_right_stays_in_kernel", in_k(ab))
        r_ab, _ = ses.r(ab.table)
        r_b, _ = ses.r(beta.table)
        rhs = cup_cochain(Cochain(alpha.degree, ses.A, ses.pi(alpha.table)), Cochain(beta.degree, ses.A, r_b))
        rep.add("r_of_cup_right", np.array_equal(r_ab, rhs.table))
    a = Cochain(alpha.degree, ses.A, ses.pi(alpha.table))
    b = Cochain(beta.degree, ses.A, ses.pi(beta.table))
    s_ab = ses.s(cup_cochain(a, b).table)
    sa_sb = cup_cochain(Cochain(a.degree, B, ses.s(a.table)), Cochain(b.degree, B, ses.s(b.table))).table
    rep.add("section_cup_defect_in_kernel", not ses.pi((s_ab - sa_sb) % B.carrier.mod_array).any())
    return rep


def lifted_coboundary_in_kernel(ses: ShortExactSequence, phi: Cochain) -> bool:
    """d_B(s o phi) takes values in Ker pi (for a cocycle phi)."""
    d = coboundary(Cochain(phi.degree, ses.B, ses.s(phi.table)))
    return not ses.pi(d.table).any()
