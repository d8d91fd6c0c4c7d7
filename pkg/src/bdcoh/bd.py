"""Families of connecting maps indexed by G, and the BD algebra on KG (x) H*(G, A).

A :class:`ThetaFamily` shares one projection pi: B -> A and one section s
across all group elements; each element x either carries its own
embedding iota_x with retraction r_x, or contributes the zero retraction.
The operators theta_x = r_x o d_B(s o -) assemble into a product, a
bracket and a degree +1 operator on KG (x) H*.  :func:`verify_pr_axioms`
is a generic checker for P_r / BD_r axioms on finite multiplication
tables; :func:`verify_bd_axioms` runs it at r = 0 on the exported tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .cohomology import Cochain, CohomologyClass, CohomologyContext
from .connecting import ShortExactSequence, is_prime, theta_cochain
from .errors import (
    BDCohError,
    ContextMismatch,
    DegreeOverflow,
    FamilyNotValidated,
    MalformedInput,
    NonAbelianGroup,
    NotEquivariantInput,
    TablesNotClosed,
    UnknownElement,
)
from .group import FiniteGroup
from .modules import AdditiveMap, GAlgebra, Subgroup, SubgroupMap, equivariant_extension_exists, is_ideal, kernel
from .products import CupTable
from .report import Report

ZERO_MEMBER_NOTE = (
    "members marked zero contribute r_x = 0 (hence theta_x = 0); "
    "this is the reading adopted for the second alternative of the family hypothesis"
)


@dataclass(eq=False)
class ThetaFamily:
    """Members indexed by group element: a ShortExactSequence or ``None`` (r_x = 0)."""

    A: GAlgebra
    B: GAlgebra
    pi: AdditiveMap
    section: np.ndarray
    members: dict[int, ShortExactSequence | None]
    _contexts: dict = field(default_factory=dict, repr=False)
    _star_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.section = self.B.carrier.normalize(
            np.asarray(self.section, dtype=np.int64).reshape(self.A.carrier.order, self.B.dim)
        )
        self.members = {int(g): m for g, m in self.members.items()}
        for g in self.members:
            if not 0 <= g < self.group.order:
                raise UnknownElement(f"member index {g} is not a group element", witness=g)

    @classmethod
    def from_data(cls, A: GAlgebra, B: GAlgebra, pi: AdditiveMap, section, members: dict) -> "ThetaFamily":
        """Build from ``{g: (iota, r) | None}``; r may be a SubgroupMap or a function on Ker pi."""
        section = np.asarray(section, dtype=np.int64)
        K = kernel(pi)
        built: dict[int, ShortExactSequence | None] = {}
        for g, data in members.items():
            if data is None:
                built[g] = None
                continue
            iota, r = data
            if not isinstance(r, SubgroupMap):
                r = SubgroupMap.from_function(K, A.carrier, r)
            built[g] = ShortExactSequence(A, B, iota, pi, section, r)
        return cls(A, B, pi, section, built)

    @property
    def group(self) -> FiniteGroup:
        return self.A.group

    @property
    def kernel_pi(self) -> Subgroup:
        for m in self.members.values():
            if m is not None:
                return m.kernel_pi
        if "K" not in self._contexts:
            self._contexts["K"] = kernel(self.pi)
        return self._contexts["K"]

    @property
    def prime(self) -> int | None:
        """p when A is a vector space over F_p (all moduli equal to one prime), else None."""
        mods = set(self.A.carrier.moduli)
        if len(mods) == 1:
            p = mods.pop()
            if is_prime(p):
                return p
        return None

    def member(self, x: int) -> ShortExactSequence | None:
        if not 0 <= int(x) < self.group.order:
            raise UnknownElement(f"{x} is not a group element", witness=x)
        if int(x) not in self.members:
            raise UnknownElement(f"no member assigned to {self.group.label(int(x))}", witness=int(x))
        return self.members[int(x)]

    def retraction(self, x: int) -> SubgroupMap:
        m = self.member(x)
        return SubgroupMap.zero(self.kernel_pi, self.A.carrier) if m is None else m.retraction

    def context(self, max_degree: int) -> CohomologyContext:
        """A shared cohomology context of A reaching at least ``max_degree``."""
        ctx = self._contexts.get("ctx")
        if ctx is None or ctx.max_degree < max_degree:
            ctx = CohomologyContext(self.A, max_degree)
            self._contexts["ctx"] = ctx
        return ctx

    def star_report(self, x: int) -> Report | None:
        m = self.member(x)
        return None if m is None else m.star_report

    def with_member(self, x: int, member: ShortExactSequence | None) -> "ThetaFamily":
        members = dict(self.members)
        members[int(x)] = member
        return ThetaFamily(self.A, self.B, self.pi, self.section, members)

    def to_json(self) -> dict:
        members = {}
        for g in sorted(self.members):
            m = self.members[g]
            members[self.group.label(g)] = "zero" if m is None else {
                "iota": m.iota.matrix.tolist(),
                "r": m.retraction.to_json(),
            }
        return {
            "group": self.group.to_json(),
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "pi": self.pi.matrix.tolist(),
            "s": self.section.tolist(),
            "members": members,
        }


def theta_x_cochain(family: ThetaFamily, x: int, phi: Cochain) -> Cochain:
    m = family.member(x)
    if m is None:
        return Cochain.zero(family.A, phi.degree + 1)
    return theta_cochain(m, phi)


def theta_x(family: ThetaFamily, x: int, c: CohomologyClass) -> CohomologyClass:
    """theta_x on a class; the target degree must lie in the class's context."""
    if c.degree + 1 > c.context.max_degree:
        raise DegreeOverflow(f"theta of a degree-{c.degree} class needs a context through degree {c.degree + 1}")
    return c.context.class_of(theta_x_cochain(family, x, c.representative))


def validate_situation_starstar(family: ThetaFamily, cutoff: int = 6) -> Report:
    """Per-member checks, the cocycle condition on retractions, and the operator laws.

    The cocycle condition asks that for every y, z the map
    r_{yz} - r_y - r_z on Ker pi extends to a G-equivariant additive B -> A.
    The operator laws theta_{xy} = theta_x + theta_y and
    theta_x o theta_y = 0 are tested on basis classes through ``cutoff``.
    """
    G = family.group
    rep = Report("Situation star-star")
    missing = [G.label(g) for g in range(G.order) if g not in family.members]
    rep.add("all_members_assigned", not missing, missing or None)
    if missing:
        return rep

    shared_bad = []
    for g, m in sorted(family.members.items()):
        if m is None:
            continue
        same = (
            m.A is family.A
            and m.B is family.B
            and m.pi == family.pi
            and np.array_equal(m.section, family.section)
        )
        if not same:
            shared_bad.append(G.label(g))
    rep.add("members_share_pi_and_s", not shared_bad, shared_bad or None)

    ok, w = family.A.check_automorphisms()
    rep.add("A_acts_by_automorphisms", ok, w)
    K = family.kernel_pi
    ok, w = is_ideal(K, family.B)
    rep.add("kernel_is_ideal", ok, w)
    rep.add("pi_surjective", family.pi.is_surjective())
    back = family.pi(family.section)
    bad = np.flatnonzero((back != family.A.carrier.elements()).any(axis=1))
    rep.add("pi_s_is_identity", not len(bad), family.A.carrier.elements()[bad[0]].tolist() if len(bad) else None)

    zero_members = [G.label(g) for g, m in sorted(family.members.items()) if m is None]
    if zero_members:
        rep.notes.append(ZERO_MEMBER_NOTE + f": {zero_members}")
    for g, m in sorted(family.members.items()):
        if m is not None:
            rep.extend(m.star_report, prefix=f"member[{G.label(g)}].")

    failures = []
    for y in range(G.order):
        for z in range(G.order):
            diff = family.retraction(G.mul(y, z)) - family.retraction(y) - family.retraction(z)
            try:
                res = equivariant_extension_exists(diff, family.B, family.A)
            except NotEquivariantInput as exc:
                failures.append({"y": G.label(y), "z": G.label(z), "reason": str(exc)})
                continue
            if not res.exists:
                failures.append({"y": G.label(y), "z": G.label(z), "r_yz-r_y-r_z": diff.to_json()})
    rep.add("retraction_cocycle_condition", not failures, failures[0] if failures else None,
            detail=f"{G.order ** 2} pairs (y,z) via the extension solver")

    if not rep.passed:
        rep.add("operator_laws", False, "skipped: earlier checks failed")
        return rep
    additive, vanish = _operator_laws(family, cutoff)
    rep.add("theta_additive", *additive, detail=f"classes of degree <= {cutoff}")
    rep.add("theta_composites_vanish", *vanish, detail=f"classes of degree <= {cutoff - 1}")
    return rep


def _operator_laws(family: ThetaFamily, cutoff: int):
    G = family.group
    ctx = family.context(cutoff)
    thetas = {}

    def th(x, n, k):
        key = (x, n, k)
        if key not in thetas:
            thetas[key] = theta_x_cochain(family, x, ctx.basis(n)[k].representative)
        return thetas[key]

    additive = (True, None)
    for x, y in itertools.product(range(G.order), repeat=2):
        for n in range(cutoff + 1):
            for k in range(ctx.dimension(n)):
                diff = th(G.mul(x, y), n, k) - th(x, n, k) - th(y, n, k)
                if not ctx.is_coboundary(diff):
                    additive = (False, {"x": G.label(x), "y": G.label(y), "degree": n, "basis_index": k})
                    break
            if not additive[0]:
                break
        if not additive[0]:
            break
    vanish = (True, None)
    for x, y in itertools.product(range(G.order), repeat=2):
        for n in range(cutoff):
            for k in range(ctx.dimension(n)):
                twice = theta_x_cochain(family, x, th(y, n, k))
                if not ctx.is_coboundary(twice):
                    vanish = (False, {"x": G.label(x), "y": G.label(y), "degree": n, "basis_index": k})
                    break
            if not vanish[0]:
                break
        if not vanish[0]:
            break
    return additive, vanish


# ---------------------------------------------------------------- BD algebra


@dataclass(eq=False)
class BDElement:
    """An element of KG (x) H^{<=D}(G, A) as {(g, degree): coordinate vector mod p}."""

    algebra: "BDAlgebra"
    terms: dict

    def __post_init__(self):
        p = self.algebra.p
        clean = {}
        for (g, n), v in self.terms.items():
            v = np.asarray(v, dtype=np.int64) % p
            if v.any():
                clean[(int(g), int(n))] = v
        self.terms = clean

    def _same(self, other: "BDElement") -> None:
        if other.algebra is not self.algebra:
            raise ContextMismatch("elements belong to different BD algebras")

    def __add__(self, other: "BDElement") -> "BDElement":
        self._same(other)
        out = dict(self.terms)
        for key, v in other.terms.items():
            out[key] = out[key] + v if key in out else v
        return BDElement(self.algebra, out)

    def __neg__(self) -> "BDElement":
        return BDElement(self.algebra, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "BDElement") -> "BDElement":
        return self + (-other)

    def scaled(self, c: int) -> "BDElement":
        return BDElement(self.algebra, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, BDElement) or other.algebra is not self.algebra:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degrees(self) -> set[int]:
        return {n for _, n in self.terms}

    @property
    def degree(self) -> int | None:
        """The degree of a non-zero homogeneous element (None for zero)."""
        degs = self.degrees
        if len(degs) > 1:
            raise MalformedInput(f"element is not homogeneous: degrees {sorted(degs)}")
        return degs.pop() if degs else None

    def to_json(self) -> list:
        G = self.algebra.group
        return [
            {"g": G.label(g), "degree": n, "coords": v.tolist()}
            for (g, n), v in sorted(self.terms.items(), key=lambda t: (t[0][1], t[0][0]))
        ]

    def __repr__(self) -> str:
        G = self.algebra.group
        parts = [f"{G.label(g)}(x){v.tolist()}@H{n}" for (g, n), v in sorted(self.terms.items())]
        return " + ".join(parts) or "0"


class BDAlgebra:
    """Product, bracket and operator on KG (x) H^{<=max_degree}(G, A).

    Cup products and theta_x on basis classes are tabulated once; the three
    operations are then bilinear (resp. linear) table lookups.
    """

    def __init__(self, family: ThetaFamily, max_degree: int):
        p = family.prime
        if p is None:
            raise MalformedInput("coefficients must be a vector space over a prime field")
        self.family = family
        self.group = family.group
        self.p = p
        self.max_degree = max_degree
        self.context = family.context(max_degree)
        ctx = self.context
        self.dims = [ctx.dimension(n) for n in range(max_degree + 1)]
        cups = CupTable(ctx)
        self.cup = {
            (m, n): cups.table(m, n) % p
            for m in range(max_degree + 1)
            for n in range(max_degree + 1 - m)
        }
        self.theta = {}
        for x in range(self.group.order):
            for n in range(max_degree):
                rows = [ctx.coordinates(theta_x_cochain(family, x, c.representative)) for c in ctx.basis(n)]
                self.theta[(x, n)] = (
                    np.array(rows, dtype=np.int64).reshape(self.dims[n], self.dims[n + 1]) % p
                )

    # construction helpers
    def element(self, terms: dict) -> BDElement:
        return BDElement(self, terms)

    def zero(self) -> BDElement:
        return BDElement(self, {})

    def one(self) -> BDElement:
        unit = self.context.class_of(Cochain.constant(self.family.A, self.family.A.unit))
        return BDElement(self, {(self.group.identity, 0): unit.coords})

    def basis_element(self, g: int, n: int, k: int) -> BDElement:
        v = np.zeros(self.dims[n], dtype=np.int64)
        v[k] = 1
        return BDElement(self, {(g, n): v})

    def from_class(self, g: int, c: CohomologyClass) -> BDElement:
        if c.context is not self.context:
            raise ContextMismatch("class comes from a different cohomology context")
        return BDElement(self, {(g, c.degree): c.coords})

    def basis(self, max_degree: int | None = None) -> list[tuple[int, int, int]]:
        """(g, degree, index) triples, ordered by degree, then g, then index."""
        top = self.max_degree if max_degree is None else max_degree
        return [
            (g, n, k)
            for n in range(top + 1)
            for g in range(self.group.order)
            for k in range(self.dims[n])
        ]

    def _check_degree(self, n: int) -> None:
        if n > self.max_degree:
            raise DegreeOverflow(f"result has degree {n} beyond the tabulated {self.max_degree}")

    def _own(self, *elements: BDElement) -> None:
        for e in elements:
            if e.algebra is not self:
                raise ContextMismatch("element belongs to a different BD algebra")

    def _cup(self, a: np.ndarray, m: int, b: np.ndarray, n: int) -> np.ndarray:
        self._check_degree(m + n)
        return np.einsum("i,j,ijk->k", a, b, self.cup[(m, n)]) % self.p

    def _theta(self, x: int, a: np.ndarray, n: int) -> np.ndarray:
        self._check_degree(n + 1)
        return a @ self.theta[(x, n)] % self.p

    def mul(self, u: BDElement, v: BDElement) -> BDElement:
        self._own(u, v)
        out = self.zero()
        G = self.group
        for (g, m), a in u.terms.items():
            for (h, n), b in v.terms.items():
                out = out + BDElement(self, {(G.mul(g, h), m + n): self._cup(a, m, b, n)})
        return out

    def bracket(self, u: BDElement, v: BDElement) -> BDElement:
        self._own(u, v)
        out = self.zero()
        G = self.group
        for (g, m), a in u.terms.items():
            for (h, n), b in v.terms.items():
                first = self._cup(self._theta(h, a, m), m + 1, b, n)
                second = self._cup(a, m, self._theta(g, b, n), n + 1)
                val = (-1) ** m * first + second
                out = out + BDElement(self, {(G.mul(g, h), m + n + 1): val})
        return out

    def delta(self, u: BDElement) -> BDElement:
        self._own(u)
        return BDElement(self, {(g, n + 1): self._theta(g, a, n) for (g, n), a in u.terms.items()})

    def label(self, g: int, n: int, k: int) -> str:
        return f"{self.group.label(g)}(x)H{n}[{k}]"

    def to_instance(self, cutoff: int) -> "GradedAlgebraInstance":
        """Export the tables over the basis through degree ``max_degree``.

        Entries whose result degree exceeds ``max_degree`` are marked
        unknown (-1); the axiom engine never needs them for tuples of total
        degree <= ``cutoff`` when ``cutoff + 2 <= max_degree``.
        """
        basis = self.basis()
        index = {b: i for i, b in enumerate(basis)}
        N = len(basis)
        degrees = np.array([n for _, n, _ in basis], dtype=np.int64)
        mult = np.full((N, N, N), -1, dtype=np.int64)
        brk = np.full((N, N, N), -1, dtype=np.int64)
        op = np.full((N, N), -1, dtype=np.int64)
        elems = [self.basis_element(*b) for b in basis]

        def vec(e: BDElement) -> np.ndarray:
            out = np.zeros(N, dtype=np.int64)
            for (g, n), v in e.terms.items():
                for k, c in enumerate(v):
                    out[index[(g, n, k)]] = c
            return out

        for i, (g, m, _) in enumerate(basis):
            if m + 1 <= self.max_degree:
                op[i] = vec(self.delta(elems[i]))
            for j, (h, n, _) in enumerate(basis):
                if m + n <= self.max_degree:
                    mult[i, j] = vec(self.mul(elems[i], elems[j]))
                if m + n + 1 <= self.max_degree:
                    brk[i, j] = vec(self.bracket(elems[i], elems[j]))
        unit = vec(self.one())
        labels = [self.label(*b) for b in basis]
        return GradedAlgebraInstance(degrees, mult, brk, op, self.p, cutoff, unit=unit, labels=labels)


def bd_mul(u: BDElement, v: BDElement) -> BDElement:
    return u.algebra.mul(u, v)


def bd_bracket(u: BDElement, v: BDElement) -> BDElement:
    return u.algebra.bracket(u, v)


def bd_delta(u: BDElement) -> BDElement:
    return u.algebra.delta(u)


# ---------------------------------------------------------------- generic engine


@dataclass(eq=False)
class GradedAlgebraInstance:
    """Finite tables over a homogeneous basis, coefficients mod ``modulus``.

    ``mult[i, j]`` and ``bracket[i, j]`` are coordinate vectors of the
    product and bracket of basis elements i, j; ``operator[i]`` that of the
    operator applied to i (``None`` for a plain P_r check).  A row equal to
    -1 everywhere marks an entry that was not computed.  Identities are
    checked on basis tuples of total degree <= ``cutoff``.
    """

    degrees: np.ndarray
    mult: np.ndarray
    bracket: np.ndarray
    operator: np.ndarray | None
    modulus: int
    cutoff: int
    unit: np.ndarray | None = None
    labels: list[str] | None = None

    def __post_init__(self):
        self.degrees = np.asarray(self.degrees, dtype=np.int64)
        N = len(self.degrees)
        self.mult = np.asarray(self.mult, dtype=np.int64)
        self.bracket = np.asarray(self.bracket, dtype=np.int64)
        if self.mult.shape != (N, N, N) or self.bracket.shape != (N, N, N):
            raise TablesNotClosed(f"product and bracket tables must have shape {(N, N, N)}")
        if self.operator is not None:
            self.operator = np.asarray(self.operator, dtype=np.int64)
            if self.operator.shape != (N, N):
                raise TablesNotClosed(f"operator table must have shape {(N, N)}")
        if self.unit is not None:
            self.unit = np.asarray(self.unit, dtype=np.int64) % self.modulus

    @property
    def size(self) -> int:
        return len(self.degrees)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"e{i}"


def _known(table: np.ndarray) -> np.ndarray:
    return ~(table < 0).all(axis=-1)


def _degree_check(table, known, expected, degrees) -> tuple[bool, object]:
    """Every non-zero component of table[idx] must have the expected degree."""
    comp_deg = degrees[None] if table.ndim == 2 else degrees[None, None]
    wrong = known[..., None] & (table > 0) & (comp_deg != expected[..., None])
    hit = np.argwhere(wrong)
    if len(hit):
        return False, tuple(int(x) for x in hit[0][:-1])
    return True, None


def verify_pr_axioms(instance: GradedAlgebraInstance, r: int) -> Report:
    """P_r axioms, and BD_r axioms when an operator is present.

    Signs use the shifted degree a' = |a| - r + 1: antisymmetry
    [a,b] = -(-1)^{a'b'}[b,a], Jacobi sum_{cyclic} (-1)^{a'c'}[[a,b],c] = 0,
    Poisson [a,bc] = [a,b]c + (-1)^{a'|b|} b[a,c], and for the operator
    D: D o D = 0 and [a,b] = (-1)^{|a|}D(ab) - (-1)^{|a|}D(a)b - aD(b).
    """
    p = instance.modulus
    deg = instance.degrees
    N = instance.size
    cut = instance.cutoff
    s = 1 - r
    M = instance.mult % p
    Br = instance.bracket % p
    mk, bk = _known(instance.mult), _known(instance.bracket)
    M = np.where(mk[..., None], M, 0)
    Br = np.where(bk[..., None], Br, 0)
    D = None
    if instance.operator is not None:
        dk = _known(instance.operator)
        D = np.where(dk[..., None], instance.operator % p, 0)

    # closure: every entry reachable from tuples within the cutoff must be known
    pair_total = deg[:, None] + deg[None, :]
    need_pairs = pair_total <= cut
    for name, known in (("product", mk), ("bracket", bk)):
        miss = np.argwhere(need_pairs & ~known)
        if len(miss):
            i, j = (int(x) for x in miss[0])
            raise TablesNotClosed(f"{name} of {instance.label(i)} and {instance.label(j)} is missing", witness=(i, j))
    if D is not None:
        miss = np.flatnonzero((deg <= cut) & ~dk)
        if len(miss):
            raise TablesNotClosed(f"operator on {instance.label(int(miss[0]))} is missing", witness=int(miss[0]))

    rep = Report(f"P_{r}" + (f" / BD_{r}" if D is not None else "") + " axioms")
    lab = instance.label

    def witness(idx):
        return [lab(int(i)) for i in idx]

    ok, w = _degree_check(instance.mult % p, mk, pair_total, deg)
    rep.add("product_degree", ok, witness(w) if w else None)
    ok, w = _degree_check(instance.bracket % p, bk, pair_total + s, deg)
    rep.add("bracket_degree", ok, witness(w) if w else None, detail=f"expected |a|+|b|+{s}")
    if D is not None:
        ok, w = _degree_check(instance.operator % p, dk, deg + s, deg)
        rep.add("operator_degree", ok, witness(w) if w else None, detail=f"expected |a|+{s}")

    # tuples whose intermediate results stay inside the known tables;
    # track unknown usage so nothing outside the computed range leaks in
    um = (~mk).astype(np.int64)
    ub = (~bk).astype(np.int64)
    shifted = deg - r + 1
    sign = lambda e: np.where(e % 2 == 0, 1, -1)  # noqa: E731

    pairs = need_pairs
    t1, t2, t3 = np.meshgrid(deg, deg, deg, indexing="ij")
    triples = (t1 + t2 + t3) <= cut

    def first(bad, mask):
        hit = np.argwhere(bad & mask)
        return witness(hit[0]) if len(hit) else None

    # (a) graded commutative associative unital algebra
    ab_c = np.einsum("ijl,lkm->ijkm", M, M) % p
    a_bc = np.einsum("jkl,ilm->ijkm", M, M) % p
    untrusted3 = (np.einsum("ijl,lk->ijk", np.abs(M), um) + np.einsum("jkl,il->ijk", np.abs(M), um)) > 0
    assoc = first((ab_c != a_bc).any(-1), triples & ~untrusted3)
    comm_sign = sign(deg[:, None] * deg[None, :])
    comm = first(((M - comm_sign[..., None] * M.transpose(1, 0, 2)) % p).any(-1), pairs)
    unit_w = None
    if instance.unit is not None:
        eye = np.eye(N, dtype=np.int64)
        left = np.einsum("i,ijk->jk", instance.unit, M) % p
        right = np.einsum("j,ijk->ik", instance.unit, M) % p
        bad = np.flatnonzero(((left != eye) | (right != eye)).any(-1) & (deg <= cut))
        unit_w = [lab(int(bad[0]))] if len(bad) else None
    wit = next(({"kind": k, "tuple": w} for k, w in (("associativity", assoc), ("commutativity", comm), ("unit", unit_w)) if w), None)
    rep.add("graded_commutative_algebra", wit is None, wit)

    # (b) antisymmetry on the shifted grading
    anti_sign = -sign(shifted[:, None] * shifted[None, :])
    anti = first(((Br - anti_sign[..., None] * Br.transpose(1, 0, 2)) % p).any(-1), pairs)
    rep.add("bracket_antisymmetry", anti is None, anti, detail="[a,b] = -(-1)^{a'b'}[b,a], a' = |a|-r+1")

    # (c) Jacobi
    BB = np.einsum("ijl,lkm->ijkm", Br, Br) % p  # [[i,j],k]
    ubb = (np.einsum("ijl,lk->ijk", np.abs(Br), ub)) > 0
    sa, sb, sc = shifted[:, None, None], shifted[None, :, None], shifted[None, None, :]
    jac = (
        sign(sa * sc)[..., None] * BB
        + sign(sb * sa)[..., None] * BB.transpose(2, 0, 1, 3)  # [[j,k],i] placed at (i,j,k)
        + sign(sc * sb)[..., None] * BB.transpose(1, 2, 0, 3)  # [[k,i],j]
    ) % p
    untrusted = ubb | ubb.transpose(2, 0, 1) | ubb.transpose(1, 2, 0)
    jw = first(jac.any(-1), triples & ~untrusted)
    rep.add("jacobi", jw is None, jw, detail="sum over cyclic shifts of (-1)^{a'c'}[[a,b],c]")

    # (d) Poisson: [a, bc] = [a,b]c + (-1)^{a'|b|} b[a,c]
    lhs = np.einsum("jkl,ilm->ijkm", M, Br) % p
    first_t = np.einsum("ijl,lkm->ijkm", Br, M)
    second_t = np.einsum("ikl,jlm->ijkm", Br, M)
    ps = sign(shifted[:, None, None] * deg[None, :, None])
    pois = (lhs - first_t - ps[..., None] * second_t) % p
    untr = (
        (np.einsum("jkl,il->ijk", np.abs(M), ub) > 0)
        | (np.einsum("ijl,lk->ijk", np.abs(Br), um) > 0)
        | (np.einsum("ikl,jl->ijk", np.abs(Br), um) > 0)
    )
    pw = first(pois.any(-1), triples & ~untr)
    rep.add("poisson", pw is None, pw, detail="[a,bc] = [a,b]c + (-1)^{a'|b|} b[a,c]")

    if D is not None:
        single = deg <= cut
        dd = (D @ D) % p
        ud = (np.abs(D) @ (~dk).astype(np.int64)) > 0
        bad = np.flatnonzero(dd.any(-1) & single & ~ud)
        rep.add("delta_squared_zero", not len(bad), [lab(int(bad[0]))] if len(bad) else None)

        sgn = sign(deg)[:, None, None]
        d_ab = np.einsum("ijl,lm->ijm", M, D)
        da_b = np.einsum("il,ljm->ijm", D, M)
        a_db = np.einsum("jl,ilm->ijm", D, M)
        bd = (Br - sgn * d_ab + sgn * da_b + a_db) % p
        untr2 = (
            (np.einsum("ijl,l->ij", np.abs(M), (~dk).astype(np.int64)) > 0)
            | (np.einsum("il,lj->ij", np.abs(D), um) > 0)
            | (np.einsum("jl,il->ij", np.abs(D), um) > 0)
        )
        bw = first(bd.any(-1), pairs & ~untr2)
        rep.add("bd_equation", bw is None, bw, detail="[a,b] = (-1)^{|a|}D(ab) - (-1)^{|a|}D(a)b - aD(b)")
    return rep


def literal_antisymmetry_witness(instance: GradedAlgebraInstance) -> list[str] | None:
    """First basis pair violating [a,b] = (-1)^{(|a|-1)(|b|-1)}[b,a] (no leading minus), if any."""
    p = instance.modulus
    deg = instance.degrees
    Br = instance.bracket % p
    known = _known(instance.bracket)
    sgn = np.where(((deg[:, None] - 1) * (deg[None, :] - 1)) % 2 == 0, 1, -1)
    bad = ((Br - sgn[..., None] * Br.transpose(1, 0, 2)) % p).any(-1)
    mask = (deg[:, None] + deg[None, :] <= instance.cutoff) & known & known.T
    hit = np.argwhere(bad & mask)
    if not len(hit):
        return None
    return [instance.label(int(i)) for i in hit[0]]


def verify_bd_axioms(family: ThetaFamily, cutoff: int = 4, require_valid: bool = True) -> Report:
    """The six BD axiom groups on KG (x) H*(G, A) for basis tuples of total degree <= cutoff.

    With ``require_valid`` (the default) the family must pass
    :func:`validate_situation_starstar` first; turning it off lets negative
    controls exhibit which identity breaks.
    """
    G = family.group
    if not G.is_abelian:
        a, b = next((a, b) for a in range(G.order) for b in range(G.order) if G.mul(a, b) != G.mul(b, a))
        raise NonAbelianGroup("the BD structure needs an abelian group", witness=(G.label(a), G.label(b)))
    if require_valid:
        val = validate_situation_starstar(family, cutoff=max(cutoff, 1))
        if not val.passed:
            names = [c.name for c in val.failures()]
            raise FamilyNotValidated(f"family fails: {names}", witness=val.failures()[0].to_json())
    alg = BDAlgebra(family, cutoff + 2)
    inst = alg.to_instance(cutoff)
    rep = verify_pr_axioms(inst, r=0)
    rep.title = f"BD axioms on KG (x) H*(G,A), total degree <= {cutoff}"
    lit = literal_antisymmetry_witness(inst)
    rep.flags["antisymmetry_without_leading_minus"] = "holds" if lit is None else f"fails at {lit}"
    return rep


def safe_verify_bd_axioms(family: ThetaFamily, cutoff: int = 4) -> Report:
    """Validation followed by the axioms; never raises on a failed family (for reports)."""
    val = validate_situation_starstar(family, cutoff=max(cutoff, 1))
    rep = Report(f"BD axioms on KG (x) H*(G,A), total degree <= {cutoff}")
    rep.extend(val, prefix="family.")
    try:
        ax = verify_bd_axioms(family, cutoff, require_valid=False)
    except BDCohError as exc:
        rep.add("axioms_computable", False, getattr(exc, "witness", None), detail=str(exc))
        return rep
    rep.extend(ax)
    rep.flags.update(ax.flags)
    rep.notes.extend(n for n in val.notes if n not in rep.notes)
    return rep
