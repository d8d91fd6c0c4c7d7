"""Finite abelian coefficient groups with G-action, G-algebras, subgroups and maps.

A carrier is Z/m1 + ... + Z/md; its elements are integer vectors with the
i-th entry in [0, mi).  For linear algebra a carrier is embedded in
(Z/N)^d, N = lcm(mi), by scaling the i-th coordinate by N/mi; every kernel,
image and membership question is then answered by a Howell form over Z/N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import gcd, lcm

import numpy as np

from .errors import (
    AlgebraAxiomError,
    MalformedInput,
    NotEquivariant,
    NotEquivariantInput,
    NotWellDefined,
)
from .group import FiniteGroup
from .linalg import GraphForm, HowellBasis, howell_form

ENUMERATION_LIMIT = 10_000


@dataclass(frozen=True)
class Carrier:
    moduli: tuple[int, ...]

    def __post_init__(self):
        if any(int(m) < 2 for m in self.moduli):
            raise MalformedInput(f"every modulus must be >= 2, got {self.moduli}")
        object.__setattr__(self, "moduli", tuple(int(m) for m in self.moduli))

    @property
    def dim(self) -> int:
        return len(self.moduli)

    @cached_property
    def modulus(self) -> int:
        return reduce(lcm, self.moduli, 1)

    @cached_property
    def mod_array(self) -> np.ndarray:
        return np.array(self.moduli, dtype=np.int64)

    @cached_property
    def order(self) -> int:
        return reduce(lambda a, b: a * b, self.moduli, 1)

    def scale(self, modulus: int | None = None) -> np.ndarray:
        n = self.modulus if modulus is None else modulus
        return np.array([n // m for m in self.moduli], dtype=np.int64)

    def normalize(self, v) -> np.ndarray:
        return np.asarray(v, dtype=np.int64) % self.mod_array

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def generators(self) -> np.ndarray:
        return np.eye(self.dim, dtype=np.int64)

    def embed(self, v, modulus: int | None = None) -> np.ndarray:
        return self.normalize(v) * self.scale(modulus)

    def unembed(self, v, modulus: int | None = None) -> np.ndarray:
        return self.normalize(np.asarray(v, dtype=np.int64) // self.scale(modulus))

    def encode(self, v) -> np.ndarray | int:
        """Big-endian mixed-radix index of element(s); last axis is the coordinate."""
        v = self.normalize(v)
        idx = np.zeros(v.shape[:-1], dtype=np.int64)
        for i, m in enumerate(self.moduli):
            idx = idx * m + v[..., i]
        return int(idx) if idx.ndim == 0 else idx

    def decode(self, index) -> np.ndarray:
        index = np.asarray(index, dtype=np.int64)
        out = np.zeros(index.shape + (self.dim,), dtype=np.int64)
        for i in range(self.dim - 1, -1, -1):
            index, out[..., i] = np.divmod(index, self.moduli[i])
        return out

    def elements(self) -> np.ndarray:
        return self.decode(np.arange(self.order))

    def to_json(self) -> list[int]:
        return list(self.moduli)


def _check_matrix_well_defined(matrix: np.ndarray, source: Carrier, target: Carrier, what: str) -> None:
    # column j is killed by m_j^src: M[i, j] * m_j == 0 mod m_i
    bad = (matrix * source.mod_array[None, :]) % target.mod_array[:, None]
    hit = np.argwhere(bad != 0)
    if len(hit):
        i, j = (int(x) for x in hit[0])
        raise NotWellDefined(
            f"{what}: entry ({i},{j}) = {int(matrix[i, j])} does not respect moduli "
            f"Z/{source.moduli[j]} -> Z/{target.moduli[i]}",
            witness=(i, j),
        )


@dataclass(frozen=True, eq=False)
class AdditiveMap:
    """Homomorphism source -> target given by an integer (target.dim x source.dim) matrix."""

    source: Carrier
    target: Carrier
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.int64).reshape(self.target.dim, self.source.dim)
        m = m % self.target.mod_array[:, None]
        _check_matrix_well_defined(m, self.source, self.target, "additive map")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, carrier: Carrier) -> "AdditiveMap":
        return cls(carrier, carrier, np.eye(carrier.dim, dtype=np.int64))

    @classmethod
    def zero(cls, source: Carrier, target: Carrier) -> "AdditiveMap":
        return cls(source, target, np.zeros((target.dim, source.dim), dtype=np.int64))

    def __call__(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        return (v @ self.matrix.T) % self.target.mod_array

    def compose(self, other: "AdditiveMap") -> "AdditiveMap":
        """self o other."""
        if other.target != self.source:
            raise MalformedInput("cannot compose maps with mismatched carriers")
        return AdditiveMap(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other: "AdditiveMap") -> "AdditiveMap":
        return AdditiveMap(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: "AdditiveMap") -> "AdditiveMap":
        return AdditiveMap(self.source, self.target, self.matrix - other.matrix)

    def __neg__(self) -> "AdditiveMap":
        return AdditiveMap(self.source, self.target, -self.matrix)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AdditiveMap)
            and self.source == other.source
            and self.target == other.target
            and np.array_equal(self.matrix, other.matrix)
        )

    __hash__ = None

    def graph(self) -> GraphForm:
        n = lcm(self.source.modulus, self.target.modulus)
        columns = (self.matrix * self.target.scale(n)[:, None]).T % n
        return GraphForm.build(columns, self.source.scale(n), n)

    @cached_property
    def _graph(self) -> GraphForm:
        return self.graph()

    def preimage(self, y) -> np.ndarray | None:
        """Some x with self(x) = y, or None."""
        n = self._graph.basis.modulus
        x = self._graph.preimage(self.target.embed(y, n))
        return None if x is None else self.source.unembed(x, n)

    def is_injective(self) -> bool:
        return self.source.order == image(self).order

    def is_surjective(self) -> bool:
        return image(self).order == self.target.order

    def to_json(self) -> dict:
        return {"matrix": self.matrix.tolist()}


@dataclass(eq=False)
class Subgroup:
    """Subgroup of a carrier generated by ``generators`` (rows, raw coordinates)."""

    ambient: Carrier
    generators: np.ndarray
    basis: HowellBasis = field(init=False, repr=False)

    def __post_init__(self):
        gens = np.asarray(self.generators, dtype=np.int64).reshape(-1, self.ambient.dim)
        gens = self.ambient.normalize(gens)
        self.basis = howell_form(gens * self.ambient.scale()[None, :], self.ambient.modulus)
        self.generators = gens

    @classmethod
    def from_basis(cls, ambient: Carrier, basis: HowellBasis) -> "Subgroup":
        """Subgroup spanned by embedded rows over any multiple of the ambient modulus."""
        if not len(basis):
            return cls(ambient, np.zeros((0, ambient.dim), dtype=np.int64))
        return cls(ambient, basis.rows // ambient.scale(basis.modulus)[None, :])

    @cached_property
    def howell_generators(self) -> np.ndarray:
        """Canonical generating set: the Howell basis rows in raw coordinates."""
        return self.basis.rows // self.ambient.scale()[None, :] if len(self.basis) else np.zeros(
            (0, self.ambient.dim), dtype=np.int64
        )

    @property
    def order(self) -> int:
        return self.basis.order()

    def contains(self, v) -> np.ndarray | bool:
        return self.basis.contains(self.ambient.embed(v))

    def normal_form(self, v) -> np.ndarray:
        """Canonical coset representative of v (raw coordinates)."""
        return self.ambient.unembed(self.basis.reduce(self.ambient.embed(v)))

    def elements(self) -> np.ndarray:
        """All elements, each exactly once (unique Howell coordinates)."""
        gens = self.howell_generators
        out = np.zeros((1, self.ambient.dim), dtype=np.int64)
        for row, p in zip(gens, self.basis.pivot_values):
            k = self.ambient.modulus // int(p)
            out = (out[:, None, :] + np.arange(k)[None, :, None] * row[None, None, :]).reshape(-1, self.ambient.dim)
        return self.ambient.normalize(out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.ambient == other.ambient
            and np.array_equal(self.basis.rows, other.basis.rows)
        )

    __hash__ = None

    def coefficients(self, v) -> np.ndarray | None:
        """Integers c with v = sum c_l * howell_generators[l], or None if v is not a member."""
        if not len(self.howell_generators):
            return None if self.ambient.normalize(v).any() else np.zeros(0, dtype=np.int64)
        return self._generator_map.preimage(v)

    @cached_property
    def _generator_map(self) -> AdditiveMap:
        gens = self.howell_generators
        free = Carrier(tuple([self.ambient.modulus] * len(gens)) or (self.ambient.modulus,))
        mat = gens.T if len(gens) else np.zeros((self.ambient.dim, 1), dtype=np.int64)
        return AdditiveMap(free, self.ambient, mat)

    def relations(self) -> np.ndarray:
        """Generators of the relation module among ``howell_generators``."""
        if not len(self.howell_generators):
            return np.zeros((0, 0), dtype=np.int64)
        return kernel(self._generator_map).howell_generators


def kernel(f: AdditiveMap, verify: bool = True) -> Subgroup:
    """Kernel of f as a subgroup of f.source."""
    sub = Subgroup.from_basis(f.source, f._graph.kernel())
    if verify:
        if f.source.order <= ENUMERATION_LIMIT:
            elems = f.source.elements()
            zero = ~f(elems).any(axis=1)
            if not np.array_equal(zero, sub.contains(elems)):
                raise AssertionError("kernel generators disagree with enumeration")
        elif sub.order * image(f).order != f.source.order:
            raise AssertionError("kernel/image order accounting failed")
    return sub


def image(f: AdditiveMap) -> Subgroup:
    return Subgroup.from_basis(f.target, f._graph.image())


@dataclass(eq=False)
class GModule:
    """A carrier with a left G-action by additive automorphisms.

    ``action[g]`` is the matrix of g acting on the carrier.
    """

    carrier: Carrier
    group: FiniteGroup
    action: np.ndarray

    def __post_init__(self):
        d = self.carrier.dim
        act = np.asarray(self.action, dtype=np.int64).reshape(self.group.order, d, d)
        act = act % self.carrier.mod_array[None, :, None]
        for g in range(self.group.order):
            _check_matrix_well_defined(act[g], self.carrier, self.carrier, f"action of {g}")
        mods = self.carrier.mod_array[:, None]
        eye = np.eye(d, dtype=np.int64) % mods
        if not np.array_equal(act[self.group.identity], eye):
            raise NotEquivariant("identity does not act trivially", witness=(self.group.identity,))
        for g in range(self.group.order):
            for h in range(self.group.order):
                lhs = act[self.group.mul(g, h)]
                rhs = (act[g] @ act[h]) % mods
                if not np.array_equal(lhs, rhs):
                    raise NotEquivariant(f"action(gh) != action(g)action(h) for g={g}, h={h}", witness=(g, h))
        act.setflags(write=False)
        self.action = act

    @classmethod
    def trivial(cls, group: FiniteGroup, carrier: Carrier) -> "GModule":
        eye = np.eye(carrier.dim, dtype=np.int64)
        return cls(carrier, group, np.broadcast_to(eye, (group.order, carrier.dim, carrier.dim)))

    @property
    def dim(self) -> int:
        return self.carrier.dim

    @cached_property
    def is_trivial(self) -> bool:
        eye = np.eye(self.dim, dtype=np.int64) % self.carrier.mod_array[:, None]
        return all(np.array_equal(a, eye) for a in self.action)

    def act(self, g, v) -> np.ndarray:
        """g . v; g may be an int or an index array broadcast against v's leading axes."""
        v = np.asarray(v, dtype=np.int64)
        if np.ndim(g) == 0:
            return (v @ self.action[g].T) % self.carrier.mod_array
        mats = self.action[np.asarray(g)]
        return np.einsum("...ij,...j->...i", mats, v) % self.carrier.mod_array

    def action_map(self, g: int) -> AdditiveMap:
        return AdditiveMap(self.carrier, self.carrier, self.action[g])

    def is_equivariant(self, f: AdditiveMap, target: "GModule") -> tuple[bool, tuple | None]:
        for g in range(self.group.order):
            lhs = (f.matrix @ self.action[g]) % target.carrier.mod_array[:, None]
            rhs = (target.action[g] @ f.matrix) % target.carrier.mod_array[:, None]
            if not np.array_equal(lhs, rhs):
                j = int(np.argwhere(lhs != rhs)[0][1])
                return False, (g, j)
        return True, None

    def to_json(self) -> dict:
        doc = {"moduli": self.carrier.to_json()}
        if not self.is_trivial:
            doc["action"] = {str(g): self.action[g].tolist() for g in range(self.group.order)}
        return doc


@dataclass(eq=False)
class GAlgebra(GModule):
    """A G-module with an associative unital bilinear multiplication.

    ``mult[i, j]`` is the carrier element e_i * e_j.  When
    ``acts_by_automorphisms`` is set, every g must also be a ring map.
    """

    mult: np.ndarray = None
    unit: np.ndarray = None
    acts_by_automorphisms: bool = True

    def __post_init__(self):
        super().__post_init__()
        d = self.dim
        mods = self.carrier.mod_array
        mult = np.asarray(self.mult, dtype=np.int64).reshape(d, d, d) % mods
        unit = self.carrier.normalize(np.asarray(self.unit, dtype=np.int64).reshape(d))
        for i in range(d):
            for j in range(d):
                k = gcd(self.carrier.moduli[i], self.carrier.moduli[j])
                if ((k * mult[i, j]) % mods).any():
                    raise NotWellDefined(
                        f"e_{i}*e_{j} is not killed by gcd of the generator orders", witness=(i, j)
                    )
        mult.setflags(write=False)
        self.mult = mult
        self.unit = unit
        gens = self.carrier.generators()
        for i in range(d):
            if not np.array_equal(self.multiply(unit, gens[i]), gens[i]) or not np.array_equal(
                self.multiply(gens[i], unit), gens[i]
            ):
                raise AlgebraAxiomError(f"unit fails on generator {i}", witness=(i,))
        left = self.multiply(self.multiply(gens[:, None, None], gens[None, :, None]), gens[None, None, :])
        right = self.multiply(gens[:, None, None], self.multiply(gens[None, :, None], gens[None, None, :]))
        bad = np.argwhere((left != right).any(axis=-1))
        if len(bad):
            raise AlgebraAxiomError("multiplication not associative", witness=tuple(int(x) for x in bad[0]))
        if self.acts_by_automorphisms:
            ok, witness = self.check_automorphisms()
            if not ok:
                raise NotEquivariant(f"G does not act by ring automorphisms: {witness}", witness=witness)

    @classmethod
    def trivial_ring(cls, group: FiniteGroup, modulus: int, **kw) -> "GAlgebra":
        """Z/modulus with trivial action."""
        return cls(
            Carrier((modulus,)),
            group,
            np.ones((group.order, 1, 1), dtype=np.int64),
            mult=[[[1]]],
            unit=[1],
            **kw,
        )

    def multiply(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return np.einsum("...i,...j,ijk->...k", a, b, self.mult) % self.carrier.mod_array

    def check_automorphisms(self) -> tuple[bool, tuple | None]:
        gens = self.carrier.generators()
        for g in range(self.group.order):
            if not np.array_equal(self.act(g, self.unit), self.unit):
                return False, ("unit", g)
            for i in range(self.dim):
                for j in range(self.dim):
                    lhs = self.act(g, self.mult[i, j])
                    rhs = self.multiply(self.act(g, gens[i]), self.act(g, gens[j]))
                    if not np.array_equal(lhs, rhs):
                        return False, (g, i, j)
        return True, None

    def to_json(self) -> dict:
        doc = super().to_json()
        doc["mult"] = self.mult.tolist()
        doc["unit"] = self.unit.tolist()
        return doc


def is_ideal(sub: Subgroup, alg: GAlgebra) -> tuple[bool, tuple | None]:
    """Two-sided ideal test on generators (complete by bilinearity).

    Returns (True, None) or (False, (side, k, b)) with k a subgroup generator
    and b a carrier generator such that the product leaves the subgroup.
    """
    gens = alg.carrier.generators()
    for k in sub.howell_generators:
        for b in gens:
            for side, prod in (("left", alg.multiply(b, k)), ("right", alg.multiply(k, b))):
                if not sub.contains(prod):
                    return False, (side, k.tolist(), b.tolist())
    return True, None


@dataclass(eq=False)
class SubgroupMap:
    """Additive map from a subgroup K into a target carrier.

    Stored by the images of K's Howell generators (columns of ``matrix``).
    """

    domain: Subgroup
    target: Carrier
    matrix: np.ndarray

    def __post_init__(self):
        ngen = len(self.domain.howell_generators)
        m = np.asarray(self.matrix, dtype=np.int64).reshape(self.target.dim, ngen) % self.target.mod_array[:, None]
        self.matrix = m
        if ((self.domain.ambient.modulus * m) % self.target.mod_array[:, None]).any():
            raise NotWellDefined("generator images have orders not dividing the ambient exponent")
        for rel in self.domain.relations():
            if ((m @ rel) % self.target.mod_array).any():
                raise NotWellDefined("map does not respect the relations among generators", witness=rel.tolist())

    @classmethod
    def from_function(cls, domain: Subgroup, target: Carrier, fn) -> "SubgroupMap":
        gens = domain.howell_generators
        cols = [target.normalize(fn(k)) for k in gens]
        mat = np.array(cols, dtype=np.int64).T if cols else np.zeros((target.dim, 0), dtype=np.int64)
        return cls(domain, target, mat)

    @classmethod
    def zero(cls, domain: Subgroup, target: Carrier) -> "SubgroupMap":
        return cls(domain, target, np.zeros((target.dim, len(domain.howell_generators)), dtype=np.int64))

    def __call__(self, v) -> np.ndarray:
        c = self.domain.coefficients(v)
        if c is None:
            raise NotWellDefined(f"{np.asarray(v).tolist()} is not in the subgroup", witness=np.asarray(v).tolist())
        return (self.matrix @ c) % self.target.mod_array

    @cached_property
    def lookup(self) -> np.ndarray:
        """Dense table over the ambient carrier: row = image, -1 rows off the subgroup."""
        amb = self.domain.ambient
        table = np.full((amb.order, self.target.dim), -1, dtype=np.int64)
        gens = self.domain.howell_generators
        coeffs = np.zeros((1, len(gens)), dtype=np.int64)
        for l, p in enumerate(self.domain.basis.pivot_values):
            k = amb.modulus // int(p)
            nxt = np.repeat(coeffs, k, axis=0)
            nxt[:, l] = np.tile(np.arange(k), len(coeffs))
            coeffs = nxt
        elems = amb.normalize(coeffs @ gens) if len(gens) else amb.normalize(np.zeros((1, amb.dim), dtype=np.int64))
        vals = (coeffs @ self.matrix.T) % self.target.mod_array if len(gens) else np.zeros((1, self.target.dim), dtype=np.int64)
        table[amb.encode(elems)] = vals
        table.setflags(write=False)
        return table

    def evaluate_many(self, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorised evaluation; returns (images, member_mask)."""
        idx = self.domain.ambient.encode(values)
        out = self.lookup[idx]
        mask = out[..., 0] >= 0
        return np.where(mask[..., None], out, 0), mask

    def _combine(self, other: "SubgroupMap", sign: int) -> "SubgroupMap":
        if not (self.domain == other.domain and self.target == other.target):
            raise MalformedInput("maps live on different subgroups")
        return SubgroupMap(self.domain, self.target, self.matrix + sign * other.matrix)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return SubgroupMap(self.domain, self.target, -self.matrix)

    def scaled(self, k: int) -> "SubgroupMap":
        return SubgroupMap(self.domain, self.target, k * self.matrix)

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubgroupMap)
            and self.domain == other.domain
            and np.array_equal(self.matrix, other.matrix)
        )

    __hash__ = None

    def to_json(self) -> dict:
        return {"generators": self.domain.howell_generators.tolist(), "images": self.matrix.T.tolist()}


def restrict(f: AdditiveMap, sub: Subgroup) -> SubgroupMap:
    if f.source != sub.ambient:
        raise MalformedInput("subgroup does not live in the map's source")
    return SubgroupMap.from_function(sub, f.target, f)


@dataclass
class ExtensionResult:
    exists: bool
    witness: AdditiveMap | None = None


def equivariant_extension_exists(f: SubgroupMap, source: GModule, target: GModule) -> ExtensionResult:
    """Decide whether f = F|_K for a G-equivariant additive F: source -> target.

    Solves the congruence system for F's entries: well-definedness,
    F o g = g o F for every g, and agreement with f on K's generators.
    """
    K = f.domain
    B, A = source.carrier, target.carrier
    gens = K.howell_generators
    for g in range(source.group.order):
        for l, k in enumerate(gens):
            gk = source.act(g, k)
            if not K.contains(gk):
                raise NotEquivariantInput(f"subgroup not G-stable: g={g} moves generator {l} out", witness=(g, l))
            if not np.array_equal(f(gk), target.act(g, f.matrix[:, l])):
                raise NotEquivariantInput(f"f(g k) != g f(k) for g={g}, generator {l}", witness=(g, l))

    da, db = A.dim, B.dim
    var_mod = [A.moduli[i] for i in range(da) for _ in range(db)]

    def var(i, j):
        return i * db + j

    rows, eq_mod, rhs = [], [], []

    def equation(coeffs: dict, modulus: int, value: int = 0):
        row = np.zeros(da * db, dtype=np.int64)
        for v, c in coeffs.items():
            row[v] += c
        rows.append(row)
        eq_mod.append(modulus)
        rhs.append(value)

    for i in range(da):
        for j in range(db):
            equation({var(i, j): B.moduli[j]}, A.moduli[i])
    for g in range(source.group.order):
        ab, aa = source.action[g], target.action[g]
        for i in range(da):
            for j in range(db):
                coeffs: dict[int, int] = {}
                for k in range(db):
                    coeffs[var(i, k)] = coeffs.get(var(i, k), 0) + int(ab[k, j])
                for k in range(da):
                    coeffs[var(k, j)] = coeffs.get(var(k, j), 0) - int(aa[i, k])
                equation(coeffs, A.moduli[i])
    for l, k in enumerate(gens):
        for i in range(da):
            equation({var(i, j): int(k[j]) for j in range(db)}, A.moduli[i], int(f.matrix[i, l]))

    X = Carrier(tuple(var_mod))
    Y = Carrier(tuple(eq_mod))
    system = AdditiveMap(X, Y, np.array(rows, dtype=np.int64))
    x = system.preimage(np.array(rhs, dtype=np.int64))
    if x is None:
        return ExtensionResult(False)
    F = AdditiveMap(B, A, x.reshape(da, db))
    ok, _ = source.is_equivariant(F, target)
    if not ok or not restrict(F, K) == f:
        raise AssertionError("extension witness failed re-check")
    return ExtensionResult(True, F)
