"""Bar-resolution cochains, the coboundary, and cohomology with canonical representatives.

A degree-n cochain is stored densely: ``table[i]`` is the value at the
n-tuple with big-endian index i (see :func:`bdcoh.group.tuple_encode`).
Cochains are all set maps G^n -> A; nothing is normalized.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ContextMismatch, DegreeMismatch, DegreeOverflow, GroupMismatch, NotACocycle
from .group import tuple_digits
from .linalg import GraphForm, HowellBasis, howell_form
from .modules import AdditiveMap, Carrier, GModule, Subgroup, kernel
from .snf import inverse_unimodular, smith_normal_form

DEFAULT_TABLE_LIMIT = 3_000_000


def table_limit() -> int:
    return int(os.environ.get("BDCOH_TABLE_LIMIT", DEFAULT_TABLE_LIMIT))


def _check_size(order: int, degree: int, dim: int) -> None:
    size = order**degree * dim
    if size > table_limit():
        raise DegreeOverflow(
            f"cochain table of degree {degree} has {size} entries, above the limit {table_limit()} "
            "(set BDCOH_TABLE_LIMIT to raise it)"
        )


_MERGE_CACHE: dict[tuple, np.ndarray] = {}


def _merged_index(group, m: int, i: int) -> np.ndarray:
    """For each m-tuple, the index of (g1, ..., g_i g_{i+1}, ..., g_m) as an (m-1)-tuple."""
    key = (group.order, group.mult.tobytes(), m, i)
    if key not in _MERGE_CACHE:
        q = group.order
        d = tuple_digits(q, m)
        merged = group.mult[d[:, i - 1], d[:, i]]
        idx = np.zeros(q**m, dtype=np.int64)
        for pos in range(m):
            if pos == i:
                continue
            digit = merged if pos == i - 1 else d[:, pos]
            idx = idx * q + digit
        _MERGE_CACHE[key] = idx
    return _MERGE_CACHE[key]


@dataclass(eq=False)
class Cochain:
    """A map G^n -> A stored as a (|G|^n, dim A) table."""

    degree: int
    module: GModule
    table: np.ndarray

    def __post_init__(self):
        q, d = self.module.group.order, self.module.dim
        t = np.asarray(self.table, dtype=np.int64)
        if t.shape != (q**self.degree, d):
            t = t.reshape(q**self.degree, d)
        self.table = t % self.module.carrier.mod_array

    @classmethod
    def zero(cls, module: GModule, degree: int) -> "Cochain":
        _check_size(module.group.order, degree, module.dim)
        return cls(degree, module, np.zeros((module.group.order**degree, module.dim), dtype=np.int64))

    @classmethod
    def constant(cls, module: GModule, value) -> "Cochain":
        return cls(0, module, np.asarray(value, dtype=np.int64).reshape(1, module.dim))

    @classmethod
    def from_function(cls, module: GModule, degree: int, fn) -> "Cochain":
        """Tabulate ``fn(*tuple)`` over all degree-tuples of group elements."""
        _check_size(module.group.order, degree, module.dim)
        digits = tuple_digits(module.group.order, degree)
        rows = [np.broadcast_to(np.asarray(fn(*map(int, t)), dtype=np.int64), (module.dim,)) for t in digits]
        return cls(degree, module, np.array(rows).reshape(-1, module.dim))

    @classmethod
    def random(cls, module: GModule, degree: int, rng: np.random.Generator) -> "Cochain":
        q = module.group.order
        table = rng.integers(0, module.carrier.mod_array, size=(q**degree, module.dim))
        return cls(degree, module, table)

    @classmethod
    def from_vector(cls, module: GModule, degree: int, flat) -> "Cochain":
        return cls(degree, module, np.asarray(flat, dtype=np.int64).reshape(-1, module.dim))

    def __call__(self, *elements) -> np.ndarray:
        idx = 0
        for g in elements:
            idx = idx * self.module.group.order + g
        return self.table[idx]

    def _check(self, other: "Cochain") -> None:
        if other.module is not self.module and other.module.carrier != self.module.carrier:
            raise GroupMismatch("cochains over different modules")
        if other.degree != self.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree} differ")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        return Cochain(self.degree, self.module, self.table + other.table)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        return Cochain(self.degree, self.module, self.table - other.table)

    def __neg__(self) -> "Cochain":
        return Cochain(self.degree, self.module, -self.table)

    def scaled(self, k: int) -> "Cochain":
        return Cochain(self.degree, self.module, int(k) * self.table)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cochain)
            and self.degree == other.degree
            and self.module.carrier == other.module.carrier
            and np.array_equal(self.table, other.table)
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.table.any()

    def map_values(self, f: AdditiveMap, module: GModule) -> "Cochain":
        """Post-compose with an additive map into ``module``."""
        return Cochain(self.degree, module, f(self.table))

    def embedded(self) -> np.ndarray:
        """Flat vector in the Z/N embedding (N = carrier exponent)."""
        return (self.table * self.module.carrier.scale()[None, :]).ravel()

    def to_json(self) -> dict:
        return {"degree": self.degree, "table": self.table.tolist()}


def coboundary(phi: Cochain) -> Cochain:
    """The bar coboundary, evaluated entrywise on the whole table."""
    mod = phi.module
    q, n = mod.group.order, phi.degree
    _check_size(q, n + 1, mod.dim)
    size = q ** (n + 1)
    idx = np.arange(size, dtype=np.int64)
    head, rest = np.divmod(idx, q**n)
    out = mod.act(head, phi.table[rest])
    for i in range(1, n + 1):
        term = phi.table[_merged_index(mod.group, n + 1, i)]
        out = out - term if i % 2 else out + term
    last = phi.table[idx // q]
    out = out - last if (n + 1) % 2 else out + last
    return Cochain(n + 1, mod, out)


def is_cocycle(phi: Cochain) -> bool:
    return coboundary(phi).is_zero()


def coboundary_matrix(module: GModule, n: int) -> np.ndarray:
    """Integer matrix of d^n: rows index (n+1)-tuple*dim + i, columns n-tuple*dim + j."""
    q, d = module.group.order, module.dim
    _check_size(q, n + 1, d)
    rows_n, cols_n = q ** (n + 1) * d, q**n * d
    mat = np.zeros((rows_n, cols_n), dtype=np.int64)
    u = np.arange(q ** (n + 1), dtype=np.int64)
    head, rest = np.divmod(u, q**n)
    ii = np.arange(d)
    r_idx = u[:, None, None] * d + ii[None, :, None]
    c_idx = rest[:, None, None] * d + ii[None, None, :]
    np.add.at(mat, (np.broadcast_to(r_idx, (len(u), d, d)), np.broadcast_to(c_idx, (len(u), d, d))), module.action[head])
    diag_rows = (u[:, None] * d + ii[None, :]).ravel()
    for i in range(1, n + 2):
        src = _merged_index(module.group, n + 1, i) if i <= n else u // q
        sign = -1 if i % 2 else 1
        np.add.at(mat, (diag_rows, (src[:, None] * d + ii[None, :]).ravel()), sign)
    return mat % np.tile(module.carrier.mod_array, q ** (n + 1))[:, None]


def invariants(module: GModule) -> Subgroup:
    """A^G as a subgroup of the carrier."""
    d = module.dim
    stacked = np.concatenate([module.action[g] - np.eye(d, dtype=np.int64) for g in range(module.group.order)])
    target = Carrier(module.carrier.moduli * module.group.order)
    return kernel(AdditiveMap(module.carrier, target, stacked))


# Bar-complex linear algebra is used while the coboundary graph has at most
# this many rows (|G|^n * dim A); higher degrees go through a small free
# resolution and comparison maps (see :mod:`bdcoh.resolution`).
BAR_ROWS_LIMIT = 1000


@dataclass
class DegreeData:
    """Normal-form data for one degree of the cochain complex.

    ``engine`` is "bar" when ``cocycles``/``coboundaries`` are Howell bases
    of Z^n and B^n inside the bar complex, and "resolution" when they live in
    the small complex Hom_G(F_n, A) of a free resolution.
    """

    degree: int
    cocycles: HowellBasis
    coboundaries: HowellBasis
    invariant_factors: list[int]
    representatives: list[Cochain]
    quotient_basis: HowellBasis = field(repr=False)
    tag_transform: np.ndarray = field(repr=False)
    tag_count: int = 0
    engine: str = "bar"

    @property
    def order(self) -> int:
        out = 1
        for e in self.invariant_factors:
            out *= e
        return out


@dataclass
class _Quotient:
    factors: list[int]
    reps: list[np.ndarray]
    aug: HowellBasis
    transform: np.ndarray
    tags: int


def _split_quotient(cocycles: HowellBasis, bounds: HowellBasis, N: int) -> _Quotient:
    """Invariant-factor decomposition of Z/B with canonical coordinates.

    Generators of Z not already in B are adjoined one at a time to an
    augmented basis [h | -e_t]; reducing k*h against it exposes the relation
    each new generator satisfies.  A Smith form of the relation matrix gives
    the invariant factors and the change of basis.
    """
    width = cocycles.width
    cands = bounds.reduce(cocycles.rows) if len(cocycles) else np.zeros((0, width), dtype=np.int64)
    cands = cands[cands.any(axis=1)]
    tags = len(cands)
    aug_rows = np.hstack([bounds.rows, np.zeros((len(bounds), tags), dtype=np.int64)]) if len(bounds) else np.zeros((0, width + tags), dtype=np.int64)
    aug = _basis_of(aug_rows, N, width + tags)
    gens: list[np.ndarray] = []
    relations: list[list[int]] = []
    for z in cands:
        red = aug.reduce(np.concatenate([z, np.zeros(tags, dtype=np.int64)]))
        h = red[:width]
        if not h.any():
            continue
        t = len(gens)
        for k in _divisors(N):
            rk = aug.reduce(np.concatenate([(k * h) % N, np.zeros(tags, dtype=np.int64)]))
            if not rk[:width].any():
                order, tau = k, rk[width:]
                break
        relations.append([-int(x) for x in tau[:t]] + [order])
        gens.append(h)
        new_row = np.concatenate([h, np.zeros(tags, dtype=np.int64)])
        new_row[width + t] = (-1) % N
        aug = howell_form(np.vstack([aug.rows, new_row]) if len(aug) else new_row[None, :], N)
    t = len(gens)
    if t:
        rel_matrix = [row + [0] * (t - len(row)) for row in relations]
        diag, _, v = smith_normal_form(rel_matrix)
        v_inv = inverse_unimodular(v)
        gen_arr = np.array(gens, dtype=np.int64)
        keep = [k for k in range(t) if diag[k] != 1]
        factors = [int(diag[k]) for k in keep]
        reps = [bounds.reduce((np.array(v_inv[k], dtype=np.int64) % N) @ gen_arr % N) for k in keep]
        transform = np.array(v, dtype=object)[:, keep] if keep else np.zeros((t, 0), dtype=object)
    else:
        factors, reps, transform = [], [], np.zeros((0, 0), dtype=object)
    return _Quotient(factors, reps, aug, transform, tags)


def _empty_basis(width: int, modulus: int) -> HowellBasis:
    z = np.zeros(0, dtype=np.int64)
    return HowellBasis(np.zeros((0, width), dtype=np.int64), modulus, z, z)


class CohomologyContext:
    """H^n(G, A) for n <= max_degree, with canonical class coordinates.

    For each degree the Howell form of the graph of d^n gives a Howell basis
    of Z^n and of B^{n+1} at once.  H^n is then split into invariant
    factors by a Smith form of the small relation matrix among the
    generators of Z^n not already in B^n.

    ``engine`` picks the linear algebra: "bar" works in the bar complex in
    every degree, "resolution" in the small complex of a free resolution,
    and "auto" (default) uses the bar complex while its coboundary graph has
    at most ``BAR_ROWS_LIMIT`` rows.  Cochains, representatives and classes
    are bar cochains in every case.
    """

    def __init__(self, module: GModule, max_degree: int, engine: str = "auto"):
        _check_size(module.group.order, max_degree + 1, module.dim)
        if engine not in ("auto", "bar", "resolution"):
            raise ValueError(f"unknown engine {engine!r}")
        self.module = module
        self.group = module.group
        self.max_degree = max_degree
        self.modulus = module.carrier.modulus
        self.resolution = None
        self._degrees: dict[int, DegreeData] = {}
        q, d = self.group.order, module.dim
        if engine == "bar":
            bar_top = max_degree
        elif engine == "resolution":
            bar_top = -1
        else:
            bar_top = -1
            while bar_top < max_degree and q ** (bar_top + 1) * d <= BAR_ROWS_LIMIT:
                bar_top += 1
        prev_image = _empty_basis(d, self.modulus)
        for n in range(bar_top + 1):
            graph = self._graph(n)
            self._degrees[n] = self._split(n, graph.kernel(), prev_image)
            prev_image = graph.image()
        self.top_coboundaries = prev_image if bar_top == max_degree else None
        if bar_top < max_degree:
            self._build_small(bar_top + 1)

    def _graph(self, n: int) -> GraphForm:
        mod = self.module
        q = self.group.order
        mat = coboundary_matrix(mod, n)
        tgt_scale = np.tile(mod.carrier.scale(), q ** (n + 1))
        cols = (mat * tgt_scale[:, None]).T % self.modulus
        return GraphForm.build(cols, np.tile(mod.carrier.scale(), q**n), self.modulus)

    def _split(self, n: int, cocycles: HowellBasis, bounds: HowellBasis) -> DegreeData:
        N = self.modulus
        quo = _split_quotient(cocycles, bounds, N)
        scale = np.tile(self.module.carrier.scale(), self.group.order**n)
        reps = [Cochain.from_vector(self.module, n, r // scale) for r in quo.reps]
        data = DegreeData(n, cocycles, bounds, quo.factors, reps, quo.aug, quo.transform, quo.tags)
        if cocycles.order() != bounds.order() * data.order:
            raise AssertionError(f"order accounting failed in degree {n}")
        return data

    # ------------------------------------------------ resolution engine

    def _small_carrier(self, n: int) -> Carrier:
        return Carrier(self.module.carrier.moduli * self.resolution.ranks[n])

    def _small_differential(self, n: int) -> AdditiveMap:
        """delta^n: Hom_G(F_n, A) -> Hom_G(F_{n+1}, A), (delta c)(e_j) = c(d e_j)."""
        R, mod = self.resolution, self.module
        d = mod.dim
        D = R.D[n + 1]
        mat = np.zeros((R.ranks[n + 1] * d, R.ranks[n] * d), dtype=np.int64)
        for j in range(R.ranks[n + 1]):
            for i in range(R.ranks[n]):
                block = np.einsum("h,hab->ab", D[j, i], mod.action)
                mat[j * d : (j + 1) * d, i * d : (i + 1) * d] = block
        tgt = self._small_carrier(n + 1)
        return AdditiveMap(self._small_carrier(n), tgt, mat % tgt.mod_array[:, None])

    def _build_small(self, first: int) -> None:
        from .resolution import FreeResolution

        N = self.modulus
        self.resolution = FreeResolution(self.group, N, self.max_degree + 1)
        prev_image = None
        if first > 0:
            prev_image = self._small_differential(first - 1).graph().image()
        for n in range(first, self.max_degree + 1):
            graph = self._small_differential(n).graph()
            cocycles = graph.kernel()
            bounds = prev_image if prev_image is not None else _empty_basis(cocycles.width, N)
            quo = _split_quotient(cocycles, bounds, N)
            carrier = self._small_carrier(n)
            reps = [self._push_forward(n, carrier.unembed(r, N)) for r in quo.reps]
            data = DegreeData(n, cocycles, bounds, quo.factors, reps, quo.aug, quo.transform, quo.tags, engine="resolution")
            if cocycles.order() != bounds.order() * data.order:
                raise AssertionError(f"order accounting failed in degree {n}")
            self._degrees[n] = data
            prev_image = graph.image()
        self._small_top = prev_image

    def _push_forward(self, n: int, small: np.ndarray) -> Cochain:
        """The bar cocycle c o f_n for a small cocycle c (values on generators)."""
        R, mod = self.resolution, self.module
        c = np.asarray(small, dtype=np.int64).reshape(R.ranks[n], mod.dim)
        acted = np.stack([mod.act(h, c) for h in range(self.group.order)])  # (q, r, d)
        f = R.from_bar(n)  # (q^n, r, q)
        table = np.einsum("tih,hid->td", f, acted)
        return Cochain(n, mod, table)

    def _pull_back(self, phi: Cochain) -> np.ndarray:
        """Embedded small cochain phi o g_n (values on the generators of F_n)."""
        R = self.resolution
        vals = [
            (coefs[:, None] * phi.table[codes]).sum(axis=0) if len(codes) else np.zeros(self.module.dim, dtype=np.int64)
            for codes, coefs in R.pullback_plan(phi.degree)
        ]
        carrier = self._small_carrier(phi.degree)
        return carrier.embed(np.concatenate(vals), self.modulus)

    def _embedded(self, phi: Cochain, data: DegreeData) -> np.ndarray:
        return self._pull_back(phi) if data.engine == "resolution" else phi.embedded()

    # ------------------------------------------------ queries

    def degree_data(self, n: int) -> DegreeData:
        if n not in self._degrees:
            raise DegreeOverflow(f"degree {n} beyond context max_degree {self.max_degree}")
        return self._degrees[n]

    def engine(self, n: int) -> str:
        return self.degree_data(n).engine

    def invariant_factors(self, n: int) -> list[int]:
        return list(self.degree_data(n).invariant_factors)

    def order(self, n: int) -> int:
        return self.degree_data(n).order

    def dimension(self, n: int) -> int:
        return len(self.degree_data(n).invariant_factors)

    def coordinates(self, phi: Cochain) -> np.ndarray:
        """Coordinates of the class of a cocycle in the invariant-factor basis."""
        self._own(phi)
        if not is_cocycle(phi):
            raise NotACocycle(f"degree-{phi.degree} cochain is not a cocycle")
        data = self.degree_data(phi.degree)
        vec = self._embedded(phi, data)
        width = len(vec)
        red = data.quotient_basis.reduce(np.concatenate([vec, np.zeros(data.tag_count, dtype=np.int64)]))
        if red[:width].any():
            raise AssertionError("cocycle escaped Z^n; context is inconsistent")
        tau = [int(x) for x in red[width:]]
        out = []
        for k, e in enumerate(data.invariant_factors):
            out.append(sum(tau[j] * int(data.tag_transform[j, k]) for j in range(data.tag_transform.shape[0])) % e)
        return np.array(out, dtype=np.int64)

    def _own(self, phi: Cochain) -> None:
        if phi.module.carrier != self.module.carrier or phi.module.group.order != self.group.order:
            raise ContextMismatch("cochain does not live over this context's module")

    def class_of(self, phi: Cochain) -> "CohomologyClass":
        return CohomologyClass(phi.degree, phi, self.coordinates(phi), self)

    def is_coboundary(self, phi: Cochain) -> bool:
        """Membership in B^n, for n up to max_degree + 1."""
        self._own(phi)
        if phi.degree == 0:
            return phi.is_zero()
        if phi.degree == self.max_degree + 1:
            if self.top_coboundaries is not None:
                return bool(self.top_coboundaries.contains(phi.embedded()))
            return is_cocycle(phi) and bool(self._small_top.contains(self._pull_back(phi)))
        data = self.degree_data(phi.degree)
        if data.engine == "resolution":
            return is_cocycle(phi) and bool(data.coboundaries.contains(self._pull_back(phi)))
        return bool(data.coboundaries.contains(phi.embedded()))

    def is_cohomologous(self, phi: Cochain, psi: Cochain) -> bool:
        if phi.degree != psi.degree:
            raise DegreeMismatch(f"degrees {phi.degree} and {psi.degree} differ")
        for c in (phi, psi):
            if not is_cocycle(c):
                raise NotACocycle(f"degree-{c.degree} cochain is not a cocycle")
        return self.is_coboundary(phi - psi)

    def basis(self, n: int) -> list["CohomologyClass"]:
        data = self.degree_data(n)
        out = []
        for k, rep in enumerate(data.representatives):
            coords = np.zeros(len(data.invariant_factors), dtype=np.int64)
            coords[k] = 1
            out.append(CohomologyClass(n, rep, coords, self))
        return out

    def from_coordinates(self, n: int, coords) -> "CohomologyClass":
        data = self.degree_data(n)
        coords = np.asarray(coords, dtype=np.int64).reshape(len(data.invariant_factors))
        coords = coords % np.array(data.invariant_factors, dtype=np.int64) if len(coords) else coords
        rep = Cochain.zero(self.module, n)
        for c, r in zip(coords, data.representatives):
            if c:
                rep = rep + r.scaled(int(c))
        return CohomologyClass(n, rep, coords, self)

    def zero_class(self, n: int) -> "CohomologyClass":
        return self.from_coordinates(n, np.zeros(self.dimension(n), dtype=np.int64))

    @cached_property
    def h0(self) -> Subgroup:
        return invariants(self.module)


@dataclass(eq=False)
class CohomologyClass:
    degree: int
    representative: Cochain
    coords: np.ndarray
    context: CohomologyContext

    def _same(self, other: "CohomologyClass") -> None:
        if other.context is not self.context:
            raise ContextMismatch("classes from different contexts")
        if other.degree != self.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree} differ")

    def __eq__(self, other) -> bool:
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        self._same(other)
        return bool(np.array_equal(self.coords, other.coords))

    __hash__ = None

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        self._same(other)
        return self.context.class_of(self.representative + other.representative)

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        self._same(other)
        return self.context.class_of(self.representative - other.representative)

    def __neg__(self) -> "CohomologyClass":
        return self.context.class_of(-self.representative)

    def scaled(self, k: int) -> "CohomologyClass":
        return self.context.class_of(self.representative.scaled(k))

    def is_zero(self) -> bool:
        return not self.coords.any()

    def normalized(self) -> "CohomologyClass":
        """Same class with the canonical basis-combination representative."""
        return self.context.from_coordinates(self.degree, self.coords)

    def __repr__(self) -> str:
        return f"CohomologyClass(degree={self.degree}, coords={self.coords.tolist()})"


def build_context(module: GModule, max_degree: int) -> CohomologyContext:
    return CohomologyContext(module, max_degree)


def class_of(context: CohomologyContext, phi: Cochain) -> CohomologyClass:
    return context.class_of(phi)


def is_cohomologous(context: CohomologyContext, phi: Cochain, psi: Cochain) -> bool:
    return context.is_cohomologous(phi, psi)


def classes_equal(a: CohomologyClass, b: CohomologyClass) -> bool:
    return a == b


def _basis_of(rows: np.ndarray, modulus: int, width: int) -> HowellBasis:
    if not len(rows):
        return HowellBasis(np.zeros((0, width), dtype=np.int64), modulus, np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    return howell_form(rows, modulus)


def _divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]
