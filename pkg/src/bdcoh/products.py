"""Cup products of cochains and cohomology classes."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .cohomology import Cochain, CohomologyClass, CohomologyContext
from .errors import ContextMismatch, GroupMismatch, NotEquivariant, PairingNotBilinear
from .modules import GAlgebra, GModule


@dataclass(eq=False)
class Pairing:
    """A G-equivariant bilinear map left x right -> target.

    ``tensor[i, j]`` is the target element paired from generators e_i, e_j.
    """

    left: GModule
    right: GModule
    target: GModule
    tensor: np.ndarray

    def __post_init__(self):
        a, b, c = self.left.carrier, self.right.carrier, self.target.carrier
        t = np.asarray(self.tensor, dtype=np.int64).reshape(a.dim, b.dim, c.dim) % c.mod_array
        for i in range(a.dim):
            for j in range(b.dim):
                k = gcd(a.moduli[i], b.moduli[j])
                if ((k * t[i, j]) % c.mod_array).any():
                    raise PairingNotBilinear(f"pairing of generators ({i},{j}) ignores their orders", witness=(i, j))
        self.tensor = t
        if not (self.left.group.order == self.right.group.order == self.target.group.order):
            raise GroupMismatch("pairing modules over different groups")
        ea, eb = a.generators(), b.generators()
        for g in range(self.left.group.order):
            for i in range(a.dim):
                for j in range(b.dim):
                    lhs = self.target.act(g, t[i, j])
                    rhs = self(self.left.act(g, ea[i]), self.right.act(g, eb[j]))
                    if not np.array_equal(lhs, rhs):
                        raise NotEquivariant(f"pairing not G-equivariant at g={g}, ({i},{j})", witness=(g, i, j))

    @classmethod
    def of_algebra(cls, alg: GAlgebra) -> "Pairing":
        pairing = cls.__new__(cls)
        pairing.left = pairing.right = pairing.target = alg
        pairing.tensor = alg.mult
        return pairing

    def __call__(self, a, b) -> np.ndarray:
        return np.einsum("...i,...j,ijk->...k", np.asarray(a), np.asarray(b), self.tensor) % self.target.carrier.mod_array


def _pairing_for(phi: Cochain, psi: Cochain, pairing: Pairing | None) -> Pairing:
    if pairing is not None:
        return pairing
    if phi.module is psi.module and isinstance(phi.module, GAlgebra):
        return Pairing.of_algebra(phi.module)
    raise PairingNotBilinear("no pairing given and the coefficients are not one G-algebra")


def cup_cochain(phi: Cochain, psi: Cochain, pairing: Pairing | None = None) -> Cochain:
    """(phi u psi)(g1..g_{m+n}) = mu(phi(g1..gm), (g1...gm) . psi(g_{m+1}..g_{m+n}))."""
    mu = _pairing_for(phi, psi, pairing)
    group = phi.module.group
    if psi.module.group.order != group.order or not np.array_equal(psi.module.group.mult, group.mult):
        raise GroupMismatch("cochains over different groups")
    m = phi.degree
    prod = group.tuple_products(m)
    acted = np.stack([mu.right.act(h, psi.table) for h in range(group.order)])
    moved = acted[prod]  # (|G|^m, |G|^n, dim right)
    out = np.einsum("ia,ijb,abc->ijc", phi.table, moved, mu.tensor) % mu.target.carrier.mod_array
    return Cochain(m + psi.degree, mu.target, out.reshape(-1, mu.target.dim))


def cup_class(alpha: CohomologyClass, beta: CohomologyClass, context: CohomologyContext | None = None,
              pairing: Pairing | None = None) -> CohomologyClass:
    """Class of the cup of representatives, normalised in ``context`` (default: alpha's)."""
    ctx = context or alpha.context
    if context is None and beta.context is not alpha.context:
        raise ContextMismatch("cup of classes from different contexts needs an explicit target context")
    return ctx.class_of(cup_cochain(alpha.representative, beta.representative, pairing))


class CupTable:
    """Cup products of basis classes in a G-algebra context, memoised per degree pair."""

    def __init__(self, context: CohomologyContext):
        self.context = context
        self._cache: dict[tuple[int, int], np.ndarray] = {}

    def table(self, m: int, n: int) -> np.ndarray:
        """Array [i, j] -> coordinates of basis_m[i] u basis_n[j] in H^{m+n}."""
        key = (m, n)
        if key not in self._cache:
            ctx = self.context
            bm, bn = ctx.basis(m), ctx.basis(n)
            out = np.zeros((len(bm), len(bn), ctx.dimension(m + n)), dtype=np.int64)
            for i, a in enumerate(bm):
                for j, b in enumerate(bn):
                    out[i, j] = ctx.coordinates(cup_cochain(a.representative, b.representative))
            self._cache[key] = out
        return self._cache[key]
