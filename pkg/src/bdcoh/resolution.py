"""A small free resolution of Z/N over (Z/N)G, with comparison maps to the bar resolution.

The bar complex has |G|^n generators in degree n, which makes dense linear
algebra hopeless past moderate degrees.  Here each syzygy module is
computed as a Howell kernel and covered greedily by few G-generators, so
F_n = ((Z/N)G)^{r_n} with r_n usually tiny.  Two G-equivariant chain maps
connect it to the (homogeneous) bar resolution:

* ``to_bar``: F -> Bar, built with the contraction (g0..gk) -> (1, g0..gk);
  pulling a bar cocycle back along it gives a small cocycle with the same class.
* ``from_bar``: Bar -> F on the tuples (1, g1, g1g2, ...), solved degree by
  degree; composing a small cocycle with it gives a bar cocycle.

Vectors of F_n are indexed by (generator j, group element h) -> j*|G| + h,
meaning the basis element h e_j.
"""

from __future__ import annotations

import numpy as np

from .group import FiniteGroup
from .linalg import GraphForm, HowellBasis, howell_form


def _act(group: FiniteGroup, g, vecs: np.ndarray) -> np.ndarray:
    """Left multiplication by g on F-vectors of shape (..., r, q); g scalar or per-row array."""
    inv_g = group.inverse[np.asarray(g)]
    perm = group.mult[inv_g]  # perm[..., k] = g^{-1} k
    if np.ndim(g) == 0:
        return vecs[..., perm]
    idx = np.broadcast_to(perm[:, None, :], vecs.shape)
    return np.take_along_axis(vecs, idx, axis=-1)


def _boundary_matrix(group: FiniteGroup, D: np.ndarray, modulus: int) -> np.ndarray:
    """Columns: images of h e_i for i < r_n, h in G (flattened), rows: F_{n-1} coordinates."""
    q = group.order
    r_n, r_prev = D.shape[0], D.shape[1]
    cols = np.zeros((r_n, q, r_prev, q), dtype=np.int64)
    for h in range(q):
        cols[:, h] = _act(group, h, D)
    return cols.reshape(r_n * q, r_prev * q).T % modulus


class FreeResolution:
    """F_L -> ... -> F_0 -> Z/N -> 0 with differentials ``D[n][i, j, h]``.

    d(e_i) = sum_{j,h} D[n][i, j, h] * h e_j for a generator e_i of F_n.
    """

    def __init__(self, group: FiniteGroup, modulus: int, length: int):
        self.group = group
        self.modulus = modulus
        self.ranks = [1]
        self.D: list[np.ndarray | None] = [None]
        self._graphs: list[GraphForm | None] = [None]
        q, N = group.order, modulus
        aug = GraphForm.build(np.ones((q, 1), dtype=np.int64), np.ones(q, dtype=np.int64), N)
        kern = aug.kernel()
        for n in range(1, length + 1):
            gens = self._generators(kern, self.ranks[-1])
            D = gens.reshape(len(gens), self.ranks[-1], q)
            mat = _boundary_matrix(group, D, N)
            graph = GraphForm.build(mat.T, np.ones(mat.shape[1], dtype=np.int64), N)
            self.D.append(D)
            self.ranks.append(len(gens))
            self._graphs.append(graph)
            kern = graph.kernel()
        self._to_bar: list[list[tuple[np.ndarray, np.ndarray]]] = []
        self._from_bar: list[np.ndarray] = []

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def _orbit_rows(self, v: np.ndarray, r: int) -> np.ndarray:
        q = self.group.order
        vv = v.reshape(r, q)
        return np.stack([_act(self.group, g, vv).ravel() for g in range(q)])

    def _generators(self, kern: HowellBasis, r_prev: int) -> np.ndarray:
        """Few vectors whose G-orbits span ``kern``, chosen greedily by span size."""
        N = self.modulus
        width = kern.width
        target = kern.order()
        chosen: list[np.ndarray] = []
        span_rows = np.zeros((0, width), dtype=np.int64)
        size = 1
        cands = list(kern.rows)
        while size < target:
            best, best_size, best_rows = None, size, None
            for c in cands:
                rows = np.vstack([span_rows, self._orbit_rows(c, r_prev)])
                s = howell_form(rows, N).order()
                if s > best_size:
                    best, best_size, best_rows = c, s, rows
            if best is None:
                raise AssertionError("kernel rows do not generate the kernel")
            chosen.append(best)
            span_rows = howell_form(best_rows, N).rows
            size = best_size
        if not chosen:
            return np.zeros((0, width), dtype=np.int64)
        return np.array(chosen, dtype=np.int64)

    # ----------------------------------------------------------- F -> Bar

    def to_bar(self, n: int) -> list[tuple[np.ndarray, np.ndarray]]:
        """For each generator e_i of F_n: (homogeneous tuples (T, n+1), coefficients (T,))."""
        while len(self._to_bar) <= n:
            k = len(self._to_bar)
            if k == 0:
                self._to_bar.append([(np.array([[self.group.identity]], dtype=np.int64), np.array([1], dtype=np.int64))])
                continue
            prev = self._to_bar[k - 1]
            D = self.D[k]
            out = []
            for i in range(self.ranks[k]):
                tups, coefs = [], []
                for j, h in zip(*np.nonzero(D[i])):
                    t, c = prev[j]
                    tups.append(self.group.mult[h, t])
                    coefs.append(c * D[i, j, h])
                if tups:
                    t = np.vstack(tups)
                    c = np.concatenate(coefs)
                    t = np.hstack([np.full((len(t), 1), self.group.identity, dtype=np.int64), t])
                    out.append(self._merge(t, c))
                else:
                    out.append((np.zeros((0, k + 1), dtype=np.int64), np.zeros(0, dtype=np.int64)))
            self._to_bar.append(out)
        return self._to_bar[n]

    def _merge(self, tuples: np.ndarray, coefs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        q = self.group.order
        codes = np.zeros(len(tuples), dtype=np.int64)
        for col in tuples.T:
            codes = codes * q + col
        uniq, inv = np.unique(codes, return_inverse=True)
        summed = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(summed, inv, coefs % self.modulus)
        summed %= self.modulus
        keep = summed != 0
        first = np.zeros(len(uniq), dtype=np.int64)
        first[inv[::-1]] = np.arange(len(inv))[::-1]
        return tuples[first[keep]], summed[keep]

    def pullback_plan(self, n: int) -> list[tuple[np.ndarray, np.ndarray]]:
        """For each generator: (inhomogeneous tuple indices, coefficients) of its bar image.

        Every homogeneous tuple produced by ``to_bar`` starts with the identity,
        so a bar cochain z evaluates on it as z(g0^{-1} g1, ..., g_{n-1}^{-1} g_n).
        """
        q = self.group.order
        plans = []
        for tups, coefs in self.to_bar(n):
            codes = np.zeros(len(tups), dtype=np.int64)
            for k in range(1, n + 1):
                step = self.group.mult[self.group.inverse[tups[:, k - 1]], tups[:, k]]
                codes = codes * q + step
            plans.append((codes, coefs))
        return plans

    # ----------------------------------------------------------- Bar -> F

    def from_bar(self, n: int) -> np.ndarray:
        """Array (|G|^n, r_n, |G|): the image of (1, g1, g1g2, ..., g1...gn) for each n-tuple."""
        from .cohomology import _merged_index

        G, q, N = self.group, self.group.order, self.modulus
        while len(self._from_bar) <= n:
            k = len(self._from_bar)
            if k == 0:
                f0 = np.zeros((1, 1, q), dtype=np.int64)
                f0[0, 0, G.identity] = 1
                self._from_bar.append(f0)
                continue
            prev = self._from_bar[k - 1]
            size = q**k
            idx = np.arange(size, dtype=np.int64)
            head, tail = np.divmod(idx, q ** (k - 1))
            y = _act(G, head, prev[tail])
            for i in range(1, k + 1):
                src = _merged_index(G, k, i) if i < k else idx // q
                y = y - prev[src] if i % 2 else y + prev[src]
            y %= N
            xs, ok = self._graphs[k].preimage_many(y.reshape(size, -1))
            if not ok.all():
                raise AssertionError(f"comparison map Bar -> F fails in degree {k}")
            self._from_bar.append(xs.reshape(size, self.ranks[k], q))
        return self._from_bar[n]
