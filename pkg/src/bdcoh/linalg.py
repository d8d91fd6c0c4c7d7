"""Howell normal form and the linear algebra built on it, over Z/NZ.

Over a ring with zero divisors plain row echelon form is not canonical and
does not support membership tests.  The Howell form fixes both: every row
pivot divides N, entries above a pivot are reduced below it, and for every
column c the rows with pivot >= c span exactly the vectors of the row space
that vanish before c.  Reducing a vector against such a basis yields a
canonical representative of its coset.

All arrays are int64 with entries in [0, N); N must stay below ~3e9 so that
products of two entries fit.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def unit_normalizer(a: int, n: int) -> int:
    """A unit u of Z/n with u*a = gcd(a, n) (mod n)."""
    a %= n
    g = gcd(a, n)
    if a == 0:
        return 1
    m = n // g
    u = pow(a // g, -1, m) if m > 1 else 0
    while gcd(u, n) != 1:
        u += m
    return u % n


@dataclass
class HowellBasis:
    """Rows of a Howell form together with their pivot columns and values."""

    rows: np.ndarray
    modulus: int
    pivots: np.ndarray
    pivot_values: np.ndarray

    @classmethod
    def from_rows(cls, rows: np.ndarray, modulus: int) -> "HowellBasis":
        rows = np.asarray(rows, dtype=np.int64)
        if len(rows):
            nz = rows != 0
            pivots = nz.argmax(axis=1)
            values = rows[np.arange(len(rows)), pivots]
        else:
            pivots = np.zeros(0, dtype=np.int64)
            values = np.zeros(0, dtype=np.int64)
        return cls(rows, modulus, pivots.astype(np.int64), values.astype(np.int64))

    @property
    def width(self) -> int:
        return self.rows.shape[1]

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vectors: np.ndarray) -> np.ndarray:
        """Canonical remainder of each row of ``vectors`` modulo the row space."""
        v = np.array(vectors, dtype=np.int64) % self.modulus
        single = v.ndim == 1
        if single:
            v = v[None, :]
        for row, c, p in zip(self.rows, self.pivots, self.pivot_values):
            q = v[:, c] // p
            hit = np.flatnonzero(q)
            if len(hit):
                v[hit, c:] = (v[hit, c:] - q[hit, None] * row[None, c:]) % self.modulus
        return v[0] if single else v

    def contains(self, vectors: np.ndarray) -> np.ndarray | bool:
        red = self.reduce(vectors)
        if red.ndim == 1:
            return not red.any()
        return ~red.any(axis=1)

    def log_order(self) -> dict[int, int]:
        """Prime factorisation of the size of the spanned subgroup."""
        out: dict[int, int] = {}
        for p in self.pivot_values:
            for q, e in _factor(self.modulus // int(p)).items():
                out[q] = out.get(q, 0) + e
        return out

    def order(self) -> int:
        size = 1
        for p in self.pivot_values:
            size *= self.modulus // int(p)
        return size


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def howell_form(matrix, modulus: int) -> HowellBasis:
    """Howell form of the row space of ``matrix`` over Z/modulus."""
    n = int(modulus)
    work = np.array(matrix, dtype=np.int64) % n
    if work.ndim != 2:
        work = work.reshape(len(work), -1)
    nrows, ncols = work.shape
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        live = np.flatnonzero(work[r:, c])
        if not len(live):
            continue
        live += r
        k = live[np.argmin(np.gcd(work[live, c], n))]
        if k != r:
            work[[r, k]] = work[[k, r]]
        _normalize_row(work, r, c, n)
        while True:
            others = np.flatnonzero(work[r + 1 :, c]) + r + 1
            if not len(others):
                break
            p = work[r, c]
            entries = work[others, c]
            stuck = np.flatnonzero(entries % p)
            if not len(stuck):
                q = entries // p
                work[others, c:] = (work[others, c:] - q[:, None] * work[r, c:][None, :]) % n
                break
            i = others[stuck[0]]
            g, s, t = egcd(int(p), int(work[i, c]))
            a, b = int(p) // g, int(work[i, c]) // g
            top = (s * work[r, c:] + t * work[i, c:]) % n
            bottom = (b * work[r, c:] - a * work[i, c:]) % n
            work[r, c:], work[i, c:] = top, bottom
            _normalize_row(work, r, c, n)
        p = int(work[r, c])
        if p != 1:
            extra = (n // p) * work[r] % n
            if extra.any():
                work = np.vstack([work, extra[None, :]])
                nrows += 1
        above = work[:r, c] // p
        hit = np.flatnonzero(above)
        if len(hit):
            work[hit, c:] = (work[hit, c:] - above[hit, None] * work[r, c:][None, :]) % n
        r += 1
    return HowellBasis.from_rows(work[:r], n)


def _normalize_row(work: np.ndarray, r: int, c: int, n: int) -> None:
    u = unit_normalizer(int(work[r, c]), n)
    if u != 1:
        work[r, c:] = work[r, c:] * u % n


def span_elements(rows: np.ndarray, modulus: int, limit: int = 200_000) -> set[tuple[int, ...]]:
    """Brute-force enumeration of a row span (test oracle; small inputs only)."""
    rows = np.asarray(rows, dtype=np.int64) % modulus
    width = rows.shape[1] if rows.ndim == 2 else 0
    seen = {tuple([0] * width)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for v in frontier:
            for row in rows:
                w = tuple(int(x) for x in (np.array(v) + row) % modulus)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    if len(seen) > limit:
                        raise ValueError("span too large to enumerate")
        frontier = nxt
    return seen


@dataclass
class GraphForm:
    """Howell form of the graph {(f(x), x)} of a map (Z/N)^s -> (Z/N)^t.

    The rows with pivots in the first block give a Howell basis of the
    image, the remaining rows a Howell basis of the kernel.
    """

    basis: HowellBasis
    target_width: int

    @classmethod
    def build(cls, columns: np.ndarray, source_scale: np.ndarray, modulus: int) -> "GraphForm":
        """``columns[j]`` is the image of the j-th source generator (embedded)."""
        columns = np.asarray(columns, dtype=np.int64).reshape(len(source_scale), -1)
        graph = np.hstack([columns % modulus, np.diag(np.asarray(source_scale, dtype=np.int64))])
        return cls(howell_form(graph, modulus), columns.shape[1])

    def image(self) -> HowellBasis:
        b = self.basis
        sel = b.pivots < self.target_width
        return HowellBasis(b.rows[sel, : self.target_width], b.modulus, b.pivots[sel], b.pivot_values[sel])

    def kernel(self) -> HowellBasis:
        b = self.basis
        t = self.target_width
        sel = b.pivots >= t
        return HowellBasis(b.rows[sel, t:], b.modulus, b.pivots[sel] - t, b.pivot_values[sel])

    def preimage(self, y: np.ndarray) -> np.ndarray | None:
        """Some embedded x with f(x) = y, or None if y is not in the image."""
        b = self.basis
        y = np.asarray(y, dtype=np.int64)
        v = np.concatenate([y, np.zeros(b.width - self.target_width, dtype=np.int64)])
        red = b.reduce(v)
        if red[: self.target_width].any():
            return None
        return (-red[self.target_width :]) % b.modulus

    def preimage_many(self, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Row-wise preimages of a batch; returns (xs, solvable_mask)."""
        b = self.basis
        ys = np.asarray(ys, dtype=np.int64).reshape(-1, self.target_width)
        pad = np.zeros((len(ys), b.width - self.target_width), dtype=np.int64)
        red = b.reduce(np.hstack([ys, pad]))
        ok = ~red[:, : self.target_width].any(axis=1)
        return (-red[:, self.target_width :]) % b.modulus, ok
