"""Finite groups given by multiplication tables, and bar-resolution tuple indexing."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import IndexOutOfRange, MalformedInput, NoIdentity, NoInverse, NonAssociative


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group on the dense elements ``0 .. order-1``.

    Use :func:`validate_group` (or :meth:`cyclic`) to build one; the
    constructor itself trusts its arguments.
    """

    order: int
    mult: np.ndarray
    identity: int
    inverse: np.ndarray
    labels: tuple[str, ...] = field(default=())

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        idx = np.arange(n)
        table = (idx[:, None] + idx[None, :]) % n
        labels = ["1"] + ["x" if k == 1 else f"x^{k}" for k in range(1, n)]
        return validate_group(table, 0, labels=labels)

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return validate_group([[0]], 0, labels=["1"])

    @classmethod
    def product(cls, g: "FiniteGroup", h: "FiniteGroup") -> "FiniteGroup":
        """Direct product; element (a, b) gets index a*|h| + b."""
        n, m = g.order, h.order
        a = np.repeat(np.arange(n), m)
        b = np.tile(np.arange(m), n)
        table = g.mult[a[:, None], a[None, :]] * m + h.mult[b[:, None], b[None, :]]
        labels = [f"({g.label(i)},{h.label(j)})" for i, j in zip(a, b)]
        return validate_group(table, g.identity * m + h.identity, labels=labels)

    def mul(self, g: int, h: int) -> int:
        return int(self.mult[g, h])

    def label(self, g: int) -> str:
        return self.labels[g] if self.labels else str(g)

    def power(self, g: int, k: int) -> int:
        out = self.identity
        for _ in range(k % self.order if self.order else 0):
            out = self.mul(out, g)
        return out

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    @cached_property
    def elements(self) -> range:
        return range(self.order)

    def tuple_products(self, n: int) -> np.ndarray:
        """For every n-tuple index, the index of the product g1*...*gn."""
        out = np.full(self.order**n, self.identity, dtype=np.int64)
        for pos in range(n):
            digit = tuple_digits(self.order, n)[:, pos]
            out = self.mult[out, digit]
        return out

    def to_json(self) -> dict:
        doc = {"order": self.order, "mult": self.mult.tolist(), "identity": self.identity}
        if self.labels:
            doc["labels"] = list(self.labels)
        return doc


def validate_group(mult_table, identity: int, labels=None) -> FiniteGroup:
    """Check the group axioms exhaustively and return a :class:`FiniteGroup`.

    Raises NonAssociative / NoIdentity / NoInverse naming witnessing elements.
    """
    table = np.asarray(mult_table, dtype=np.int64)
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise MalformedInput("multiplication table must be a non-empty square array")
    n = table.shape[0]
    if table.min() < 0 or table.max() >= n:
        raise MalformedInput("multiplication table entries out of range")
    if not 0 <= identity < n:
        raise MalformedInput(f"identity {identity} out of range")

    left = table[table, :]  # left[g, h, k] = (gh)k
    right = table[:, table]  # right[g, h, k] = g(hk)
    bad = np.argwhere(left != right)
    if len(bad):
        g, h, k = (int(v) for v in bad[0])
        raise NonAssociative(f"(g*h)*k != g*(h*k) for g={g}, h={h}, k={k}", witness=(g, h, k))

    idx = np.arange(n)
    for side, row in (("left", table[identity, :]), ("right", table[:, identity])):
        miss = np.flatnonzero(row != idx)
        if len(miss):
            g = int(miss[0])
            raise NoIdentity(f"{identity} is not a {side} identity: fails at g={g}", witness=(identity, g))

    inverse = np.full(n, -1, dtype=np.int64)
    for g in range(n):
        cands = np.flatnonzero((table[g, :] == identity) & (table[:, g] == identity))
        if not len(cands):
            raise NoInverse(f"element {g} has no two-sided inverse", witness=(g,))
        inverse[g] = cands[0]

    if labels is not None and len(labels) != n:
        raise MalformedInput("labels length must equal the group order")
    table.setflags(write=False)
    inverse.setflags(write=False)
    return FiniteGroup(n, table, int(identity), inverse, tuple(labels) if labels else ())


def tuple_encode(elements, order: int) -> int:
    """Big-endian mixed-radix index of a tuple of group elements (g1 most significant)."""
    index = 0
    for g in elements:
        if not 0 <= g < order:
            raise IndexOutOfRange(f"element index {g} not below group order {order}", witness=g)
        index = index * order + int(g)
    return index


def tuple_decode(index: int, n: int, order: int) -> tuple[int, ...]:
    if not 0 <= index < order**n:
        raise IndexOutOfRange(f"tuple index {index} not below {order}^{n}", witness=index)
    digits = []
    for _ in range(n):
        index, g = divmod(index, order)
        digits.append(g)
    return tuple(reversed(digits))


_DIGIT_CACHE: dict[tuple[int, int], np.ndarray] = {}


def tuple_digits(order: int, n: int) -> np.ndarray:
    """Array of shape (order**n, n): row i is tuple_decode(i)."""
    key = (order, n)
    if key not in _DIGIT_CACHE:
        idx = np.arange(order**n, dtype=np.int64)
        cols = [(idx // order ** (n - 1 - pos)) % order for pos in range(n)]
        arr = np.stack(cols, axis=1) if n else np.zeros((1, 0), dtype=np.int64)
        arr.setflags(write=False)
        _DIGIT_CACHE[key] = arr
    return _DIGIT_CACHE[key]
