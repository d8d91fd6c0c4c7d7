"""JSON input/output for groups, modules, algebras, short exact sequences and families.

Schemas (all integers):

* group: ``{"cyclic": n}`` or ``{"order": n, "mult": [[...]], "identity": i, "labels": [...]}``;
  an optional ``"product": [g, h]`` builds a direct product of two group documents.
* module: ``{"moduli": [...], "action": {g: matrix}}``; missing action entries
  mean the identity.  Group elements may be written as indices or labels.
* algebra: a module plus ``"mult"`` (d x d x d structure constants, ``mult[i][j]`` is
  e_i * e_j) and ``"unit"``.  Both default to the ring structure of Z/m when d = 1.
* SES: ``{"group", "A", "B", "iota", "pi", "s", "r"}`` where ``s`` lists the lift of
  every element of A (in mixed-radix order) and ``r`` is either
  ``{"generators": [...], "images": [...]}`` on generators of Ker pi or
  ``{"matrix": [[...]]}`` for a map B -> A restricted to Ker pi.
* family: ``{"group", "A", "B", "pi", "s", "members": {g: {"iota", "r"} | "zero"}}``.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

import numpy as np

from .bd import ThetaFamily
from .connecting import ShortExactSequence
from .errors import MalformedInput
from .group import FiniteGroup, validate_group
from .modules import AdditiveMap, Carrier, GAlgebra, GModule, Subgroup, SubgroupMap, kernel


def load_source(value: str) -> Any:
    """Parse a JSON document given inline, as a file path, or as ``-`` for standard input."""
    text = value
    if value == "-":
        text = sys.stdin.read()
    elif not value.lstrip().startswith(("{", "[")):
        try:
            text = Path(value).read_text()
        except OSError as exc:
            raise MalformedInput(f"cannot read {value}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc


def _require(doc: Any, key: str, what: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise MalformedInput(f"{what} is missing the '{key}' field")
    return doc[key]


def _int_array(value: Any, what: str) -> np.ndarray:
    try:
        arr = np.array(value, dtype=object)
        if arr.dtype == object and arr.size and not all(isinstance(x, (int, np.integer)) and not isinstance(x, bool) for x in arr.ravel()):
            raise ValueError
        return np.array(value, dtype=np.int64)
    except (ValueError, TypeError, OverflowError) as exc:
        raise MalformedInput(f"{what} must be a rectangular array of integers") from exc


def group_from_json(doc: Any) -> FiniteGroup:
    if not isinstance(doc, dict):
        raise MalformedInput("group must be a JSON object")
    if "cyclic" in doc:
        n = doc["cyclic"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise MalformedInput("'cyclic' must be a positive integer")
        return FiniteGroup.cyclic(n)
    if "product" in doc:
        parts = doc["product"]
        if not isinstance(parts, list) or len(parts) != 2:
            raise MalformedInput("'product' must list exactly two groups")
        return FiniteGroup.product(group_from_json(parts[0]), group_from_json(parts[1]))
    mult = _int_array(_require(doc, "mult", "group"), "group mult")
    identity = doc.get("identity", 0)
    if "order" in doc and mult.shape[:1] != (doc["order"],):
        raise MalformedInput(f"group order {doc['order']} does not match the table size")
    return validate_group(mult, int(identity), labels=doc.get("labels"))


def element_index(group: FiniteGroup, key: Any) -> int:
    """Resolve a group element written as an index, a numeric string, or a label."""
    if isinstance(key, int) and not isinstance(key, bool):
        idx = key
    elif isinstance(key, str) and key in group.labels:
        idx = group.labels.index(key)
    elif isinstance(key, str) and key.lstrip("-").isdigit():
        idx = int(key)
    else:
        raise MalformedInput(f"unknown group element {key!r}")
    if not 0 <= idx < group.order:
        raise MalformedInput(f"group element {key!r} out of range")
    return idx


def _action(group: FiniteGroup, carrier: Carrier, doc: dict) -> np.ndarray:
    d = carrier.dim
    act = np.tile(np.eye(d, dtype=np.int64), (group.order, 1, 1))
    given = doc.get("action", {})
    if isinstance(given, list):
        given = dict(enumerate(given))
    if not isinstance(given, dict):
        raise MalformedInput("'action' must map group elements to matrices")
    for key, mat in given.items():
        m = _int_array(mat, f"action matrix of {key}")
        if m.shape != (d, d):
            raise MalformedInput(f"action matrix of {key} must be {d}x{d}")
        act[element_index(group, key)] = m
    return act


def _carrier(doc: Any, what: str) -> Carrier:
    moduli = _int_array(_require(doc, "moduli", what), f"{what} moduli")
    if moduli.ndim != 1 or not len(moduli):
        raise MalformedInput(f"{what} moduli must be a non-empty list")
    return Carrier(tuple(int(m) for m in moduli))


def module_from_json(doc: Any, group: FiniteGroup) -> GModule:
    """A G-module; algebra fields, if present, are ignored."""
    carrier = _carrier(doc, "module")
    return GModule(carrier, group, _action(group, carrier, doc))


def algebra_from_json(doc: Any, group: FiniteGroup) -> GAlgebra:
    carrier = _carrier(doc, "algebra")
    d = carrier.dim
    if "mult" in doc:
        mult = _int_array(doc["mult"], "algebra mult")
        if mult.shape != (d, d, d):
            raise MalformedInput(f"algebra mult must have shape {d}x{d}x{d}")
    elif d == 1:
        mult = np.ones((1, 1, 1), dtype=np.int64)
    else:
        raise MalformedInput("algebra needs 'mult' structure constants")
    if "unit" in doc:
        unit = _int_array(doc["unit"], "algebra unit")
        if unit.shape != (d,):
            raise MalformedInput(f"algebra unit must have length {d}")
    elif d == 1:
        unit = np.ones(1, dtype=np.int64)
    else:
        raise MalformedInput("algebra needs a 'unit'")
    return GAlgebra(carrier, group, _action(group, carrier, doc), mult=mult, unit=unit)


def _map(doc: Any, source: Carrier, target: Carrier, what: str) -> AdditiveMap:
    mat = doc.get("matrix") if isinstance(doc, dict) else doc
    m = _int_array(mat, what)
    if m.shape != (target.dim, source.dim):
        raise MalformedInput(f"{what} must be a {target.dim}x{source.dim} matrix")
    return AdditiveMap(source, target, m)


def _section(value: Any, A: GAlgebra, B: GAlgebra) -> np.ndarray:
    s = _int_array(value, "section s")
    s = s.reshape(len(s), -1) if s.ndim == 1 and B.dim == 1 else s
    if s.shape != (A.carrier.order, B.dim):
        raise MalformedInput(f"section s must list {A.carrier.order} elements of B")
    return s


def retraction_from_json(doc: Any, K: Subgroup, B: GAlgebra, A: GAlgebra) -> SubgroupMap:
    """A map Ker pi -> A given on generators or as the restriction of a matrix."""
    if isinstance(doc, dict) and "matrix" in doc:
        f = _map(doc, B.carrier, A.carrier, "retraction matrix")
        return SubgroupMap.from_function(K, A.carrier, f)
    gens = _int_array(_require(doc, "generators", "retraction"), "retraction generators").reshape(-1, B.dim)
    imgs = _int_array(_require(doc, "images", "retraction"), "retraction images").reshape(-1, A.dim)
    if len(gens) != len(imgs):
        raise MalformedInput("retraction needs one image per generator")
    spanned = Subgroup(B.carrier, gens)
    if spanned != K:
        raise MalformedInput("retraction generators do not span Ker pi")
    free = Carrier(tuple([B.carrier.modulus] * max(len(gens), 1)))
    to_b = AdditiveMap(free, B.carrier, gens.T if len(gens) else np.zeros((B.dim, 1), dtype=np.int64))
    to_a = imgs.T if len(gens) else np.zeros((A.dim, 1), dtype=np.int64)

    def value(k):
        c = to_b.preimage(k)
        return (to_a @ c) % A.carrier.mod_array

    try:
        r = SubgroupMap.from_function(K, A.carrier, value)
    except Exception as exc:
        raise MalformedInput(f"retraction is not a well-defined map on Ker pi: {exc}") from exc
    for g, im in zip(gens, imgs):
        if not np.array_equal(r(g), A.carrier.normalize(im)):
            raise MalformedInput("retraction images are inconsistent with the relations among generators", witness=g.tolist())
    return r


def ses_from_json(doc: Any) -> ShortExactSequence:
    group = group_from_json(_require(doc, "group", "SES"))
    A = algebra_from_json(_require(doc, "A", "SES"), group)
    B = algebra_from_json(_require(doc, "B", "SES"), group)
    iota = _map(_require(doc, "iota", "SES"), A.carrier, B.carrier, "iota")
    pi = _map(_require(doc, "pi", "SES"), B.carrier, A.carrier, "pi")
    s = _section(_require(doc, "s", "SES"), A, B)
    r = retraction_from_json(_require(doc, "r", "SES"), kernel(pi), B, A)
    return ShortExactSequence(A, B, iota, pi, s, r)


def family_from_json(doc: Any) -> ThetaFamily:
    group = group_from_json(_require(doc, "group", "family"))
    A = algebra_from_json(_require(doc, "A", "family"), group)
    B = algebra_from_json(_require(doc, "B", "family"), group)
    pi = _map(_require(doc, "pi", "family"), B.carrier, A.carrier, "pi")
    s = _section(_require(doc, "s", "family"), A, B)
    K = kernel(pi)
    members_doc = _require(doc, "members", "family")
    if not isinstance(members_doc, dict):
        raise MalformedInput("'members' must map group elements to members")
    members: dict[int, Any] = {}
    for key, m in members_doc.items():
        g = element_index(group, key)
        if m == "zero" or m is None:
            members[g] = None
            continue
        iota = _map(_require(m, "iota", f"member {key}"), A.carrier, B.carrier, f"iota of {key}")
        members[g] = (iota, retraction_from_json(_require(m, "r", f"member {key}"), K, B, A))
    return ThetaFamily.from_data(A, B, pi, s, members)


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)
