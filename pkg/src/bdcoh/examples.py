"""Built-in families: the C_3 family over Z/3 <- Z/9 and its C_p generalisation."""

from __future__ import annotations

import numpy as np

from .bd import BDAlgebra, ThetaFamily, validate_situation_starstar
from .connecting import is_prime
from .errors import FamilyNotValidated, NotPrime
from .group import FiniteGroup
from .modules import AdditiveMap, GAlgebra, SubgroupMap, kernel
from .report import Report


def build_cp_bockstein_family(p: int) -> ThetaFamily:
    """C_p acting trivially on Z/p and Z/p^2, with r_{x^j} = j * r_x.

    The member at x^j embeds a |-> j^{-1} p a, so its retraction sends
    p a to j a.  Then r_{yz} - r_y - r_z vanishes on Ker pi for all y, z.
    The identity carries the zero retraction.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime", witness=p)
    G = FiniteGroup.cyclic(p)
    A = GAlgebra.trivial_ring(G, p)
    B = GAlgebra.trivial_ring(G, p * p)
    pi = AdditiveMap(B.carrier, A.carrier, [[1]])
    section = np.arange(p).reshape(p, 1)
    K = kernel(pi)
    members: dict = {G.identity: None}
    for j in range(1, p):
        j_inv = pow(j, -1, p)
        iota = AdditiveMap(A.carrier, B.carrier, [[(j_inv * p) % (p * p)]])
        r = SubgroupMap.from_function(K, A.carrier, lambda b, j=j: (j * (np.asarray(b) // p)) % p)
        members[G.power(1, j)] = (iota, r)
    return ThetaFamily.from_data(A, B, pi, section, members)


def build_c3_family() -> ThetaFamily:
    """iota_x(a) = 3a with r_x(3a) = a, iota_{x^2}(a) = -3a with r_{x^2}(3a) = -a, r_1 = 0."""
    G = FiniteGroup.cyclic(3)
    A = GAlgebra.trivial_ring(G, 3)
    B = GAlgebra.trivial_ring(G, 9)
    pi = AdditiveMap(B.carrier, A.carrier, [[1]])
    section = np.array([[0], [1], [2]])
    K = kernel(pi)
    members = {
        0: None,
        1: (AdditiveMap(A.carrier, B.carrier, [[3]]), SubgroupMap.from_function(K, A.carrier, lambda b: np.asarray(b) // 3)),
        2: (AdditiveMap(A.carrier, B.carrier, [[-3]]), SubgroupMap.from_function(K, A.carrier, lambda b: -(np.asarray(b) // 3))),
    }
    return ThetaFamily.from_data(A, B, pi, section, members)


def report_delta_table(family: ThetaFamily, max_degree: int, algebra: BDAlgebra | None = None) -> dict:
    """Delta_BD(g (x) c) in basis coordinates for every g and basis class c of degree <= max_degree."""
    val = validate_situation_starstar(family, cutoff=max_degree + 1)
    if not val.passed:
        raise FamilyNotValidated("family fails validation", witness=val.failures()[0].to_json())
    alg = algebra or BDAlgebra(family, max_degree + 1)
    G = family.group
    rows = []
    for n in range(max_degree + 1):
        for g in range(G.order):
            for k in range(alg.dims[n]):
                out = alg.delta(alg.basis_element(g, n, k))
                coords = out.terms.get((g, n + 1), np.zeros(alg.dims[n + 1], dtype=np.int64))
                rows.append({
                    "g": G.label(g),
                    "degree": n,
                    "basis_index": k,
                    "delta": coords.tolist(),
                })
    return {"max_degree": max_degree, "modulus": alg.p, "rows": rows}


def delta_table_report(table: dict) -> Report:
    rep = Report(f"Delta_BD on basis classes through degree {table['max_degree']}")
    for row in table["rows"]:
        rep.add(f"{row['g']}(x)H{row['degree']}[{row['basis_index']}]", True, detail=f"-> {row['delta']}")
    return rep
