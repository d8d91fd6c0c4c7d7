"""Independent brute-force oracles written with plain Python loops.

Nothing here reuses the package's linear algebra: coboundaries follow the
defining formula tuple by tuple, ranks come from textbook Gaussian
elimination over F_p, and image orders from breadth-first enumeration or
integer lattice indices.
"""

from __future__ import annotations

from itertools import product


def cyclic_mult(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def all_tuples(q, n):
    return list(product(range(q), repeat=n))


def act(action, g, v, moduli):
    m = action[g]
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) % moduli[i] for i in range(len(moduli)))


def coboundary_values(mult, action, moduli, n, phi):
    """(d phi)(g1..g_{n+1}) from the defining alternating sum; phi is a dict tuple -> vector."""
    q = len(mult)
    out = {}
    for t in all_tuples(q, n + 1):
        total = list(act(action, t[0], phi[t[1:]], moduli))
        for i in range(1, n + 1):
            merged = t[: i - 1] + (mult[t[i - 1]][t[i]],) + t[i + 1 :]
            sign = -1 if i % 2 else 1
            total = [a + sign * b for a, b in zip(total, phi[merged])]
        last = phi[t[:n]]
        sign = -1 if (n + 1) % 2 else 1
        total = [(a + sign * b) % m for a, b, m in zip(total, last, moduli)]
        out[t] = tuple(total)
    return out


def coboundary_matrix(mult, action, moduli, n):
    """Integer matrix of d^n in the basis (tuple, coordinate), built column by column."""
    q, d = len(mult), len(moduli)
    src = all_tuples(q, n)
    tgt = all_tuples(q, n + 1)
    cols = []
    for s in src:
        for j in range(d):
            phi = {t: tuple(1 if (t == s and k == j) else 0 for k in range(d)) for t in src}
            val = coboundary_values(mult, action, moduli, n, phi)
            cols.append([val[t][k] for t in tgt for k in range(d)])
    return [list(row) for row in zip(*cols)] if cols else []


def rank_mod_p(rows, p):
    rows = [[x % p for x in r] for r in rows]
    rank, col = 0, 0
    width = len(rows[0]) if rows else 0
    while rank < len(rows) and col < width:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def cohomology_order_prime(mult, action, p, dim, n):
    """|H^n| for an F_p-module: p^(dim C^n - rank d^n - rank d^{n-1})."""
    q = len(mult)
    moduli = [p] * dim
    r_n = rank_mod_p(coboundary_matrix(mult, action, moduli, n), p)
    r_prev = rank_mod_p(coboundary_matrix(mult, action, moduli, n - 1), p) if n else 0
    return p ** (q**n * dim - r_n - r_prev)


def span_size(gens, moduli):
    """Order of the subgroup of prod Z/m_i generated by ``gens`` (breadth-first closure)."""
    zero = tuple(0 for _ in moduli)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple((a + b) % m for a, b, m in zip(v, g, moduli))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return len(seen)


def lattice_index(columns, moduli):
    """Index in Z^t of the lattice spanned by ``columns`` and the m_i e_i (column Hermite reduction)."""
    t = len(moduli)
    gens = [list(c) for c in columns] + [[m if i == j else 0 for i in range(t)] for j, m in enumerate(moduli)]
    index = 1
    for row in range(t):
        live = [g for g in gens if g[row]]
        while len(live) > 1:
            live.sort(key=lambda g: abs(g[row]))
            piv = live[0]
            for g in live[1:]:
                q = g[row] // piv[row]
                for i in range(t):
                    g[i] -= q * piv[i]
            live = [g for g in live if g[row]]
        index *= abs(live[0][row])
        gens = [g for g in gens if g is not live[0]]
    return index


def image_order(columns, moduli):
    total = 1
    for m in moduli:
        total *= m
    return total // lattice_index(columns, moduli)


def cohomology_order_enum(mult, action, moduli, n):
    """|H^n| = |C^n| / (|B^{n+1}| |B^n|), image orders from integer lattice indices."""
    q = len(mult)
    cols = list(zip(*coboundary_matrix(mult, action, moduli, n)))
    b_next = image_order(cols, list(moduli) * (q ** (n + 1)))
    b_n = 1
    if n:
        prev_cols = list(zip(*coboundary_matrix(mult, action, moduli, n - 1)))
        b_n = image_order(prev_cols, list(moduli) * (q**n))
    size_c = 1
    for m in moduli:
        size_c *= m ** (q**n)
    return size_c // (b_next * b_n)


def cup_values(mult, action_right, pair, n_left, n_right, phi, psi):
    """(phi u psi)(g1..g_{m+n}) = pair(phi(g1..gm), (g1...gm) . psi(rest)) on dict cochains."""
    q = len(mult)
    out = {}
    for t in all_tuples(q, n_left + n_right):
        head, tail = t[:n_left], t[n_left:]
        g = 0
        for h in head:
            g = mult[g][h]
        out[t] = pair(phi[head], action_right(g, psi[tail]))
    return out
