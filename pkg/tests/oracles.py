"""Brute-force reference implementations used to check the package.

Everything here works on plain nested lists and never calls into trusslab,
so agreement with the engines is evidence rather than tautology.
"""

from itertools import permutations, product


def tables(m):
    """(heap op, action) of a module as nested lists."""
    return m.heap.op.tolist(), m.act.tolist()


def first_heap_failure(op):
    """First failing law in the validator's order: Mal'cev pairs, then 5-tuples."""
    n = len(op)
    for a, b in product(range(n), repeat=2):
        if op[a][b][b] != a or op[b][b][a] != a:
            return "malcev", (a, b)
    for a, b, c, d, e in product(range(n), repeat=5):
        if op[op[a][b][c]][d][e] != op[a][b][op[c][d][e]]:
            return "associativity", (a, b, c, d, e)
    return None


def is_heap(op):
    return first_heap_failure(op) is None


def is_abelian(op):
    n = len(op)
    return all(op[a][b][c] == op[c][b][a] for a, b, c in product(range(n), repeat=3))


def first_distributivity_failure(op, mul):
    n = len(op)
    for w, x, y, z in product(range(n), repeat=4):
        if mul[w][op[x][y][z]] != op[mul[w][x]][mul[w][y]][mul[w][z]]:
            return "left_distributivity", (w, x, y, z)
    for w, x, y, z in product(range(n), repeat=4):
        if mul[op[x][y][z]][w] != op[mul[x][w]][mul[y][w]][mul[z][w]]:
            return "right_distributivity", (w, x, y, z)
    return None


def is_module(t_op, t_mul, op, act):
    nt, nm = len(t_mul), len(op)
    if not (is_heap(op) and is_abelian(op)):
        return False
    for s, t, x in product(range(nt), range(nt), range(nm)):
        if act[s][act[t][x]] != act[t_mul[s][t]][x]:
            return False
    for s, t, u, x in product(range(nt), range(nt), range(nt), range(nm)):
        if act[t_op[s][t][u]][x] != op[act[s][x]][act[t][x]][act[u][x]]:
            return False
    for t, x, y, z in product(range(nt), range(nm), range(nm), range(nm)):
        if act[t][op[x][y][z]] != op[act[t][x]][act[t][y]][act[t][z]]:
            return False
    return True


def is_linear(f, m, n):
    """``f`` a list; ``m``, ``n`` modules (read through their tables only)."""
    op_m, act_m = tables(m)
    op_n, act_n = tables(n)
    for x, y, z in product(range(len(f)), repeat=3):
        if f[op_m[x][y][z]] != op_n[f[x]][f[y]][f[z]]:
            return False
    return all(f[act_m[t][x]] == act_n[t][f[x]] for t in range(len(act_m)) for x in range(len(f)))


def hom(m, n):
    """Every T-linear map, by testing all ``|N|^|M|`` functions in lexicographic order."""
    return [list(f) for f in product(range(n.size), repeat=m.size) if is_linear(list(f), m, n)]


def absorbers(m):
    _, act = tables(m)
    return [x for x in range(m.size) if all(row[x] == x for row in act)]


def exactness_witnesses(f, g, n_size, p_size):
    """All ``e`` with ``Im f = g^-1(e)``; lists of ints in, ascending list out."""
    im = set(f)
    return [e for e in range(p_size) if e in g and {x for x in range(n_size) if g[x] == e} == im]


def is_short_exact(f, g, n_size, p_size):
    return (
        len(set(f)) == len(f)
        and set(g) == set(range(p_size))
        and bool(exactness_witnesses(f, g, n_size, p_size))
    )


def coset_classes(op, sub):
    """Classes of ``x ~ y  iff  [x, y, s] in S`` for a sub-heap ``S``; sorted."""
    s0 = min(sub)
    seen, out = set(), []
    for x in range(len(op)):
        if x in seen:
            continue
        cls = sorted(y for y in range(len(op)) if op[x][y][s0] in sub)
        seen.update(cls)
        out.append(cls)
    return out


def sections(f, g, m_mod, p_mod):
    """T-linear ``h: P -> M`` with ``g h = id``."""
    return [h for h in hom(p_mod, m_mod) if all(g[h[p]] == p for p in range(p_mod.size))]


def retractions(f, g, m1_mod, m_mod):
    return [k for k in hom(m_mod, m1_mod) if all(k[f[a]] == a for a in range(m1_mod.size))]


def ring_module_isomorphic(add_a, act_a, add_b, act_b):
    """Bijection respecting addition and the ring action, by trying all of them."""
    n = len(add_a)
    if n != len(add_b) or len(act_a) != len(act_b):
        return False
    for p in permutations(range(n)):
        if all(p[add_a[x][y]] == add_b[p[x]][p[y]] for x in range(n) for y in range(n)) and all(
            p[act_a[r][x]] == act_b[r][p[x]] for r in range(len(act_a)) for x in range(n)
        ):
            return True
    return False


def s3_mul():
    """Multiplication table of the symmetric group on three letters."""
    perms = list(permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    return [[idx[tuple(a[b[k]] for k in range(3))] for b in perms] for a in perms], idx[(0, 1, 2)]
