"""Direct loop implementations of the laws, for cross-checking.

These share no code with the vectorised validators.  They are only meant
for small carriers; ``MAX_NAIVE`` bounds what callers should hand them.
"""

from __future__ import annotations

from itertools import product

MAX_NAIVE = 12


def heap_laws(op) -> bool:
    n = len(op)
    r = range(n)
    for a, b in product(r, r):
        if op[a][b][b] != a or op[b][b][a] != a:
            return False
    for a, b, c, d, e in product(r, repeat=5):
        if op[op[a][b][c]][d][e] != op[a][b][op[c][d][e]]:
            return False
    return True


def abelian(op) -> bool:
    r = range(len(op))
    return all(op[a][b][c] == op[c][b][a] for a, b, c in product(r, repeat=3))


def truss_laws(op, mul, one=None) -> bool:
    n = len(op)
    r = range(n)
    if not (heap_laws(op) and abelian(op)):
        return False
    for a, b, c in product(r, repeat=3):
        if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
            return False
    for w, x, y, z in product(r, repeat=4):
        if mul[w][op[x][y][z]] != op[mul[w][x]][mul[w][y]][mul[w][z]]:
            return False
        if mul[op[x][y][z]][w] != op[mul[x][w]][mul[y][w]][mul[z][w]]:
            return False
    if one is not None:
        return all(mul[one][x] == x == mul[x][one] for x in r)
    return True


def module_laws(t_op, t_mul, op, act, unital_one=None) -> bool:
    """``unital_one`` is the unit of the truss when the module claims unitality."""
    rt, rm = range(len(t_mul)), range(len(op))
    if not (heap_laws(op) and abelian(op)):
        return False
    for s, t, x in product(rt, rt, rm):
        if act[s][act[t][x]] != act[t_mul[s][t]][x]:
            return False
    for s, t, u, x in product(rt, rt, rt, rm):
        if act[t_op[s][t][u]][x] != op[act[s][x]][act[t][x]][act[u][x]]:
            return False
    for t, x, y, z in product(rt, rm, rm, rm):
        if act[t][op[x][y][z]] != op[act[t][x]][act[t][y]][act[t][z]]:
            return False
    if unital_one is not None:
        return all(act[unital_one][x] == x for x in rm)
    return True
