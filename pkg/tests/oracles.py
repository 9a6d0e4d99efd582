"""Independent brute-force references: Fourier-Motzkin feasibility and sign-vector enumeration."""
from fractions import Fraction
from itertools import combinations, permutations, product


def fm_feasible(equalities, strict, nonstrict=(), nvars=None):
    """Is there x with e.x = 0, s.x > 0, w.x >= 0?  Homogeneous Fourier-Motzkin elimination."""
    cons = [(list(map(Fraction, e)), "=") for e in equalities]
    cons += [(list(map(Fraction, s)), ">") for s in strict]
    cons += [(list(map(Fraction, w)), ">=") for w in nonstrict]
    nvars = nvars if nvars is not None else (len(cons[0][0]) if cons else 0)
    for k in range(nvars):
        eq = next((c for c, t in cons if t == "=" and c[k]), None)
        if eq is not None:
            out = []
            for c, t in cons:
                if c is eq:
                    continue
                f = c[k] / eq[k]
                out.append(([x - f * y for x, y in zip(c, eq)], t))
            cons = out
            continue
        pos = [(c, t) for c, t in cons if c[k] > 0]
        neg = [(c, t) for c, t in cons if c[k] < 0]
        out = [(c, t) for c, t in cons if not c[k]]
        for (p, tp), (q, tq) in product(pos, neg):
            comb = [-q[k] * x + p[k] * y for x, y in zip(p, q)]
            out.append((comb, ">" if ">" in (tp, tq) else ">="))
        cons = out
    return not any(t == ">" for c, t in cons) and not any(t == "=" and any(c) for c, t in cons)


def rank_by_minors(rows):
    """Largest k with a nonzero k x k minor (Leibniz determinants)."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    for k in range(min(m, n), 0, -1):
        for rs in combinations(range(m), k):
            for cs in combinations(range(n), k):
                if _leibniz([[rows[i][j] for j in cs] for i in rs]):
                    return k
    return 0


def _leibniz(a):
    n = len(a)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(1)
        for i in range(n):
            term *= a[i][perm[i]]
        total += (-1) ** inv * term
    return total


def brute_faces(dim, hyperplanes):
    """All realizable sign vectors with their face dimensions."""
    out = {}
    for signs in product((-1, 0, 1), repeat=len(hyperplanes)):
        eqs = [h for h, s in zip(hyperplanes, signs) if s == 0]
        strict = [[s * x for x in h] for h, s in zip(hyperplanes, signs) if s]
        if fm_feasible(eqs, strict, nvars=dim):
            out[signs] = dim - rank_by_minors(eqs) if eqs else dim
    return out


def segment_meets(dim, hyperplanes, sa, sb, sc):
    """Exact collinearity by brute force: x in A, z in C with x + z in B (or B an endpoint)."""
    if sb in (sa, sc):
        return True
    eqs, strict = [], []
    zero = [0] * dim
    for h, x, y, z in zip(hyperplanes, sa, sb, sc):
        h = list(h)
        for s, row in ((x, h + zero), (z, zero + h), (y, h + h)):
            (eqs if s == 0 else strict).append(row if s == 0 else [s * v for v in row])
    return fm_feasible(eqs, strict, nvars=2 * dim)
