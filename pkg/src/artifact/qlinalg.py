"""Exact linear algebra over Q and cohomology of small cochain complexes.

Everything is built on :class:`fractions.Fraction`; no floating point is used.
Kernels come back in reduced column echelon form and cokernel presentations in
reduced row echelon form, so results are reproducible entry for entry.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence


class ComplexError(ValueError):
    """A sequence of maps that is not a cochain complex."""


class ChainMapError(ValueError):
    """A family of matrices that does not commute with the differentials."""


def parse_rational(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise ValueError(f"not a rational: {text!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def sign(x) -> int:
    return (x > 0) - (x < 0)


class Matrix:
    """Dense immutable matrix with Fraction entries."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence] = ()):
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        if not data:
            data = [[0] * cols for _ in range(rows)]
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError(f"entries do not match shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self.data = tuple(tuple(e if type(e) is Fraction else Fraction(e) for e in r) for r in data)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = list(rows)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, n: int, c) -> "Matrix":
        return cls(n, n, [[c if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(e) for e in r) for r in self.data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = list(zip(*other.data)) if other.rows else [()] * other.cols
        out = []
        for r in self.data:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append([sum((a * c[k] for k, a in nz), Fraction(0)) for c in ocols])
        return Matrix(self.rows, other.cols, out)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return Matrix(self.rows, self.cols,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [[-a for a in r] for r in self.data])

    def scale(self, c) -> "Matrix":
        c = Fraction(c)
        return Matrix(self.rows, self.cols, [[c * a for a in r] for r in self.data])

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows, [list(c) for c in zip(*self.data)] if self.rows else [])

    def is_zero(self) -> bool:
        return all(not a for r in self.data for a in r)

    def select_rows(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(len(idx), self.cols, [self.data[i] for i in idx])

    def select_cols(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.rows, len(idx), [[r[j] for j in idx] for r in self.data])

    def to_json(self) -> list[list[str]]:
        return [[format_rational(a) for a in r] for r in self.data]

    @classmethod
    def from_json(cls, rows: list, shape: tuple[int, int] | None = None) -> "Matrix":
        parsed = [[parse_rational(a) for a in r] for r in rows]
        if shape is None:
            return cls.from_rows(parsed)
        return cls(shape[0], shape[1], parsed)


def block_matrix(row_sizes: Sequence[int], col_sizes: Sequence[int],
                 blocks: Mapping[tuple[int, int], Matrix]) -> Matrix:
    """Assemble a matrix from blocks keyed by (block row, block col); missing blocks are zero."""
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    data = [[Fraction(0)] * coff[-1] for _ in range(roff[-1])]
    for (bi, bj), blk in blocks.items():
        if blk.shape != (row_sizes[bi], col_sizes[bj]):
            raise ValueError(f"block {(bi, bj)} has shape {blk.shape}, "
                             f"expected {(row_sizes[bi], col_sizes[bj])}")
        for i, r in enumerate(blk.data):
            row = data[roff[bi] + i]
            for j, a in enumerate(r):
                if a:
                    row[coff[bj] + j] += a
    return Matrix(roff[-1], coff[-1], data)


def _integer_rows(m: Matrix) -> list[list[int]]:
    out = []
    for r in m.data:
        den = lcm(*(a.denominator for a in r)) if r else 1
        out.append([int(a * den) for a in r])
    return out


def rank(m: Matrix) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination on rescaled integer rows."""
    a = _integer_rows(m)
    nrows, ncols = m.rows, m.cols
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, nrows):
            ai = a[i]
            f = ai[c]
            ar = a[r]
            for j in range(c + 1, ncols):
                ai[j] = (p * ai[j] - f * ar[j]) // prev
            ai[c] = 0
        prev = p
        r += 1
    return r


def rref(m: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    a = [list(r) for r in m.data]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, m.rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        ar = a[r]
        for i in range(m.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], ar)]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return a[:r], pivots


def _raw_kernel(m: Matrix) -> list[list[Fraction]]:
    red, pivots = rref(m)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    vecs = []
    for fj in free:
        v = [Fraction(0)] * m.cols
        v[fj] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fj]
        vecs.append(v)
    return vecs


def kernel_with_pivots(m: Matrix) -> tuple[Matrix, list[int]]:
    """Kernel basis in reduced column echelon form, with the rows where it is the identity."""
    vecs = _raw_kernel(m)
    if not vecs:
        return Matrix(m.cols, 0), []
    red, pivots = rref(Matrix.from_rows(vecs, m.cols))
    return Matrix.from_rows(red, m.cols).T, pivots


def kernel_basis(m: Matrix) -> Matrix:
    return kernel_with_pivots(m)[0]


def cokernel_with_pivots(m: Matrix) -> tuple[Matrix, list[int]]:
    """Cokernel presentation in reduced row echelon form, with its pivot columns."""
    k, piv = kernel_with_pivots(m.T)
    return k.T, piv


def cokernel_projection(m: Matrix) -> Matrix:
    return cokernel_with_pivots(m)[0]


def image_basis(m: Matrix) -> Matrix:
    """Columns spanning the column space, in reduced column echelon form."""
    red, _ = rref(m.T)
    return Matrix.from_rows(red, m.rows).T if red else Matrix(m.rows, 0)


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """Some X with a X = b, or None when no solution exists."""
    aug = Matrix(a.rows, a.cols + b.cols, [list(r) + list(s) for r, s in zip(a.data, b.data)])
    red, pivots = rref(aug)
    if any(p >= a.cols for p in pivots):
        return None
    x = [[Fraction(0)] * b.cols for _ in range(a.cols)]
    for row, pc in zip(red, pivots):
        x[pc] = row[a.cols:]
    return Matrix(a.cols, b.cols, x)


def inverse(m: Matrix) -> Matrix | None:
    if m.rows != m.cols:
        return None
    x = solve(m, Matrix.identity(m.rows))
    if x is None or rank(m) != m.rows:
        return None
    return x


def determinant(m: Matrix) -> Fraction:
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    a = [list(r) for r in m.data]
    n = m.rows
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


@dataclass(frozen=True)
class ChainComplex:
    """Cochain complex with terms in degrees lowest_degree, lowest_degree + 1, ...

    ``differentials[i]`` maps the term of degree lowest_degree + i to the next one.
    ``labels`` optionally records, per term, the summands as (label, dim) blocks.
    """

    lowest_degree: int
    dims: tuple[int, ...]
    differentials: tuple[Matrix, ...]
    labels: tuple[tuple[tuple[object, int], ...], ...] | None = None

    def __post_init__(self):
        if len(self.differentials) != max(len(self.dims) - 1, 0):
            raise ValueError("need one differential per adjacent pair of terms")
        for i, d in enumerate(self.differentials):
            if d.shape != (self.dims[i + 1], self.dims[i]):
                raise ValueError(f"differential out of degree {self.lowest_degree + i} has shape "
                                 f"{d.shape}, expected {(self.dims[i + 1], self.dims[i])}")
        if self.labels is not None:
            for deg_labels, dim in zip(self.labels, self.dims):
                if sum(s for _, s in deg_labels) != dim:
                    raise ValueError("labels do not add up to the term dimension")

    @property
    def highest_degree(self) -> int:
        return self.lowest_degree + len(self.dims) - 1

    def degrees(self) -> range:
        return range(self.lowest_degree, self.lowest_degree + len(self.dims))

    def dim(self, degree: int) -> int:
        i = degree - self.lowest_degree
        return self.dims[i] if 0 <= i < len(self.dims) else 0

    def d(self, degree: int) -> Matrix:
        """Differential leaving ``degree``, zero outside the stored range."""
        i = degree - self.lowest_degree
        if 0 <= i < len(self.differentials):
            return self.differentials[i]
        return Matrix(self.dim(degree + 1), self.dim(degree))

    def to_json(self) -> dict:
        out = {"lowest_degree": self.lowest_degree, "dims": list(self.dims),
               "differentials": [d.to_json() for d in self.differentials]}
        if self.labels is not None:
            out["labels"] = [[[str(lab), s] for lab, s in t] for t in self.labels]
        return out


def complex_check(c: ChainComplex) -> bool:
    return all((c.differentials[i + 1] @ c.differentials[i]).is_zero()
               for i in range(len(c.differentials) - 1))


@dataclass(frozen=True)
class CohomologyReport:
    ranks: dict[int, int]
    term_dims: dict[int, int] = field(default_factory=dict)
    h0_kernel_basis: Matrix | None = None
    h0_cokernel_projection: Matrix | None = None

    def euler_consistent(self) -> bool:
        lhs = sum((-1) ** (i % 2) * r for i, r in self.ranks.items())
        rhs = sum((-1) ** (i % 2) * r for i, r in self.term_dims.items())
        return lhs == rhs

    def nonzero(self) -> dict[int, int]:
        return {i: r for i, r in self.ranks.items() if r}

    def concentrated_in(self, degree: int) -> bool:
        return all(r == 0 for i, r in self.ranks.items() if i != degree)

    def rank(self, degree: int) -> int:
        return self.ranks.get(degree, 0)

    def to_json(self) -> dict:
        return {"ranks": {str(i): r for i, r in sorted(self.ranks.items())},
                "euler_consistent": self.euler_consistent()}


def cohomology(c: ChainComplex, h0: bool = True) -> CohomologyReport:
    if not complex_check(c):
        raise ComplexError("consecutive differentials do not compose to zero")
    rk = {deg: rank(c.d(deg)) for deg in range(c.lowest_degree - 1, c.highest_degree + 1)}
    ranks = {deg: c.dim(deg) - rk[deg] - rk[deg - 1] for deg in c.degrees()}
    kb = cp = None
    if h0:
        kb = kernel_basis(c.d(0))
        cp = cokernel_projection(c.d(-1))
    return CohomologyReport(ranks, {deg: c.dim(deg) for deg in c.degrees()}, kb, cp)


def _as_degree_map(src: ChainComplex, chain_map) -> dict[int, Matrix]:
    if isinstance(chain_map, Mapping):
        return dict(chain_map)
    return {src.lowest_degree + i: m for i, m in enumerate(chain_map)}


def check_chain_map(src: ChainComplex, dst: ChainComplex, chain_map) -> dict[int, Matrix]:
    """Validate shapes and commutation; returns the map as degree -> Matrix (zeros filled in)."""
    fm = _as_degree_map(src, chain_map)
    lo = min(src.lowest_degree, dst.lowest_degree)
    hi = max(src.highest_degree, dst.highest_degree)
    full = {}
    for deg in range(lo - 1, hi + 2):
        m = fm.get(deg)
        if m is None:
            m = Matrix(dst.dim(deg), src.dim(deg))
        elif m.shape != (dst.dim(deg), src.dim(deg)):
            raise ChainMapError(f"component in degree {deg} has shape {m.shape}, "
                                f"expected {(dst.dim(deg), src.dim(deg))}")
        full[deg] = m
    for deg in range(lo - 1, hi + 1):
        if full[deg + 1] @ src.d(deg) != dst.d(deg) @ full[deg]:
            raise ChainMapError(f"chain map does not commute with the differential in degree {deg}")
    return full


def induced_h0_map(src: ChainComplex, dst: ChainComplex, chain_map,
                   model: str = "kernel") -> Matrix:
    """Induced map on degree-0 cohomology.

    ``model="kernel"`` expresses H^0 in kernel-basis coordinates (needs nothing
    mapping into degree 0); ``model="cokernel"`` uses cokernel-presentation
    coordinates (needs nothing leaving degree 0).
    """
    full = check_chain_map(src, dst, chain_map)
    f0 = full[0]
    if model == "kernel":
        if not (src.d(-1).is_zero() and dst.d(-1).is_zero()):
            raise ValueError("kernel model requires zero incoming differential in degree 0")
        ks, _ = kernel_with_pivots(src.d(0))
        kd, piv = kernel_with_pivots(dst.d(0))
        img = f0 @ ks
        x = img.select_rows(piv)
        if kd @ x != img:
            raise ChainMapError("image of a cocycle is not a cocycle")
        return x
    if model == "cokernel":
        if not (src.d(0).is_zero() and dst.d(0).is_zero()):
            raise ValueError("cokernel model requires zero outgoing differential in degree 0")
        ps, piv = cokernel_with_pivots(src.d(-1))
        pd, _ = cokernel_with_pivots(dst.d(-1))
        img = pd @ f0
        y = img.select_cols(piv)
        if y @ ps != img:
            raise ChainMapError("chain map does not descend to cokernels")
        return y
    raise ValueError(f"unknown model {model!r}")


def laplacian_report(gamma_cx: ChainComplex, delta_cx: ChainComplex) -> dict[int, bool]:
    """Invertibility of delta*gamma + gamma*delta on each positive-degree term.

    ``gamma_cx`` lives in degrees 0..k; ``delta_cx`` carries the same terms in
    degrees -k..0 with its differential running the opposite way.
    """
    k = gamma_cx.highest_degree
    if gamma_cx.lowest_degree != 0 or delta_cx.highest_degree != 0 or delta_cx.lowest_degree != -k:
        raise ValueError("complexes are not mirror images of each other")
    for i in range(k + 1):
        if gamma_cx.dim(i) != delta_cx.dim(-i):
            raise ValueError(f"term dimensions differ in degree {i}")
    out = {}
    for i in range(1, k + 1):
        n = gamma_cx.dim(i)
        lap = Matrix(n, n)
        if i < k:
            lap = lap + delta_cx.d(-(i + 1)) @ gamma_cx.d(i)
        lap = lap + gamma_cx.d(i - 1) @ delta_cx.d(-i)
        out[i] = rank(lap) == n
    return out


def _phase_one(a: list[list[Fraction]], b: list[Fraction]) -> bool:
    """Is {y >= 0 : a y = b} nonempty?  Requires b >= 0.  Bland's rule, exact."""
    m = len(a)
    if m == 0:
        return True
    n = len(a[0])
    # tableau columns: n originals, m artificials, rhs
    tab = [list(a[i]) + [Fraction(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    width = n + m
    # objective: minimise sum of artificials; reduced costs row
    cost = [-sum(tab[i][j] for i in range(m)) for j in range(n)] + [Fraction(0)] * m
    cost.append(-sum(b))
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            break  # unbounded direction cannot occur in phase one; stop defensively
        r = best[1]
        pv = tab[r][enter]
        tab[r] = [x / pv for x in tab[r]]
        for i in range(m):
            if i != r and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[r])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, tab[r])]
        basis[r] = enter
    return cost[-1] == 0


def strictly_feasible(equalities: Sequence[Sequence], positives: Sequence[Sequence], nvars: int) -> bool:
    """Exact test for a point x with e.x = 0 for each equality row and p.x > 0 for each positive row.

    The system is homogeneous, so strict inequalities may be replaced by p.x >= 1.
    """
    rows = []
    rhs = []
    for e in equalities:
        e = [Fraction(v) for v in e]
        rows.append(e + [-v for v in e] + [Fraction(0)] * len(positives))
        rhs.append(Fraction(0))
    for k, p in enumerate(positives):
        p = [Fraction(v) for v in p]
        slack = [Fraction(0)] * len(positives)
        slack[k] = Fraction(-1)
        rows.append(p + [-v for v in p] + slack)
        rhs.append(Fraction(1))
    if not rows:
        return True
    return _phase_one(rows, rhs)
