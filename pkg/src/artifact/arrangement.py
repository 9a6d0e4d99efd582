"""Central real hyperplane arrangements: faces, flats, orientations, duals and cones."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Sequence

from .qlinalg import (Matrix, determinant, format_rational, kernel_with_pivots, parse_rational,
                      rank, sign, _phase_one)

SIGN_CHARS = {-1: "-", 0: "0", 1: "+"}
CHAR_SIGNS = {"-": -1, "0": 0, "+": 1}


class ArrangementError(ValueError):
    pass


def _dot(c: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(c, v) if a and b), Fraction(0))


def _primitive(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Positive rescaling of v to a primitive integer vector (keeps all signs)."""
    den = lcm(*(x.denominator for x in v)) if v else 1
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    g = g or 1
    return tuple(Fraction(x // g) for x in ints)


def _normalize_covector(c: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Scale so that the first nonzero entry is 1 (identifies proportional covectors)."""
    lead = next(x for x in c if x)
    return tuple(x / lead for x in c)


@dataclass(frozen=True)
class Arrangement:
    dim: int
    hyperplanes: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        seen = {}
        for i, h in enumerate(self.hyperplanes):
            if len(h) != self.dim:
                raise ArrangementError(f"hyperplane {i} has length {len(h)}, expected {self.dim}")
            if not any(h):
                raise ArrangementError(f"hyperplane {i} is the zero covector")
            key = _normalize_covector(h)
            if key in seen:
                raise ArrangementError(f"hyperplanes {seen[key]} and {i} are proportional")
            seen[key] = i

    @classmethod
    def from_rows(cls, dim: int, rows: Sequence[Sequence]) -> "Arrangement":
        return cls(dim, tuple(tuple(parse_rational(x) for x in r) for r in rows))

    @classmethod
    def from_json(cls, data: dict) -> "Arrangement":
        try:
            return cls.from_rows(int(data["dim"]), data["hyperplanes"])
        except (KeyError, TypeError) as exc:
            raise ArrangementError(f"malformed arrangement: {exc}") from exc

    def to_json(self) -> dict:
        return {"dim": self.dim,
                "hyperplanes": [[format_rational(x) for x in h] for h in self.hyperplanes]}

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    @property
    def size(self) -> int:
        return len(self.hyperplanes)

    def matrix(self, idx: Sequence[int] | None = None) -> Matrix:
        rows = self.hyperplanes if idx is None else [self.hyperplanes[i] for i in idx]
        return Matrix(len(rows), self.dim, rows)

    def signs_of(self, point: Sequence[Fraction]) -> tuple[int, ...]:
        return tuple(sign(_dot(h, point)) for h in self.hyperplanes)

    def lineality_dim(self) -> int:
        return self.dim - rank(self.matrix())

    def is_essential(self) -> bool:
        return self.lineality_dim() == 0


@dataclass(frozen=True)
class Face:
    signs: tuple[int, ...]
    dim: int
    span_basis: Matrix
    interior_point: tuple[Fraction, ...]
    span_pivots: tuple[int, ...]

    @property
    def label(self) -> str:
        return "".join(SIGN_CHARS[s] for s in self.signs)

    def zero_set(self) -> frozenset[int]:
        return frozenset(i for i, s in enumerate(self.signs) if s == 0)

    def coordinates(self, vectors: Sequence[Sequence[Fraction]]) -> Matrix:
        """Coordinates, in span_basis, of vectors lying in the span of the face (as columns)."""
        return Matrix(self.dim, len(vectors), [[v[p] for v in vectors] for p in self.span_pivots])


def signs_leq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x == 0 or x == y for x, y in zip(a, b))


def parse_signs(label: str) -> tuple[int, ...]:
    try:
        return tuple(CHAR_SIGNS[c] for c in label)
    except KeyError as exc:
        raise ArrangementError(f"bad sign string {label!r}") from exc


@dataclass(frozen=True)
class Flat:
    zero_set: frozenset[int]
    dim: int
    basis: Matrix
    pivots: tuple[int, ...]

    def contains(self, other: "Flat") -> bool:
        return self.zero_set <= other.zero_set

    def label(self) -> str:
        return ",".join(str(i) for i in sorted(self.zero_set))


@dataclass(frozen=True)
class ConeSelection:
    face_ids: frozenset[int]
    tag: str


def _span(arr: Arrangement, zero: Sequence[int]) -> tuple[Matrix, tuple[int, ...]]:
    k, piv = kernel_with_pivots(arr.matrix(zero))
    return k, tuple(piv)


def _insert(arr: Arrangement, k: int, cells: list[tuple[list[int], tuple[Fraction, ...]]]):
    """Split the faces of the first k hyperplanes by hyperplane k."""
    n = arr.dim
    c = arr.hyperplanes[k]
    lin, _ = _span(arr, range(k))
    lin_cols = list(zip(*lin.data)) if lin.cols else []
    moving = next((v for v in lin_cols if _dot(c, v)), None)
    out = []
    if moving is not None:
        cv = _dot(c, moving)
        for sg, p in cells:
            t = _dot(c, p) / cv
            p0 = tuple(x - t * y for x, y in zip(p, moving))
            step = tuple(y / cv for y in moving)
            out.append((sg + [-1], _primitive(tuple(x - y for x, y in zip(p0, step)))))
            out.append((sg + [0], _primitive(p0)))
            out.append((sg + [1], _primitive(tuple(x + y for x, y in zip(p0, step)))))
        return out
    lin_dim = lin.cols
    dims = [n - rank(arr.matrix([i for i, s in enumerate(sg) if s == 0])) for sg, _ in cells]
    rays = [(sg, p) for (sg, p), d in zip(cells, dims) if d == lin_dim + 1]
    for sg, p in cells:
        below = [q for rs, q in rays if signs_leq(rs, sg)]
        vals = [_dot(c, q) for q in below]
        pos = [q for q, v in zip(below, vals) if v > 0]
        neg = [q for q, v in zip(below, vals) if v < 0]
        if not (pos and neg):
            out.append((sg + [1 if pos else (-1 if neg else 0)], p))
            continue
        zsum = [sum(col, Fraction(0)) for col in zip(*[q for q, v in zip(below, vals) if v == 0])] \
            or [Fraction(0)] * n
        psum = [sum(col, Fraction(0)) for col in zip(*pos)]
        nsum = [sum(col, Fraction(0)) for col in zip(*neg)]
        hp, hn = _dot(c, psum), _dot(c, nsum)

        def combo(a, b):
            return _primitive(tuple(z + a * x + b * y for z, x, y in zip(zsum, psum, nsum)))

        out.append((sg + [-1], combo(-hn, 2 * hp)))
        out.append((sg + [0], combo(-hn, hp)))
        out.append((sg + [1], combo(-2 * hn, hp)))
    return out


class FacePoset:
    """Faces of an arrangement with their order, covering pairs and incidence signs."""

    def __init__(self, arr: Arrangement, faces: list[Face]):
        self.arrangement = arr
        self.faces = faces
        self.index = {f.signs: i for i, f in enumerate(faces)}
        nf = len(faces)
        self.leq_table = [[signs_leq(faces[i].signs, faces[j].signs) for j in range(nf)]
                          for i in range(nf)]
        self.up = [[] for _ in range(nf)]
        self.down = [[] for _ in range(nf)]
        self.covers: list[tuple[int, int]] = []
        for i in range(nf):
            for j in range(nf):
                if faces[j].dim == faces[i].dim + 1 and self.leq_table[i][j]:
                    self.covers.append((i, j))
                    self.up[i].append(j)
                    self.down[j].append(i)
        self.incidence = {(i, j): self._incidence(i, j) for i, j in self.covers}
        self.minimal = min(range(nf), key=lambda i: faces[i].dim)
        self.lineality_dim = faces[self.minimal].dim
        rays = [i for i in range(nf) if faces[i].dim == self.lineality_dim + 1]
        self.rays_below = [[r for r in rays if self.leq_table[r][i]] for i in range(nf)]

    def __len__(self) -> int:
        return len(self.faces)

    def _incidence(self, b: int, c: int) -> int:
        fb, fc = self.faces[b], self.faces[c]
        vecs = [list(col) for col in zip(*fb.span_basis.data)] if fb.dim else []
        vecs.append(list(fc.interior_point))
        d = determinant(fc.coordinates(vecs))
        if d == 0:
            raise ArrangementError("degenerate incidence determinant")
        return 1 if d > 0 else -1

    def leq(self, i: int, j: int) -> bool:
        return self.leq_table[i][j]

    def face_id(self, label_or_signs) -> int:
        key = parse_signs(label_or_signs) if isinstance(label_or_signs, str) else tuple(label_or_signs)
        if key not in self.index:
            raise ArrangementError(f"{label_or_signs!r} is not a face of the arrangement")
        return self.index[key]

    def labels(self) -> list[str]:
        return [f.label for f in self.faces]

    def dims(self) -> list[int]:
        return [f.dim for f in self.faces]

    def above(self, i: int) -> list[int]:
        return [j for j in range(len(self.faces)) if self.leq_table[i][j]]

    def below(self, i: int) -> list[int]:
        return [j for j in range(len(self.faces)) if self.leq_table[j][i]]

    def intervals_of_length_two(self) -> list[tuple[int, int, list[int]]]:
        out = []
        for b in range(len(self.faces)):
            mids = {}
            for c in self.up[b]:
                for d in self.up[c]:
                    mids.setdefault(d, []).append(c)
            for d in sorted(mids):
                out.append((b, d, sorted(mids[d])))
        return out

    def diamond_check(self) -> tuple[bool, tuple | None]:
        for b, d, mids in self.intervals_of_length_two():
            if len(mids) != 2:
                return False, (b, d, tuple(mids))
            c1, c2 = mids
            prod = (self.incidence[(b, c1)] * self.incidence[(c1, d)]
                    * self.incidence[(b, c2)] * self.incidence[(c2, d)])
            if prod != -1:
                return False, (b, d, tuple(mids))
        return True, None

    def euler_sum(self) -> int:
        return sum((-1) ** f.dim for f in self.faces)

    def covector_nonneg(self, f: Sequence[Fraction], i: int) -> bool:
        """f >= 0 everywhere on face i."""
        if not self._vanishes_on_lineality(f):
            return False
        return all(_dot(f, self.faces[r].interior_point) >= 0 for r in self.rays_below[i])

    def covector_positive_on_closure(self, f: Sequence[Fraction], i: int) -> bool:
        """f > 0 on the closure of face i away from the minimal face."""
        if i == self.minimal or not self._vanishes_on_lineality(f):
            return False
        return all(_dot(f, self.faces[r].interior_point) > 0 for r in self.rays_below[i])

    def _vanishes_on_lineality(self, f: Sequence[Fraction]) -> bool:
        basis = self.faces[self.minimal].span_basis
        return all(not _dot(f, col) for col in zip(*basis.data)) if basis.cols else True

    def to_json(self) -> dict:
        return {"faces": self.labels(), "dims": self.dims(),
                "covers": [[i, j] for i, j in self.covers],
                "incidence": {f"{i}->{j}": s for (i, j), s in self.incidence.items()},
                "euler_sum": self.euler_sum()}

    @cached_property
    def flats(self) -> list[Flat]:
        return intersection_poset(self.arrangement)


def _face_record(arr: Arrangement, signs: tuple[int, ...], point: tuple[Fraction, ...]) -> Face:
    basis, piv = _span(arr, [i for i, s in enumerate(signs) if s == 0])
    return Face(signs, basis.cols, basis, point, piv)


_POSET_CACHE: dict[Arrangement, FacePoset] = {}


def enumerate_faces(arr: Arrangement) -> FacePoset:
    """All faces, built by inserting the hyperplanes one at a time.

    A face not split by the new hyperplane keeps its witness.  A split face gets
    witnesses that are explicit positive combinations of the witnesses of its
    extreme rays, so every interior point is certified by construction.
    """
    cached = _POSET_CACHE.get(arr)
    if cached is not None:
        return cached
    cells: list[tuple[list[int], tuple[Fraction, ...]]] = [([], tuple(Fraction(0) for _ in range(arr.dim)))]
    for k in range(arr.size):
        cells = _insert(arr, k, cells)
    faces = [_face_record(arr, tuple(sg), p) for sg, p in cells]
    for f in faces:
        if arr.signs_of(f.interior_point) != f.signs:
            raise ArrangementError(f"witness for {f.label} has the wrong signs")
    faces.sort(key=lambda f: (f.dim, f.signs))
    poset = FacePoset(arr, faces)
    _POSET_CACHE[arr] = poset
    return poset


def incidence_sign(poset: FacePoset, b: int, c: int) -> int:
    if (b, c) not in poset.incidence:
        raise ArrangementError(f"({poset.faces[b].label}, {poset.faces[c].label}) is not a covering pair")
    return poset.incidence[(b, c)]


def make_flat(arr: Arrangement, hyperplanes: Sequence[int]) -> Flat:
    """The flat cut out by the given hyperplanes (empty list: the whole space)."""
    for i in hyperplanes:
        if not 0 <= i < arr.size:
            raise ArrangementError(f"hyperplane index {i} out of range")
    basis, piv = _span(arr, sorted(set(hyperplanes)))
    cols = list(zip(*basis.data)) if basis.cols else []
    zero = frozenset(i for i, h in enumerate(arr.hyperplanes) if all(not _dot(h, v) for v in cols))
    return Flat(zero, basis.cols, basis, piv)


def check_flat(arr: Arrangement, flat: Flat) -> None:
    expected = make_flat(arr, sorted(flat.zero_set))
    if expected.zero_set != flat.zero_set or expected.dim != flat.dim:
        raise ArrangementError("not a flat of this arrangement")


def intersection_poset(arr: Arrangement) -> list[Flat]:
    found: dict[frozenset[int], Flat] = {}
    frontier = [make_flat(arr, [])]
    found[frontier[0].zero_set] = frontier[0]
    while frontier:
        nxt = []
        for fl in frontier:
            for i in range(arr.size):
                if i in fl.zero_set:
                    continue
                g = make_flat(arr, sorted(fl.zero_set | {i}))
                if g.zero_set not in found:
                    found[g.zero_set] = g
                    nxt.append(g)
        frontier = nxt
    return sorted(found.values(), key=lambda f: (-f.dim, sorted(f.zero_set)))


def dual_arrangement(arr: Arrangement) -> Arrangement:
    lines = [f for f in intersection_poset(arr) if f.dim == 1]
    if not lines:
        raise ArrangementError(
            f"no 1-dimensional flats (lineality dimension {arr.lineality_dim()} "
            f"with {arr.size} hyperplanes in dimension {arr.dim})")
    normals = [tuple(r[0] for r in fl.basis.data) for fl in lines]
    return Arrangement(arr.dim, tuple(normals))


def double_dual_contains(arr: Arrangement) -> bool:
    """Every hyperplane of arr is (up to scale) a hyperplane of the double dual."""
    dd = dual_arrangement(dual_arrangement(arr))
    keys = {_normalize_covector(h) for h in dd.hyperplanes}
    return all(_normalize_covector(h) in keys for h in arr.hyperplanes)


def dual_cones(poset: FacePoset, dual_poset: FacePoset, a_dual: int) -> tuple[ConeSelection, ConeSelection]:
    """(U, V) cones of a dual face, as sets of faces of the primal poset."""
    if not 0 <= a_dual < len(dual_poset):
        raise ArrangementError("dual face index out of range")
    f = dual_poset.faces[a_dual].interior_point
    u = frozenset(i for i in range(len(poset)) if poset.covector_nonneg(f, i))
    v = frozenset([poset.minimal]) | frozenset(
        i for i in range(len(poset)) if poset.covector_positive_on_closure(f, i))
    return ConeSelection(u, "U-cone"), ConeSelection(v, "V-cone")


def monotone_cones_check(poset: FacePoset, dual_poset: FacePoset) -> bool:
    cones = [dual_cones(poset, dual_poset, i) for i in range(len(dual_poset))]
    for a1, a2 in dual_poset.covers:
        u1, v1 = cones[a1]
        u2, v2 = cones[a2]
        if not (u1.face_ids >= u2.face_ids and v1.face_ids <= v2.face_ids):
            return False
    return True


def is_polarization(arr: Arrangement, flat: Flat, f: Sequence[Fraction]) -> bool:
    f = [parse_rational(x) for x in f]
    if len(f) != arr.dim:
        raise ArrangementError(f"covector has length {len(f)}, expected {arr.dim}")
    if any(_dot(f, col) for col in zip(*flat.basis.data)):
        raise ArrangementError("covector does not vanish on the flat")
    for other in intersection_poset(arr):
        inside_kernel = all(not _dot(f, col) for col in zip(*other.basis.data))
        if inside_kernel and not flat.zero_set <= other.zero_set:
            return False
    return True


@dataclass
class Specialization:
    """Product arrangement on L x V/L together with the face map of the original arrangement."""

    arrangement: Arrangement
    flat: Flat
    induced: Arrangement | None
    quotient: Arrangement | None
    product: Arrangement
    poset: FacePoset
    product_poset: FacePoset
    face_map: list[int]
    induced_part: list[int]            # face -> face of the induced arrangement
    induced_points: list[tuple[Fraction, ...]]  # witnesses of induced faces, as points of V
    lam: Matrix                        # v -> (coordinates on L, coordinates on the complement)
    split_dim: int                     # dim L
    origins: tuple[int, ...] = ()      # product hyperplane -> hyperplane of the input it restricts

    def fiber(self, b: int) -> list[int]:
        return [a for a, img in enumerate(self.face_map) if img == b]

    def excess(self, a: int) -> int:
        return self.poset.faces[a].dim - self.product_poset.faces[self.face_map[a]].dim


def _sub_arrangement(dim: int, rows: list[tuple[Fraction, ...]]) -> Arrangement | None:
    return Arrangement(dim, tuple(rows)) if rows else None


def derived_arrangements(arr: Arrangement, flat: Flat) -> Specialization:
    check_flat(arr, flat)
    n, k = arr.dim, flat.dim
    basis = flat.basis
    piv = list(flat.pivots)
    comp = [j for j in range(n) if j not in set(piv)]
    # lam(v) = (v restricted to pivots, (v - basis . v[piv]) restricted to complement rows)
    lam_rows = []
    for p in piv:
        lam_rows.append([Fraction(int(j == p)) for j in range(n)])
    for q in comp:
        lam_rows.append([Fraction(int(j == q)) - sum(basis[q, t] * int(j == piv[t]) for t in range(k))
                         for j in range(n)])
    lam = Matrix(n, n, lam_rows)
    induced_rows: list[tuple[Fraction, ...]] = []
    seen = set()
    quotient_rows: list[tuple[Fraction, ...]] = []
    ind_origin, quot_origin = [], []
    for i, h in enumerate(arr.hyperplanes):
        if i in flat.zero_set:
            quotient_rows.append(tuple(h[q] for q in comp))
            quot_origin.append(i)
        else:
            restricted = tuple(_dot(h, col) for col in zip(*basis.data))
            key = _normalize_covector(restricted)
            if key not in seen:
                seen.add(key)
                induced_rows.append(restricted)
                ind_origin.append(i)
    induced = _sub_arrangement(k, induced_rows)
    quotient = _sub_arrangement(n - k, quotient_rows)
    product = Arrangement(n, tuple([r + (Fraction(0),) * (n - k) for r in induced_rows]
                                   + [(Fraction(0),) * k + r for r in quotient_rows]))
    poset = enumerate_faces(arr)
    pposet = enumerate_faces(product)
    # faces of the induced arrangement, as points of V
    if induced is not None:
        ind_poset = enumerate_faces(induced)
        ind_faces = [(f.signs, f.dim, tuple(_dot(row, f.interior_point) for row in basis.data))
                     for f in ind_poset.faces]
    else:
        ind_faces = [((), k, tuple(Fraction(0) for _ in range(n)))]
    quot_idx = sorted(flat.zero_set)
    face_map, induced_part = [], []
    for face in poset.faces:
        best = None
        for j, (sg, d, pt) in enumerate(ind_faces):
            vals = arr.signs_of(pt)
            if all(s * v >= 0 and (s != 0 or v == 0) for s, v in zip(face.signs, vals)):
                if best is None or d > ind_faces[best][1]:
                    best = j
        induced_part.append(best)
        sg = ind_faces[best][0] + tuple(face.signs[i] for i in quot_idx)
        face_map.append(pposet.index[sg])
    return Specialization(arr, flat, induced, quotient, product, poset, pposet, face_map,
                          induced_part, [p for _, _, p in ind_faces], lam, k,
                          tuple(ind_origin + quot_origin))


def relative_sign(spec: Specialization, a: int, a2: int) -> int:
    """Sign attached to A <1 A2 lying over a covering pair B <1 B2 with equal excess p.

    The transverse direction of A2 over A is carried into the product by lam and
    compared with the orientation of B2 over B; the result is multiplied by the
    incidence sign of A <1 A2 and by (-1)^p for moving that direction past the
    p directions lost by the face map.
    """
    poset, pposet = spec.poset, spec.product_poset
    b, b2 = spec.face_map[a], spec.face_map[a2]
    p = spec.excess(a)
    if (a, a2) not in poset.incidence or (b, b2) not in pposet.incidence or spec.excess(a2) != p:
        raise ArrangementError("relative sign needs covering pairs with equal excess")
    k = spec.split_dim
    n = spec.arrangement.dim
    m_ind = spec.induced.size if spec.induced is not None else 0
    fb, fb2 = pposet.faces[b], pposet.faces[b2]
    if fb.signs[:m_ind] != fb2.signs[:m_ind]:
        t = spec.induced_points[spec.induced_part[a2]]
        u = spec.lam @ Matrix(n, 1, [[x] for x in t])
        u = [u[i, 0] if i < k else Fraction(0) for i in range(n)]
    else:
        t = poset.faces[a2].interior_point
        u = spec.lam @ Matrix(n, 1, [[x] for x in t])
        u = [u[i, 0] if i >= k else Fraction(0) for i in range(n)]
    vecs = [list(col) for col in zip(*fb.span_basis.data)] if fb.dim else []
    vecs.append(u)
    d = determinant(fb2.coordinates(vecs))
    if d == 0:
        raise ArrangementError("transported direction is not transverse")
    eps_down = 1 if d > 0 else -1
    return (-1) ** p * poset.incidence[(a, a2)] * eps_down


def collinear(poset: FacePoset, a: int, b: int, c: int) -> bool:
    """Exact test: some segment from a point of face a to a point of face c meets face b.

    Such a segment meets b at an endpoint or in the open cone a + c, so this is
    a strict homogeneous feasibility problem in the two endpoints.
    """
    if b in (a, c):
        return True
    sa, sb, sc = poset.faces[a].signs, poset.faces[b].signs, poset.faces[c].signs
    free = False
    for x, y, z in zip(sa, sb, sc):
        if x * z < 0:
            free = True
        elif y != (x or z):
            return False
    if not free:
        return True
    # points of a face are strictly positive combinations of the rays in its closure
    # (modulo lineality), so only hyperplanes where a and c disagree constrain the weights
    arr = poset.arrangement
    rays = poset.rays_below[a] + poset.rays_below[c]
    nr = len(rays)
    opposite = [i for i, (x, z) in enumerate(zip(sa, sc)) if x * z < 0]
    strict = [i for i in opposite if sb[i] != 0]
    rows, rhs = [], []
    for i in opposite:
        g = [_dot(arr.hyperplanes[i], poset.faces[r].interior_point) for r in rays]
        const = sum(g)
        if sb[i] == 0:
            row, val = g + [Fraction(0)] * len(strict), -const
        else:
            slack = [Fraction(0)] * len(strict)
            slack[strict.index(i)] = Fraction(-1)
            row, val = [sb[i] * v for v in g] + slack, 1 - sb[i] * const
        if val < 0:
            row, val = [-v for v in row], -val
        rows.append(row)
        rhs.append(val)
    return _phase_one(rows, rhs) if nr + len(strict) else all(v == 0 for v in rhs)


def collinear_triples(poset: FacePoset) -> list[tuple[int, int, int]]:
    """All triples (a, b, c) of distinct-middle collinear faces, cached on the poset."""
    cached = getattr(poset, "_collinear", None)
    if cached is None:
        nf = len(poset)
        cached = [(a, b, c) for a in range(nf) for c in range(nf) for b in range(nf)
                  if b != a and b != c and collinear(poset, a, b, c)]
        poset._collinear = cached
    return cached


def named_arrangement(name: str) -> Arrangement:
    rows = {
        "A1": (1, [[1]]),
        "A2": (2, [[1, 0], [0, 1]]),
        "A3": (2, [[1, 0], [0, 1], [1, -1]]),
        "Braid3": (3, [[1, -1, 0], [0, 1, -1], [1, 0, -1]]),
        "Generic4": (2, [[1, 0], [0, 1], [1, 1], [1, -2]]),
    }
    if name not in rows:
        raise ArrangementError(f"unknown arrangement {name!r}")
    dim, hs = rows[name]
    return Arrangement.from_rows(dim, hs)
