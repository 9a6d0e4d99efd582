"""Cohomological operations on hyperbolic sheaves, expressed through selected complexes.

Every construction here is a complex whose terms are sums of stalks E_B over a
set of faces and whose differentials are gamma or delta maps twisted by
incidence signs.  Derived sheaves (specialization, Fourier transform) are
assembled from degree-0 cohomology of such complexes and induced chain maps.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .arrangement import (Arrangement, ArrangementError, ConeSelection, FacePoset, Flat,
                          Specialization, check_flat, derived_arrangements, dual_arrangement,
                          dual_cones, enumerate_faces, is_polarization,
                          make_flat, relative_sign)
from .hypsheaf import HyperbolicSheaf, validate
from .qlinalg import (ChainComplex, CohomologyReport, ComplexError, Matrix, block_matrix,
                      cohomology, cokernel_with_pivots, complex_check, induced_h0_map, inverse,
                      kernel_with_pivots, laplacian_report, parse_rational, rank)


class CalculusError(ValueError):
    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


class AcyclicityError(CalculusError):
    pass


class TransportError(CalculusError):
    pass


class InvalidSheafError(CalculusError):
    pass


COMPLEX_STATS = {"checked": 0, "failed": 0}


def _record(c: ChainComplex) -> ChainComplex:
    ok = complex_check(c)
    COMPLEX_STATS["checked"] += 1
    if not ok:
        COMPLEX_STATS["failed"] += 1
        raise ComplexError("assembled maps do not square to zero")
    return c


def assemble(cells: Sequence[tuple[object, int, int]], arrows: Iterable[tuple[object, object, Matrix]],
             degrees: tuple[int, int] | None = None) -> ChainComplex:
    """Chain complex from summands (key, degree, size) and blocks (src key, dst key, matrix)."""
    lo = min((d for _, d, _ in cells), default=0)
    hi = max((d for _, d, _ in cells), default=0)
    if degrees is not None:
        lo, hi = min(lo, degrees[0]), max(hi, degrees[1])
    by_deg: dict[int, list[tuple[object, int]]] = {d: [] for d in range(lo, hi + 1)}
    where = {}
    for key, d, size in cells:
        where[key] = (d, len(by_deg[d]))
        by_deg[d].append((key, size))
    blocks: dict[int, dict[tuple[int, int], Matrix]] = {d: {} for d in range(lo, hi)}
    for src, dst, m in arrows:
        ds, js = where[src]
        dt, jt = where[dst]
        if dt != ds + 1:
            raise ValueError(f"arrow {src}->{dst} does not raise the degree by one")
        key = (jt, js)
        blk = blocks[ds]
        blk[key] = blk[key] + m if key in blk else m
    diffs = []
    for d in range(lo, hi):
        rows = [s for _, s in by_deg[d + 1]]
        cols = [s for _, s in by_deg[d]]
        diffs.append(block_matrix(rows, cols, blocks[d]))
    dims = tuple(sum(s for _, s in by_deg[d]) for d in range(lo, hi + 1))
    labels = tuple(tuple(by_deg[d]) for d in range(lo, hi + 1))
    return _record(ChainComplex(lo, dims, tuple(diffs), labels))


@dataclass
class SelectionComplex:
    base: HyperbolicSheaf
    selection: ConeSelection
    grading: str
    variant: str
    complex: ChainComplex
    degree_of: dict[int, int]

    def report(self, h0: bool = True) -> CohomologyReport:
        return cohomology(self.complex, h0=h0)


def selection_complex(q: HyperbolicSheaf, faces: Iterable[int], degree_of: Callable[[int], int],
                      variant: str, tag: str = "custom", grading: str = "",
                      degrees: tuple[int, int] | None = None) -> SelectionComplex:
    """gamma variant: degree rises along covers; delta variant: degree falls along covers."""
    faces = sorted(set(faces))
    chosen = set(faces)
    deg = {a: degree_of(a) for a in faces}
    cells = [(a, deg[a], q.dims[a]) for a in faces]
    arrows = []
    inc = q.poset.incidence
    for a in faces:
        for b in q.poset.up[a]:
            if b not in chosen:
                continue
            s = inc[(a, b)]
            if variant == "gamma":
                arrows.append((a, b, q.gamma[(a, b)].scale(s)))
            elif variant == "delta":
                arrows.append((b, a, q.delta[(b, a)].scale(s)))
            else:
                raise ValueError(f"unknown variant {variant!r}")
    cx = assemble(cells, arrows, degrees)
    return SelectionComplex(q, ConeSelection(frozenset(faces), tag), grading, variant, cx, deg)


def _require_valid(q: HyperbolicSheaf, check: bool) -> None:
    if check:
        rep = validate(q)
        if not rep.ok:
            bad = rep.first_failure()
            raise InvalidSheafError(f"input is not a hyperbolic sheaf ({bad.name} fails at {bad.offending})",
                                    check=bad.name, offending=bad.offending)


# ---------------------------------------------------------------- global sections

def compact_complex(q: HyperbolicSheaf) -> SelectionComplex:
    n = q.arrangement.dim
    return selection_complex(q, range(len(q.poset)), lambda a: q.poset.faces[a].dim, "gamma",
                             grading="dim", degrees=(0, n))


def full_complex(q: HyperbolicSheaf) -> SelectionComplex:
    n = q.arrangement.dim
    return selection_complex(q, range(len(q.poset)), lambda a: -q.poset.faces[a].dim, "delta",
                             grading="codim - n", degrees=(-n, 0))


def rgamma_compact(q: HyperbolicSheaf, check: bool = True) -> CohomologyReport:
    _require_valid(q, check)
    return compact_complex(q).report(h0=False)


def rgamma_full(q: HyperbolicSheaf, check: bool = True) -> CohomologyReport:
    _require_valid(q, check)
    return full_complex(q).report(h0=False)


# ---------------------------------------------------------------- stalks

def ordinary_stalk_complex(q: HyperbolicSheaf, a: int) -> SelectionComplex:
    n = q.arrangement.dim
    lo = n - q.poset.faces[a].dim
    return selection_complex(q, q.poset.above(a), lambda b: n - q.poset.faces[b].dim, "delta",
                             grading="codim", degrees=(0, lo))


def ordinary_stalk(q: HyperbolicSheaf, a: int, check: bool = True) -> CohomologyReport:
    _require_valid(q, check)
    return ordinary_stalk_complex(q, a).report(h0=False)


def stalk_double_complex(q: HyperbolicSheaf, a: int) -> ChainComplex:
    """Total complex of the ordinary stalks F_B (B >= a) strung together by generalization.

    Summand (B, C) carries E_C with a <= B <= C in total degree dim B - dim C.
    """
    poset = q.poset
    faces = poset.faces
    ups = poset.above(a)
    cells, arrows = [], []
    for b in ups:
        for c in poset.above(b):
            cells.append(((b, c), faces[b].dim - faces[c].dim, q.dims[c]))
    inc = poset.incidence
    for b in ups:
        hsign = (-1) ** (faces[b].dim - faces[a].dim)
        col = set(poset.above(b))
        for c in col:
            for c2 in poset.up[c]:
                arrows.append(((b, c2), (b, c), q.delta[(c2, c)].scale(hsign * inc[(c, c2)])))
        for b2 in poset.up[b]:
            for c in poset.above(b2):
                arrows.append(((b, c), (b2, c), Matrix.scalar(q.dims[c], inc[(b, b2)])))
    return assemble(cells, arrows, (0, 0))


def hyperbolic_from_stalks_check(q: HyperbolicSheaf, a: int, check: bool = True) -> bool:
    _require_valid(q, check)
    rep = cohomology(stalk_double_complex(q, a), h0=False)
    return rep.concentrated_in(0) and rep.rank(0) == q.dims[a]


# ---------------------------------------------------------------- vanishing cycles

@dataclass
class VanishingResult:
    dim: int
    gamma_cx: SelectionComplex
    delta_cx: SelectionComplex
    laplacian: dict[int, bool]
    gamma_report: CohomologyReport
    delta_report: CohomologyReport
    kernel_dim: int
    cokernel_dim: int

    def to_json(self) -> dict:
        return {"dim": self.dim,
                "gamma_acyclic": self.gamma_report.concentrated_in(0),
                "delta_acyclic": self.delta_report.concentrated_in(0),
                "laplacian_iso": {str(k): v for k, v in self.laplacian.items()}}


def face_flat(poset: FacePoset, a: int) -> Flat:
    return make_flat(poset.arrangement, sorted(poset.faces[a].zero_set()))


def vanishing_cycles(q: HyperbolicSheaf, f: Sequence, a: int, check: bool = True) -> VanishingResult:
    _require_valid(q, check)
    f = [parse_rational(x) for x in f]
    poset = q.poset
    flat = face_flat(poset, a)
    try:
        polar = is_polarization(q.arrangement, flat, f)
    except ArrangementError as exc:
        raise CalculusError(str(exc)) from exc
    if not polar:
        raise CalculusError("covector is not a polarization at the flat of the face")
    base_dim = poset.faces[a].dim
    sel = [b for b in poset.above(a) if b == a or poset.covector_nonneg(f, b)]
    top = max(poset.faces[b].dim for b in sel) - base_dim
    gcx = selection_complex(q, sel, lambda b: poset.faces[b].dim - base_dim, "gamma",
                            tag="half-space-f>=0", grading="dim - dim A", degrees=(0, top))
    dcx = selection_complex(q, sel, lambda b: base_dim - poset.faces[b].dim, "delta",
                            tag="half-space-f>=0", grading="dim A - dim", degrees=(-top, 0))
    grep, drep = gcx.report(h0=False), dcx.report(h0=False)
    if not grep.concentrated_in(0) or not drep.concentrated_in(0) or grep.rank(0) != drep.rank(0):
        raise AcyclicityError("vanishing-cycle complexes are not concentrated in one degree",
                              gamma=grep.nonzero(), delta=drep.nonzero())
    first = [b for b in poset.up[a] if b in set(sel)]
    stacked = [q.gamma[(a, b)].scale(1) for b in first]
    ker_dim = q.dims[a] - rank(Matrix(sum(m.rows for m in stacked), q.dims[a],
                                      [r for m in stacked for r in m.data]))
    row = Matrix(q.dims[a], sum(q.dims[b] for b in first),
                 [[x for b in first for x in q.delta[(b, a)].data[i]] for i in range(q.dims[a])])
    coker_dim = q.dims[a] - rank(row)
    lap = laplacian_report(gcx.complex, dcx.complex)
    return VanishingResult(grep.rank(0), gcx, dcx, lap, grep, drep, ker_dim, coker_dim)


def polarization_candidates(arr: Arrangement, flat: Flat) -> list[tuple[Fraction, ...]]:
    """Interior covectors of dual faces that vanish on the flat and polarize there."""
    try:
        dual = enumerate_faces(dual_arrangement(arr))
    except ArrangementError:
        return []
    out = []
    for face in dual.faces:
        f = face.interior_point
        if any(sum(x * y for x, y in zip(f, col)) for col in zip(*flat.basis.data)):
            continue
        if is_polarization(arr, flat, f):
            out.append(f)
    return out


# ---------------------------------------------------------------- degree-0 models

@dataclass
class H0Model:
    """A complex whose cohomology sits in degree 0, with both coordinate models of H^0."""

    gamma_cx: ChainComplex
    delta_cx: ChainComplex
    dim: int
    kernel: Matrix
    kernel_pivots: list[int]
    projection: Matrix

    @property
    def naive_transport(self) -> Matrix:
        return self.projection @ self.kernel


def h0_model(gamma_cx: ChainComplex, delta_cx: ChainComplex, where: str) -> H0Model:
    grep, drep = cohomology(gamma_cx, h0=False), cohomology(delta_cx, h0=False)
    if not grep.concentrated_in(0) or not drep.concentrated_in(0) or grep.rank(0) != drep.rank(0):
        raise AcyclicityError(f"complexes at {where} are not concentrated in degree 0",
                              where=where, gamma=grep.nonzero(), delta=drep.nonzero())
    k, piv = kernel_with_pivots(gamma_cx.d(0))
    p, _ = cokernel_with_pivots(delta_cx.d(-1))
    return H0Model(gamma_cx, delta_cx, grep.rank(0), k, piv, p)


def _chain_composite(poset: FacePoset, maps: dict, lo: int, hi: int, up: bool, dims) -> Matrix:
    """Compose covering-pair maps between lo <= hi along a fixed chain (gamma if up, else delta)."""
    chain = [hi]
    while chain[-1] != lo:
        chain.append(next(c for c in poset.down[chain[-1]] if poset.leq(lo, c)))
    chain.reverse()
    m = Matrix.identity(dims[lo])
    if up:
        for x, y in zip(chain, chain[1:]):
            m = maps[(x, y)] @ m
    else:
        m = Matrix.identity(dims[hi])
        for x, y in zip(reversed(chain), list(reversed(chain))[1:]):
            m = maps[(x, y)] @ m
    return m


def normalized_transports(poset: FacePoset, models: dict[int, H0Model], gamma_side: dict,
                          delta_side: dict, gamma_in_kernel: bool) -> dict[int, Matrix]:
    """Per face, the map from kernel coordinates to cokernel coordinates forced by axiom (i)
    against the minimal face, whose single-summand complexes make both models agree.

    ``gamma_in_kernel`` says which structure map was computed in the kernel model.
    """
    low = poset.minimal
    dims = [models[i].dim for i in range(len(poset))]
    base = models[low].naive_transport
    if inverse(base) is None:
        raise TransportError("transport at the minimal face is singular", face=low)
    base_inv = inverse(base)
    out = {}
    for b in range(len(poset)):
        if b == low:
            out[b] = base
            continue
        if gamma_in_kernel:
            x = _chain_composite(poset, gamma_side, low, b, True, dims)   # ker_low -> ker_b
            y = _chain_composite(poset, delta_side, low, b, False, dims)  # coker_b -> coker_low
            m = x @ base_inv @ y                                          # coker_b -> ker_b
            inv = inverse(m)
        else:
            x = _chain_composite(poset, delta_side, low, b, False, dims)  # ker_b -> ker_low
            y = _chain_composite(poset, gamma_side, low, b, True, dims)   # coker_low -> coker_b
            inv = y @ base @ x                                            # ker_b -> coker_b
            if inverse(inv) is None:
                inv = None
        if inv is None:
            raise TransportError(f"transport at face {poset.faces[b].label} is singular",
                                 face=poset.faces[b].label)
        out[b] = inv
    return out


# ---------------------------------------------------------------- specialization

@dataclass
class SpecializationResult:
    sheaf: HyperbolicSheaf
    data: Specialization
    models: dict[int, H0Model]
    naive_transport_invertible: dict[int, bool]
    naive_transport_agrees: dict[int, bool]
    excess_drops: list[tuple[str, str]]


def specialize_full(q: HyperbolicSheaf, flat: Flat, check: bool = True) -> SpecializationResult:
    _require_valid(q, check)
    try:
        spec = derived_arrangements(q.arrangement, flat)
    except ArrangementError as exc:
        raise CalculusError(str(exc)) from exc
    poset, pposet = spec.poset, spec.product_poset
    fibers = {b: spec.fiber(b) for b in range(len(pposet))}
    models = {}
    for b, fib in fibers.items():
        top = max(spec.excess(a) for a in fib)
        g = selection_complex(q, fib, spec.excess, "gamma", tag="fiber-of-nu", degrees=(0, top))
        d = selection_complex(q, fib, lambda a: -spec.excess(a), "delta", tag="fiber-of-nu",
                              degrees=(-top, 0))
        models[b] = h0_model(g.complex, d.complex, pposet.faces[b].label)
    sigma = {}
    drops = []
    for a, a2 in poset.covers:
        b, b2 = spec.face_map[a], spec.face_map[a2]
        if b == b2:
            continue
        if spec.excess(a) == spec.excess(a2) and (b, b2) in pposet.incidence:
            sigma[(a, a2)] = relative_sign(spec, a, a2)
        else:
            drops.append((poset.faces[a].label, poset.faces[a2].label))
    gamma_k, delta_c = {}, {}
    for b, b2 in pposet.covers:
        src, dst = models[b], models[b2]
        gmap, dmap = {}, {}
        for (a, a2), s in sigma.items():
            if spec.face_map[a] != b or spec.face_map[a2] != b2:
                continue
            p = spec.excess(a)
            gmap.setdefault(p, []).append((a, a2, q.gamma[(a, a2)].scale(s)))
            dmap.setdefault(p, []).append((a2, a, q.delta[(a2, a)].scale(s)))
        gamma_k[(b, b2)] = induced_h0_map(src.gamma_cx, dst.gamma_cx,
                                          _component_maps(src.gamma_cx, dst.gamma_cx, gmap, 1))
        delta_c[(b2, b)] = induced_h0_map(dst.delta_cx, src.delta_cx,
                                          _component_maps(dst.delta_cx, src.delta_cx, dmap, -1),
                                          model="cokernel")
    phi = normalized_transports(pposet, models, gamma_k, delta_c, gamma_in_kernel=True)
    delta_k = {}
    for (b2, b), y in delta_c.items():
        delta_k[(b2, b)] = inverse(phi[b]) @ y @ phi[b2]
    dims = [models[b].dim for b in range(len(pposet))]
    out = HyperbolicSheaf(pposet, dims, gamma_k, delta_k)
    naive_inv = {b: inverse(m.naive_transport) is not None for b, m in models.items()}
    naive_ok = {b: m.naive_transport == phi[b] for b, m in models.items()}
    return SpecializationResult(out, spec, models, naive_inv, naive_ok, drops)


def _component_maps(src: ChainComplex, dst: ChainComplex, comps: dict[int, list], direction: int) -> dict:
    """Chain map between labelled complexes from per-degree lists of (src face, dst face, block)."""
    out = {}
    for p, items in comps.items():
        deg = direction * p
        srow = _offsets(src, deg)
        drow = _offsets(dst, deg)
        data = [[Fraction(0)] * src.dim(deg) for _ in range(dst.dim(deg))]
        for s, t, m in items:
            so, to = srow[s], drow[t]
            for i, r in enumerate(m.data):
                for j, x in enumerate(r):
                    if x:
                        data[to + i][so + j] += x
        out[deg] = Matrix(dst.dim(deg), src.dim(deg), data)
    return out


def _offsets(c: ChainComplex, degree: int) -> dict:
    if not (c.lowest_degree <= degree <= c.highest_degree):
        return {}
    offs, pos = {}, 0
    for key, size in c.labels[degree - c.lowest_degree]:
        offs[key] = pos
        pos += size
    return offs


def specialize(q: HyperbolicSheaf, flat: Flat, check: bool = True) -> HyperbolicSheaf:
    return specialize_full(q, flat, check).sheaf


# ---------------------------------------------------------------- bispecialization

def flat_from_vectors(arr: Arrangement, vectors: Sequence[Sequence[Fraction]]) -> Flat:
    """The flat spanned by the given vectors; fails if their span is not a flat."""
    vectors = [list(v) for v in vectors]
    zero = [i for i, h in enumerate(arr.hyperplanes)
            if all(not sum(x * y for x, y in zip(h, v)) for v in vectors)]
    flat = make_flat(arr, zero)
    span = rank(Matrix(arr.dim, len(vectors), [list(r) for r in zip(*vectors)])) if vectors else 0
    if flat.dim != span:
        raise CalculusError("vectors do not span a flat of the arrangement")
    return flat


def _flat_vectors(flat: Flat) -> list[list[Fraction]]:
    return [list(col) for col in zip(*flat.basis.data)] if flat.dim else []


def _transport_flat(spec: Specialization, flat: Flat) -> Flat:
    n = spec.arrangement.dim
    vecs = []
    for v in _flat_vectors(flat):
        img = spec.lam @ Matrix(n, 1, [[x] for x in v])
        vecs.append([img[i, 0] for i in range(n)])
    return flat_from_vectors(spec.product, vecs)


def _labelled_dims(sheaf: HyperbolicSheaf, origins: Sequence[int]) -> dict[tuple, int]:
    order = sorted(range(len(origins)), key=lambda j: origins[j])
    return {tuple((origins[j], face.signs[j]) for j in order): sheaf.dims[i]
            for i, face in enumerate(sheaf.poset.faces)}


def _two_step(q: HyperbolicSheaf, first: Flat, second: Flat):
    r1 = specialize_full(q, first, check=False)
    r2 = specialize_full(r1.sheaf, _transport_flat(r1.data, second), check=False)
    origins = [r1.data.origins[j] for j in r2.data.origins]
    return r2.sheaf, _labelled_dims(r2.sheaf, origins)


def _classes(arr: Arrangement, idx: Sequence[int], basis: Matrix) -> dict[int, int]:
    """Hyperplane -> smallest hyperplane with a proportional restriction to the span of basis."""
    reps: dict[tuple, int] = {}
    out = {}
    for i in idx:
        r = [sum(a * b for a, b in zip(arr.hyperplanes[i], col)) for col in zip(*basis.data)]
        lead = next(x for x in r if x)
        key = tuple(x / lead for x in r)
        out[i] = reps.setdefault(key, i)
    return out


def _part_dim(arr: Arrangement, vanishing: list[int], basis: Matrix | None, ambient: int) -> int:
    if not vanishing:
        return ambient
    rows = [list(arr.hyperplanes[i]) for i in vanishing]
    m = Matrix(len(rows), arr.dim, rows)
    if basis is not None:
        m = m @ basis
    return ambient - rank(m)


def _one_shot(q: HyperbolicSheaf, small: Flat, big: Flat) -> dict[tuple, int]:
    """Per-face dims of the triple-product specialization computed from fibers of the composite face map."""
    arr, poset = q.arrangement, q.poset
    n = arr.dim
    s_small = derived_arrangements(arr, small)
    s_big = derived_arrangements(arr, big)
    outer = sorted(big.zero_set)
    middle = sorted(small.zero_set - big.zero_set)
    inner = [i for i in range(arr.size) if i not in small.zero_set]
    cls_inner = _classes(arr, inner, small.basis) if small.dim else {}
    cls_middle = _classes(arr, middle, big.basis) if big.dim else {}
    reps = sorted(set(cls_inner.values()) | set(cls_middle.values()) | set(outer))

    def dot(h, p):
        return sum(a * b for a, b in zip(h, p))

    labels, final_dim = [], []
    for a, face in enumerate(poset.faces):
        p_small = s_small.induced_points[s_small.induced_part[a]]
        p_big = s_big.induced_points[s_big.induced_part[a]]
        signs = {}
        for i in reps:
            h = arr.hyperplanes[i]
            pt = p_small if i in cls_inner else p_big if i in cls_middle else face.interior_point
            v = dot(h, pt)
            signs[i] = (v > 0) - (v < 0)
        labels.append(tuple((i, signs[i]) for i in reps))
        d_inner = _part_dim(arr, [i for i in inner if not dot(arr.hyperplanes[i], p_small)],
                            small.basis, small.dim)
        d_middle = _part_dim(arr, [i for i in middle if not dot(arr.hyperplanes[i], p_big)],
                             big.basis, big.dim) - small.dim
        d_outer = _part_dim(arr, [i for i in outer if not dot(arr.hyperplanes[i], face.interior_point)],
                            None, n) - big.dim
        final_dim.append(d_inner + d_middle + d_outer)
    fibers: dict[tuple, list[int]] = {}
    for a, lab in enumerate(labels):
        fibers.setdefault(lab, []).append(a)
    out = {}
    for lab, fib in fibers.items():
        def exc(a):
            return poset.faces[a].dim - final_dim[a]
        top = max(exc(a) for a in fib)
        g = selection_complex(q, fib, exc, "gamma", tag="fiber-of-composite", degrees=(0, top))
        d = selection_complex(q, fib, lambda a: -exc(a), "delta", tag="fiber-of-composite",
                              degrees=(-top, 0))
        out[lab] = h0_model(g.complex, d.complex, str(lab)).dim
    return out


@dataclass
class BispecReport:
    consistent: bool
    via_big_first: dict
    via_small_first: dict
    one_shot: dict
    validated: tuple[bool, bool]

    def to_json(self) -> dict:
        def enc(d):
            return {",".join(f"{i}:{'-0+'[s + 1]}" for i, s in k): v for k, v in sorted(d.items())}
        return {"consistent": self.consistent, "validated": list(self.validated),
                "big_first": enc(self.via_big_first), "small_first": enc(self.via_small_first),
                "one_shot": enc(self.one_shot)}


def bispecialize(q: HyperbolicSheaf, small: Flat, big: Flat, check: bool = True) -> BispecReport:
    _require_valid(q, check)
    check_flat(q.arrangement, small)
    check_flat(q.arrangement, big)
    if not small.zero_set >= big.zero_set:
        raise CalculusError("the first flat must be contained in the second")
    s1, d1 = _two_step(q, big, small)
    s2, d2 = _two_step(q, small, big)
    d3 = _one_shot(q, small, big)
    ok = (validate(s1).ok, validate(s2).ok)
    return BispecReport(d1 == d2 == d3 and all(ok), d1, d2, d3, ok)


def bispec_consistency(q: HyperbolicSheaf, small: Flat, big: Flat, check: bool = True) -> bool:
    return bispecialize(q, small, big, check).consistent


# ---------------------------------------------------------------- Fourier transform

@dataclass
class FourierResult:
    sheaf: HyperbolicSheaf
    dual_poset: FacePoset
    models: dict[int, H0Model]
    naive_transport_agrees: dict[int, bool]


def _projection(src: ChainComplex, dst: ChainComplex) -> dict[int, Matrix]:
    """Coordinate map between labelled complexes keeping summands present in both."""
    out = {}
    for deg in src.degrees():
        soff, doff = _offsets(src, deg), _offsets(dst, deg)
        sizes = dict(src.labels[deg - src.lowest_degree])
        data = [[Fraction(0)] * src.dim(deg) for _ in range(dst.dim(deg))]
        for key, so in soff.items():
            if key in doff:
                for t in range(sizes[key]):
                    data[doff[key] + t][so + t] = Fraction(1)
        out[deg] = Matrix(dst.dim(deg), src.dim(deg), data)
    return out


def _cone_models(q: HyperbolicSheaf, cones: dict[int, frozenset], where: Callable[[int], str],
                 face_dim: Callable[[int], int] | None = None) -> dict[int, H0Model]:
    face_dim = face_dim or (lambda b: q.poset.faces[b].dim)
    models = {}
    for c, faces in cones.items():
        top = max(face_dim(b) for b in faces)
        g = selection_complex(q, faces, face_dim, "gamma", tag="V-cone", degrees=(0, top))
        d = selection_complex(q, faces, lambda b: -face_dim(b), "delta", tag="V-cone", degrees=(-top, 0))
        models[c] = h0_model(g.complex, d.complex, where(c))
    return models


def _cone_sheaf(dposet: FacePoset, models: dict[int, H0Model]):
    """Structure maps on the dual poset from inclusions of cone complexes, in kernel coordinates."""
    delta_k, gamma_c = {}, {}
    for c1, c2 in dposet.covers:
        m1, m2 = models[c1], models[c2]
        delta_k[(c2, c1)] = induced_h0_map(m2.gamma_cx, m1.gamma_cx, _projection(m2.gamma_cx, m1.gamma_cx))
        gamma_c[(c1, c2)] = induced_h0_map(m1.delta_cx, m2.delta_cx, _projection(m1.delta_cx, m2.delta_cx),
                                           model="cokernel")
    phi = normalized_transports(dposet, models, gamma_c, delta_k, gamma_in_kernel=False)
    gamma_k = {(c1, c2): inverse(phi[c2]) @ y @ phi[c1] for (c1, c2), y in gamma_c.items()}
    dims = [models[c].dim for c in range(len(dposet))]
    agrees = {c: models[c].naive_transport == phi[c] for c in models}
    return dims, gamma_k, delta_k, agrees


def _dual_poset(arr: Arrangement) -> FacePoset:
    if not arr.is_essential():
        raise CalculusError("Fourier transform needs an essential arrangement "
                            f"(lineality dimension {arr.lineality_dim()})")
    try:
        return enumerate_faces(dual_arrangement(arr))
    except ArrangementError as exc:
        raise CalculusError(str(exc)) from exc


def fourier_full(q: HyperbolicSheaf, check: bool = True) -> FourierResult:
    _require_valid(q, check)
    dposet = _dual_poset(q.arrangement)
    cones = {c: dual_cones(q.poset, dposet, c)[1].face_ids for c in range(len(dposet))}
    models = _cone_models(q, cones, lambda c: "dual " + dposet.faces[c].label)
    dims, gamma_k, delta_k, agrees = _cone_sheaf(dposet, models)
    return FourierResult(HyperbolicSheaf(dposet, dims, gamma_k, delta_k), dposet, models, agrees)


def fourier(q: HyperbolicSheaf, check: bool = True) -> HyperbolicSheaf:
    return fourier_full(q, check).sheaf


def fourier_double_complex(q: HyperbolicSheaf, a_dual: int, dposet: FacePoset | None = None) -> ChainComplex:
    """Big-cone delta complexes over the dual faces above a_dual, strung together by inclusions."""
    dposet = dposet or _dual_poset(q.arrangement)
    poset = q.poset
    above = dposet.above(a_dual)
    big = {c: dual_cones(poset, dposet, c)[0].face_ids for c in above}
    cells, arrows = [], []
    inc = poset.incidence
    for c in above:
        dc = dposet.faces[c].dim
        for b in big[c]:
            cells.append(((c, b), -dc - poset.faces[b].dim, q.dims[b]))
        vsign = (-1) ** dc
        for b in big[c]:
            for b2 in poset.up[b]:
                if b2 in big[c]:
                    arrows.append(((c, b2), (c, b), q.delta[(b2, b)].scale(vsign * inc[(b, b2)])))
        for c2 in dposet.down[c]:
            if c2 not in big:
                continue
            for b in big[c]:
                arrows.append(((c, b), (c2, b), Matrix.scalar(q.dims[b], dposet.incidence[(c2, c)])))
    return assemble(cells, arrows)


def fourier_cross_check(q: HyperbolicSheaf, a_dual: int, check: bool = True,
                        transform: FourierResult | None = None) -> bool:
    _require_valid(q, check)
    transform = transform or fourier_full(q, check=False)
    rep = cohomology(fourier_double_complex(q, a_dual, transform.dual_poset), h0=False)
    nz = rep.nonzero()
    expected = transform.sheaf.dims[a_dual]
    if expected == 0:
        return not nz
    return len(nz) == 1 and list(nz.values())[0] == expected


# ---------------------------------------------------------------- inclusion-exclusion

def inclusion_exclusion_report(arr: Arrangement) -> dict:
    """Both cone identities, coefficient by coefficient over primal faces.

    The alternating sign is (-1)^(n - dim B) for the dual face B being summed;
    the same sums with (-1)^(dim B - dim A) are evaluated as well and reported.
    """
    poset = enumerate_faces(arr)
    dposet = _dual_poset(arr)
    n = arr.dim
    cones = [dual_cones(poset, dposet, c) for c in range(len(dposet))]
    ok = {"u_from_v": True, "v_from_u": True, "u_from_v_relative": True, "v_from_u_relative": True}
    for a in range(len(dposet)):
        above = dposet.above(a)
        for x in range(len(poset)):
            u_sum = v_sum = u_rel = v_rel = 0
            for b in above:
                s = (-1) ** (n - dposet.faces[b].dim)
                r = (-1) ** (dposet.faces[b].dim - dposet.faces[a].dim)
                in_u, in_v = x in cones[b][0].face_ids, x in cones[b][1].face_ids
                v_sum += s * in_v
                u_sum += s * in_u
                v_rel += r * in_v
                u_rel += r * in_u
            want_u, want_v = int(x in cones[a][0].face_ids), int(x in cones[a][1].face_ids)
            ok["u_from_v"] &= v_sum == want_u
            ok["v_from_u"] &= u_sum == want_v
            ok["u_from_v_relative"] &= v_rel == want_u
            ok["v_from_u_relative"] &= u_rel == want_v
    return ok


def inclusion_exclusion_check(arr: Arrangement) -> bool:
    rep = inclusion_exclusion_report(arr)
    return rep["u_from_v"] and rep["v_from_u"]


# ---------------------------------------------------------------- microlocalization (experimental)

@dataclass
class MicrolocalResult:
    sheaf: HyperbolicSheaf | None
    report: dict


def microlocalize_experimental(q: HyperbolicSheaf, flat: Flat, check: bool = True) -> MicrolocalResult:
    """Specialize along the flat, then Fourier-transform each slice in the normal direction."""
    _require_valid(q, check)
    try:
        spec_res = specialize_full(q, flat, check=False)
    except CalculusError as exc:
        return MicrolocalResult(None, {"stage": "specialize", "error": str(exc)})
    qn = spec_res.sheaf
    spec = spec_res.data
    if spec.quotient is None:
        return MicrolocalResult(qn, {"stage": "done", "validates": validate(qn).ok, "note": "zero normal bundle"})
    k, n = spec.split_dim, q.arrangement.dim
    m_ind = spec.induced.size if spec.induced is not None else 0
    quot_poset = enumerate_faces(spec.quotient)
    dual_quot = enumerate_faces(dual_arrangement(spec.quotient))
    cone_v = {c: {quot_poset.faces[b].signs for b in dual_cones(quot_poset, dual_quot, c)[1].face_ids}
              for c in range(len(dual_quot))}
    rows = [r + (Fraction(0),) * (n - k) for r in (spec.induced.hyperplanes if spec.induced else ())]
    rows += [(Fraction(0),) * k + r for r in dual_quot.arrangement.hyperplanes]
    out_poset = enumerate_faces(Arrangement(n, tuple(rows)))
    pposet = qn.poset
    try:
        models = {}
        for idx, face in enumerate(out_poset.faces):
            s1, c = face.signs[:m_ind], dual_quot.index[face.signs[m_ind:]]
            sel = [pposet.index[s1 + s2] for s2 in cone_v[c]]
            dim2 = {b: quot_poset.faces[quot_poset.index[pposet.faces[b].signs[m_ind:]]].dim for b in sel}
            models.update(_cone_models(qn, {idx: frozenset(sel)}, lambda _: face.label, dim2.__getitem__))
        delta_k, gamma_c, gamma_k, delta_c = {}, {}, {}, {}
        for x, y in out_poset.covers:
            mx, my = models[x], models[y]
            fx, fy = out_poset.faces[x].signs, out_poset.faces[y].signs
            if fx[:m_ind] == fy[:m_ind]:
                delta_k[(y, x)] = induced_h0_map(my.gamma_cx, mx.gamma_cx, _projection(my.gamma_cx, mx.gamma_cx))
                gamma_c[(x, y)] = induced_h0_map(mx.delta_cx, my.delta_cx, _projection(mx.delta_cx, my.delta_cx),
                                                 model="cokernel")
            else:
                gmap, dmap = _cross_maps(qn, pposet, fx, fy, m_ind, mx, my)
                gamma_k[(x, y)] = induced_h0_map(mx.gamma_cx, my.gamma_cx, gmap)
                delta_c[(y, x)] = induced_h0_map(my.delta_cx, mx.delta_cx, dmap, model="cokernel")
        phi = _slice_transports(out_poset, models, m_ind, gamma_c, delta_k)
        for (x, y), m in gamma_c.items():
            gamma_k[(x, y)] = inverse(phi[y]) @ m @ phi[x]
        for (y, x), m in delta_c.items():
            delta_k[(y, x)] = inverse(phi[x]) @ m @ phi[y]
        dims = [models[i].dim for i in range(len(out_poset))]
        sheaf = HyperbolicSheaf(out_poset, dims, gamma_k, delta_k)
    except (CalculusError, ComplexError) as exc:
        return MicrolocalResult(None, {"stage": "assemble", "error": str(exc)})
    rep = validate(sheaf)
    info = {"stage": "done", "validates": rep.ok, "dims": dims}
    if not rep.ok:
        bad = rep.first_failure()
        info["first_failure"] = {"check": bad.name, "offending": bad.offending}
    return MicrolocalResult(sheaf, info)


def _cross_maps(qn, pposet, fx, fy, m_ind, mx, my):
    """Chain maps between slice complexes over first-factor faces fx < fy, same dual face."""
    gsrc = {}
    for key, _ in [kv for lab in mx.gamma_cx.labels for kv in lab]:
        s2 = pposet.faces[key].signs[m_ind:]
        tgt = pposet.index.get(fy[:m_ind] + s2)
        if tgt is not None:
            gsrc[key] = tgt
    gmap, dmap = {}, {}
    for deg in mx.gamma_cx.degrees():
        items = [(a, gsrc[a], qn.gamma_between(a, gsrc[a])) for a, _ in mx.gamma_cx.labels[deg - mx.gamma_cx.lowest_degree]
                 if a in gsrc]
        gmap[deg] = items
    for deg in my.delta_cx.degrees():
        items = []
        for b, _ in my.delta_cx.labels[deg - my.delta_cx.lowest_degree]:
            src = next((a for a, t in gsrc.items() if t == b), None)
            if src is not None:
                items.append((b, src, qn.delta_between(b, src)))
        dmap[-deg] = items
    return _component_maps(mx.gamma_cx, my.gamma_cx, gmap, 1), _component_maps(my.delta_cx, mx.delta_cx, dmap, -1)


def _slice_transports(out_poset, models, m_ind, gamma_c, delta_k):
    """Per first-factor slice, normalize at the slice's zero dual face as in the Fourier transform."""
    phi = {}
    slices: dict[tuple, list[int]] = {}
    for i, f in enumerate(out_poset.faces):
        slices.setdefault(f.signs[:m_ind], []).append(i)
    for members in slices.values():
        low = min(members, key=lambda i: out_poset.faces[i].dim)
        base = models[low].naive_transport
        for b in members:
            if b == low:
                phi[b] = base
                continue
            x = Matrix.identity(models[b].dim)
            y = Matrix.identity(models[low].dim)
            chain = [b]
            while chain[-1] != low:
                chain.append(next(c for c in out_poset.down[chain[-1]]
                                  if c in members and out_poset.leq(low, c)))
            for hi, lo in zip(chain, chain[1:]):
                x = delta_k[(hi, lo)] @ x
            for lo, hi in zip(reversed(chain), list(reversed(chain))[1:]):
                y = gamma_c[(lo, hi)] @ y
            m = y @ base @ x
            if inverse(m) is None:
                raise TransportError("slice transport is singular", face=out_poset.faces[b].label)
            phi[b] = m
    return phi
