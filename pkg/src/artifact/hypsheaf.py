"""Hyperbolic sheaves on the face poset of an arrangement and their axioms."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .arrangement import (Arrangement, ArrangementError, FacePoset, collinear_triples,
                          enumerate_faces, parse_signs)
from .qlinalg import Matrix, rank


class SheafFormatError(ValueError):
    """Structural problem with sheaf data (shapes, faces, file layout)."""

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


class HyperbolicSheaf:
    """Spaces E_A with maps gamma (up a covering pair) and delta (down a covering pair).

    ``gamma[(a, b)]`` maps E_a to E_b and ``delta[(b, a)]`` maps E_b to E_a for
    every covering pair a <1 b.  Missing entries between nonzero spaces are errors;
    entries touching a zero space may be omitted.
    """

    def __init__(self, poset: FacePoset, dims, gamma: dict, delta: dict):
        self.poset = poset
        self.dims = list(dims)
        if len(self.dims) != len(poset):
            raise SheafFormatError("one dimension per face is required")
        self.gamma: dict[tuple[int, int], Matrix] = {}
        self.delta: dict[tuple[int, int], Matrix] = {}
        for a, b in poset.covers:
            g = gamma.get((a, b))
            d = delta.get((b, a))
            self.gamma[(a, b)] = self._checked(g, (self.dims[b], self.dims[a]), "gamma", a, b)
            self.delta[(b, a)] = self._checked(d, (self.dims[a], self.dims[b]), "delta", b, a)
        extra = [k for k in gamma if k not in self.gamma] + [k for k in delta if k not in self.delta]
        if extra:
            raise SheafFormatError(f"maps given for non-covering pairs {extra}", pairs=extra)
        self._gamma_cache: dict[tuple[int, int], Matrix] = {}
        self._delta_cache: dict[tuple[int, int], Matrix] = {}

    def _checked(self, m: Matrix | None, shape, kind: str, src: int, dst: int) -> Matrix:
        labels = (self.poset.faces[src].label, self.poset.faces[dst].label)
        if m is None:
            if shape[0] and shape[1]:
                raise SheafFormatError(f"{kind} map {labels[0]}->{labels[1]} is missing",
                                       pair=labels, kind=kind)
            return Matrix(*shape)
        if m.shape != shape:
            raise SheafFormatError(f"{kind} map {labels[0]}->{labels[1]} has shape {m.shape}, "
                                   f"expected {shape}", pair=labels, kind=kind)
        return m

    @property
    def arrangement(self) -> Arrangement:
        return self.poset.arrangement

    def gamma_between(self, a: int, b: int) -> Matrix:
        """Composite generalization map E_a -> E_b for a <= b (along a fixed chain)."""
        key = (a, b)
        if key in self._gamma_cache:
            return self._gamma_cache[key]
        if a == b:
            m = Matrix.identity(self.dims[a])
        else:
            if not self.poset.leq(a, b):
                raise ValueError("faces are not comparable")
            mid = next(c for c in self.poset.down[b] if self.poset.leq(a, c))
            m = self.gamma[(mid, b)] @ self.gamma_between(a, mid)
        self._gamma_cache[key] = m
        return m

    def delta_between(self, b: int, a: int) -> Matrix:
        """Composite specialization map E_b -> E_a for a <= b."""
        key = (b, a)
        if key in self._delta_cache:
            return self._delta_cache[key]
        if a == b:
            m = Matrix.identity(self.dims[a])
        else:
            if not self.poset.leq(a, b):
                raise ValueError("faces are not comparable")
            mid = next(c for c in self.poset.down[b] if self.poset.leq(a, c))
            m = self.delta_between(mid, a) @ self.delta[(b, mid)]
        self._delta_cache[key] = m
        return m

    def flop_through(self, a: int, b: int, c: int) -> Matrix:
        return self.gamma_between(c, b) @ self.delta_between(a, c)

    def label(self, i: int) -> str:
        return self.poset.faces[i].label

    def __eq__(self, other) -> bool:
        return (isinstance(other, HyperbolicSheaf) and self.arrangement == other.arrangement
                and self.dims == other.dims and self.gamma == other.gamma and self.delta == other.delta)

    def to_json(self) -> dict:
        return {
            "arrangement": self.arrangement.to_json(),
            "faces": self.poset.labels(),
            "dims": list(self.dims),
            "gamma": {f"{a}->{b}": m.to_json() for (a, b), m in self.gamma.items()},
            "delta": {f"{b}->{a}": m.to_json() for (b, a), m in self.delta.items()},
        }


@dataclass
class AxiomCheck:
    name: str
    passed: bool
    offending: tuple[str, ...] | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "offending": list(self.offending) if self.offending else None, "detail": self.detail}


@dataclass
class ValidationReport:
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]

    def first_failure(self) -> AxiomCheck | None:
        return next((c for c in self.checks if not c.passed), None)

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_json() for c in self.checks]}


def _functoriality(q: HyperbolicSheaf) -> tuple[AxiomCheck, AxiomCheck]:
    g_bad = d_bad = None
    for b, d, mids in q.poset.intervals_of_length_two():
        gs = [q.gamma[(c, d)] @ q.gamma[(b, c)] for c in mids]
        ds = [q.delta[(c, b)] @ q.delta[(d, c)] for c in mids]
        if g_bad is None and any(m != gs[0] for m in gs):
            g_bad = (q.label(b), q.label(d))
        if d_bad is None and any(m != ds[0] for m in ds):
            d_bad = (q.label(d), q.label(b))
    return (AxiomCheck("gamma functoriality", g_bad is None, g_bad),
            AxiomCheck("delta functoriality", d_bad is None, d_bad))


def validate(q: HyperbolicSheaf) -> ValidationReport:
    """Check functoriality and axioms (i)-(iii); each failure names the first offending faces."""
    poset = q.poset
    nf = len(poset)
    report = ValidationReport()
    g_check, d_check = _functoriality(q)
    report.checks += [g_check, d_check]
    if not (g_check.passed and d_check.passed):
        report.checks.append(AxiomCheck("axiom (i)", False, None, "skipped: maps are not functorial"))
        return report
    bad = None
    for b in range(nf):
        for a in poset.above(b):
            if q.gamma_between(b, a) @ q.delta_between(a, b) != Matrix.identity(q.dims[a]):
                bad = (q.label(b), q.label(a))
                break
        if bad:
            break
    report.checks.append(AxiomCheck("axiom (i)", bad is None, bad,
                                    "" if bad is None else "gamma*delta is not the identity"))
    bad = None
    for a in range(nf):
        for b in range(nf):
            common = [c for c in range(nf) if poset.leq(c, a) and poset.leq(c, b)]
            ref = q.flop_through(a, b, common[0])
            for c in common[1:]:
                if q.flop_through(a, b, c) != ref:
                    bad = (q.label(a), q.label(b), q.label(c))
                    break
            if bad:
                break
        if bad:
            break
    report.checks.append(AxiomCheck("flop independence", bad is None, bad))
    if not report.ok:
        return report
    bad = None
    for a, b, c in collinear_triples(poset):
        if not (q.dims[a] and q.dims[c]):
            continue
        if flop(q, a, c) != flop(q, b, c) @ flop(q, a, b):
            bad = (q.label(a), q.label(b), q.label(c))
            break
    report.checks.append(AxiomCheck("axiom (ii)", bad is None, bad))
    bad = None
    for c in range(nf):
        ups = poset.up[c]
        for i, a in enumerate(ups):
            for b in ups[i + 1:]:
                # a wall separates only faces spanning the same subspace
                if poset.faces[a].zero_set() != poset.faces[b].zero_set():
                    continue
                for x, y in ((a, b), (b, a)):
                    if q.dims[x] != q.dims[y] or rank(flop(q, x, y)) != q.dims[x]:
                        bad = (q.label(x), q.label(y), q.label(c))
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    report.checks.append(AxiomCheck("axiom (iii)", bad is None, bad))
    bad = None
    for b in range(nf):
        for a in poset.above(b):
            if rank(q.gamma_between(b, a)) != q.dims[a] or rank(q.delta_between(a, b)) != q.dims[a]:
                bad = (q.label(b), q.label(a))
                break
        if bad:
            break
    report.checks.append(AxiomCheck("gamma onto, delta into", bad is None, bad))
    return report


def flop(q: HyperbolicSheaf, a: int, b: int) -> Matrix:
    """phi_{ab}, computed through the minimal face (a common lower bound of every pair)."""
    return q.flop_through(a, b, q.poset.minimal)


def verdier_dual(q: HyperbolicSheaf) -> HyperbolicSheaf:
    gamma = {(a, b): q.delta[(b, a)].T for a, b in q.poset.covers}
    delta = {(b, a): q.gamma[(a, b)].T for a, b in q.poset.covers}
    return HyperbolicSheaf(q.poset, q.dims, gamma, delta)


def constant_sheaf(poset: FacePoset) -> HyperbolicSheaf:
    one = Matrix.identity(1)
    return HyperbolicSheaf(poset, [1] * len(poset), {p: one for p in poset.covers},
                           {(b, a): one for a, b in poset.covers})


def skyscraper_sheaf(poset: FacePoset) -> HyperbolicSheaf:
    dims = [int(i == poset.minimal) for i in range(len(poset))]
    return HyperbolicSheaf(poset, dims, {}, {})


def direct_sum(q1: HyperbolicSheaf, q2: HyperbolicSheaf) -> HyperbolicSheaf:
    if q1.arrangement != q2.arrangement:
        raise SheafFormatError("direct sum needs sheaves on the same arrangement")

    def blockdiag(m1: Matrix, m2: Matrix) -> Matrix:
        rows = [list(r) + [0] * m2.cols for r in m1.data] + [[0] * m1.cols + list(r) for r in m2.data]
        return Matrix(m1.rows + m2.rows, m1.cols + m2.cols, rows)

    poset = q1.poset
    gamma = {p: blockdiag(q1.gamma[p], q2.gamma[p]) for p in poset.covers}
    delta = {(b, a): blockdiag(q1.delta[(b, a)], q2.delta[(b, a)]) for a, b in poset.covers}
    return HyperbolicSheaf(poset, [x + y for x, y in zip(q1.dims, q2.dims)], gamma, delta)


def tilted_a1() -> HyperbolicSheaf:
    """E_0 = Q^2 and E_+ = E_- = Q, with the two chambers seeing different coordinates."""
    poset = enumerate_faces(Arrangement.from_rows(1, [[1]]))
    o, minus, plus = poset.face_id("0"), poset.face_id("-"), poset.face_id("+")
    col = Matrix.from_rows([[1], [1]])
    return HyperbolicSheaf(poset, [2 if i == o else 1 for i in range(3)],
                           {(o, minus): Matrix.from_rows([[1, 0]]), (o, plus): Matrix.from_rows([[0, 1]])},
                           {(minus, o): col, (plus, o): col})


def sheaf_from_json(data: dict) -> HyperbolicSheaf:
    try:
        arr = Arrangement.from_json(data["arrangement"])
        labels = list(data["faces"])
        dims = [int(x) for x in data["dims"]]
        gamma_raw = dict(data.get("gamma", {}))
        delta_raw = dict(data.get("delta", {}))
    except (KeyError, TypeError, ValueError) as exc:
        raise SheafFormatError(f"malformed sheaf file: {exc}") from exc
    if len(dims) != len(labels):
        raise SheafFormatError("faces and dims have different lengths")
    poset = enumerate_faces(arr)
    try:
        given = [parse_signs(s) for s in labels]
    except ArrangementError as exc:
        raise SheafFormatError(str(exc)) from exc
    expected = set(poset.index)
    missing = sorted(poset.faces[poset.index[s]].label for s in expected - set(given))
    extra = sorted({lab for lab, s in zip(labels, given) if s not in expected})
    if missing or extra or len(set(given)) != len(given):
        raise SheafFormatError(f"face list does not match the arrangement (missing {missing}, extra {extra})",
                               missing=missing, extra=extra)
    to_poset = [poset.index[s] for s in given]
    pdims = [0] * len(poset)
    for i, d in enumerate(dims):
        pdims[to_poset[i]] = d

    def parse_maps(raw: dict, kind: str) -> dict:
        out = {}
        for key, rows in raw.items():
            try:
                src, dst = (int(x) for x in key.split("->"))
                s, t = to_poset[src], to_poset[dst]
            except (ValueError, IndexError) as exc:
                raise SheafFormatError(f"bad {kind} key {key!r}") from exc
            shape = (pdims[t], pdims[s])
            try:
                if not rows and shape[0] == 0:
                    m = Matrix(*shape)
                else:
                    m = Matrix.from_json(rows)
                    if not rows or m.shape != shape:
                        raise ValueError
            except (ValueError, TypeError, ZeroDivisionError):
                raise SheafFormatError(
                    f"{kind} map {labels[src]}->{labels[dst]} has the wrong shape or entries, expected {shape}",
                    pair=(labels[src], labels[dst]), kind=kind) from None
            out[(s, t)] = m
        return out

    return HyperbolicSheaf(poset, pdims, parse_maps(gamma_raw, "gamma"), parse_maps(delta_raw, "delta"))


def read_sheaf(path) -> HyperbolicSheaf:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SheafFormatError(f"{path}: not JSON ({exc})") from exc
    return sheaf_from_json(data)


def write_sheaf(q: HyperbolicSheaf, path) -> None:
    Path(path).write_text(json.dumps(q.to_json(), indent=1) + "\n")
