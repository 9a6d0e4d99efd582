"""Shared corpus of arrangements and valid hyperbolic sheaves for the test suite."""
from functools import lru_cache

from artifact.arrangement import Arrangement, enumerate_faces, make_flat, named_arrangement
from artifact.calculus import fourier, microlocalize_experimental
from artifact.hypsheaf import constant_sheaf, direct_sum, skyscraper_sheaf, tilted_a1, verdier_dual

NAMES = ["A1", "A2", "A3", "Braid3", "Generic4"]


def five_planes() -> Arrangement:
    return Arrangement.from_rows(3, [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, -1, 2]])


@lru_cache(maxsize=None)
def sheaves() -> tuple:
    out = []
    for name in NAMES:
        poset = enumerate_faces(named_arrangement(name))
        out.append((f"constant {name}", constant_sheaf(poset)))
        out.append((f"skyscraper {name}", skyscraper_sheaf(poset)))
    a1 = enumerate_faces(named_arrangement("A1"))
    a2 = enumerate_faces(named_arrangement("A2"))
    tilted = tilted_a1()
    out.append(("tilted A1", tilted))
    out.append(("tilted + constant A1", direct_sum(tilted, constant_sheaf(a1))))
    out.append(("constant + skyscraper A2", direct_sum(constant_sheaf(a2), skyscraper_sheaf(a2))))
    out.append(("dual tilted A1", verdier_dual(tilted)))
    out.append(("fourier tilted A1", fourier(tilted)))
    line = microlocalize_experimental(constant_sheaf(a2), make_flat(a2.arrangement, [0])).sheaf
    out.append(("line-supported A2", line))
    out.append(("line-supported + constant A2", direct_sum(line, constant_sheaf(a2))))
    return tuple(out)


def essential_sheaves() -> list:
    return [(n, q) for n, q in sheaves() if q.arrangement.is_essential()]
