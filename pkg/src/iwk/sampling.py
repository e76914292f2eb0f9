"""Random instances for property checks (seeded, deterministic)."""

from __future__ import annotations

import random

from .crossed_product import ArtinRep, CrossedElement, FiniteLevelGroup, ore_s_test
from .iwasawa_series import IwasawaSeries
from .padic import ExtensionRing


def standard_groups(p: int) -> dict:
    return {
        "1": FiniteLevelGroup.trivial(p),
        "Z/2": FiniteLevelGroup.cyclic(2, p),
        "Z/4": FiniteLevelGroup.cyclic(4, p),
        "S3": FiniteLevelGroup.symmetric3(p),
    }


def random_poly(rng: random.Random, ring: ExtensionRing, max_deg=2, bound=6, D=None):
    deg = rng.randint(0, max_deg)
    return IwasawaSeries(ring, [rng.randint(-bound, bound) for _ in range(deg + 1)], D)


def random_element(group: FiniteLevelGroup, rng: random.Random, max_deg=2, bound=6, density=0.7):
    ring = ExtensionRing.zp(group.p)
    coeffs = {}
    for e in group.elements:
        if rng.random() < density:
            coeffs[e] = random_poly(rng, ring, max_deg, bound)
    if not coeffs:
        coeffs[group.elements[group.identity]] = IwasawaSeries(ring, [1], None)
    return CrossedElement(group, coeffs)


def random_in_S(group, rng, max_deg=2, bound=6, tries=200):
    for _ in range(tries):
        f = random_element(group, rng, max_deg, bound)
        if ore_s_test(f).in_S:
            return f
    raise RuntimeError("no element of S found")


def representations(group: FiniteLevelGroup, name: str):
    """Integral representations of the standard groups over Z_p."""
    ring = ExtensionRing.zp(group.p)
    reps = [ArtinRep.trivial(group, ring)]
    if name in ("Z/2", "Z/4"):
        n = len(group)
        reps.append(ArtinRep.character(group, {e: (-1) ** i for i, e in enumerate(group.elements)}, ring))
    if name == "Z/4":
        rot = [[1, 0], [0, 1]]
        mats = {}
        for e in group.elements:
            mats[e] = rot
            rot = [[-rot[1][0], -rot[1][1]], [rot[0][0], rot[0][1]]]
        reps.append(ArtinRep(group, ring, mats))
    if name == "S3":
        sign = {}
        for e in group.elements:
            perm = [int(c) for c in e]
            inv = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
            sign[e] = (-1) ** inv
        reps.append(ArtinRep.character(group, sign, ring))
    return reps
