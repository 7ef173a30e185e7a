"""Builtin verification suite and seeded random model generators.

The generators are shared with the test suite so the CLI's --seed flag
and the tests draw from the same distribution of small complexes.  All
randomness flows through an explicit random.Random, so a seed pins every
byte of the verify report.
"""

from __future__ import annotations

import random
from fractions import Fraction
from importlib import resources
from math import comb
from typing import Callable

from . import io as tio
from .equivariant import GradedPoly, PolyFraction, abbv_integrate
from .ktheory import evaluate_at_one, fixed_point_sum, projective_space_dataset
from .simplicial import CochainPair, SimplicialComplex, SubcomplexSelection
from .torsor import (
    CohomologyClass,
    canonical_lift_if_unique,
    check_exactness,
    les,
    supported_lifts,
)

__all__ = [
    "random_complex",
    "random_pair",
    "random_supported_class",
    "load_dataset",
    "run_verify",
]


def random_complex(
    rng: random.Random,
    max_vertices: int = 6,
    max_generators: int = 6,
    max_card: int = 4,
    max_simplices: int = 30,
) -> SimplicialComplex:
    """A small random complex: random generator simplices, closed down.

    Resamples until the closure has at most max_simplices simplices, so
    callers can rely on the size cap.
    """
    while True:
        n = rng.randint(1, max_vertices)
        labels = [f"v{i}" for i in range(n)]
        gens = []
        for _ in range(rng.randint(1, max_generators)):
            k = rng.randint(1, min(max_card, n))
            gens.append(rng.sample(range(n), k))
        cx, _ = SimplicialComplex.closure(labels, gens)
        if cx.simplex_count() <= max_simplices:
            return cx


def random_pair(
    rng: random.Random, **kwargs
) -> tuple[SimplicialComplex, SubcomplexSelection, CochainPair]:
    cx = random_complex(rng, **kwargs)
    k = rng.randint(0, cx.n_vertices)
    z = cx.full_subcomplex(rng.sample(range(cx.n_vertices), k))
    return cx, z, CochainPair.from_selection(cx, z)


def random_supported_class(
    pair: CochainPair, rng: random.Random, degree: int | None = None
) -> CohomologyClass | None:
    """A random class with vanishing restriction, or None if every degree
    has trivial supported cohomology.

    Drawn as the forgetful image of a random supported class, which is
    exactly the supported ones by exactness.
    """
    degrees = (
        [degree] if degree is not None else list(range(pair.max_degree() + 2))
    )
    candidates = []
    for d in degrees:
        seq = les(pair, d)
        if seq.basis_rel.dim > 0:
            candidates.append(seq)
    if not candidates:
        return None
    seq = candidates[rng.randrange(len(candidates))]
    w = [Fraction(rng.randint(-3, 3)) for _ in range(seq.basis_rel.dim)]
    return seq.basis_abs.element(seq.forget.apply(w))


def load_dataset(name: str):
    text = resources.files("torloc").joinpath("datasets", name).read_text("utf-8")
    return tio.parse_json_text(text)


def _check_circle() -> tuple[bool, str]:
    obj = load_dataset("circle_lifts.json")
    _, _, pair, _ = tio.parse_pair_input(obj)
    cls = tio.parse_class_spec(obj["class"], pair)
    torsor = supported_lifts(pair, cls)
    unique = canonical_lift_if_unique(torsor)
    ok = (
        torsor.ambient.dim == 2
        and len(torsor.delta_image_basis) == 1
        and unique is None
    )
    detail = (
        f"ambient dim {torsor.ambient.dim}, directions {len(torsor.delta_image_basis)}, "
        f"unique lift: {'none' if unique is None else 'present'}"
    )
    return ok, detail


def _check_exactness_sweep(seed: int, runs: int = 50) -> tuple[bool, str]:
    rng = random.Random(seed)
    failures = 0
    for _ in range(runs):
        _, _, pair = random_pair(rng)
        if not check_exactness(pair).ok:
            failures += 1
    return failures == 0, f"{runs} random pairs, {failures} exactness failures"


def _check_abbv(name: str, expected: Fraction) -> Callable[[], tuple[bool, str]]:
    def run() -> tuple[bool, str]:
        obj = load_dataset(name)
        components, restrictions = tio.parse_abbv_input(obj)
        got = abbv_integrate(components, restrictions)
        want = PolyFraction(GradedPoly.constant(components[0].num_vars, expected))
        return got == want, f"integrates to {got}, expected {expected}"

    return run


def _check_chi_sweep() -> tuple[bool, str]:
    bad = []
    for n in range(1, 4):
        for d in range(0, 6):
            val = evaluate_at_one(fixed_point_sum(projective_space_dataset(n, d)))
            if val != comb(n + d, n):
                bad.append((n, d))
    return not bad, f"n=1..3, d=0..5 against binomial counts; mismatches: {bad}"


def _check_chi_acyclic() -> tuple[bool, str]:
    bad = []
    for n in range(1, 4):
        for d in range(-n, 0):
            val = evaluate_at_one(fixed_point_sum(projective_space_dataset(n, d)))
            if val != 0:
                bad.append((n, d))
    return not bad, f"acyclic twists d=-1..-n vanish; mismatches: {bad}"


def _check_ktheory_fixture() -> tuple[bool, str]:
    obj = load_dataset("kth_p2_d3.json")
    points = tio.parse_ktheory_input(obj)
    val = evaluate_at_one(fixed_point_sum(points))
    return val == 10, f"value at 1 is {val}, expected 10"


def run_verify(seed: int) -> dict:
    """The builtin suite; deterministic given the seed."""
    checks = []

    def add(name: str, fn: Callable[[], tuple[bool, str]]):
        ok, detail = fn()
        checks.append({"check": name, "pass": ok, "detail": detail})

    add("circle.lifts.affine_line", _check_circle)
    add("les.exactness.sweep", lambda: _check_exactness_sweep(seed))
    add("abbv.p1.unit_zero", _check_abbv("p1_abbv_unit.json", Fraction(0)))
    add("abbv.p1.euler_count", _check_abbv("p1_abbv_euler.json", Fraction(2)))
    add("abbv.p1.hyperplane_one", _check_abbv("p1_abbv_hyperplane.json", Fraction(1)))
    add("abbv.p2.unit_zero", _check_abbv("p2_abbv_unit.json", Fraction(0)))
    add("abbv.p2.euler_count", _check_abbv("p2_abbv_euler.json", Fraction(3)))
    add("abbv.p3.unit_zero", _check_abbv("p3_abbv_unit.json", Fraction(0)))
    add("abbv.p3.euler_count", _check_abbv("p3_abbv_euler.json", Fraction(4)))
    add("ktheory.chi.binomial_sweep", _check_chi_sweep)
    add("ktheory.chi.acyclic_range", _check_chi_acyclic)
    add("ktheory.p2_d3.value_10", _check_ktheory_fixture)

    return {
        "command": "verify",
        "seed": seed,
        "checks": checks,
        "ok": all(c["pass"] for c in checks),
    }
