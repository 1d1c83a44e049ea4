import itertools
import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from wciscope.aut import (
    PolynomialMap,
    aut_structure,
    central_torus_element,
    compose,
    identity_map,
    is_unipotent_form,
    make_unipotent_element,
    reductive_element,
)
from wciscope.errors import NotWellFormedError, StructuralError
from wciscope.poly import Polynomial, enumerate_monomials, random_homogeneous, variables
from wciscope.wps import WeightedProjectiveSpace

P112 = WeightedProjectiveSpace((1, 1, 2))
x0, x1, x2 = variables(3)


@pytest.mark.parametrize("N", range(1, 9))
def test_projective_space_has_no_unipotent_part(N):
    s = aut_structure(WeightedProjectiveSpace((1,) * (N + 1)))
    assert s.unipotent_dim == 0
    assert s.reductive_factors == (N + 1,)
    assert s.total_dim == (N + 1) ** 2 - 1


def test_aut_structure_examples():
    s = aut_structure(P112)
    assert (s.per_weight_phi_dims, s.unipotent_dim, s.reductive_dim, s.total_dim) == ((0, 3), 3, 4, 7)
    s = aut_structure(WeightedProjectiveSpace((1, 1, 1, 3, 3)))
    assert (s.per_weight_phi_dims, s.unipotent_dim, s.reductive_dim, s.total_dim) == ((0, 10), 20, 12, 32)


def test_aut_structure_rejects_non_well_formed():
    with pytest.raises(NotWellFormedError, match="P\\(1,2\\)"):
        aut_structure(WeightedProjectiveSpace((1, 2, 2)))


@pytest.mark.parametrize("N, m", [(n, m) for n in range(2, 6) for m in range(2, 6)])
def test_phi_dimension_for_one_heavy_variable(N, m):
    s = aut_structure(WeightedProjectiveSpace((1,) * N + (m,)))
    assert s.per_weight_phi_dims[-1] == comb(N + m - 1, N - 1)


def test_make_unipotent_element_examples():
    assert make_unipotent_element(P112, {}) == identity_map((1, 1, 2))
    assert make_unipotent_element(P112, {(1, 0): Polynomial.zero(3)}).is_identity()
    sigma = make_unipotent_element(P112, {(1, 0): x0 * x1})
    assert sigma.images == (x0, x1, x2 + x0 * x1)


@pytest.mark.parametrize(
    "phis",
    [
        {(1, 0): x2},  # same weight
        {(1, 0): x0},  # wrong degree
        {(0, 0): x1},  # lowest group has nothing below it
        {(2, 0): x0**2},  # no such group
    ],
)
def test_make_unipotent_element_rejects(phis):
    with pytest.raises(StructuralError):
        make_unipotent_element(P112, phis)


def test_central_torus_element():
    assert central_torus_element(P112, 1).is_identity()
    assert central_torus_element(P112, 2).images == (2 * x0, 2 * x1, 4 * x2)
    with pytest.raises(StructuralError):
        central_torus_element(P112, 0)


@pytest.mark.parametrize("w", [(1, 1, 2), (1, 2, 3), (2, 3, 5, 5)])
@pytest.mark.parametrize("d", [0, 3, 6, 10])
def test_central_torus_acts_by_scalar_on_each_degree(w, d):
    t = Fraction(-3, 2)
    sigma = central_torus_element(WeightedProjectiveSpace(w), t)
    for e in enumerate_monomials(w, d):
        mono = Polynomial.monomial(e)
        assert sigma.apply(mono) == mono * t**d


def test_compose_examples():
    sigma = make_unipotent_element(P112, {(1, 0): x0 * x1})
    assert compose(sigma, identity_map((1, 1, 2))) == sigma
    tau = make_unipotent_element(P112, {(1, 0): x0**2 * 3 - x1**2})
    assert compose(sigma, tau) == make_unipotent_element(P112, {(1, 0): x0 * x1 + x0**2 * 3 - x1**2})
    inverse = make_unipotent_element(P112, {(1, 0): -(x0 * x1)})
    assert compose(sigma, inverse).is_identity()


def test_compose_action_order():
    f = x2**2 + x0 * x1 * x2
    sigma = make_unipotent_element(P112, {(1, 0): x0**2})
    rho = reductive_element(P112, [[[1, 1], [0, 1]], [[5]]])
    assert compose(sigma, rho).apply(f) == rho.apply(sigma.apply(f))


def test_compose_of_unipotents_is_unipotent():
    P = WeightedProjectiveSpace((1, 1, 2, 3))
    rng = random.Random(3)
    for _ in range(5):
        phis = {
            (1, 0): random_homogeneous(4, P.weights, 2, rng, among=(0, 1)),
            (2, 0): random_homogeneous(4, P.weights, 3, rng, among=(0, 1, 2)),
        }
        psis = {(2, 0): random_homogeneous(4, P.weights, 3, rng, among=(0, 1, 2))}
        assert is_unipotent_form(P, compose(make_unipotent_element(P, phis), make_unipotent_element(P, psis)))


def test_reductive_element_validation():
    with pytest.raises(StructuralError):
        reductive_element(P112, [[[1, 2], [2, 4]], [[1]]])
    with pytest.raises(StructuralError):
        reductive_element(P112, [[[1]], [[1]]])


def test_polynomial_map_json_roundtrip():
    sigma = make_unipotent_element(P112, {(1, 0): x0 * x1 * Fraction(2, 3)})
    assert PolynomialMap.from_json(sigma.to_json()) == sigma


weight_systems = st.lists(st.integers(1, 4), min_size=2, max_size=5).map(lambda w: WeightedProjectiveSpace(tuple(w)))


@settings(max_examples=40, deadline=None)
@given(weight_systems, st.integers(0, 10**6), st.integers(0, 8))
def test_unipotent_elements_preserve_degree(P, seed, d):
    try:
        aut_structure(P)
    except NotWellFormedError:
        return
    rng = random.Random(seed)
    n = P.nvars
    phis = {}
    for g, ((a, r), off) in enumerate(zip(P.groups, P.group_offsets())):
        lower = [j for j in range(n) if P.weights[j] < a]
        for pos in range(r):
            if lower:
                phis[(g, pos)] = random_homogeneous(n, P.weights, a, rng, among=lower)
    sigma = make_unipotent_element(P, phis)
    f = random_homogeneous(n, P.weights, d, rng)
    assert sigma.apply(f).is_homogeneous(P.weights, d)
