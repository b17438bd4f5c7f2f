"""Derivation complexes: bases, boundaries, and the three scopes."""

import random

import pytest

from rht import (
    ABSOLUTE,
    IDEAL,
    RELATIVE,
    AlgElement,
    Derivation,
    apply_derivation,
    augmentation_matrix,
    boundary_matrix,
    der_basis,
    restriction_matrix,
)
from rht.derivations import dual_frame, inclusion_matrix
from rht.errors import GeneratorSetMismatch

from conftest import as_dict, load, oracle_operator, random_fibration, random_space


def scopes_of(m):
    from rht import RelativeModel

    return (ABSOLUTE, RELATIVE, IDEAL) if isinstance(m, RelativeModel) else (ABSOLUTE,)


def top_of(m):
    from rht import RelativeModel

    fiber = m.fiber if isinstance(m, RelativeModel) else m
    return max(g.degree for g in fiber.gens)


# ----------------------------------------------------------------------
# slice bases


def test_absolute_slice_dims_by_hand(su5):
    # shift 2 pairs (v, m) need |m| = |v| - 2: v2->3, v3->5, v4->7, each a
    # single monomial since all generators are odd
    slice2 = der_basis(su5, 2, ABSOLUTE)
    assert slice2.labels() == ["(v2, v1)", "(v3, v2)", "(v4, v3)"]
    # shift 9 only (v4, 1) survives
    assert der_basis(su5, 9, ABSOLUTE).labels() == ["(v4, 1)"]
    assert der_basis(su5, 10, ABSOLUTE).dim == 0


def test_relative_slice_contains_base_valued_pairs(su5_bundle):
    rel = der_basis(su5_bundle, 1, RELATIVE)
    labels = rel.labels()
    assert "(v2, t1)" in labels  # base-valued pair absent from the fiber slice
    absolute = der_basis(su5_bundle, 1, ABSOLUTE)
    assert all(lbl in labels for lbl in absolute.labels())


def test_scope_dims_split(su5_bundle, ex44):
    for f in (su5_bundle, ex44):
        for n in range(0, top_of(f) + 1):
            dim_i = der_basis(f, n, IDEAL).dim
            dim_a = der_basis(f, n, ABSOLUTE).dim
            dim_r = der_basis(f, n, RELATIVE).dim
            assert dim_i + dim_a == dim_r


def test_der_basis_negative_shift_rejected():
    m = load("wedge.smf")[0]
    # values of degree top - 0 = 7 are fine, but asking at shift -1 is not
    with pytest.raises(ValueError):
        der_basis(m, -1)


# ----------------------------------------------------------------------
# derivations as maps


def test_derivation_homogeneity_enforced(su5):
    gens = su5.gens
    v3 = AlgElement.gen(gens, "v3")
    with pytest.raises(ValueError):
        Derivation(gens, 2, {gens.get("v4").index: v3 + AlgElement.unit(gens)})


def test_apply_derivation_matches_oracle(su5):
    rng = random.Random(11)
    gens = su5.gens
    for _ in range(20):
        n = rng.randint(1, 6)
        basis = der_basis(su5, n, ABSOLUTE)
        if basis.dim == 0:
            continue
        theta = basis.derivation(rng.randrange(basis.dim))
        # a random element of fixed degree
        from rht import basis_in_degree

        deg = rng.randint(0, 12)
        element = AlgElement.zero(gens)
        for m in basis_in_degree(gens, deg):
            element = element + AlgElement.monomial(gens, m, rng.randint(-2, 2))
        got = apply_derivation(theta, element)
        want = oracle_operator(
            gens,
            {i: as_dict(v) for i, v in theta.values.items()},
            theta.shift,
            element,
        )
        assert as_dict(got) == want


def test_apply_derivation_wrong_gens(su5, ex44):
    basis = der_basis(su5, 3, ABSOLUTE)
    theta = basis.derivation(0)
    with pytest.raises(GeneratorSetMismatch):
        apply_derivation(theta, AlgElement.unit(ex44.fiber.gens))


# ----------------------------------------------------------------------
# boundary operator


def check_boundary_against_definition(m, n, scope):
    """delta(theta)(g) must equal D(theta g) - (-1)^n theta(D g) for all g."""
    from rht import RelativeModel

    src = der_basis(m, n, scope)
    tgt = der_basis(m, n - 1, scope)
    matrix = boundary_matrix(m, n, scope)
    model = m.total if (isinstance(m, RelativeModel) and scope != ABSOLUTE) else (
        m.fiber if isinstance(m, RelativeModel) else m
    )
    domain = src.domain_gens
    sign = (-1) ** n
    for j in range(src.dim):
        theta = src.derivation(j)
        col = matrix.column(j)
        out = Derivation(
            tgt.value_gens,
            n - 1,
            _values_from_coords(tgt, col),
        )
        for g in domain:
            gv = model.gens.get(g.name)
            gen_el = AlgElement.gen(model.gens, gv.name)
            lhs = out(gen_el)
            rhs = model.d(theta(gen_el)) - sign * theta(model.d(gen_el))
            assert lhs == rhs, (scope, n, src.labels()[j], g.name)


def _values_from_coords(slice_, coords):
    values = {}
    for i, c in enumerate(coords):
        if not c:
            continue
        g, mono = slice_.pairs[i]
        term = AlgElement.monomial(slice_.value_gens, mono, c)
        values[g.index] = values.get(g.index, AlgElement.zero(slice_.value_gens)) + term
    return values


def test_boundary_matches_definition(su5, su5_bundle, ex44):
    for m in (su5, su5_bundle, ex44):
        for scope in scopes_of(m):
            for n in range(1, top_of(m) + 1):
                check_boundary_against_definition(m, n, scope)


def test_boundary_squares_to_zero_on_fixtures(su5, su5_bundle, ex44, ex47, wedge):
    models = [su5, su5_bundle, ex44] + list(ex47.values()) + list(wedge.values())
    for m in models:
        for scope in scopes_of(m):
            for n in range(1, top_of(m)):
                prod = boundary_matrix(m, n, scope) @ boundary_matrix(m, n + 1, scope)
                assert prod.is_zero(), (m, scope, n)


def test_restriction_is_chain_map(su5_bundle, ex44, ex47):
    for f in [su5_bundle, ex44] + list(ex47.values()):
        for n in range(1, top_of(f)):
            lhs = restriction_matrix(f, n) @ boundary_matrix(f, n + 1, RELATIVE)
            rhs = boundary_matrix(f, n + 1, ABSOLUTE) @ restriction_matrix(f, n + 1)
            assert lhs == rhs, (f.name, n)


def test_inclusion_followed_by_restriction_is_zero(su5_bundle):
    for n in range(0, top_of(su5_bundle) + 1):
        prod = restriction_matrix(su5_bundle, n) @ inclusion_matrix(su5_bundle, n)
        assert prod.is_zero()


def test_augmentation_picks_unit_pairs(su5):
    aug = augmentation_matrix(su5, 7)
    basis = der_basis(su5, 7, ABSOLUTE)
    assert dual_frame(su5, 7) == ("v3*",)
    assert aug.rows == 1 and aug.cols == basis.dim
    unit_cols = [j for j, (w, m) in enumerate(basis.pairs) if m.is_unit]
    assert [aug.get(0, j) for j in unit_cols] == [1]


def test_augmentation_kills_boundaries(su5, su5_bundle):
    for n in range(1, top_of(su5)):
        prod = augmentation_matrix(su5, n) @ boundary_matrix(su5, n + 1, ABSOLUTE)
        assert prod.is_zero()
    for n in range(1, top_of(su5_bundle)):
        eval_res = augmentation_matrix(su5_bundle, n) @ restriction_matrix(su5_bundle, n)
        prod = eval_res @ boundary_matrix(su5_bundle, n + 1, RELATIVE)
        assert prod.is_zero()


def test_random_models_boundary_squares_to_zero():
    rng = random.Random(23)
    for _ in range(10):
        s = random_space(rng)
        for n in range(1, top_of(s)):
            prod = boundary_matrix(s, n) @ boundary_matrix(s, n + 1)
            assert prod.is_zero()
        f = random_fibration(rng)
        for scope in (ABSOLUTE, RELATIVE, IDEAL):
            for n in range(1, top_of(f)):
                prod = boundary_matrix(f, n, scope) @ boundary_matrix(f, n + 1, scope)
                assert prod.is_zero()
