from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cup0_on_simplices, cup1_on_simplices
from skkcalc import corpus
from skkcalc.charclass import (
    CocycleF2,
    class_coordinates,
    coboundary,
    cohomology_basis,
    cup,
    cup_i,
    intersection_form_mid,
    power,
    ring,
    steenrod_sq,
    stiefel_whitney,
    top_sw_number,
    wu_classes,
)
from skkcalc.simplicial import ComplexError, euler_characteristic, homology
from skkcalc.triangulations import projective_delta


def gen(name, k=1, i=0):
    return cohomology_basis(corpus.load(name), k).representatives[i]


def nonzero(x):
    return not x.is_zero_class()


def same_class(x, y):
    return class_coordinates(x) == class_coordinates(y)


# -- cup products ------------------------------------------------------------------


def test_rp2_generator_squares_to_top_class():
    a = gen("rp2")
    assert cup(a, a).evaluate() == 1


def test_unit_is_neutral():
    for name in ("t2", "rp2", "cp2"):
        m = corpus.load(name)
        one = ring(m).unit()
        for k in range(m.dimension + 1):
            for x in cohomology_basis(m, k).representatives:
                assert cup(one, x).support == x.support
                assert cup(x, one).support == x.support


def test_torus_products():
    x, y = cohomology_basis(corpus.load("t2"), 1).representatives
    assert cup(x, y).evaluate() == 1
    assert cup(x, x).evaluate() == 0
    assert cup(y, y).evaluate() == 0


def test_cup_rejects_mixed_complexes():
    with pytest.raises(ValueError):
        cup(gen("rp2"), gen("t2"))


@pytest.mark.parametrize("name, top", [("rp2", 2), ("rp3", 3), ("rp4", 4)])
def test_projective_space_truncated_polynomial_ring(name, top):
    a = gen(name)
    for k in range(1, top + 1):
        assert nonzero(power(a, k))
    assert power(a, top + 1).support == 0


def test_cp2_generator_squares():
    c = gen("cp2", 2)
    assert cup(c, c).evaluate() == 1


@pytest.mark.parametrize("name", ["t2", "klein", "rp3", "cp2"])
def test_cup_is_commutative_on_classes(name):
    m = corpus.load(name)
    n = m.dimension
    for p in range(1, n):
        for q in range(1, n - p + 1):
            for x in cohomology_basis(m, p).representatives:
                for y in cohomology_basis(m, q).representatives:
                    assert cup(x, y).is_cocycle()
                    assert same_class(cup(x, y), cup(y, x))


# -- cochain-level oracles ------------------------------------------------------------


def _as_sets(m, x: CocycleF2):
    level = m.simplices[x.degree]
    return {level[j] for j in range(len(level)) if x.support >> j & 1}


def _from_set(m, d, k, faces):
    index = m.index[k]
    return CocycleF2(d, k, sum(1 << index[f] for f in faces))


cochain_cases = st.sampled_from(["t2", "rp2", "klein", "s3", "rp3"]).flatmap(
    lambda name: st.tuples(
        st.just(name),
        st.integers(0, 2).flatmap(
            lambda p: st.integers(0, 2).flatmap(
                lambda q: st.tuples(
                    st.just(p),
                    st.just(q),
                    st.integers(0, 2 ** corpus.load(name).f_vector[p] - 1),
                    st.integers(0, 2 ** corpus.load(name).f_vector[q] - 1),
                )
            )
        ),
    )
)


@settings(max_examples=60)
@given(cochain_cases)
def test_cup_matches_front_back_oracle(case):
    name, (p, q, sa, sb) = case
    m = corpus.load(name)
    d = m.delta()
    if p + q > d.dimension:
        return
    a, b = CocycleF2(d, p, sa), CocycleF2(d, q, sb)
    want = cup0_on_simplices(_as_sets(m, a), _as_sets(m, b), p, q, m.simplices[p + q])
    assert _as_sets(m, cup(a, b)) == want


@settings(max_examples=60)
@given(cochain_cases)
def test_cup1_matches_explicit_formula(case):
    name, (p, q, sa, sb) = case
    m = corpus.load(name)
    d = m.delta()
    if q == 0 or p + q - 1 > d.dimension or p + q - 1 < 0:
        return
    a, b = CocycleF2(d, p, sa), CocycleF2(d, q, sb)
    want = cup1_on_simplices(_as_sets(m, a), _as_sets(m, b), p, q, m.simplices[p + q - 1])
    assert _as_sets(m, cup_i(a, b, 1)) == want


@settings(max_examples=80)
@given(cochain_cases, st.integers(1, 2))
def test_cup_i_coboundary_formula(case, i):
    """d(a u_i b) = da u_i b + a u_i db + a u_{i-1} b + b u_{i-1} a over F_2."""
    name, (p, q, sa, sb) = case
    m = corpus.load(name)
    d = m.delta()
    if p + q - i + 1 > d.dimension or p + q - i < 0:
        return
    a, b = CocycleF2(d, p, sa), CocycleF2(d, q, sb)
    lhs = coboundary(cup_i(a, b, i)).support
    rhs = (
        cup_i(coboundary(a), b, i).support
        ^ cup_i(a, coboundary(b), i).support
        ^ cup_i(a, b, i - 1).support
        ^ cup_i(b, a, i - 1).support
    )
    assert lhs == rhs


@settings(max_examples=40)
@given(cochain_cases)
def test_cup_leibniz(case):
    name, (p, q, sa, sb) = case
    m = corpus.load(name)
    d = m.delta()
    if p + q + 1 > d.dimension:
        return
    a, b = CocycleF2(d, p, sa), CocycleF2(d, q, sb)
    assert coboundary(cup(a, b)).support == (cup(coboundary(a), b).support ^ cup(a, coboundary(b)).support)


# -- Steenrod squares ---------------------------------------------------------------


@pytest.mark.parametrize("name", ["rp2", "t2", "klein", "rp3", "cp2", "rp4"])
def test_square_postconditions(name):
    m = corpus.load(name)
    for k in range(m.dimension + 1):
        for x in cohomology_basis(m, k).representatives:
            assert same_class(steenrod_sq(0, x), x)
            if 2 * k <= m.dimension:
                assert same_class(steenrod_sq(k, x), cup(x, x))
            for i in range(k + 1, m.dimension - k + 1):
                assert steenrod_sq(i, x).is_zero_class()
            for i in range(0, m.dimension - k + 1):
                assert steenrod_sq(i, x).is_cocycle()


def test_sq1_on_rp2_is_the_square():
    a = gen("rp2")
    assert same_class(steenrod_sq(1, a), cup(a, a))
    assert nonzero(steenrod_sq(1, a))


def test_sq1_on_klein_bottle_is_nonzero():
    m = corpus.load("klein")
    assert any(nonzero(steenrod_sq(1, x)) for x in cohomology_basis(m, 1).representatives)


@pytest.mark.parametrize("name", ["t2", "klein", "rp3", "rp4"])
def test_sq_is_linear_on_classes(name):
    m = corpus.load(name)
    for k in range(1, m.dimension):
        reps = cohomology_basis(m, k).representatives
        for x in reps:
            for y in reps:
                for i in range(0, m.dimension - k + 1):
                    assert same_class(steenrod_sq(i, x + y), steenrod_sq(i, x) + steenrod_sq(i, y))


def test_sq_natural_under_restriction_to_boundary():
    """Restricting cochains to the boundary commutes with cup-i, since the vertex order is inherited."""
    pair = corpus.load_pair("cp2_minus_disc")
    w, bd = pair.total, pair.boundary
    dw, db = w.delta(), bd.delta()

    def restrict(x):
        faces = {s for s in _as_sets(w, x) if s in bd.index[x.degree]} if x.degree <= bd.dimension else set()
        return _from_set(bd, db, x.degree, faces)

    for x in cohomology_basis(w, 2).representatives + cohomology_basis(w, 1).representatives:
        for i in range(0, x.degree + 1):
            y = steenrod_sq(i, x)
            if y.degree > bd.dimension:
                continue
            assert restrict(y).support == steenrod_sq(i, restrict(x)).support


# -- Wu and Stiefel-Whitney classes ------------------------------------------------


def classes_nonzero(d):
    return {k: nonzero(x) for k, x in d.items() if k}


def test_wu_klein():
    v = wu_classes(corpus.load("klein"))
    assert nonzero(v[1])
    w = stiefel_whitney(corpus.load("klein"))
    assert nonzero(w[1]) and not nonzero(w[2])
    assert same_class(v[1], w[1])


@pytest.mark.parametrize("name", ["s1", "s2", "s3", "s4"])
def test_wu_sphere_vanishes(name):
    m = corpus.load(name)
    assert not any(classes_nonzero(wu_classes(m)).values())
    assert not any(classes_nonzero(stiefel_whitney(m)).values())


def test_wu_cp2():
    v = wu_classes(corpus.load("cp2"))
    assert not nonzero(v[1])
    assert class_coordinates(v[2]) == [1]


def test_sw_rp2():
    m = corpus.load("rp2")
    a = gen("rp2")
    w = stiefel_whitney(m)
    assert same_class(w[1], a)
    assert same_class(w[2], cup(a, a))


def test_sw_torus_trivial():
    assert classes_nonzero(stiefel_whitney(corpus.load("t2"))) == {1: False, 2: False}


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_sw_projective_space_binomials(n):
    m = corpus.load(f"rp{n}") if n <= 4 else projective_delta(n)
    w = stiefel_whitney(m)
    a = cohomology_basis(m, 1).representatives[0]
    for k in range(1, n + 1):
        want = power(a, k) if comb(n + 1, k) % 2 else CocycleF2(m.delta(), k, 0)
        assert same_class(w[k], want), k


@pytest.mark.parametrize("name", corpus.CLOSED_CORPUS)
def test_wu_identity(name):
    m = corpus.load(name)
    n = m.dimension
    v = wu_classes(m)
    for k in range(n + 1):
        for x in cohomology_basis(m, n - k).representatives:
            assert steenrod_sq(k, x).evaluate() == cup(v[k], x).evaluate()


@pytest.mark.parametrize("name", corpus.CLOSED_CORPUS)
def test_top_sw_number_is_euler_parity(name):
    m = corpus.load(name)
    assert top_sw_number(m) == euler_characteristic(m) % 2


@pytest.mark.parametrize("name, bit", [("rp2", 1), ("s2", 0), ("cp2", 1)])
def test_top_sw_examples(name, bit):
    assert top_sw_number(corpus.load(name)) == bit


@pytest.mark.parametrize("name", corpus.CLOSED_CORPUS)
def test_orientable_iff_w1_vanishes(name):
    m = corpus.load(name)
    assert m.is_orientable() == (not nonzero(stiefel_whitney(m)[1]))


@pytest.mark.parametrize("name", corpus.CLOSED_CORPUS + ("rp4",))
def test_k_orientability_consistency(name):
    """If w_1..w_{2^k-1} vanish then so does every v_l with 2^k not dividing l."""
    m = corpus.load(name)
    w, v = stiefel_whitney(m), wu_classes(m)
    n = m.dimension
    k = 0
    while 2 ** (k + 1) - 1 <= n and not any(nonzero(w[i]) for i in range(1, 2 ** (k + 1))):
        k += 1
    for ell in range(1, n + 1):
        if ell % 2**k:
            assert not nonzero(v[ell]), (k, ell)


def test_wu_rejects_non_closed():
    with pytest.raises(ComplexError):
        wu_classes(corpus.load("d2"))


# -- intersection form -----------------------------------------------------------


@pytest.mark.parametrize(
    "name, rank, even",
    [("cp2", 1, False), ("s2", 0, True), ("t2", 2, True), ("klein", 2, False), ("rp2", 1, False), ("s4", 0, True)],
)
def test_intersection_form_examples(name, rank, even):
    form = intersection_form_mid(corpus.load(name))
    assert (form.rank, form.is_even) == (rank, even)


@pytest.mark.parametrize("name", [n for n in corpus.CLOSED_CORPUS if corpus.load(n).dimension % 2 == 0])
def test_intersection_form_properties(name):
    m = corpus.load(name)
    form = intersection_form_mid(m)
    g = form.matrix
    assert all(g[i][j] == g[j][i] for i in range(form.size) for j in range(form.size))
    # nondegenerate by Poincare duality
    assert form.rank == form.size == homology(m, 2)[m.dimension // 2]
    # the diagonal is the Wu class pairing, so evenness means v_{n/2} = 0
    assert form.is_even == (not nonzero(wu_classes(m)[m.dimension // 2]))
    if form.is_even:
        assert form.rank % 2 == 0


def test_intersection_form_rejects_odd_dimension():
    with pytest.raises(ComplexError):
        intersection_form_mid(corpus.load("s3"))
