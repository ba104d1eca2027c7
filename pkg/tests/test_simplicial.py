import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import naive_betti
from skkcalc import corpus
from skkcalc import triangulations as tri
from skkcalc.simplicial import (
    ComplexError,
    ManifoldPair,
    SimplicialComplex,
    barycentric_subdivision,
    disjoint_union,
    euler_characteristic,
    homology,
    jstar_rank,
    kervaire_semichar,
    parse_field,
    product,
    relative_homology,
    validate,
)

SMALL = ("s1", "s2", "s3", "rp2", "t2", "klein", "moebius", "d2", "cylinder", "cp2")


# -- validation --------------------------------------------------------------------


def test_validate_sphere():
    r = validate(tri.sphere(2))
    assert r.ok and r.closed and r.orientable
    assert len(tri.sphere(2).components()) == 1


def test_validate_rp2():
    r = validate(corpus.load("rp2"))
    assert r.ok and r.closed and not r.orientable


def test_validate_simplex():
    k = tri.disc(2)
    r = validate(k)
    assert r.ok and not r.closed
    assert len(k.boundary().facets) == 3


def test_validate_flags_non_pseudomanifold():
    three_pages = SimplicialComplex(5, ((0, 1, 2), (0, 1, 3), (0, 1, 4)))
    r = validate(three_pages)
    assert not r.pseudomanifold and r.issues


def test_validate_flags_bad_link():
    # two tetrahedra boundaries glued at a vertex: pseudomanifold, but the link of 0 is two spheres
    a = [f for f in tri.sphere(2).facets]
    b = [tuple(0 if v == 0 else v + 3 for v in f) for f in a]
    k = SimplicialComplex(7, tuple(a + b))
    r = validate(k)
    assert r.pseudomanifold and not r.manifold_links


@pytest.mark.parametrize("name", corpus.CLOSED_CORPUS)
def test_corpus_closed_manifolds_validate(name):
    r = validate(corpus.load(name))
    assert r.ok and r.closed


@pytest.mark.parametrize("name, bd", corpus.PAIR_CORPUS.items())
def test_corpus_pairs_validate(name, bd):
    pair = corpus.load_pair(name)
    assert validate(pair.total).ok
    assert pair.boundary.is_closed()
    assert tuple(homology(pair.boundary, 2)) == tuple(homology(corpus.load(bd), 2))


# -- homology ------------------------------------------------------------------


@pytest.mark.parametrize("char", [2, 0])
def test_sphere_homology(char):
    assert tuple(homology(corpus.load("s2"), char)) == (1, 0, 1)


def test_rp3_homology():
    m = corpus.load("rp3")
    assert tuple(homology(m, "f2")) == (1, 1, 1, 1)
    assert tuple(homology(m, "q")) == (1, 0, 0, 1)


def test_klein_homology():
    assert tuple(homology(corpus.load("klein"), 2)) == (1, 2, 1)


def test_lens_space_homology():
    for p in (3, 4, 5):
        m = corpus.load(f"l{p}_1")
        assert tuple(homology(m, 0)) == (1, 0, 0, 1)
        assert tuple(homology(m, p if p != 4 else 2)) == (1, 1, 1, 1)
        assert tuple(homology(m, 7)) == (1, 0, 0, 1)


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("char", [2, 3, 0])
def test_homology_matches_dense_oracle(name, char):
    m = corpus.load(name)
    assert list(homology(m, char)) == naive_betti(m.simplices, char)


@pytest.mark.parametrize("name", ["d2", "moebius", "cylinder"])
@pytest.mark.parametrize("char", [2, 0])
def test_relative_homology_matches_dense_oracle(name, char):
    pair = corpus.load_pair(name)
    got = list(relative_homology(pair, char))
    assert got == naive_betti(pair.total.simplices, char, relative_to=pair.boundary.simplices)


def test_relative_homology_examples():
    assert tuple(relative_homology(corpus.load_pair("d2"), 2)) == (0, 0, 1)
    assert tuple(relative_homology(corpus.load_pair("moebius"), 2)) == (0, 1, 1)
    # Lefschetz duality: H_k(W, dW; Q) = H^{2-k}(W; Q) = (0, 1, 1) for the cylinder
    assert tuple(relative_homology(corpus.load_pair("cylinder"), 0)) == (0, 1, 1)


ALL_FIELDS = (2, 3, 0)


@pytest.mark.parametrize("name", corpus.CLOSED_CORPUS + tuple(corpus.PAIR_CORPUS))
def test_euler_is_alternating_betti_sum(name):
    m = corpus.load(name)
    chi = euler_characteristic(m)
    assert chi == sum((-1) ** k * f for k, f in enumerate(m.f_vector))
    for p in ALL_FIELDS:
        assert homology(m, p).euler() == chi


@pytest.mark.parametrize("name", corpus.CLOSED_CORPUS)
def test_poincare_duality_mod_2(name):
    m = corpus.load(name)
    b = homology(m, 2)
    n = m.dimension
    assert all(b[i] == b[n - i] for i in range(n + 1))
    if n % 2:
        assert euler_characteristic(m) == 0


@pytest.mark.parametrize("name, chi", [("s2", 2), ("rp2", 1), ("cp2", 3), ("t2", 0), ("klein", 0), ("s4", 2), ("rp4", 1)])
def test_euler_examples(name, chi):
    assert euler_characteristic(corpus.load(name)) == chi


# -- Kervaire semi-characteristic ----------------------------------------------------


@pytest.mark.parametrize("char", [2, 3, 0])
def test_kerv_s3(char):
    assert kervaire_semichar(corpus.load("s3"), char) == 1


def test_kerv_rp3():
    m = corpus.load("rp3")
    assert kervaire_semichar(m, 2) == 0
    assert kervaire_semichar(m, "q") == 1


def test_kerv_l31():
    m = corpus.load("l3_1")
    assert kervaire_semichar(m, "q") == 1
    assert kervaire_semichar(m, 3) == 0


def test_kerv_rejects_bad_input():
    with pytest.raises(ComplexError):
        kervaire_semichar(corpus.load("s2"), 2)
    with pytest.raises(ComplexError):
        kervaire_semichar(corpus.load("d3"), 2)
    klein_x_circle = product(corpus.load("klein"), corpus.load("s1"))
    with pytest.raises(ComplexError):
        kervaire_semichar(klein_x_circle, 0)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_kerv_circles_counts_components(k):
    m = disjoint_union(*[corpus.load("s1")] * k)
    assert kervaire_semichar(m, 2) == k % 2


@pytest.mark.parametrize("a, b", [("s3", "rp3"), ("rp3", "l3_1"), ("rp3", "rp3"), ("s1", "s1")])
def test_kerv_additive(a, b):
    x, y = corpus.load(a), corpus.load(b)
    assert kervaire_semichar(disjoint_union(x, y), 2) == (kervaire_semichar(x, 2) + kervaire_semichar(y, 2)) % 2


def test_kerv_additive_mixed_lens():
    x, y = corpus.load("s3"), corpus.load("l3_1")
    for p in (2, 0):
        assert kervaire_semichar(disjoint_union(x, y), p) == (kervaire_semichar(x, p) + kervaire_semichar(y, p)) % 2


# -- j_* and the parity congruence -----------------------------------------------


def test_jstar_examples():
    assert jstar_rank(corpus.load_pair("d2"), 2) == 0
    assert jstar_rank(corpus.load_pair("moebius"), 2) == 1
    assert jstar_rank(corpus.load_pair("cp2_minus_disc"), 2) == 1


def test_jstar_rejects_odd_dimension():
    with pytest.raises(ComplexError):
        jstar_rank(ManifoldPair(corpus.load("d3")), 2)


@pytest.mark.parametrize("name", corpus.PAIR_CORPUS)
def test_long_exact_sequence_parity(name):
    pair = corpus.load_pair(name)
    fields = (2, 3, 0) if pair.total.is_orientable() else (2,)
    for p in fields:
        lhs = kervaire_semichar(pair.boundary, p)
        rhs = (jstar_rank(pair, p) + euler_characteristic(pair.total)) % 2
        assert lhs == rhs, (name, p)


# -- products ------------------------------------------------------------------------


def _kunneth(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@pytest.mark.parametrize("a, b", [("s1", "s1"), ("rp2", "s1"), ("s2", "s1"), ("klein", "s1"), ("t2", "s1"), ("s1", "d2"), ("rp2", "rp2")])
@pytest.mark.parametrize("char", [2, 0])
def test_product_kunneth(a, b, char):
    x, y = corpus.load(a), corpus.load(b)
    xy = product(x, y)
    assert validate(xy).ok
    assert list(homology(xy, char)) == _kunneth(list(homology(x, char)), list(homology(y, char)))
    assert euler_characteristic(xy) == euler_characteristic(x) * euler_characteristic(y)


def test_product_examples():
    s1 = corpus.load("s1")
    assert euler_characteristic(product(s1, s1)) == 0
    rp2xs1 = product(corpus.load("rp2"), s1)
    assert euler_characteristic(rp2xs1) == 0
    assert kervaire_semichar(rp2xs1, 2) == 1
    assert kervaire_semichar(product(corpus.load("s2"), s1), 2) == 0


# -- substrate -----------------------------------------------------------------------


def test_subdivision_preserves_homology():
    for name in ("s2", "rp2", "moebius"):
        k = corpus.load(name)
        sd, labels = barycentric_subdivision(k)
        assert len(labels) == sum(k.f_vector)
        for p in (2, 0):
            assert tuple(homology(sd, p)) == tuple(homology(k, p))


def test_parse_field():
    assert parse_field("q") == 0
    assert parse_field("F2") == 2
    assert parse_field("f3") == 3
    assert parse_field(5) == 5
    for bad in ("f4", "r", 1, 6):
        with pytest.raises(ValueError):
            parse_field(bad)


@st.composite
def closed_surfaces_and_circles(draw):
    """Disjoint unions of small corpus manifolds of one dimension."""
    dim = draw(st.sampled_from([1, 2, 3]))
    pool = {1: ["s1"], 2: ["s2", "rp2", "t2", "klein"], 3: ["s3", "rp3"]}[dim]
    names = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=3))
    return names


@settings(max_examples=25)
@given(closed_surfaces_and_circles())
def test_disjoint_union_homology_adds(names):
    parts = [corpus.load(n) for n in names]
    u = disjoint_union(*parts)
    for p in (2, 0):
        total = [0] * (u.dimension + 1)
        for m in parts:
            for i, b in enumerate(homology(m, p)):
                total[i] += b
        assert list(homology(u, p)) == total


# -- file format -------------------------------------------------------------


@pytest.mark.parametrize("name", corpus.CLOSED_CORPUS + tuple(corpus.PAIR_CORPUS))
def test_format_roundtrip(name):
    m = corpus.load(name)
    back = tri.loads(tri.dumps(m, comment="round trip\nsecond line"))
    assert back == m and back.name == m.name


HEADER = "format: skk-triangulation/1\nname: t\ndimension: 1\nvertex_count: 3\nfacets:\n"


@pytest.mark.parametrize(
    "text",
    [
        HEADER.replace("skk-triangulation/1", "skk-triangulation/9") + "0 1\n",
        HEADER.replace("vertex_count: 3\n", "") + "0 1\n",
        HEADER.replace("dimension: 1\n", "") + "0 1\n",
        HEADER + "0 x\n",
        HEADER + "0 0\n",
        HEADER + "0 3\n",
        HEADER + "0 1\n1 0\n",
        HEADER + "0 1 2\n",
        "format skk-triangulation/1\n",
    ],
)
def test_format_rejects_bad_input(text):
    with pytest.raises(tri.TriangulationFormatError):
        tri.loads(text)


def test_complex_rejects_bad_facets():
    for facets in (((0, 0),), ((0, 5),), ((0, 1), (1, 0)), ((),)):
        with pytest.raises(ComplexError):
            SimplicialComplex(3, facets)
