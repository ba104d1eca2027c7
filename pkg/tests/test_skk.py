from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import elements, evaluate
from skkcalc import corpus
from skkcalc.abgroup import FgAbelianGroup, parse_group
from skkcalc.catalog import CatalogBundle
from skkcalc.simplicial import ComplexError, euler_characteristic
from skkcalc.skk import RULES, SkkEngine, cylinder_class, sphere_subgroup, splitting_criterion_check, surgery_class

# -- sphere subgroup -------------------------------------------------------------------


@pytest.mark.parametrize(
    "name, n, want",
    [("spin", 3, "Z2"), ("so", 3, "zero"), ("o", 5, "zero"), ("pin+", 17, "unknown"), ("pin+", 9, "Z2"), ("pin+", 1, "Z2"), ("so", 4, "Z")],
)
def test_sphere_subgroup_examples(bundle, name, n, want):
    assert sphere_subgroup(bundle.get(name), n)[0] == want


def test_sphere_subgroup_needs_stabilisation(bundle):
    s = replace(bundle.get("spin"), stabilization="once")
    got, trace = sphere_subgroup(s, 3)
    assert got == "unknown" and trace[0].rule == "hypothesis"
    assert sphere_subgroup(s, 4)[0] == "Z"
    s0 = replace(s, stabilization="unstabilized")
    assert sphere_subgroup(s0, 4)[0] == "unknown"


# -- verdict examples -------------------------------------------------------------------


def test_pin_minus_dim2(engine):
    v = engine.verdict("pin-", 2)
    assert v.group == parse_group("Z x Z/4")
    assert v.split.kind == "non_split"
    assert "torsion-odd-euler" in v.anchors


def test_spin_dim5(engine):
    v = engine.verdict("spin", 5)
    assert v.bordism.is_trivial()
    assert v.sphere_subgroup == "Z2"
    assert v.group == parse_group("Z/2")
    assert v.split.kind == "split" and "kerv_F2" in v.split.invariants


@pytest.mark.parametrize("n", [2, 4])
def test_unoriented_even_never_splits(engine, n):
    v = engine.verdict("o", n)
    assert v.split.kind == "non_split"
    assert v.fiber is not None


@pytest.mark.parametrize("n", range(2, 41, 2))
def test_unoriented_even_never_splits_beyond_the_table(engine, n):
    assert engine.verdict("o", n).split.kind == "non_split"


def test_oriented_dim4_splits_by_signature(engine):
    v = engine.verdict("so", 4)
    assert v.group == FgAbelianGroup(2)
    assert v.split.invariants == ("(chi-sigma)/2",)


def test_pin_plus_dim1_structure_dependent(engine):
    v = engine.verdict("pin+", 1)
    assert v.split.kind == "split"
    assert "kerv_F2" not in v.split.invariants
    assert "catalog-override" in v.anchors


@pytest.mark.parametrize("k", [1, 2, 3])
def test_pin_plus_open_cells(engine, k):
    v = engine.verdict("pin+", 8 * k + 1)
    assert not v.is_determinate
    # dim 9 has an even Euler characteristic in dim 10 but the kerv splitting is blocked
    if k == 1:
        assert v.sphere_subgroup == "Z2" and "open-split" in v.anchors
    else:
        assert v.sphere_subgroup == "unknown"


PIN_EVEN = {
    # n mod 8 -> split kind, from the even-dimensional Pin corollary
    "pin-": {0: "non_split", 2: "non_split", 4: "split", 6: "non_split"},
    "pin+": {0: "non_split", 4: "non_split", 6: "split"},
}


@pytest.mark.parametrize("name", ["pin-", "pin+"])
@pytest.mark.parametrize("n", range(2, 65, 2))
def test_pin_even_dimensions(engine, name, n):
    v = engine.verdict(name, n)
    want = PIN_EVEN[name].get(n % 8)
    if name == "pin+" and n % 8 == 2:
        want = "split" if n in (2, 10) else "unknown"
    assert v.split.kind == want


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11, 13])
def test_spin_odd_kerv(engine, n):
    v = engine.verdict("spin", n)
    if (n + 1) % 8 == 0:
        assert v.sphere_subgroup == "zero"
    else:
        assert v.split.invariants[0] == "kerv_F2"


def test_framed_dim7(engine):
    v = engine.verdict("framed", 7)
    assert v.group == parse_group("Z/2 x Z/240")
    assert "wu-vanishing-kerv" in v.anchors


def test_render_and_dict(engine):
    v = engine.verdict("pin-", 2)
    assert v.render() == "Z x Z/4, non-split (torsion-odd-euler)"
    d = v.to_dict()
    assert d["group"] == "Z x Z/4" and d["split_status"] == "non_split"
    assert [f["rule"] for f in d["justification"]] == list(v.anchors)


def test_every_fired_rule_is_registered(engine, bundle):
    for name in bundle.names():
        for n in range(0, 40):
            for f in engine.verdict(name, n).justification:
                assert f.rule in RULES


def test_negative_dimension_rejected(engine):
    with pytest.raises(ValueError):
        engine.verdict("so", -1)


# -- structural invariants ---------------------------------------------------------------


ALL_DIMS = range(0, 33)


@pytest.mark.parametrize("n", ALL_DIMS)
def test_verdict_invariants(engine, bundle, n):
    for name in bundle.names():
        v = engine.verdict(name, n)
        if n % 2 == 0 and bundle.get(name).stabilization_level() >= 1:
            assert v.sphere_subgroup == "Z"
        if n % 2 and v.split.kind == "split" and v.group is not None and v.sphere_subgroup == "Z2":
            assert v.group == v.bordism.direct_sum(parse_group("Z/2"))
        if v.sphere_subgroup == "zero":
            assert v.group == v.bordism
        if n % 2 == 0 and v.split.kind == "split" and v.group is not None:
            assert v.group == FgAbelianGroup(1).direct_sum(v.bordism)


def _lift(fp, e):
    """A preimage of ``e`` under the projection to Omega, and its Euler parity."""
    for b in (0, 1):
        try:
            return b, fp.element(e, [b])
        except ValueError:
            continue
    raise AssertionError(f"{e} has no preimage")


def test_even_pullback_structure(engine, bundle):
    """The pullback maps onto Omega with kernel generated by the sphere, on which chi is 2k."""
    checked = 0
    for name in bundle.names():
        for n in range(0, 8, 2):
            v = engine.verdict(name, n)
            fp = v.fiber
            if fp is None:
                continue
            checked += 1
            omega = v.bordism
            images = []
            for i in range(omega.ngens):
                e = [int(i == j) for j in range(omega.ngens)]
                b, x = _lift(fp, e)
                images.append(b)
                assert tuple(fp.left(x)) == tuple(e)
            for k in range(-3, 4):
                sphere = fp.element([0] * omega.ngens, [2 * k])
                assert fp.right(sphere) == (2 * k,)
                assert not any(fp.left(sphere))
            if omega.free_rank == 0:
                # torsion of the pullback is ker(chi mod 2)
                kernel = [x for x in elements(omega) if evaluate(images, x, 2) == 0]
                assert v.group.torsion_order == len(kernel)
    assert checked >= 10


def test_determinism(bundle):
    a, b = SkkEngine(bundle), SkkEngine(bundle)
    for name in bundle.names():
        for n in range(0, 20):
            va, vb = a.verdict(name, n), b.verdict(name, n)
            assert va == vb
            assert va.to_dict() == vb.to_dict()


# -- unknown propagation -----------------------------------------------------------------

FACT_KINDS = ("bordism", "chi", "parity", "k", "cover", "wu", "maps", "overrides", "torsion")


def forget(record, kinds):
    """The same record with some facts replaced by 'not known'."""
    changes = {}
    if "bordism" in kinds:
        changes["bordism"] = {}
    elif "chi" in kinds:
        changes["bordism"] = {d: replace(e, chi_mod2=None) for d, e in record.bordism.items()}
    if "parity" in kinds:
        changes["euler_parity"] = ()
    if "k" in kinds:
        changes["k_orientability"] = None
        changes["orientable"] = None if record.orientable else record.orientable
    if "cover" in kinds:
        changes["connective_cover_b"] = None
    if "wu" in kinds:
        changes["top_wu_vanishes"] = ()
    if "maps" in kinds:
        changes["comparison_maps"] = ()
    if "overrides" in kinds:
        changes["split_overrides"] = ()
    if "torsion" in kinds:
        changes["torsion_bordism"] = None
    return replace(record, **changes)


def degrades(full, partial):
    """``partial`` says nothing that contradicts ``full``, and says no more about the group."""
    assert partial.sphere_subgroup in (full.sphere_subgroup, "unknown")
    assert partial.group in (full.group, None)
    assert partial.split.kind in (full.split.kind, "unknown")


@settings(max_examples=60, deadline=None)
@given(st.sets(st.sampled_from(FACT_KINDS), min_size=1), st.sets(st.sampled_from(["o", "so", "spin", "string", "framed", "pin+", "pin-", "spinc", "pinc", "pinh+", "pinc~-", "or4", "bo8"]), min_size=1))
def test_forgetting_facts_only_degrades(bundle, kinds, names):
    records = tuple(forget(s, kinds) if s.name in names else s for s in bundle.structures)
    weak = SkkEngine(CatalogBundle(bundle.version, records))
    strong = SkkEngine(bundle)
    for name in names:
        for n in range(0, 20):
            degrades(strong.verdict(name, n), weak.verdict(name, n))


def test_forgetting_everything_leaves_only_the_sequence(bundle):
    kinds = set(FACT_KINDS)
    weak = SkkEngine(CatalogBundle(bundle.version, tuple(forget(s, kinds) for s in bundle.structures)))
    for name in bundle.names():
        for n in range(1, 12, 2):
            v = weak.verdict(name, n)
            assert v.sphere_subgroup == "unknown" and v.group is None


# -- symbolic rules -----------------------------------------------------------------------


def test_surgery_class_examples():
    assert surgery_class(euler_characteristic(corpus.load("d2"))) == 1
    assert surgery_class(euler_characteristic(corpus.load("moebius")), 2) == 0
    assert surgery_class(3, 2) == 1
    assert surgery_class(-2) == -2


def test_cylinder_class():
    for name in ("s1", "s3", "rp3"):
        assert cylinder_class(euler_characteristic(corpus.load(name))) == 0
    assert cylinder_class(euler_characteristic(corpus.load("s2"))) == 2
    # the cylinder's own Euler characteristic is chi(M)
    assert euler_characteristic(corpus.load("cylinder")) == cylinder_class(euler_characteristic(corpus.load("s1")))


# -- triangulated criterion -----------------------------------------------------------------


def test_criterion_disc_passes():
    c = splitting_criterion_check(corpus.load("s1"), corpus.load_pair("d2"))
    assert c.passed and c.kerv == 1 and c.euler == 1


def test_criterion_moebius_fails():
    c = splitting_criterion_check(corpus.load("s1"), corpus.load_pair("moebius"))
    assert not c.passed and c.kerv == 1 and c.euler == 0


def test_criterion_s3_d4_rational():
    assert splitting_criterion_check(corpus.load("s3"), corpus.load_pair("d4"), "q").passed


def test_criterion_rejects_mismatches():
    with pytest.raises(ComplexError):
        splitting_criterion_check(corpus.load("s2"), corpus.load_pair("d3"))
    with pytest.raises(ComplexError):
        splitting_criterion_check(corpus.load("s1"), corpus.load_pair("d4"))
    with pytest.raises(ComplexError):
        splitting_criterion_check(corpus.load("s1+s1"), corpus.load_pair("d2"))


@pytest.mark.parametrize("name, bd", list(corpus.PAIR_CORPUS.items()))
def test_criterion_agrees_with_jstar_parity(name, bd):
    """The criterion passes exactly when the middle j_* has even rank."""
    from skkcalc.simplicial import jstar_rank

    pair = corpus.load_pair(name)
    fields = (2, 0) if pair.total.is_orientable() else (2,)
    for p in fields:
        c = splitting_criterion_check(corpus.load(bd), pair, p)
        assert c.passed == (jstar_rank(pair, p) % 2 == 0)
