import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import direct_equal, direct_member

from rwb.logic import parse_formula
from rwb.pca import K, Num, P0, App, Var, apply, candidate_pool, fix, lam, pair_val, proj0, Value
from rwb.universe import (
    EMPTY_U,
    EMPTY_V,
    FoundRealizer,
    Forcing,
    Fragment,
    FragmentError,
    NotFoundWithinPool,
    Realized,
    Refuted,
    Timeout,
    TreeSyntaxError,
    UnknownConstant,
    UTree,
    VTree,
    check_force,
    default_pool,
    format_fragment,
    generate_fragment,
    generation_count,
    is_tree_realizer,
    mk_refl_realizer,
    mk_sym_realizer,
    mk_trans_realizer,
    parse_fragment,
    parse_tree,
    search_realizer,
    u_encode,
    uniform_realizer,
    vn_encode,
)

R = mk_refl_realizer()
SYM = mk_sym_realizer()
TRANS = mk_trans_realizer()
SEMPTY = VTree([(0, EMPTY_V)])


@pytest.fixture(scope="module")
def frag2():
    return generate_fragment("v", 2, 2)


@pytest.fixture(scope="module")
def small_pool():
    return default_pool(3)


# -- trees --------------------------------------------------------------------


def test_canonical_order():
    a = VTree([(1, EMPTY_V), (0, SEMPTY), (0, EMPTY_V)])
    b = VTree([(0, EMPTY_V), (1, EMPTY_V), (0, SEMPTY)])
    assert a == b and hash(a) == hash(b)
    assert a.key == "(vtree (0 (vtree (0 (vtree)))) (0 (vtree)) (1 (vtree)))"


def test_duplicates_are_kept_in_v_but_not_u():
    assert len(VTree([(0, EMPTY_V), (0, EMPTY_V)])) == 2
    with pytest.raises(ValueError):
        UTree([(0, EMPTY_U), (0, EMPTY_U)])
    with pytest.raises(TreeSyntaxError):
        parse_tree("(utree (0 (utree)) (0 (utree)))")


def test_tree_round_trip():
    for text in ["(vtree)", "(vtree (0 (vtree)) (0 (vtree)))", "(utree (0 (utree)) (2 (utree (1 (utree)))))"]:
        assert parse_tree(text).key == text


def test_tree_syntax_errors():
    for text in ["(vtree (x (vtree)))", "(vtree (0 (utree)))", "(tree)", "(vtree (0))"]:
        with pytest.raises(TreeSyntaxError):
            parse_tree(text)


def test_vn_encode():
    assert vn_encode(0) == EMPTY_V
    assert vn_encode(2) == VTree([(0, EMPTY_V), (1, SEMPTY)])
    assert u_encode(2).domain == {0, 1}
    with pytest.raises(ValueError):
        vn_encode(65)


def test_refl_realizes_numeral_three():
    f = Fragment.closure("v", [vn_encode(3)])
    assert check_force(R, parse_formula("(eq #vn3 #vn3)"), f) == Realized()


# -- fragments ----------------------------------------------------------------


def test_small_fragments():
    assert list(generate_fragment("v", 0, 2)) == [EMPTY_V]
    assert list(generate_fragment("v", 1, 1)) == [EMPTY_V, SEMPTY]


def _brute_count(kind, depth, width):
    # independent: every edge list, canonicalised by sorting, deduplicated
    trees = {()}
    for _ in range(depth):
        items = [(m, t) for m in range(width) for t in trees]
        new = set()
        for k in range(width + 1):
            for combo in itertools.product(items, repeat=k):
                if kind == "u" and len({m for m, _ in combo}) != k:
                    continue
                new.add(tuple(sorted(combo, key=repr)))
        trees = new
    return len(trees)


@pytest.mark.parametrize("kind", ["v", "u"])
@pytest.mark.parametrize("depth, width", [(0, 2), (1, 2), (2, 2), (2, 1), (1, 3), (2, 3)])
def test_fragment_counts(kind, depth, width):
    frag = generate_fragment(kind, depth, width)
    assert len(frag) == _brute_count(kind, depth, width) == generation_count(kind, depth, width)


def test_depth2_width2_counts():
    # frozen from the brute-force enumeration above
    assert len(generate_fragment("v", 2, 2)) == 91
    assert len(generate_fragment("u", 2, 2)) == 25


def test_fragment_is_subtree_closed(frag2):
    elems = set(frag2)
    assert all(c in elems for t in frag2 for c in t.children())


def test_fragment_guards():
    with pytest.raises(FragmentError):
        generate_fragment("v", 5, 2)
    with pytest.raises(FragmentError):
        generate_fragment("v", 2, 4)
    with pytest.raises(FragmentError):
        generate_fragment("x", 1, 1)
    with pytest.raises(FragmentError):
        Fragment("v", (SEMPTY,))
    with pytest.raises(FragmentError):
        Fragment("v", (EMPTY_V, EMPTY_V))


def test_fragment_names(frag2):
    assert frag2.lookup("empty") == EMPTY_V
    assert frag2.lookup("sempty") == SEMPTY
    assert frag2.lookup("vn2") == vn_encode(2)
    assert frag2.lookup("t0") == EMPTY_V
    with pytest.raises(UnknownConstant):
        frag2.lookup("nope")


def test_fragment_file_round_trip():
    text = "(fragment v (pair_ab (vtree (0 (vtree)) (1 (vtree (0 (vtree)))))))"
    frag = parse_fragment(text)
    assert len(frag) == 3
    assert frag.lookup("pair_ab") == vn_encode(2)
    again = parse_fragment(format_fragment(frag))
    assert again.elements == frag.elements and dict(again.names) == dict(frag.names)


# -- tree realizers -------------------------------------------------------------


def test_empty_tree_realized_by_anything():
    assert is_tree_realizer(Num(3), EMPTY_V) == Realized()


def test_k_chains():
    # K(0) = K0, K0(0) = 0, and 0 applied to anything is undefined
    chain = [EMPTY_V]
    for _ in range(3):
        chain.append(VTree([(0, chain[-1])]))
    assert is_tree_realizer(K, chain[1]) == Realized()
    assert is_tree_realizer(K, chain[2]) == Realized()
    assert isinstance(is_tree_realizer(K, chain[3]), Refuted)


@pytest.mark.parametrize("kind", ["v", "u"])
def test_uniform_realizers_realize_every_tree(kind):
    frag = generate_fragment(kind, 2, 2)
    u_pair, u_v = uniform_realizer("pair"), uniform_realizer("v")
    for w in frag:
        assert is_tree_realizer(u_pair, w, mode="pair") == Realized()
        assert is_tree_realizer(u_v, w, mode="v") == Realized()


def test_modes_differ_on_plain_realizers():
    # a V-mode realizer need not be a pair, so it fails the pair clause
    u_v = uniform_realizer("v")
    assert isinstance(is_tree_realizer(u_v, SEMPTY, mode="pair"), Refuted)
    assert is_tree_realizer(u_v, EMPTY_V, mode="v") == Realized()


# -- forcing examples -------------------------------------------------------------


def test_forcing_examples(frag2, small_pool):
    eq = parse_formula("(eq #empty #empty)")
    assert check_force(Num(0), eq, frag2, pool=small_pool) == Realized()
    mem = parse_formula("(in #empty #sempty)")
    assert check_force(pair_val(Num(0), R), mem, frag2, pool=small_pool) == Realized()
    bad = parse_formula("(in #empty #empty)")
    for n in (Num(0), K, R):
        assert isinstance(check_force(n, bad, frag2, pool=small_pool), Refuted)


def test_unknown_constant(frag2):
    with pytest.raises(UnknownConstant):
        check_force(Num(0), parse_formula("(eq #nope #empty)"), frag2)


def test_refuted_carries_a_path(frag2):
    out = check_force(pair_val(Num(1), R), parse_formula("(in #empty #sempty)"), frag2)
    assert isinstance(out, Refuted) and "labelled 1" in out.reason


def test_connectives(frag2, small_pool):
    chk = Forcing(frag2, small_pool)
    conj = parse_formula("(and (eq #empty #empty) (in #empty #sempty))")
    assert chk.force(pair_val(Num(0), pair_val(Num(0), R)), conj) == Realized()
    assert isinstance(chk.force(Num(0), conj), Refuted)
    disj = parse_formula("(or (in #empty #empty) (in #empty #sempty))")
    assert chk.force(pair_val(Num(1), pair_val(Num(0), R)), disj) == Realized()
    assert isinstance(chk.force(pair_val(Num(0), pair_val(Num(0), R)), disj), Refuted)
    assert isinstance(chk.force(pair_val(Num(2), Num(0)), disj), Refuted)
    assert isinstance(chk.force(Num(0), parse_formula("false")), Refuted)
    assert not chk.relative


def test_negation_and_implication_are_pool_relative(frag2, small_pool):
    chk = Forcing(frag2, small_pool)
    assert chk.force(K, parse_formula("(not (in #empty #empty))")) == Realized()
    assert chk.relative
    assert isinstance(chk.force(K, parse_formula("(not (eq #empty #empty))")), Refuted)
    # vacuous: nothing realizes the antecedent
    assert chk.force(K, parse_formula("(imp (in #empty #empty) false)")) == Realized()
    # λm.m carries every realizer of the antecedent over
    ident = lam("m", Var("m"))
    phi = parse_formula("(imp (in #empty #sempty) (in #empty #sempty))")
    assert chk.force(ident, phi) == Realized()
    assert isinstance(chk.force(App(K, Num(0)), phi), Refuted)


def test_quantifiers_range_over_fragment(frag2):
    chk = Forcing(frag2, default_pool(1))
    assert chk.force(R, parse_formula("(forall x (eq x x))")) == Realized()
    assert chk.force(pair_val(Num(0), R), parse_formula("(exists x (in x #sempty))")) == Realized()
    assert isinstance(chk.force(R, parse_formula("(exists x (in x #empty))")), Refuted)


def test_bounded_equals_desugared(frag2, small_pool):
    chk = Forcing(frag2, small_pool)
    sugared = parse_formula("(bexists y #vn2 (eq y #empty))")
    plain = parse_formula("(exists y (and (in y #vn2) (eq y #empty)))")
    for n in list(small_pool)[:60]:
        assert chk.force(n, sugared) == chk.force(n, plain)


def test_timeout_propagates():
    loop = fix(lam("r", "n", App(Var("r"), Var("n"))))
    frag = Fragment.closure("v", [SEMPTY])
    out = check_force(pair_val(loop, loop), parse_formula("(eq #sempty #sempty)"), frag, budget=500)
    assert out == Timeout()


def test_strict_mode_keeps_undecided_members():
    frag = Fragment.closure("v", [SEMPTY])
    pool = candidate_pool(1, library={"loop": fix(lam("r", App(P0, Var("r"))))})
    phi = parse_formula("(not (eq #sempty #sempty))")
    assert check_force(K, phi, frag, budget=300, pool=pool) == Realized()
    assert check_force(K, phi, frag, budget=300, pool=pool, strict=True) == Timeout()


# -- equivalence-relation realizers ---------------------------------------------


def test_refl_unfolding():
    out = apply(proj0(R).term, Num(4))
    assert out == Value(pair_val(Num(4), R))


@pytest.mark.parametrize("kind", ["v", "u"])
def test_refl_on_fragment(kind):
    frag = generate_fragment(kind, 2, 2)
    chk = Forcing(frag)
    assert all(chk.equal(R, w, w) == Realized() for w in frag)


def test_bisimilar_but_distinct():
    a = VTree([(0, EMPTY_V), (0, EMPTY_V)])
    frag = Fragment.closure("v", [a, SEMPTY])
    assert a != SEMPTY
    assert check_force(R, parse_formula("(eq #t2 #sempty)"), frag) == Realized()
    found = search_realizer(parse_formula("(eq #t2 #sempty)"), frag, default_pool(3))
    assert isinstance(found, FoundRealizer)


def test_search_examples(frag2, small_pool):
    got = search_realizer(parse_formula("(eq #empty #empty)"), frag2, small_pool)
    assert isinstance(got, FoundRealizer) and got.term == Num(0) and got.index == 0
    miss = search_realizer(parse_formula("(in #empty #empty)"), frag2, small_pool)
    assert isinstance(miss, NotFoundWithinPool) and miss.pool_size == len(small_pool)


def test_bounded_pairing_realizer():
    frag = Fragment.closure("v", [vn_encode(2)], {"pair_ab": vn_encode(2), "a": EMPTY_V})
    phi = parse_formula("(bexists y #pair_ab (eq y #a))")
    # ⟨ε-realizer, =-realizer⟩ with the ε part naming the label-0 edge
    assert check_force(pair_val(pair_val(Num(0), R), R), phi, frag) == Realized()
    assert isinstance(check_force(pair_val(pair_val(Num(1), R), R), phi, frag), Refuted)
    assert isinstance(search_realizer(phi, frag, default_pool(3)), NotFoundWithinPool)


def _equalities(frag, pool):
    chk = Forcing(frag, pool)
    pairs = []
    for w, w2 in itertools.product(frag, repeat=2):
        for n in pool:
            if chk.equal(n, w, w2) == Realized():
                pairs.append((n, w, w2))
                break
    return chk, pairs


@pytest.mark.parametrize("kind", ["v", "u"])
def test_sym_maps_found_realizers(kind):
    frag = generate_fragment(kind, 1, 2) if kind == "v" else generate_fragment(kind, 2, 1)
    chk, found = _equalities(frag, default_pool(3))
    assert found
    for n, w, w2 in found:
        s = apply(SYM, n)
        assert chk.equal(s.term, w2, w) == Realized()


@pytest.mark.parametrize("kind", ["v", "u"])
def test_trans_composes_found_realizers(kind):
    frag = generate_fragment(kind, 1, 2)
    chk, found = _equalities(frag, default_pool(3))
    by_left = {}
    for n, w, w2 in found:
        by_left.setdefault(w, []).append((n, w2))
    count = 0
    for n, a, b in found:
        for m, c in by_left.get(b, []):
            t = apply(TRANS, pair_val(n, m))
            assert chk.equal(t.term, a, c) == Realized()
            count += 1
    assert count > 0


# -- clause fidelity (sampled; the exhaustive run is an acceptance criterion) --------


@pytest.mark.parametrize("kind", ["v", "u"])
def test_atomic_clauses_match_direct_evaluator(kind):
    frag = generate_fragment(kind, 1, 2)
    pool = candidate_pool(3, library={"refl": R})
    chk = Forcing(frag, pool, budget=2000)
    distinct = kind == "u"
    for w, w2 in itertools.product(frag, repeat=2):
        for n in pool:
            for mine, ref in (
                (chk.member(n, w, w2), direct_member(n, w, w2, 2000, distinct)),
                (chk.equal(n, w, w2), direct_equal(n, w, w2, 2000, distinct)),
            ):
                assert {Realized: True, Refuted: False, Timeout: None}[type(mine)] is ref


@settings(max_examples=60)
@given(
    st.integers(0, 114),
    st.integers(0, 5),
    st.integers(0, 5),
    st.sampled_from(["in", "eq"]),
    st.integers(20, 400),
)
def test_budget_monotonicity(i, j, k, rel, budget):
    frag = generate_fragment("v", 1, 2)
    pool = default_pool(3)
    n = pool.terms[i % len(pool)]
    phi = parse_formula(f"({rel} #t{j} #t{k})")
    low = check_force(n, phi, frag, budget=budget, pool=pool)
    high = check_force(n, phi, frag, budget=budget * 10, pool=pool)
    if not isinstance(low, Timeout):
        assert type(high) is type(low)
