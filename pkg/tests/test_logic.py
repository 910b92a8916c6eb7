import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rwb.logic import (
    And,
    BoundedExists,
    BoundedForall,
    Constant,
    Equality,
    Exists,
    Falsum,
    Forall,
    FormulaSyntaxError,
    Implies,
    Membership,
    Not,
    NotFreeWarning,
    Or,
    ScopeError,
    Variable,
    desugar,
    format_formula,
    free_variables,
    iff,
    is_bounded,
    parse_formula,
    substitute,
)

x, y, a, b, c = (Variable(n) for n in "xyabc")


def test_parse_forall():
    assert parse_formula("(forall x (in x a))") == Forall("x", Membership(x, a))


def test_parse_bounded_collection_premise():
    phi = parse_formula("(bforall x a (bexists y b (eq x y)))")
    assert phi == BoundedForall("x", a, BoundedExists("y", b, Equality(x, y)))
    assert free_variables(phi) == {"a", "b"}
    assert desugar(phi) == Forall(
        "x", Implies(Membership(x, a), Exists("y", And(Membership(y, b), Equality(x, y))))
    )


def test_unclosed_input_reports_end_position():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula("(in y x")
    assert "end of input" in str(exc.value)
    assert exc.value.pos == len("(in y x")


@pytest.mark.parametrize(
    "text",
    ["(in x)", "(frob x y)", "(exists #a (in x x))", "(and false)", "(in (in x y) y)", "()"],
)
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(text)


def test_scope_error_names_variable():
    with pytest.raises(ScopeError) as exc:
        parse_formula("(exists x (in x z))", free=["a"])
    assert exc.value.name == "z"
    assert parse_formula("(exists x (in x z))", free=["z"])


def test_bounded_quantifier_cannot_bound_itself():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("(bexists x x (in x x))")


def test_constants():
    phi = parse_formula("(in #empty #sempty)")
    assert phi == Membership(Constant("empty"), Constant("sempty"))
    assert free_variables(phi) == frozenset()


@pytest.mark.parametrize(
    "phi, expected",
    [
        (Membership(x, a), True),
        (Forall("x", Membership(x, a)), False),
        (BoundedForall("x", a, BoundedExists("y", b, Equality(x, y))), True),
        (Not(Exists("x", Falsum())), False),
        (And(Falsum(), BoundedExists("x", a, Falsum())), True),
    ],
)
def test_is_bounded(phi, expected):
    assert is_bounded(phi) is expected


def test_substitute_examples():
    empty = Constant("empty")
    assert substitute(Membership(x, c), "x", "empty") == Membership(empty, c)
    w = Constant("w")
    assert substitute(Exists("x", Equality(x, y)), "y", w) == Exists("x", Equality(x, w))


def test_substitute_bound_variable_is_flagged():
    phi = Exists("x", Membership(x, a))
    with pytest.warns(NotFreeWarning):
        assert substitute(phi, "x", "w") is phi


def test_substitute_respects_shadowing():
    phi = And(Membership(x, a), Exists("x", Membership(x, a)))
    out = substitute(phi, "x", "w")
    assert out == And(Membership(Constant("w"), a), Exists("x", Membership(x, a)))


def test_substitute_reaches_bounds():
    phi = BoundedExists("y", x, Equality(y, x))
    out = substitute(phi, "x", "w")
    assert out == BoundedExists("y", Constant("w"), Equality(y, Constant("w")))


def test_iff():
    p, q = Falsum(), Membership(x, a)
    assert iff(p, q) == And(Implies(p, q), Implies(q, p))


# -- properties ---------------------------------------------------------------

names = st.sampled_from(["x", "y", "z", "a"])
refs = names.map(Variable) | st.sampled_from(["empty", "w0"]).map(Constant)


def _formulas():
    atoms = st.one_of(
        st.builds(Membership, refs, refs),
        st.builds(Equality, refs, refs),
        st.just(Falsum()),
    )

    def extend(inner):
        bounded = st.tuples(names, refs, inner).filter(lambda t: t[1] != Variable(t[0]))
        return st.one_of(
            st.builds(And, inner, inner),
            st.builds(Or, inner, inner),
            st.builds(Implies, inner, inner),
            st.builds(Not, inner),
            st.builds(Exists, names, inner),
            st.builds(Forall, names, inner),
            bounded.map(lambda t: BoundedExists(*t)),
            bounded.map(lambda t: BoundedForall(*t)),
        )

    return st.recursive(atoms, extend, max_leaves=8)


formulas = _formulas()


@given(formulas)
def test_round_trip(phi):
    text = format_formula(phi)
    assert parse_formula(text) == phi
    assert format_formula(parse_formula(text)) == text


@given(formulas)
def test_desugar_preserves_free_variables(phi):
    assert free_variables(desugar(phi)) == free_variables(phi)


@given(formulas)
def test_desugar_removes_bounded_quantifiers(phi):
    out = desugar(phi)
    assert "bexists" not in format_formula(out) and "bforall" not in format_formula(out)
    assert desugar(out) == out


@given(formulas, names)
def test_substitution_drops_one_free_variable(phi, v):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NotFreeWarning)
        out = substitute(phi, v, "c0")
    if v in free_variables(phi):
        assert free_variables(out) == free_variables(phi) - {v}
    else:
        assert out is phi
