"""The table file grammar, evaluation, cross references and round-tripping."""

import pytest

from dadecheck.autfix import divisors
from dadecheck.tabledsl import (
    DanglingReference,
    TableSyntaxError,
    UnboundSymbol,
    build_env,
    eval_expr_int,
    parse_blocks,
    parse_model,
    parse_model_files,
    serialize_model,
)


def test_minimal_paramset_block():
    m = parse_model(
        "paramset GI_27 { group: G action: doubling "
        "moduli:[q^2-1] exclude: k=0 equiv:[k->-k] card:(q^2-2)/2 }"
    )
    assert list(m.paramsets) == ["GI_27"]
    spec = m.paramsets["GI_27"]
    assert spec.arity == 1
    assert spec.exclude[0] == "atom"


def test_dangling_reference():
    with pytest.raises(DanglingReference):
        parse_model(
            "fixrow R { group: G sets: [NOPE] fix: 1 }"
        )


def test_syntax_error_coordinates():
    with pytest.raises(TableSyntaxError) as exc:
        parse_blocks("paramset X {\n  group ~ G\n}")
    assert exc.value.line == 2


def test_unbound_t():
    env = build_env(1)  # no t supplied
    with pytest.raises(UnboundSymbol):
        eval_expr_int(_expr("2^t-2"), env)


def _expr(text):
    from dadecheck.tabledsl import _Parser, tokenize

    return _Parser(tokenize(text)).parse_expr()


def test_expr_examples():
    assert eval_expr_int(_expr("2^t-2"), build_env(1, t=1)) == 0
    assert eval_expr_int(_expr("p8b"), build_env(1)) == 5
    assert eval_expr_int(_expr("(2^t-1)^2"), build_env(1, t=3)) == 49


def test_and_binds_tighter_than_or():
    p = parse_model(
        "paramset X { group: G action: none moduli: [q^2-1] "
        "exclude: k = 1 and k = 2 or k = 3 card: 1 }"
    ).paramsets["X"].exclude
    assert p[0] == "or"
    assert p[1][0] == "and"


def test_shipped_model_counts(model):
    assert len(model.paramsets) > 100
    assert len(model.fixrows) == 81
    assert len(model.ledgers) == 14
    assert len(model.classfams) == 36
    assert len(model.weylclasses) == 11
    assert len(model.pairs) == 7


def test_roundtrip_serialize_parse(model):
    text = serialize_model(model)
    again = parse_model_files({"all.def": text})
    assert again.paramsets == model.paramsets
    assert again.fixrows == model.fixrows
    assert again.ledgers == model.ledgers
    assert again.weylgens == model.weylgens
    assert again.frobenius == model.frobenius
    assert again.weylclasses == model.weylclasses
    assert again.classfams == model.classfams
    assert again.classrows == model.classrows
    assert again.chvalues == model.chvalues
    assert again.relations == model.relations
    assert again.degrels == model.degrels
    assert again.pairs == model.pairs
    assert again.order_expr == model.order_expr


def test_all_cardinalities_integral_and_nonnegative(model):
    # every shipped cardinality expression is a nonnegative integer for
    # n <= 4 and, where t appears, for every divisor t of 2n+1
    for n in range(1, 5):
        env = build_env(n)
        for spec in model.paramsets.values():
            if spec.card is not None:
                assert eval_expr_int(spec.card, env) >= 0, spec.id
        for t in divisors(2 * n + 1):
            envt = build_env(n, t=t)
            for row in model.fixrows.values():
                assert eval_expr_int(row.formula, envt) >= 0, row.id


def test_unknown_symbol():
    from dadecheck.tabledsl import UnknownSymbol

    with pytest.raises(UnknownSymbol):
        eval_expr_int(_expr("nosuchthing+1"), build_env(1))


from hypothesis import given, settings
from hypothesis import strategies as st


def _expr_strategy():
    atoms = st.one_of(
        st.integers(0, 99).map(lambda v: ("int", v)),
        st.sampled_from(["q", "s2", "th", "n", "k", "p8a"]).map(lambda s: ("sym", s)),
    )

    def extend(children):
        return st.one_of(
            st.tuples(st.sampled_from(["add", "sub", "mul"]), children, children),
            children.map(lambda e: ("neg", e)),
            st.tuples(st.just("pow"), children, st.integers(0, 5).map(lambda v: ("int", v))),
        )

    return st.recursive(atoms, extend, max_leaves=12)


@given(_expr_strategy())
@settings(max_examples=150, deadline=None)
def test_expr_serialize_roundtrip(e):
    from dadecheck.tabledsl import expr_to_str

    assert _expr(expr_to_str(e)) == e
