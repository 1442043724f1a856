"""Parameter set enumeration against the cardinality formulas."""

import numpy as np
import pytest

from dadecheck.paramsets import (
    BudgetExceeded,
    cardinality_check,
    class_count,
    enumerate_classes,
    family_class_count,
    family_formula_count,
    formula_count,
    semisimple_sum_checks,
)


def test_gi27_representatives(model):
    enum = enumerate_classes(model.paramsets["GI_27"], 1)
    assert enum.representatives() == [(1,), (2,), (3,)]


def test_pai4_n1(model):
    # Z_63 minus multiples of 9, modulo k ~ 8k: orbits of size 2
    enum = enumerate_classes(model.paramsets["PaI_4"], 1)
    assert enum.count == 28
    assert formula_count(model.paramsets["PaI_4"], 1) == 28
    assert enum.n_admissible == 2 * enum.count


def test_pai3_n1(model):
    assert class_count(model.paramsets["PaI_3"], 1) == 21
    assert formula_count(model.paramsets["PaI_3"], 1) == 21


def test_pbi6_via_pair_form(model):
    # brute force over Z_7 x Z_13 with orbits of size 4
    enum = enumerate_classes(model.paramsets["PbI_6J"], 1)
    assert enum.count == 21
    assert enum.n_admissible == 84


def test_classes_partition_admissible(model):
    # orbit sizes sum to the number of admissible tuples
    for sid in ("GI_27", "GI_43", "PaI_3", "PaI_4", "PbI_5", "PbI_6J"):
        enum = enumerate_classes(model.paramsets[sid], 2)
        sizes = 0
        group = enum.group
        moduli = enum.moduli
        for rep in enum.representatives():
            orbit = set()
            for g in group.maps:
                if len(moduli) == 1:
                    orbit.add((g[0][0] * rep[0] + g[0][1]) % moduli[0])
                else:
                    orbit.add((
                        (g[0][0] * rep[0] + g[0][1] * rep[1] + g[0][2]) % moduli[0],
                        (g[1][0] * rep[0] + g[1][1] * rep[1] + g[1][2]) % moduli[1],
                    ))
            sizes += len(orbit)
        assert sizes == enum.n_admissible, sid


def test_dual_encodings_match(model):
    for n in (1, 2):
        for a1, j in (("PbI_6", "PbI_6J"), ("PbI_7", "PbI_7J")):
            assert class_count(model.paramsets[a1], n) == class_count(
                model.paramsets[j], n
            )
            assert model.paramsets[j].alias_of == a1


def test_degenerate_h4_and_g4(model):
    assert family_class_count(model.classfams["h4"], model, 1) == 0
    assert family_class_count(model.classfams["g4"], model, 1) == 0
    assert family_formula_count(model.classfams["h4"], 1) == 0


def test_family_h8_counts(model):
    assert family_class_count(model.classfams["h8"], model, 1) == 1
    assert family_class_count(model.classfams["h8"], model, 2) == 6


def test_cardinalities_n1_n2(model):
    for n in (1, 2):
        recs = cardinality_check(model, n)
        assert recs, "no records"
        for r in recs:
            assert r.ok, (r.name, r.expected, r.actual)


def test_single_index_n3(model):
    recs = cardinality_check(model, 3, max_arity=1)
    assert sum(1 for r in recs if r.check == "cardinality") > 50
    for r in recs:
        assert r.ok, (r.name, r.expected, r.actual)


def test_semisimple_sums(model):
    for n in (1, 2, 3, 4):
        q4 = 2 ** (2 * (2 * n + 1))
        for r in semisimple_sum_checks(model, n):
            assert r.expected == q4
            assert r.ok, (r.check, n, r.actual)


def test_budget_exceeded(model):
    with pytest.raises(BudgetExceeded):
        enumerate_classes(model.paramsets["BI_1"], 4, budget=1 << 16)


def test_budget_allows_n4_pairs(model):
    enum = enumerate_classes(model.paramsets["BI_1"], 4)
    assert enum.count == (2 ** 9 - 1) ** 2


def test_non_integral_modulus():
    from dadecheck.tabledsl import parse_model
    from dadecheck.paramsets import NonIntegralModulus

    m = parse_model(
        "paramset X { group: G action: doubling moduli: [q] card: 1 }"
    )
    with pytest.raises(NonIntegralModulus):
        enumerate_classes(m.paramsets["X"], 1)


def test_trusted_inputs_flagged(model):
    from dadecheck.paramsets import trusted_input_flags

    names = {r.name.split(":")[0] for r in trusted_input_flags(model)}
    assert names == {"GI_50", "GI_51", "GI_ss"}
