"""Class data and character-value checks.

Covers the class equation (sum over classes of |G|/|C| = |G|), the linear
relations and norm (f, f) = 2 of the two exceptional class functions, the
difference identities tying them to the four non-uniform irreducibles, and
the degree identities.  Symbolic checks canonicalize each value as a sum of
terms  coeff(q) * eps4^e * sum_j zeta^(e_j(i,k));  numeric checks evaluate
with eps4 = i and zeta a principal root of unity.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .exactnum import NotRationalInteger, QPoly, as_integer, val2
from .paramsets import family_formula_count
from .tabledsl import (
    ChValue,
    Model,
    build_env,
    eval_expr,
    eval_expr_int,
    eval_qpoly,
)
from .dadeverify import two_part_exponent


class NonIntegralIndex(ValueError):
    """|G|/|C| failed to be an integer: a transcription error in the tables."""


@dataclass
class Record:
    check: str
    name: str
    n: Optional[int]
    expected: object
    actual: object
    note: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


# --- class equation -----------------------------------------------------------


def class_equation(model: Model, n: int) -> List[Record]:
    env = build_env(n)
    order = eval_expr_int(model.order_expr, env)
    total = 0
    divisibility_ok = True
    for rid in sorted(model.classrows):
        row = model.classrows[rid]
        cent = eval_expr_int(row.cent, env)
        if order % cent:
            raise NonIntegralIndex(f"{rid}: centralizer {cent} does not divide |G|")
        mult = family_formula_count(model.classfams[row.family], n)
        total += mult * (order // cent)
    return [
        Record("class_equation", "sum", n, order, total),
        Record("centralizer_divisibility", "all", n, True, divisibility_ok),
    ]


# --- tiny polynomial ring for exponent canonicalization ------------------------

_EXP_SYMS = ("th", "i", "k")


class _MPoly:
    """Polynomial in th, i, k over Q; only used to canonicalize exponents."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @staticmethod
    def const(c):
        return _MPoly({(0, 0, 0): Fraction(c)})

    @staticmethod
    def var(name):
        m = tuple(int(s == name) for s in _EXP_SYMS)
        return _MPoly({m: Fraction(1)})

    def __add__(self, o):
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return _MPoly(out)

    def __neg__(self):
        return _MPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return _MPoly(out)

    def __truediv__(self, o):
        if len(o.terms) == 1 and (0, 0, 0) in o.terms:
            c = o.terms[(0, 0, 0)]
            return _MPoly({m: v / c for m, v in self.terms.items()})
        raise ValueError("exponent division only by constants")

    def __pow__(self, e):
        out = _MPoly.const(1)
        for _ in range(e):
            out = out * self
        return out

    def key(self):
        return tuple(sorted(self.terms.items()))


def _exp_poly(expr) -> tuple:
    env = {s: _MPoly.var(s) for s in _EXP_SYMS}
    env["q"] = None  # q must not appear inside a root exponent
    poly = _eval_mpoly(expr, env)
    return poly.key()


def _eval_mpoly(node, env) -> _MPoly:
    op = node[0]
    if op == "int":
        return _MPoly.const(node[1])
    if op == "sym":
        v = env.get(node[1])
        if v is None:
            raise ValueError(f"symbol {node[1]} not allowed in root exponents")
        return v
    if op == "neg":
        return -_eval_mpoly(node[1], env)
    if op == "pow":
        exp = node[2]
        if exp[0] != "int":
            raise ValueError("exponent powers must be literal")
        return _eval_mpoly(node[1], env) ** exp[1]
    a = _eval_mpoly(node[1], env)
    b = _eval_mpoly(node[2], env)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"bad node {node!r}")


def canonical_value(cv: Optional[ChValue]) -> Dict[tuple, QPoly]:
    """Value as a map (eps4 power, root-exponent multiset) -> q-polynomial."""
    out: Dict[tuple, QPoly] = {}
    if cv is None:
        return out
    for term in cv.terms:
        coeff = eval_qpoly(term.coeff)
        exps = tuple(sorted(_exp_poly(e) for e in term.exps))
        key = (term.eps4 % 4, exps)
        cur = out.get(key, QPoly())
        new = cur + coeff
        if new.is_zero():
            out.pop(key, None)
        else:
            out[key] = new
    return out


def _combine(values: List[Tuple[int, Dict[tuple, QPoly]]]) -> Dict[tuple, QPoly]:
    out: Dict[tuple, QPoly] = {}
    for c, val in values:
        for key, poly in val.items():
            cur = out.get(key, QPoly())
            new = cur + QPoly.const(c) * poly
            if new.is_zero():
                out.pop(key, None)
            else:
                out[key] = new
    return out


def _chvalue(model: Model, func: str, cls: str) -> Optional[ChValue]:
    return model.chvalues.get(f"{func}_{cls}")


def eval_value_numeric(
    model: Model, cv: Optional[ChValue], n: int, i: int = 0, k: int = 0
) -> complex:
    """Complex value with eps4 the principal fourth root of unity."""
    if cv is None or not cv.terms:
        return 0j
    env = build_env(n, i=i, k=k)
    order = eval_expr_int(cv.order, env) if cv.order is not None else 1
    total = 0j
    for term in cv.terms:
        coeff = eval_expr(term.coeff, env).to_float()
        rs = 0j
        for e in term.exps:
            ev = eval_expr_int(e, env)
            rs += cmath.exp(2j * cmath.pi * (ev % order) / order)
        total += coeff * (1j ** (term.eps4 % 4)) * rs
    return total


# --- relations -----------------------------------------------------------------


def f_relations_check(model: Model, numeric_n: Tuple[int, ...] = (1, 2)) -> List[Record]:
    """Linear relations and the difference identities, symbolically then numerically."""
    records = []
    for rid in sorted(model.relations):
        rel = model.relations[rid]
        if rel.sum:
            combined = _combine(
                [(c, canonical_value(_chvalue(model, rel.func, cls)))
                 for c, cls in rel.sum]
            )
            records.append(Record("relation", rid, None, {}, combined))
        elif rel.equals:
            for cls in rel.classes:
                lhs = _combine(
                    [
                        (1, canonical_value(_chvalue(model, rel.left, cls))),
                        (-1, canonical_value(_chvalue(model, rel.right, cls))),
                    ]
                )
                rhs = canonical_value(_chvalue(model, rel.equals, cls))
                records.append(Record("difference", f"{rid}/{cls}", None, rhs, lhs))
    # numeric spot check of the same relations at small n
    for n in numeric_n:
        env = build_env(n)
        for rid in sorted(model.relations):
            rel = model.relations[rid]
            ik = {"i": 1, "k": 1}
            if rel.sum:
                z = sum(
                    c * eval_value_numeric(model, _chvalue(model, rel.func, cls), n, **ik)
                    for c, cls in rel.sum
                )
                records.append(
                    Record("relation_numeric", rid, n, True, abs(z) < 1e-9)
                )
            elif rel.equals:
                for cls in rel.classes:
                    z = (
                        eval_value_numeric(model, _chvalue(model, rel.left, cls), n, **ik)
                        - eval_value_numeric(model, _chvalue(model, rel.right, cls), n, **ik)
                        - eval_value_numeric(model, _chvalue(model, rel.equals, cls), n, **ik)
                    )
                    records.append(
                        Record("difference_numeric", f"{rid}/{cls}", n, True, abs(z) < 1e-9)
                    )
    return records


def exponent_integrality(model: Model, n_list: Tuple[int, ...] = (1, 2)) -> List[Record]:
    """Every root exponent is an integer for all index values at small n."""
    records = []
    for n in n_list:
        ok = True
        for cv in model.chvalues.values():
            if cv.order is None:
                continue
            order = eval_expr_int(cv.order, build_env(n))
            for i in range(1, min(order, 8)):
                for k in range(1, min(order, 8)):
                    env = build_env(n, i=i, k=k)
                    for term in cv.terms:
                        for e in term.exps:
                            try:
                                eval_expr_int(e, env)
                            except NotRationalInteger:
                                ok = False
        records.append(Record("exponent_integrality", "all", n, True, ok))
    return records


# --- norms ---------------------------------------------------------------------


def _orbit_reps(order: int, q2: int) -> List[int]:
    """Representatives of the orbits {+-i, +-q^2 i} on nonzero residues."""
    seen = set()
    reps = []
    for i in range(1, order):
        if i in seen:
            continue
        orbit = {i, (-i) % order, (q2 * i) % order, (-q2 * i) % order}
        seen |= orbit
        reps.append(i)
    return reps


_NORM_FAMILY = {"f8": ("p8b", "h8"), "f10": ("p8a", "h10")}


def f_norm(model: Model, n: int, which: str, k: int) -> float:
    """(f(k), f(k)) as a sum over classes of |value|^2 / |centralizer|."""
    contributions = f_norm_contributions(model, n, which, k)
    return sum(contributions.values())


def f_norm_contributions(model: Model, n: int, which: str, k: int) -> Dict[str, float]:
    """Per-centralizer-size breakdown of the norm (the class-equation weights)."""
    env = build_env(n)
    q2 = eval_expr_int(("pow", ("sym", "q"), ("int", 2)), env)
    out: Dict[str, float] = {}
    for rid in sorted(model.classrows):
        row = model.classrows[rid]
        cv = _chvalue(model, which, rid)
        if cv is None or not cv.terms:
            continue
        cent = eval_expr_int(row.cent, env)
        fam = model.classfams[row.family]
        if fam.vars:
            order = eval_expr_int(cv.order, env)
            reps = _orbit_reps(order, q2)
            if len(reps) != family_formula_count(fam, n):
                raise ValueError(
                    f"{rid}: {len(reps)} index orbits vs family count"
                )
            total = 0.0
            for i in reps:
                total += abs(eval_value_numeric(model, cv, n, i=i, k=k)) ** 2 / cent
        else:
            total = abs(eval_value_numeric(model, cv, n, k=k)) ** 2 / cent
        key = f"cent_{cent}"
        out[key] = out.get(key, 0.0) + total
    return out


def admissible_norm_parameters(model: Model, n: int, which: str) -> List[int]:
    order_name, _ = _NORM_FAMILY[which]
    order = eval_expr_int(("sym", order_name), build_env(n))
    return list(range(1, order))


def f_norm_check(
    model: Model, n: int, which: str, tol: float = 1e-9
) -> List[Record]:
    records = []
    for k in admissible_norm_parameters(model, n, which):
        got = f_norm(model, n, which, k)
        records.append(
            Record("f_norm", f"{which}(k={k})", n, True, abs(got - 2.0) < tol,
                   note=f"norm={got!r}")
        )
    return records


# --- degrees -------------------------------------------------------------------


def degree_identity_check(model: Model, n_list: Tuple[int, ...] = (1, 2, 3, 4)) -> List[Record]:
    records = []
    for rid in sorted(model.degrels):
        dr = model.degrels[rid]
        table = eval_qpoly(dr.table)
        phi = eval_qpoly(dr.phi)
        records.append(Record("degree_poly", rid, None, phi, table))
        for n in n_list:
            env = build_env(n)
            deg = as_integer(table.eval(n))
            d = two_part_exponent(n) - val2(deg)
            records.append(
                Record("degree_defect", rid, n, eval_expr_int(dr.defect, env), d)
            )
            if dr.odd:
                records.append(Record("degree_odd", rid, n, 1, deg % 2))
    return records
