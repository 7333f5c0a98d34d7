"""Evaluator tests: certificates, budgets, hints, oracles, both routes."""

import itertools
import random

import pytest

from fointerp.evaluator import (
    FALSE,
    TRUE,
    Budget,
    compile_formula,
    evaluate,
    evaluate_term,
    from_bool,
    tv_and,
    tv_iff,
    tv_implies,
    tv_not,
    tv_or,
    unknown,
)
from fointerp.logic import (
    And,
    Atom,
    Bound,
    Eq,
    Exists,
    ExistsUnique,
    Forall,
    HintTag,
    IntLit,
    Not,
    Or,
    Signature,
    Var,
    parse,
)
from fointerp.structures import FiniteStructure, Structure

# ---------------------------------------------------------------------------
# Test structures

MOD5_SIG = Signature(
    sorts=("Num",),
    functions={
        ("+", ("Num", "Num")): "Num",
        ("*", ("Num", "Num")): "Num",
        ("neg", ("Num",)): "Num",
    },
    relations={("<=", ("Num", "Num")): None, ("<", ("Num", "Num")): None},
    constants={},
    number_sort="Num",
)


def mod5():
    return FiniteStructure(
        "mod5",
        MOD5_SIG,
        carriers={"Num": list(range(5))},
        functions={
            ("+", ("Num", "Num")): lambda a, b: (a + b) % 5,
            ("*", ("Num", "Num")): lambda a, b: (a * b) % 5,
            ("neg", ("Num",)): lambda a: (-a) % 5,
        },
        relations={
            ("<=", ("Num", "Num")): lambda a, b: a <= b,
            ("<", ("Num", "Num")): lambda a, b: a < b,
        },
        int_embed=lambda v, sort: v % 5,
    )


NAT_SIG = Signature(
    sorts=("Num",),
    functions={
        ("+", ("Num", "Num")): "Num",
        ("*", ("Num", "Num")): "Num",
    },
    relations={
        ("<=", ("Num", "Num")): None,
        ("<", ("Num", "Num")): None,
        ("|", ("Num", "Num")): None,
    },
    constants={},
    number_sort="Num",
)


class Nats(Structure):
    """The naturals with +, *, comparisons and exact divisibility."""

    def __init__(self):
        super().__init__("nats", NAT_SIG)

    def enum_sort(self, sort):
        return itertools.count(0) if sort == "Num" else None

    def contains(self, sort, value):
        return isinstance(value, int) and value >= 0

    def function(self, name, argsorts):
        return {"+": lambda a, b: a + b, "*": lambda a, b: a * b}[name]

    def relation(self, name, argsorts):
        if name == "<=":
            return lambda a, b: a <= b
        if name == "<":
            return lambda a, b: a < b
        return lambda d, p: p % d == 0 if d != 0 else p == 0

    def embed_int(self, value, sort):
        if value < 0:
            raise ValueError("not a natural number")
        return value

    def to_int(self, value):
        return value


NATS = Nats()


def ev(text_or_f, structure=None, env=None, **kw):
    structure = structure if structure is not None else NATS
    f = text_or_f
    if isinstance(f, str):
        f = parse(f, structure.sig)
    return evaluate(structure, f, env=env, **kw)


# ---------------------------------------------------------------------------
# Kleene connective tables

U = unknown("test")


def test_kleene_tables():
    assert tv_not(TRUE) == FALSE and tv_not(FALSE) == TRUE and tv_not(U) == U
    assert tv_and(TRUE, TRUE) == TRUE
    assert tv_and(TRUE, U) == U and tv_and(U, TRUE) == U
    assert tv_and(FALSE, U) == FALSE and tv_and(U, FALSE) == FALSE
    assert tv_or(TRUE, U) == TRUE and tv_or(U, TRUE) == TRUE
    assert tv_or(FALSE, U) == U and tv_or(U, U) == U
    assert tv_implies(FALSE, U) == TRUE
    assert tv_implies(U, TRUE) == TRUE
    assert tv_implies(TRUE, U) == U
    assert tv_iff(U, TRUE) == U
    assert tv_iff(FALSE, FALSE) == TRUE
    assert tv_iff(TRUE, FALSE) == FALSE


def test_unknown_carries_reason():
    r = unknown("no-enumerator")
    assert r.is_unknown and r.reason == "no-enumerator"


# ---------------------------------------------------------------------------
# Brute-force cross-validation on a finite structure


def brute(structure, f, env):
    """Classical two-valued evaluation by full enumeration."""
    from fointerp.logic.ast import (
        And, Atom, Eq, Exists, ExistsUnique, FalseF, Forall, Iff, Implies,
        Not, Or, TrueF,
    )

    def term(t, env):
        from fointerp.logic.ast import App, IntLit, Pow, Var
        tt = type(t)
        if tt is Var:
            return env[t.name]
        if tt is IntLit:
            return structure.embed_int(t.value, t.sort)
        if tt is Pow:
            v = term(t.base, env)
            out = structure.embed_int(1, "Num")
            for _ in range(t.exp):
                out = structure.function("*", ("Num", "Num"))(out, v)
            return out
        if tt is App:
            fn = structure.function(t.op, tuple(a.sort for a in t.args))
            return fn(*(term(a, env) for a in t.args))
        raise TypeError(t)

    def candidates(q, env):
        if q.bound is None:
            return list(structure.carriers[q.var.sort])
        hi = structure.to_int(term(q.bound.term, env))
        lo = q.bound.low
        stop = hi if q.bound.op == "<" else hi + 1
        return [structure.embed_int(i, "Num") for i in range(lo, stop)]

    def go(f, env):
        ft = type(f)
        if ft is TrueF:
            return True
        if ft is FalseF:
            return False
        if ft is Atom:
            rel = structure.relation(f.rel, tuple(a.sort for a in f.args))
            return bool(rel(*(term(a, env) for a in f.args)))
        if ft is Eq:
            return term(f.left, env) == term(f.right, env)
        if ft is Not:
            return not go(f.body, env)
        if ft is And:
            return go(f.left, env) and go(f.right, env)
        if ft is Or:
            return go(f.left, env) or go(f.right, env)
        if ft is Implies:
            return (not go(f.left, env)) or go(f.right, env)
        if ft is Iff:
            return go(f.left, env) == go(f.right, env)
        if ft in (Forall, Exists, ExistsUnique):
            vals = [go(f.body, {**env, f.var.name: c})
                    for c in candidates(f, env)]
            if ft is Forall:
                return all(vals)
            if ft is Exists:
                return any(vals)
            return sum(vals) == 1
        raise TypeError(f)

    return go(f, env)


class FiniteGen:
    """Random closed formulas over the mod-5 signature."""

    def __init__(self, seed):
        self.rng = random.Random(seed)
        self.n = 0

    def term(self, env, depth):
        rng = self.rng
        if depth == 0 or (env and rng.random() < 0.4):
            if env and rng.random() < 0.7:
                return Var(rng.choice(env), "Num")
            return IntLit(rng.randint(0, 4), "Num")
        from fointerp.logic.ast import App, Pow
        kind = rng.choice(["+", "*", "neg", "pow"])
        if kind == "neg":
            return App("neg", (self.term(env, depth - 1),), "Num")
        if kind == "pow":
            return Pow(self.term(env, depth - 1), rng.randint(2, 3), "Num")
        return App(kind, (self.term(env, depth - 1), self.term(env, depth - 1)), "Num")

    def formula(self, env, depth):
        rng = self.rng
        if depth == 0:
            kind = rng.choice(["eq", "le", "lt"])
            l, r = self.term(env, 1), self.term(env, 1)
            if kind == "eq":
                return Eq(l, r)
            return Atom("<=" if kind == "le" else "<", (l, r))
        kind = rng.choice(["atom", "not", "and", "or", "implies", "iff",
                           "forall", "exists", "existsu", "bounded"])
        if kind == "atom":
            return self.formula(env, 0)
        if kind == "not":
            return Not(self.formula(env, depth - 1))
        if kind in ("and", "or", "implies", "iff"):
            from fointerp.logic.ast import And, Iff, Implies, Or
            cls = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[kind]
            return cls(self.formula(env, depth - 1), self.formula(env, depth - 1))
        self.n += 1
        name = f"q{self.n}"
        cls = {"forall": Forall, "exists": Exists, "existsu": ExistsUnique}.get(kind)
        if cls is not None:
            return cls(Var(name, "Num"), self.formula(env + [name], depth - 1),
                       None, None)
        guard = Bound(self.rng.choice([0, 1]), self.rng.choice(["<=", "<"]),
                      self.term(env, 1))
        cls = self.rng.choice([Forall, Exists])
        return cls(Var(name, "Num"), self.formula(env + [name], depth - 1),
                   guard, None)


def test_agrees_with_brute_force_on_finite_structure():
    structure = mod5()
    gen = FiniteGen(424242)
    for i in range(300):
        f = gen.formula([], 3)
        want = brute(structure, f, {})
        got = evaluate(structure, f)
        assert got.definite, f"case {i} not definite: {got.reason}"
        assert got == from_bool(want), f"case {i}"


def test_compiled_route_matches_reference_on_finite_structure():
    structure = mod5()
    gen = FiniteGen(777)
    for i in range(200):
        f = gen.formula([], 3)
        ref = evaluate(structure, f)
        run = compile_formula(structure, f)
        assert run() == ref, f"case {i}"


def test_negation_duality_on_finite_structure():
    structure = mod5()
    gen = FiniteGen(31337)
    for _ in range(150):
        f = gen.formula([], 3)
        assert evaluate(structure, Not(f)) == tv_not(evaluate(structure, f))


# ---------------------------------------------------------------------------
# Certificates over an infinite carrier


def test_exists_witness_found_is_true():
    assert ev("exists x (x + x = 4)").is_true


def test_exists_no_witness_within_budget_is_unknown():
    r = ev("exists x (x + x = 3)")  # odd sum, never solvable; scan cannot know
    assert r.is_unknown and r.reason == "budget-exhausted"


def test_forall_counterexample_is_false():
    assert ev("forall x (x <= 100)").is_false


def test_forall_true_cases_stay_unknown_on_infinite_carrier():
    r = ev("forall x (0 <= x)")
    assert r.is_unknown and r.reason == "budget-exhausted"


def test_bounded_quantifiers_are_definite():
    assert ev("forall i <= 10 (i <= 10)").is_true
    assert ev("exists i <= 10 (i = 10)").is_true
    assert ev("exists i < 10 (i = 10)").is_false
    assert ev("forall 1 <= i <= 8 (1 <= i)").is_true
    assert ev("exists 1 <= i <= 8 (i = 0)").is_false
    assert ev("forall i <= 100 (i | 0)").is_true


def test_bounded_quantifier_empty_range():
    assert ev("forall i < 0 (false)").is_true
    assert ev("exists i < 0 (true)").is_false


def test_divisibility_relation():
    assert ev("3 | 12").is_true
    assert ev("5 | 12").is_false
    assert ev("exists d (d | 91 & 1 < d & d < 91)").is_true  # 7 * 13


def test_exists_unique_two_witnesses_refute_even_unbounded():
    # x*x = x holds for 0 and 1; two witnesses settle it without exhaustion
    assert ev("exists! x (x * x = x)").is_false


def test_exists_unique_single_witness_unbounded_is_unknown():
    r = ev("exists! x (x + x = 4)")
    assert r.is_unknown and r.reason == "budget-exhausted"


def test_exists_unique_bounded_definite():
    assert ev("exists! x <= 10 (x + x = 4)").is_true
    assert ev("exists! x <= 10 (x * x = x)").is_false
    assert ev("exists! x <= 10 (x = 11)").is_false


def test_free_variables_from_environment():
    assert ev("x + x = y", env={"x": 3, "y": 6}).is_true
    assert ev("exists z (x + z = y)", env={"x": 3, "y": 10}).is_true


def test_environment_shadowing_restores_outer_binding():
    f = parse("exists x (x = 2) & x = 7", NAT_SIG)
    assert evaluate(NATS, f, env={"x": 7}).is_true


# ---------------------------------------------------------------------------
# Budgets


def test_candidate_budget_controls_scan_depth():
    f = parse("exists x (x = 50)", NAT_SIG)
    assert evaluate(NATS, f, budget=Budget(candidates=10)).is_unknown
    assert evaluate(NATS, f, budget=Budget(candidates=100)).is_true


def test_node_budget_exhaustion_is_unknown():
    f = parse("forall x (exists y (x <= y))", NAT_SIG)
    r = evaluate(NATS, f, budget=Budget(nodes=50))
    assert r.is_unknown and r.reason == "budget-exhausted"


def test_budget_monotonicity_definite_answers_never_flip():
    gen = FiniteGen(2024)
    texts = [
        "exists x (x * x = 49)",
        "forall x (x <= 30)",
        "exists! x (x * x = x)",
        "exists x (x + x = 9)",
        "forall x (x | 60)",
        "exists x (7 | x & 30 < x & x < 40)",
    ]
    for t in texts:
        f = parse(t, NAT_SIG)
        small = evaluate(NATS, f, budget=Budget(candidates=40))
        big = evaluate(NATS, f, budget=Budget(candidates=4000))
        if small.definite:
            assert small == big


def test_no_enumerator_reason():
    sig = Signature(sorts=("Opaque",), functions={}, relations={},
                    constants={})

    class Opaque(Structure):
        def function(self, name, argsorts):
            raise AssertionError

        def relation(self, name, argsorts):
            raise AssertionError

    s = Opaque("opaque", sig)
    f = parse("forall x:Opaque (x = x)", sig)
    r = evaluate(s, f)
    assert r.is_unknown and r.reason == "no-enumerator"


# ---------------------------------------------------------------------------
# Hints: verified candidates tried before enumeration


def test_hint_supplies_deep_witness():
    f = Exists(Var("x", "Num"), Eq(Var("x", "Num"), IntLit(123456789, "Num")),
               None, HintTag("needle", ()))
    assert evaluate(NATS, f).is_unknown
    hints = {"needle": lambda structure, env, roles: [123456789]}
    assert evaluate(NATS, f, hints=hints).is_true


def test_hint_roles_are_evaluated_in_environment():
    f = Exists(Var("x", "Num"), Eq(Var("x", "Num"), Var("t", "Num")),
               None, HintTag("copy", (("target", Var("t", "Num")),)))
    hints = {"copy": lambda structure, env, roles: [roles["target"]]}
    assert evaluate(NATS, f, env={"t": 987654321}, hints=hints).is_true


def test_wrong_hints_are_never_trusted():
    f = Exists(Var("x", "Num"), Eq(Var("x", "Num"), IntLit(123456789, "Num")),
               None, HintTag("needle", ()))
    hints = {"needle": lambda structure, env, roles: [-3, 17]}
    r = evaluate(NATS, f, hints=hints)  # -3 inadmissible, 17 wrong
    assert r.is_unknown and r.reason == "budget-exhausted"


def test_forall_hint_supplies_counterexample():
    f = Forall(Var("x", "Num"),
               Atom("<=", (Var("x", "Num"), IntLit(10**9, "Num"))),
               None, HintTag("breaker", ()))
    assert evaluate(NATS, f).is_unknown
    hints = {"breaker": lambda structure, env, roles: [10**9 + 1]}
    assert evaluate(NATS, f, hints=hints).is_false


def test_hint_outside_bound_guard_is_filtered():
    f = Exists(Var("x", "Num"), Eq(Var("x", "Num"), IntLit(50, "Num")),
               Bound(0, "<=", IntLit(10, "Num")), HintTag("needle", ()))
    hints = {"needle": lambda structure, env, roles: [50]}
    assert evaluate(NATS, f, hints=hints).is_false  # 50 > 10: range scan settles


def test_hinted_formula_evaluates_same_in_compiled_route():
    f = Exists(Var("x", "Num"), Eq(Var("x", "Num"), Var("t", "Num")),
               None, HintTag("copy", (("target", Var("t", "Num")),)))
    hints = {"copy": lambda structure, env, roles: [roles["target"]]}
    run = compile_formula(NATS, f, hints=hints)
    assert run({"t": 10**12}).is_true
    assert run({"t": 3}).is_true


# ---------------------------------------------------------------------------
# Registered decision procedures for tagged subformulas


def test_oracle_decides_tagged_quantifier():
    f = Forall(Var("x", "Num"),
               Atom("<=", (IntLit(0, "Num"), Var("x", "Num"))),
               None, HintTag("nonneg", ()))
    oracles = {"nonneg": lambda structure, env, node: True}
    assert evaluate(NATS, f, oracles=oracles).is_true
    oracles = {"nonneg": lambda structure, env, node: False}
    assert evaluate(NATS, f, oracles=oracles).is_false


def test_oracle_abstains_falls_back_to_scan():
    f = Forall(Var("x", "Num"),
               Atom("<=", (Var("x", "Num"), IntLit(5, "Num"))),
               None, HintTag("claim", ()))
    oracles = {"claim": lambda structure, env, node: None}
    assert evaluate(NATS, f, oracles=oracles).is_false  # counterexample at 6


def test_undecided_relation_is_unknown():
    sig = Signature(sorts=("Num",), functions={},
                    relations={("Mystery", ("Num",)): None}, constants={},
                    number_sort="Num")
    s = FiniteStructure("m", sig, carriers={"Num": [0, 1]},
                        functions={},
                        relations={("Mystery", ("Num",)): lambda a: None},
                        int_embed=lambda v, sort: v)
    f = parse("Mystery(0)", sig)
    r = evaluate(s, f)
    assert r.is_unknown


def test_kleene_shortcuts_absorb_unknown():
    sig = Signature(sorts=("Num",), functions={},
                    relations={("Mystery", ("Num",)): None}, constants={},
                    number_sort="Num")
    s = FiniteStructure("m", sig, carriers={"Num": [0, 1]},
                        functions={},
                        relations={("Mystery", ("Num",)): lambda a: None},
                        int_embed=lambda v, sort: v)
    assert evaluate(s, parse("Mystery(0) | 0 = 0", sig)).is_true
    assert evaluate(s, parse("Mystery(0) & !(0 = 0)", sig)).is_false
    assert evaluate(s, parse("Mystery(0) -> 0 = 0", sig)).is_true
    assert evaluate(s, parse("Mystery(0) <-> Mystery(0)", sig)).is_unknown


# ---------------------------------------------------------------------------
# Terms


def test_term_evaluation():
    from fointerp.logic.parser import parse_term
    assert evaluate_term(NATS, parse_term("2 * 3 + 4", NAT_SIG)) == 10
    assert evaluate_term(NATS, parse_term("2^10", NAT_SIG)) == 1024
    assert evaluate_term(NATS, parse_term("x * x", NAT_SIG), env={"x": 9}) == 81


def test_macro_expansion_during_evaluation():
    from fointerp.logic import Macro
    body = parse("exists q (p = q * d)", NAT_SIG)
    m = Macro("divides", (Var("d", "Num"), Var("p", "Num")), body)
    f = parse("divides(3, 12)", NAT_SIG, {"divides": m})
    assert evaluate(NATS, f, macros={"divides": m}).is_true
    g = parse("divides(5, 12)", NAT_SIG, {"divides": m})
    r = evaluate(NATS, g, macros={"divides": m})
    # no witness exists; scan cannot exhaust the naturals
    assert r.is_unknown
