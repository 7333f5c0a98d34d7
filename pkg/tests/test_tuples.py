"""Tuple codecs, their defining formulas, and list superstructures."""

import itertools
import random

import pytest

from fointerp.evaluator import Budget, evaluate, from_bool
from fointerp.logic.parser import parse
from fointerp.structures.registry import get_structure
from fointerp.tuples import (
    CantorCodec, DigitsCodec, SwapCodec,
    apply_permutation, check_axioms, check_translation, concat,
    concat_formula, count_formula, count_occurrences, entry_hints,
    extensionality_body, fold_formula, fold_left, fold_product, fold_sum,
    get_codec, is_permutation, is_permutation_of, make_list_structure,
    member, member_formula, permutation_covers, permutation_covers_formula,
    permutation_distinct, permutation_distinct_formula, permutation_formula,
    permutation_of_formula, same_tuple_formula, standard_hints,
)

N = get_structure("N")

CODECS = [get_codec("cantor"), get_codec("swap"), get_codec("digits", 9)]


def _codec_ids():
    return [c.name for c in CODECS]


# ---------------------------------------------------------------------------
# the maps themselves


class TestCodecMaps:
    def test_empty_tuple_is_zero(self):
        for c in CODECS:
            assert c.encode(()) == 0
            assert c.decode(0) == ()

    def test_frozen_values(self):
        # pair(3,0)=9 -> code 10; pair(0,10)=55 -> code 56; pair(7,56)=2023
        cantor = get_codec("cantor")
        assert cantor.encode((3,)) == 10
        assert cantor.encode((0, 3)) == 56
        assert cantor.encode((7, 0, 3)) == 2024
        # swapped pairing puts the tail in the linear coordinate
        swap = get_codec("swap")
        assert swap.encode((1,)) == 2
        assert swap.decode(3) == (0, 0)
        assert swap.encode((0, 1)) == 6
        # base-10 positional: 11 shorter tuples, payload 1 + 2*10
        digits = get_codec("digits", 9)
        assert digits.encode((0,)) == 1
        assert digits.encode((9,)) == 10
        assert digits.encode((0, 0)) == 11
        assert digits.encode((1, 2)) == 32
        assert digits.encode((3, 0, 7)) == 814

    def test_minimal_codes_by_length(self):
        # the all-zeros tuple has the least code of its length
        cantor = get_codec("cantor")
        mins = [cantor.encode((0,) * k) for k in range(7)]
        assert mins == [0, 1, 2, 4, 11, 67, 2279]
        assert cantor.max_length(10_000) == 6
        assert get_codec("swap").max_length(10_000) == 5

    @pytest.mark.parametrize("codec", CODECS, ids=_codec_ids())
    def test_round_trips(self, codec):
        for tup in [(), (0,), (7, 0, 3), (9, 9, 9, 9), (1, 0, 1, 0, 1)]:
            assert codec.decode(codec.encode(tup)) == tup
        for n in range(2000):
            assert codec.encode(codec.decode(n)) == n

    @pytest.mark.parametrize("codec", CODECS, ids=_codec_ids())
    def test_injective_exhaustive(self, codec):
        hi = 10 if codec.alphabet is None else min(10, codec.alphabet)
        seen = {}
        for k in range(5):
            for tup in itertools.product(range(hi + 1), repeat=k):
                n = codec.encode(tup)
                assert n not in seen, (tup, seen[n])
                seen[n] = tup
                assert codec.decode(n) == tup

    def test_entry_validation(self):
        cantor = get_codec("cantor")
        with pytest.raises(ValueError):
            cantor.encode((-1,))
        with pytest.raises(ValueError):
            cantor.decode(-3)
        digits = get_codec("digits", 9)
        with pytest.raises(ValueError):
            digits.encode((10,))
        with pytest.raises(ValueError):
            DigitsCodec(0)

    def test_nested_tuples(self):
        for codec in (get_codec("cantor"), get_codec("swap")):
            rows = ((1, 2), (), (0, 4, 1))
            n = codec.encode_nested(rows)
            assert codec.decode_nested(n) == rows
            assert codec.encode_nested(()) == 0

    def test_get_codec_names(self):
        assert get_codec("cantor").name == "cantor"
        assert get_codec("digits", 4).name == "digits4"
        with pytest.raises(KeyError):
            get_codec("nope")


# ---------------------------------------------------------------------------
# the defining formulas


WINDOW_SMALL = 500


class TestCodecFormulas:
    @pytest.mark.parametrize("codec", CODECS, ids=_codec_ids())
    def test_agreement_exhaustive_small(self, codec):
        """Two-sided: component/length formulas match decode for n <= 40."""
        T = codec.component_formula(WINDOW_SMALL)
        L = codec.length_formula(WINDOW_SMALL)
        hints = codec.hints()
        depth = codec.max_length(WINDOW_SMALL)
        for n in range(41):
            tup = codec.decode(n)
            for i in range(1, depth + 2):
                probes = {0, 1, 7}
                if i <= len(tup):
                    probes.add(tup[i - 1])
                for a in probes:
                    want = i <= len(tup) and tup[i - 1] == a
                    got = evaluate(N, T, env={"n": n, "a": a, "i": i},
                                   hints=hints)
                    assert got == from_bool(want), (codec.name, n, a, i)
            for k in range(depth + 2):
                got = evaluate(N, L, env={"n": n, "k": k}, hints=hints)
                assert got == from_bool(k == len(tup)), (codec.name, n, k)

    @pytest.mark.parametrize("codec", CODECS, ids=_codec_ids())
    def test_positive_side_full_window(self, codec):
        """Every entry and the length certify at sampled codes <= 10^4."""
        T = codec.component_formula(10_000)
        L = codec.length_formula(10_000)
        hints = codec.hints()
        rng = random.Random(11)
        ns = [0, 1, 9_999, 10_000] + [rng.randrange(10_001) for _ in range(120)]
        for n in ns:
            tup = codec.decode(n)
            for i, a in enumerate(tup, start=1):
                r = evaluate(N, T, env={"n": n, "a": a, "i": i}, hints=hints)
                assert r.is_true, (codec.name, n, i)
            r = evaluate(N, L, env={"n": n, "k": len(tup)}, hints=hints)
            assert r.is_true, (codec.name, n)

    def test_negative_side_at_window_edge(self):
        """Definite refutations near n = 10^4 under an explicit budget."""
        budget = Budget(candidates=100_000, nodes=50_000_000)
        for codec in CODECS:
            T = codec.component_formula(10_000)
            L = codec.length_formula(10_000)
            hints = codec.hints()
            n = 9_999
            tup = codec.decode(n)
            wrong = tup[0] + 1
            if codec.alphabet is not None:
                wrong = (tup[0] + 1) % (codec.alphabet + 1)
            r = evaluate(N, T, env={"n": n, "a": wrong, "i": 1},
                         hints=hints, budget=budget)
            assert r.is_false, codec.name
            r = evaluate(N, L, env={"n": n, "k": len(tup) + 1},
                         hints=hints, budget=budget)
            assert r.is_false, codec.name

    def test_position_beyond_every_branch_is_false_fast(self):
        codec = get_codec("cantor")
        T = codec.component_formula(10_000)
        r = evaluate(N, T, env={"n": 9_999, "a": 3, "i": 8})
        assert r.is_false

    def test_definite_without_hints(self):
        """Hints only accelerate: bare scans reach the same verdicts."""
        codec = get_codec("cantor")
        T = codec.component_formula(WINDOW_SMALL)
        n = codec.encode((4, 9))
        assert evaluate(N, T, env={"n": n, "a": 9, "i": 2}).is_true
        assert evaluate(N, T, env={"n": n, "a": 5, "i": 2}).is_false

    def test_wrong_hints_cannot_corrupt(self):
        """Poisoned providers change nothing: candidates are verified."""
        codec = get_codec("cantor")
        T = codec.component_formula(WINDOW_SMALL)
        poisoned = {kind: (lambda structure, env, roles: iter((0, 3)))
                    for kind in codec.hints()}
        for n in range(25):
            tup = codec.decode(n)
            for i in range(1, 4):
                for a in (0, 2):
                    want = i <= len(tup) and tup[i - 1] == a
                    got = evaluate(N, T, env={"n": n, "a": a, "i": i},
                                   hints=poisoned)
                    assert got == from_bool(want), (n, a, i)

    def test_component_example(self):
        codec = get_codec("cantor")
        T = codec.component_formula(10_000)
        n = codec.encode((4, 9))
        r = evaluate(N, T, env={"n": n, "a": 9, "i": 2}, hints=codec.hints())
        assert r.is_true


# ---------------------------------------------------------------------------
# the coding laws


class BrokenCodec(CantorCodec):
    """Deliberately non-injective decoding (collapses adjacent codes)."""

    name = "broken"

    def decode(self, n):
        return super().decode(n // 2)

    def encode(self, tup):
        return super().encode(tup) * 2


class TestAxiomChecker:
    @pytest.mark.parametrize("codec", CODECS, ids=_codec_ids())
    def test_all_laws_pass_on_window(self, codec):
        report = check_axioms(codec, 1000, 3)
        assert report.passed
        assert [c.axiom for c in report.checks] == [
            "length-defined", "no-components-beyond-length",
            "component-functional", "decode-injective", "every-tuple-coded"]
        assert all(c.passed for c in report.checks)
        assert report.checks[0].instances == 1001

    def test_broken_codec_reports_collision(self):
        report = check_axioms(BrokenCodec(), 100, 2)
        assert not report.passed
        by_name = {c.axiom: c for c in report.checks}
        bad = by_name["decode-injective"]
        assert not bad.passed
        m, n, tup = bad.counterexamples[0]
        assert m != n
        assert BrokenCodec().decode(m) == BrokenCodec().decode(n) == tuple(tup)
        # the round trip still works, so surjectivity is unaffected
        assert by_name["every-tuple-coded"].passed

    def test_degenerate_window_trivially_passes(self):
        report = check_axioms(get_codec("cantor"), 0, 1)
        assert report.passed
        by_name = {c.axiom: c for c in report.checks}
        assert by_name["length-defined"].instances == 1
        assert by_name["every-tuple-coded"].instances == 2

    def test_surjectivity_note_admits_finiteness(self):
        report = check_axioms(get_codec("cantor"), 50, 2)
        note = {c.axiom: c for c in report.checks}["every-tuple-coded"].note
        assert "lengths <= 2" in note

    def test_report_serializes(self):
        data = check_axioms(get_codec("swap"), 100, 2).to_json()
        assert data["codec"] == "swap"
        assert data["passed"] is True
        assert len(data["checks"]) == 5

    def test_rejects_negative_window(self):
        with pytest.raises(ValueError):
            check_axioms(get_codec("cantor"), -1, 2)


# ---------------------------------------------------------------------------
# two codecs side by side


class TestTranslation:
    def test_bijection_on_window(self):
        report = check_translation(get_codec("cantor"), get_codec("swap"),
                                   1000)
        assert report.passed

    def test_translation_moves_codes(self):
        cantor, swap = get_codec("cantor"), get_codec("swap")
        assert cantor.decode(3) == (1,)
        assert swap.encode(cantor.decode(3)) == 2
        assert swap.decode(2) == (1,)

    def test_bounded_alphabet_rejected(self):
        with pytest.raises(ValueError):
            check_translation(get_codec("cantor"), get_codec("digits", 9),
                              100)

    def test_same_tuple_formula(self):
        cantor, swap = get_codec("cantor"), get_codec("swap")
        window = 300
        phi = same_tuple_formula(cantor, swap, window)
        hints = {**cantor.hints(), **swap.hints(), **entry_hints(cantor)}
        budget = Budget(candidates=500_000, nodes=100_000_000)
        rng = random.Random(5)
        for _ in range(6):
            n = rng.randrange(window + 1)
            tup = cantor.decode(n)
            m = swap.encode(tup)
            if m > window:
                continue
            r = evaluate(N, phi, env={"n": n, "m": m}, hints=hints)
            assert r.is_true, (n, m)
        n = cantor.encode((2, 5))
        r = evaluate(N, phi, env={"n": n, "m": swap.encode((2, 6))},
                     hints=hints, budget=budget)
        assert r.is_false
        r = evaluate(N, phi, env={"n": n, "m": swap.encode((2, 5, 1))},
                     hints=hints, budget=budget)
        assert r.is_false


# ---------------------------------------------------------------------------
# list superstructures


class TestListStructure:
    def test_registry_builds_list_structures(self):
        ln = get_structure("List(N)")
        assert ln.sig.sorts == ("Num", "List")
        assert ln.base_sort == "Num"
        assert ln.codec.name == "cantor"
        lq = get_structure("List(Q)")
        assert lq.sig.sorts == ("Elem", "List", "Num")
        assert lq.codec is None

    def test_len_and_component(self):
        ln = get_structure("List(N)")
        f = parse("len(s) = 3", ln.sig)
        assert evaluate(ln, f, env={"s": (5, 0, 2)}).is_true
        f = parse("t(s, 9, 2)", ln.sig)
        assert evaluate(ln, f, env={"s": (4, 9)}).is_true
        assert evaluate(ln, f, env={"s": (9, 4)}).is_false
        assert evaluate(ln, f, env={"s": ()}).is_false

    def test_tuple_literals_parse(self):
        ln = get_structure("List(N)")
        f = parse("t([1,2,3], 2, 2)", ln.sig)
        assert evaluate(ln, f).is_true
        f = parse("len([]) = 0", ln.sig)
        assert evaluate(ln, f).is_true
        lq = get_structure("List(Q)")
        f = parse("t([1/2, 3], 1/2, 1)", lq.sig)
        assert evaluate(lq, f).is_true
        g5 = make_list_structure("GF(5)", max_len=3)
        f = parse("t([7], 2, 1)", g5.sig)  # 7 embeds as 2 mod 5
        assert evaluate(g5, f).is_true

    def test_truncated_finite_list_sort(self):
        g5 = make_list_structure("GF(5)", max_len=3)
        assert g5.sort_size("List") == 1 + 5 + 25 + 125
        elems = list(g5.enum_sort("List"))
        assert len(elems) == 156
        assert len(set(elems)) == 156
        assert all(len(s) <= 3 for s in elems)
        assert g5.contains("List", (1, 2, 3))
        assert not g5.contains("List", (1, 2, 3, 4))
        assert not g5.contains("List", (9,))

    def test_finite_list_quantifiers_are_exhaustive(self):
        g5 = make_list_structure("GF(5)", max_len=3)
        f = parse("forall s:List (len(s) <= 3)", g5.sig)
        assert evaluate(g5, f).is_true
        f = parse("exists s:List (len(s) = 3 & t(s, 4, 1))", g5.sig)
        assert evaluate(g5, f).is_true
        f = parse("exists s:List (len(s) = 4)", g5.sig)
        assert evaluate(g5, f).is_false

    def test_infinite_list_quantifier_behavior(self):
        ln = get_structure("List(N)")
        # refutable by enumeration: a longer list turns up within budget
        f = parse("forall s:List (len(s) <= 3)", ln.sig)
        assert evaluate(ln, f).is_false
        # true but not certifiable: the enumerator never exhausts the sort
        f = parse("forall s:List (0 <= len(s))", ln.sig)
        r = evaluate(ln, f)
        assert r.is_unknown and r.reason == "budget-exhausted"

    def test_canonical_keys(self):
        ln = get_structure("List(N)")
        keys = {ln.canonical_key("List", s)
                for s in [(), (1,), (2,), (1, 2), (2, 1), (1, 1, 1)]}
        assert len(keys) == 6
        lq = get_structure("List(Q)")
        assert (lq.canonical_key("List", (1,))
                != lq.canonical_key("List", (2,)))

    def test_rejects_multi_sorted_base(self):
        with pytest.raises(ValueError):
            make_list_structure(get_structure("List(N)"))

    def test_max_len_validation(self):
        with pytest.raises(ValueError):
            make_list_structure("N", max_len=-1)


# ---------------------------------------------------------------------------
# native operations


class TestListNatives:
    def test_concat(self):
        assert concat((), (5, 1)) == (5, 1)
        assert concat((1, 2), (3,)) == (1, 2, 3)
        with pytest.raises(ValueError):
            concat((1,), [2])

    def test_member(self):
        assert member(3, (1, 3, 5))
        assert not member(2, ())
        assert not member(4, (1, 3, 5))

    def test_permutation_tests(self):
        assert is_permutation((2, 1), 2)
        assert not is_permutation((1, 1), 2)
        assert permutation_covers((2, 1), 2)
        assert permutation_distinct((2, 1), 2)
        assert not permutation_covers((1, 1), 2)
        assert not permutation_distinct((1, 1), 2)

    def test_relaxed_tests_agree_exhaustively(self):
        for n in range(5):
            for sigma in itertools.product(range(1, n + 1), repeat=n):
                full = is_permutation(sigma, n)
                assert permutation_covers(sigma, n) == full
                assert permutation_distinct(sigma, n) == full

    def test_apply_permutation(self):
        assert apply_permutation((2, 1), ("a", "b")) == ("b", "a")
        assert apply_permutation((3, 1, 2), (10, 20, 30)) == (30, 10, 20)
        with pytest.raises(ValueError):
            apply_permutation((1, 1), (10, 20))

    def test_is_permutation_of(self):
        assert is_permutation_of((4, 7, 4), (7, 4, 4))
        assert not is_permutation_of((4, 7), (7, 7))
        assert not is_permutation_of((4,), (4, 4))

    def test_folds(self):
        assert fold_left(lambda a, b: a - b, (10, 3, 2)) == 5
        assert fold_left(lambda a, b: a + b, (), empty=0) == 0
        with pytest.raises(ValueError):
            fold_left(lambda a, b: a + b, ())
        assert fold_sum(()) == 0
        assert fold_product((3, 3, 3)) == 27
        assert count_occurrences((5, 2, 5, 5), 5) == 3


# ---------------------------------------------------------------------------
# defining formulas over list structures


LN = get_structure("List(N)")
HN = standard_hints(LN)

# for "this wrong value must not certify" probes over the infinite list
# sort: soundness is budget-independent, so a tiny budget just makes the
# indefinite verdict arrive quickly
TINY = Budget(candidates=300, nodes=1_000_000)


def _random_list(rng, max_entry=50, max_len=8, min_len=0):
    return tuple(rng.randrange(max_entry + 1)
                 for _ in range(rng.randrange(min_len, max_len + 1)))


class TestMemberFormula:
    def test_examples(self):
        f = member_formula(LN)
        assert evaluate(LN, f, env={"a": 3, "s": (1, 3, 5)}, hints=HN).is_true
        assert evaluate(LN, f, env={"a": 2, "s": ()}, hints=HN).is_false

    def test_differential_300(self):
        f = member_formula(LN)
        rng = random.Random(23)
        for _ in range(300):
            s = _random_list(rng)
            a = rng.randrange(51)
            got = evaluate(LN, f, env={"a": a, "s": s}, hints=HN)
            assert got == from_bool(member(a, s)), (a, s)


class TestConcatFormula:
    def test_examples(self):
        f = concat_formula(LN, entry_bound=60)
        assert evaluate(LN, f, env={"x": (), "y": (5, 1), "z": (5, 1)},
                        hints=HN).is_true
        assert evaluate(LN, f, env={"x": (1, 2), "y": (3,), "z": (1, 2, 3)},
                        hints=HN).is_true
        assert evaluate(LN, f, env={"x": (1, 2), "y": (3,), "z": (1, 2, 4)},
                        hints=HN).is_false

    def test_differential_300(self):
        f = concat_formula(LN, entry_bound=60)
        rng = random.Random(31)
        for trial in range(300):
            x = _random_list(rng)
            y = _random_list(rng)
            if trial % 2 == 0:
                z = concat(x, y)
            else:
                z = list(concat(x, y))
                if not z or rng.random() < 0.3:
                    z.append(rng.randrange(51))  # wrong length
                else:
                    pos = rng.randrange(len(z))
                    z[pos] = (z[pos] + 1 + rng.randrange(50)) % 51
                z = tuple(z)
            want = concat(x, y) == z
            got = evaluate(LN, f, env={"x": x, "y": y, "z": z}, hints=HN)
            assert got == from_bool(want), (x, y, z)

    def test_entry_bound_requires_naturals(self):
        lq = get_structure("List(Q)")
        with pytest.raises(ValueError):
            concat_formula(lq, entry_bound=10)

    def test_over_rationals(self):
        from fractions import Fraction
        lq = get_structure("List(Q)")
        f = concat_formula(lq)
        env = {"x": (Fraction(1, 2),), "y": (Fraction(3),),
               "z": (Fraction(1, 2), Fraction(3))}
        assert evaluate(lq, f, env=env, hints=standard_hints(lq)).is_true


class TestPermutationFormulas:
    def test_examples(self):
        f = permutation_formula(LN)
        assert evaluate(LN, f, env={"s": (2, 1), "n": 2}, hints=HN).is_true
        assert evaluate(LN, f, env={"s": (1, 1), "n": 2}, hints=HN).is_false

    def test_three_variants_agree_exhaustive(self):
        formulas = [permutation_formula(LN), permutation_covers_formula(LN),
                    permutation_distinct_formula(LN)]
        for n in range(5):
            for sigma in itertools.product(range(1, n + 1), repeat=n):
                want = from_bool(is_permutation(sigma, n))
                for f in formulas:
                    got = evaluate(LN, f, env={"s": sigma, "n": n}, hints=HN)
                    assert got == want, (sigma, n)

    def test_variants_agree_sampled_n5(self):
        formulas = [permutation_formula(LN), permutation_covers_formula(LN),
                    permutation_distinct_formula(LN)]
        rng = random.Random(7)
        for _ in range(120):
            sigma = tuple(rng.randrange(1, 6) for _ in range(5))
            want = from_bool(is_permutation(sigma, 5))
            for f in formulas:
                assert evaluate(LN, f, env={"s": sigma, "n": 5},
                                hints=HN) == want, sigma

    def test_wrong_length_rejected(self):
        f = permutation_formula(LN)
        assert evaluate(LN, f, env={"s": (2, 1), "n": 3}, hints=HN).is_false

    def test_needs_number_entries(self):
        lq = get_structure("List(Q)")
        with pytest.raises(ValueError):
            permutation_formula(lq)


class TestFoldFormulas:
    def test_sum_of_ones_is_length(self):
        f = fold_formula(LN, "+")
        for n in range(1, 31):
            s = (1,) * n
            assert evaluate(LN, f, env={"s": s, "y": n}, hints=HN).is_true, n
            r = evaluate(LN, f, env={"s": s, "y": n + 1}, hints=HN,
                         budget=TINY)
            assert not r.is_true, n

    def test_constant_product_is_power(self):
        f = fold_formula(LN, "*")
        for a in range(1, 11):
            for k in range(1, 11):
                s = (a,) * k
                r = evaluate(LN, f, env={"s": s, "y": a ** k}, hints=HN)
                assert r.is_true, (a, k)

    def test_sum_differential_500(self):
        f = fold_formula(LN, "+")
        rng = random.Random(41)
        for _ in range(500):
            s = _random_list(rng, max_entry=30, min_len=1)
            y = fold_sum(s)
            assert evaluate(LN, f, env={"s": s, "y": y}, hints=HN).is_true, s
        # refutations over the infinite list sort are honestly indefinite
        for _ in range(20):
            s = _random_list(rng, max_entry=30, min_len=1)
            r = evaluate(LN, f, env={"s": s, "y": fold_sum(s) + 1},
                         hints=HN, budget=TINY)
            assert not r.is_true, s

    def test_definite_refutation_on_finite_lists(self):
        g5 = make_list_structure("GF(5)", max_len=3)
        hints = standard_hints(g5)
        f = fold_formula(g5, "+")
        # fold over a finite list sort: scans exhaust, wrong sums refute
        for s, y in [((1, 2), 3), ((4, 4), 3), ((2, 2, 2), 1)]:
            assert evaluate(g5, f, env={"s": s, "y": y}, hints=hints).is_true
            wrong = (y + 1) % 5
            r = evaluate(g5, f, env={"s": s, "y": wrong}, hints=hints)
            assert r.is_false, (s, y)

    def test_empty_list_has_no_fold(self):
        f = fold_formula(LN, "+")
        g5 = make_list_structure("GF(5)", max_len=3)
        r = evaluate(g5, fold_formula(g5, "+"), env={"s": (), "y": 0},
                     hints=standard_hints(g5))
        assert r.is_false
        assert not evaluate(LN, f, env={"s": (), "y": 0}, hints=HN,
                            budget=TINY).is_true

    def test_permutation_invariance_200(self):
        f = fold_formula(LN, "+")
        rng = random.Random(43)
        for _ in range(200):
            s = _random_list(rng, max_entry=30, min_len=1, max_len=6)
            shuffled = list(s)
            rng.shuffle(shuffled)
            y = fold_sum(s)
            assert evaluate(LN, f, env={"s": s, "y": y}, hints=HN).is_true
            assert evaluate(LN, f, env={"s": tuple(shuffled), "y": y},
                            hints=HN).is_true

    def test_double_sum_exchange_100(self):
        f = fold_formula(LN, "+")
        rng = random.Random(47)
        for _ in range(100):
            rows = rng.randrange(1, 5)
            cols = rng.randrange(1, 5)
            grid = [[rng.randrange(20) for _ in range(cols)]
                    for _ in range(rows)]
            row_sums = tuple(fold_sum(tuple(r)) for r in grid)
            col_sums = tuple(fold_sum(tuple(r[j] for r in grid))
                             for j in range(cols))
            # certify each aggregated sum through the formula
            for s in [tuple(grid[0]), row_sums, col_sums]:
                assert evaluate(LN, f, env={"s": s, "y": fold_sum(s)},
                                hints=HN).is_true
            assert fold_sum(row_sums) == fold_sum(col_sums)

    def test_unknown_operation_rejected(self):
        with pytest.raises(ValueError):
            fold_formula(LN, "gcd")


class TestCountFormula:
    def test_examples(self):
        f = count_formula(LN)
        env = {"s": (5, 2, 5, 5), "a": 5, "y": 3}
        assert evaluate(LN, f, env=env, hints=HN).is_true
        assert evaluate(LN, f, env={"s": (), "a": 5, "y": 0},
                        hints=HN).is_true
        r = evaluate(LN, f, env={"s": (5, 2), "a": 5, "y": 2}, hints=HN,
                     budget=TINY)
        assert not r.is_true

    def test_differential_100(self):
        f = count_formula(LN)
        rng = random.Random(53)
        for _ in range(100):
            s = _random_list(rng, max_entry=6, max_len=6)
            a = rng.randrange(7)
            y = count_occurrences(s, a)
            assert evaluate(LN, f, env={"s": s, "a": a, "y": y},
                            hints=HN).is_true, (s, a)


class TestPermutationOfFormula:
    def test_positive_100(self):
        f = permutation_of_formula(LN)
        rng = random.Random(59)
        for _ in range(100):
            a = _random_list(rng, max_entry=10, max_len=6)
            b = list(a)
            rng.shuffle(b)
            r = evaluate(LN, f, env={"a": a, "b": tuple(b)}, hints=HN)
            assert r.is_true, (a, b)

    def test_negative_50(self):
        f = permutation_of_formula(LN)
        rng = random.Random(61)
        done = 0
        while done < 50:
            a = _random_list(rng, max_entry=10, max_len=6)
            b = list(a)
            rng.shuffle(b)
            if b:
                b[rng.randrange(len(b))] += 1 + rng.randrange(5)
            else:
                b = [1]
            if is_permutation_of(a, tuple(b)):
                continue
            r = evaluate(LN, f, env={"a": a, "b": tuple(b)}, hints=HN,
                         budget=TINY)
            assert not r.is_true, (a, b)
            done += 1

    def test_length_mismatch_is_definitely_false(self):
        f = permutation_of_formula(LN)
        r = evaluate(LN, f, env={"a": (1, 2), "b": (1, 2, 3)}, hints=HN)
        assert r.is_false


class TestExtensionality:
    def test_exhaustive_small_naturals(self):
        f = extensionality_body(LN, entry_bound=5)
        lists = [tuple(t) for k in range(3)
                 for t in itertools.product(range(3), repeat=k)]
        for a in lists:
            for b in lists:
                r = evaluate(LN, f, env={"a": a, "b": b}, hints=HN)
                assert r.is_true, (a, b)

    def test_exhaustive_finite_base(self):
        g5 = make_list_structure("GF(5)", max_len=2)
        f = extensionality_body(g5)
        hints = standard_hints(g5)
        elems = list(g5.enum_sort("List"))
        assert len(elems) == 31
        for a in elems:
            for b in elems:
                assert evaluate(g5, f, env={"a": a, "b": b},
                                hints=hints).is_true, (a, b)


class TestSuperstructureLaws:
    def test_component_is_functional_on_finite_lists(self):
        g5 = make_list_structure("GF(5)", max_len=3)
        f = parse("forall s:List (forall i <= len(s) "
                  "(1 <= i -> exists! a:Elem (t(s, a, i))))", g5.sig)
        assert evaluate(g5, f).is_true

    def test_length_bounds_components(self):
        g5 = make_list_structure("GF(5)", max_len=3)
        f = parse("forall s:List (forall a:Elem (forall i <= 5 "
                  "(t(s, a, i) -> (1 <= i & i <= len(s)))))", g5.sig)
        assert evaluate(g5, f).is_true

    def test_codec_component_matches_list_component(self):
        """The arithmetic component formula tracks the structural one."""
        codec = LN.codec
        T = codec.component_formula(WINDOW_SMALL)
        hints = codec.hints()
        for n in range(60):
            s = codec.decode(n)
            for i in range(1, len(s) + 1):
                arith = evaluate(N, T, env={"n": n, "a": s[i - 1], "i": i},
                                 hints=hints)
                structural = evaluate(
                    LN, parse("t(s, a, i)", LN.sig),
                    env={"s": s, "a": s[i - 1], "i": i})
                assert arith.is_true and structural.is_true, (n, i)
