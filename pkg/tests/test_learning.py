import math
from fractions import Fraction

import numpy as np
import pytest

from fsjunta import (
    ExOracle,
    FsOracle,
    Hypothesis,
    QueryCounter,
    TruthTable,
    find_influential,
    hypothesis_error,
    influence_direct,
    learn_junta,
    make_constant,
    make_junta,
    make_parity,
    make_rng,
    random_junta_spec,
)
from fsjunta.learning import (
    STAGE_ONE_OVERFLOW,
    STAGE_TWO_TIMEOUT,
    SUCCESS,
    UNSEEN,
    default_example_cap,
    stage_one_draws,
)

AND2 = TruthTable(2, np.array([1, 1, 1, -1], dtype=np.int8))


class ScriptedEx:
    """Replays a fixed example sequence; stands in for ExOracle in tests."""

    def __init__(self, examples):
        self.examples = list(examples)
        self.cursor = 0
        self.calls = 0

    def draw(self):
        example = self.examples[self.cursor]
        self.cursor += 1
        self.calls += 1
        return example


class TestFindInfluential:
    def test_constant_target_yields_nothing(self):
        fs = FsOracle.from_table(make_constant(6, 1), make_rng(0, "c"))
        assert find_influential(fs, 3, 0.1) == ()

    def test_two_variable_parity_found_exactly(self):
        fs = FsOracle.for_parity(8, 0b11, make_rng(0, "p"))
        assert find_influential(fs, 2, 0.1) == (0, 1)

    def test_draw_count_formula(self):
        counter = QueryCounter()
        fs = FsOracle.for_parity(8, 0b1, make_rng(0, "q"), counter=counter)
        find_influential(fs, 6, 0.25)
        assert counter.fs_calls == math.ceil((10 * 6 / 0.25) * math.log(60))

    def test_heavy_variables_recovered_whp(self):
        rng = make_rng(1, "heavy")
        eps = 0.1
        hits = 0
        for trial in range(200):
            spec = random_junta_spec(20, 6, rng)
            f = make_junta(spec)
            fs = FsOracle.from_junta(spec, rng)
            found = set(find_influential(fs, 6, eps))
            heavy = {i for i in spec.relevant
                     if influence_direct(f, i) >= Fraction(1, 600)}
            hits += heavy <= found
        assert hits >= 180

    def test_every_returned_variable_is_relevant(self):
        rng = make_rng(2, "sound")
        for trial in range(30):
            spec = random_junta_spec(16, 5, rng)
            f = make_junta(spec)
            fs = FsOracle.from_junta(spec, rng)
            for v in find_influential(fs, 5, 0.2):
                assert influence_direct(f, v) > 0

    def test_parameter_validation(self):
        fs = FsOracle.for_parity(4, 0b1, make_rng(0, "v"))
        with pytest.raises(ValueError):
            find_influential(fs, 0, 0.1)
        with pytest.raises(ValueError):
            find_influential(fs, 2, 1.5)


class TestLearnJunta:
    def _oracles(self, table, fs, seed):
        counter = QueryCounter()
        fs_oracle = fs(counter)
        ex = ExOracle(table, make_rng(seed, "ex"), counter=counter)
        return fs_oracle, ex, counter

    def test_two_variable_parity_learned_exactly(self):
        table = make_parity(10, 0b11)
        counter = QueryCounter()
        fs = FsOracle.for_parity(10, 0b11, make_rng(0, "fs"), counter=counter)
        ex = ExOracle(table, make_rng(0, "ex"), counter=counter)
        report = learn_junta(fs, ex, 2, 0.1)
        assert report.status == SUCCESS
        assert report.hypothesis.vars == (0, 1)
        assert not np.any(report.hypothesis.entries == UNSEEN)
        assert hypothesis_error(table, report.hypothesis) == 0
        assert report.fs_calls == stage_one_draws(2, 0.1)
        assert report.ex_calls == counter.ex_calls

    def test_constant_true_target(self):
        table = make_constant(8, -1)
        counter = QueryCounter()
        fs = FsOracle.from_table(table, make_rng(1, "fs"), counter=counter)
        ex = ExOracle(table, make_rng(1, "ex"), counter=counter)
        report = learn_junta(fs, ex, 3, 0.1)
        assert report.status == SUCCESS
        assert report.hypothesis.vars == ()
        assert report.ex_calls == 1
        assert np.array_equal(report.hypothesis.values_on(8),
                              np.full(256, -1, dtype=np.int8))
        assert hypothesis_error(table, report.hypothesis) == 0

    def test_random_juntas_end_to_end(self):
        rng = make_rng(2, "e2e")
        good = 0
        for trial in range(15):
            spec = random_junta_spec(16, 6, rng)
            table = make_junta(spec)
            counter = QueryCounter()
            fs = FsOracle.from_junta(spec, rng, counter=counter)
            ex = ExOracle(table, rng, counter=counter)
            report = learn_junta(fs, ex, 6, 0.1)
            assert report.fs_calls == stage_one_draws(6, 0.1)
            assert report.ex_calls <= default_example_cap(6, 0.1)
            if report.status == SUCCESS:
                assert report.encountered_fraction >= 1 - Fraction(1, 30)
                good += hypothesis_error(table, report.hypothesis) <= Fraction(1, 10)
        assert good >= 10

    def test_stage_one_overflow_when_the_promise_is_false(self):
        # a 3-variable parity exposes 3 variables with the first draw
        table = make_parity(6, 0b111)
        counter = QueryCounter()
        fs = FsOracle.for_parity(6, 0b111, make_rng(3, "fs"), counter=counter)
        ex = ExOracle(table, make_rng(3, "ex"), counter=counter)
        report = learn_junta(fs, ex, 2, 0.1)
        assert report.status == STAGE_ONE_OVERFLOW
        assert report.hypothesis is None
        assert report.ex_calls == 0
        assert report.encountered_fraction == 0

    def test_stage_two_timeout_is_reported(self):
        table = make_parity(8, 0b1100)
        counter = QueryCounter()
        fs = FsOracle.for_parity(8, 0b1100, make_rng(4, "fs"), counter=counter)
        ex = ExOracle(table, make_rng(4, "ex"), counter=counter)
        report = learn_junta(fs, ex, 2, 0.1, max_ex_draws=2)
        assert report.status == STAGE_TWO_TIMEOUT
        assert report.ex_calls == 2
        assert report.encountered_fraction < 1 - Fraction(1, 30)
        # the partial hypothesis still evaluates (unseen cells read -1)
        assert hypothesis_error(table, report.hypothesis) <= 1

    def test_first_seen_wins_and_later_duplicates_never_matter(self):
        table = make_parity(6, 0b11)
        fs = FsOracle.for_parity(6, 0b11, make_rng(5, "fs"))
        recording = ExOracle(table, make_rng(5, "ex"))
        base = learn_junta(fs, recording, 2, 0.1)

        # replay the identical stream with duplicates injected after the
        # first occurrence of each projected assignment
        replay_stream = []
        seen_cells = set()
        rng = make_rng(5, "ex")
        for _ in range(base.ex_calls):
            x = int(rng.integers(0, 64))
            example = (x, int(table.values[x]))
            replay_stream.append(example)
            cell = x & 0b11
            if cell in seen_cells:
                continue
            seen_cells.add(cell)
            replay_stream.append(example)  # duplicate of a seen cell
        from fsjunta.oracles import LabeledExample
        scripted = ScriptedEx([LabeledExample(*e) for e in replay_stream])
        fs2 = FsOracle.for_parity(6, 0b11, make_rng(5, "fs"))
        again = learn_junta(fs2, scripted, 2, 0.1)
        assert np.array_equal(again.hypothesis.entries, base.hypothesis.entries)
        assert again.hypothesis.vars == base.hypothesis.vars

    def test_error_bounded_by_unseen_mass_when_all_variables_found(self):
        # once every relevant variable is recovered, seen cells are exact,
        # so the error cannot exceed the unseen fraction
        rng = make_rng(7, "bound")
        checked = 0
        for trial in range(20):
            spec = random_junta_spec(14, 5, rng)
            table = make_junta(spec)
            counter = QueryCounter()
            fs = FsOracle.from_junta(spec, rng, counter=counter)
            ex = ExOracle(table, rng, counter=counter)
            report = learn_junta(fs, ex, 5, 0.1, max_ex_draws=40)
            if report.hypothesis is None:
                continue
            if set(report.hypothesis.vars) == set(spec.relevant):
                checked += 1
                assert (hypothesis_error(table, report.hypothesis)
                        <= 1 - report.encountered_fraction)
        assert checked >= 10

    def test_coverage_is_monotone_in_the_example_budget(self):
        table = make_junta(random_junta_spec(12, 5, make_rng(6, "t")))
        fractions = []
        for cap in (1, 4, 16, 64, 256):
            fs = FsOracle.from_table(table, make_rng(6, "fs"))
            ex = ExOracle(table, make_rng(6, "ex"))
            report = learn_junta(fs, ex, 5, 0.1, max_ex_draws=cap)
            fractions.append(report.encountered_fraction)
        assert fractions == sorted(fractions)


class TestHypothesis:
    def test_exact_reproduction_has_zero_error(self):
        entries = np.array([1, 1, 1, -1], dtype=np.int8)
        h = Hypothesis((0, 1), entries)
        assert hypothesis_error(AND2, h) == 0

    def test_empty_unseen_hypothesis_against_constant_false(self):
        h = Hypothesis((), np.array([UNSEEN], dtype=np.int8))
        assert hypothesis_error(make_constant(3, 1), h) == 1

    def test_single_variable_all_true_against_and2(self):
        h = Hypothesis((0,), np.array([1, 1], dtype=np.int8))
        assert hypothesis_error(AND2, h) == Fraction(1, 4)

    def test_eval_index_uses_the_default_on_unseen(self):
        h = Hypothesis((1,), np.array([UNSEEN, 1], dtype=np.int8))
        assert h.eval_index(0b00) == -1
        assert h.eval_index(0b10) == 1

    def test_text_round_trip(self):
        h = Hypothesis((0, 3), np.array([1, UNSEEN, -1, 1], dtype=np.int8))
        assert h.to_text() == "A=0,3\n+?-+\n"
        again = Hypothesis.from_text(h.to_text())
        assert again.vars == (0, 3)
        assert np.array_equal(again.entries, h.entries)

    def test_empty_variable_list_serialization(self):
        h = Hypothesis((), np.array([-1], dtype=np.int8))
        assert Hypothesis.from_text(h.to_text()).vars == ()

    def test_validation(self):
        with pytest.raises(ValueError):
            Hypothesis((1, 0), np.array([1, 1, 1, 1], dtype=np.int8))
        with pytest.raises(ValueError):
            Hypothesis((0,), np.array([1, 2], dtype=np.int8))
        with pytest.raises(ValueError):
            Hypothesis((0,), np.array([1], dtype=np.int8))
        with pytest.raises(ValueError):
            hypothesis_error(AND2, Hypothesis((5,), np.array([1, 1], dtype=np.int8)))
