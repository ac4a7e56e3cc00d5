"""Retrieval metrics, positional diagnostics and CSV reports."""

import io

import pytest

from app.eval_functions import (
    average_precision,
    fitting_rate,
    position_skewness,
    precision_at_k,
    r_precision,
    report,
    sample_skewness,
    trec_measures,
    write_diagnostics_csv,
    write_metrics_csv,
)
from app.objective_functions import parse_objective
from errors import CorpusUnavailableError, InvalidArgumentError
from models import QrelSet, Query, RankedEntry, RankedList, RawDocument


def ranking(*docnos):
    n = len(docnos)
    return RankedList(tuple(RankedEntry(d, float(n - i), float(n - i)) for i, d in enumerate(docnos)))


@pytest.fixture
def qrels():
    judged = QrelSet()
    judged.add(1, 'A', 1)
    judged.add(1, 'B', 0)
    judged.add(1, 'C', 2)
    judged.add(2, 'X', 0)
    return judged


@pytest.fixture
def documents():
    return {
        'A': RawDocument('A', 'target aa bb cc dd ee'),
        'B': RawDocument('B', 'aa bb cc dd ee target'),
        'C': RawDocument('C', 'aa target bb cc dd ee'),
        'D': RawDocument('D', 'aa bb cc dd ee ff'),
    }


class TestMetrics:

    def test_precision_at_k(self, qrels):
        ranked = ranking('A', 'B', 'C', 'D')
        assert precision_at_k(ranked, qrels, 1, 2) == pytest.approx(0.5)
        assert precision_at_k(ranked, qrels, 1, 3) == pytest.approx(2 / 3)

    def test_precision_counts_missing_ranks_as_misses(self, qrels):
        assert precision_at_k(ranking('A'), qrels, 1, 10) == pytest.approx(0.1)

    def test_all_relevant(self, qrels):
        assert precision_at_k(ranking('A', 'C'), qrels, 1, 2) == 1.0
        assert average_precision(ranking('A', 'C'), qrels, 1) == 1.0

    def test_average_precision(self, qrels):
        assert average_precision(ranking('A', 'B', 'C', 'D'), qrels, 1) == pytest.approx((1 + 2 / 3) / 2)

    def test_unretrieved_relevant_lowers_ap(self, qrels):
        assert average_precision(ranking('B', 'A'), qrels, 1) == pytest.approx(0.25)

    def test_r_precision(self, qrels):
        assert r_precision(ranking('A', 'B', 'C'), qrels, 1) == pytest.approx(0.5)
        assert r_precision(ranking('C', 'A'), qrels, 1) == 1.0

    def test_topic_without_relevant_documents(self, qrels):
        assert average_precision(ranking('X'), qrels, 2) == 0.0
        assert r_precision(ranking('X'), qrels, 2) == 0.0

    def test_unknown_topic(self, qrels):
        with pytest.raises(InvalidArgumentError):
            precision_at_k(ranking('A'), qrels, 99, 10)

    def test_invalid_k(self, qrels):
        with pytest.raises(InvalidArgumentError):
            precision_at_k(ranking('A'), qrels, 1, 0)

    def test_tied_scores_keep_list_order(self, qrels):
        # equal scores; the list order decides, not the docno
        ranked = RankedList(tuple(RankedEntry(d, 1.0, 1.0) for d in ('A', 'B', 'D', 'C')))
        assert precision_at_k(ranked, qrels, 1, 1) == 1.0
        assert average_precision(ranked, qrels, 1) == pytest.approx((1 + 2 / 4) / 2)

    def test_empty_ranking(self, qrels):
        assert trec_measures(RankedList(), qrels, 1, 5) == {
            'precision_at_k': 0.0, 'average_precision': 0.0, 'r_precision': 0.0
        }

    def test_measures_of_one_topic_together(self, qrels):
        measures = trec_measures(ranking('B', 'C', 'A'), qrels, 1, 2)
        assert measures['precision_at_k'] == pytest.approx(0.5)
        assert measures['average_precision'] == pytest.approx((1 / 2 + 2 / 3) / 2)
        assert measures['r_precision'] == pytest.approx(0.5)


class TestQrelSet:

    def test_lookups_are_per_topic(self, qrels):
        assert qrels.has_topic(2)
        assert not qrels.has_topic(3)
        assert qrels.judgments(1) == {'A': 1, 'B': 0, 'C': 2}
        assert qrels.judgments(3) == {}
        assert qrels.relevant(1) == frozenset({'A', 'C'})
        assert qrels.relevant(2) == frozenset()
        assert qrels.grade(1, 'C') == 2
        assert qrels.grade(2, 'A') == 0

    def test_iterates_in_topic_then_docno_order(self):
        judged = QrelSet()
        for topic, docno in ((2, 'B'), (1, 'Z'), (2, 'A'), (1, 'M')):
            judged.add(topic, docno, 1)
        assert len(judged) == 4
        assert judged.topics() == [1, 2]
        assert [(t, d) for t, d, _ in judged] == [(1, 'M'), (1, 'Z'), (2, 'A'), (2, 'B')]

    def test_duplicate_and_negative_judgments(self, qrels):
        with pytest.raises(InvalidArgumentError):
            qrels.add(1, 'A', 0)
        with pytest.raises(InvalidArgumentError):
            qrels.add(5, 'A', -1)


class TestSkewness:

    def test_symmetric_sample(self):
        assert sample_skewness([0.1, 0.5, 0.9]) == pytest.approx(0.0, abs=1e-12)

    def test_two_point_sample(self):
        assert sample_skewness([0.1, 0.1, 0.9]) == pytest.approx(2 ** -0.5)
        assert sample_skewness([0.1, 0.9, 0.9]) == pytest.approx(-(2 ** -0.5))

    def test_undefined(self):
        assert sample_skewness([0.2, 0.7]) is None
        assert sample_skewness([0.4, 0.4, 0.4, 0.4]) is None

    def test_position_skewness_pools_occurrences(self, documents, tokenizer):
        ranked = ranking('A', 'B', 'C', 'D')
        expected = sample_skewness([0.5 / 6, 5.5 / 6, 1.5 / 6])
        got = position_skewness(documents, Query.of('target'), ranked, tokenizer, depth=10)
        assert got == pytest.approx(expected)

    def test_per_document_needs_three_occurrences(self, documents, tokenizer):
        ranked = ranking('A', 'B', 'C')
        assert position_skewness(documents, Query.of('target'), ranked, tokenizer, pooled=False) is None

    def test_depth_limits_documents(self, documents, tokenizer):
        # A and C alone give two occurrences
        ranked = ranking('A', 'C', 'B')
        assert position_skewness(documents, Query.of('target'), ranked, tokenizer, depth=2) is None

    def test_missing_text(self, documents, tokenizer):
        with pytest.raises(CorpusUnavailableError):
            position_skewness(documents, Query.of('target'), ranking('A', 'Q'), tokenizer)


class TestFittingRate:

    def test_share_inside_objective(self, documents, tokenizer):
        ranked = ranking('A', 'B', 'C', 'D')
        assert fitting_rate(documents, Query.of('target'), ranked, parse_objective("1|3"), tokenizer) \
            == pytest.approx(2 / 3)
        assert fitting_rate(documents, Query.of('target'), ranked, parse_objective("3|3"), tokenizer) \
            == pytest.approx(1 / 3)

    def test_whole_document_fits_everything(self, documents, tokenizer):
        ranked = ranking('A', 'B', 'C')
        assert fitting_rate(documents, Query.of('target'), ranked, parse_objective("1|1"), tokenizer) == 1.0

    def test_no_occurrences(self, documents, tokenizer):
        assert fitting_rate(documents, Query.of('target'), ranking('D'), parse_objective("1|3"), tokenizer) is None


class TestReport:

    def runs(self):
        return {'base': {1: ranking('A', 'B', 'C', 'D'), 3: ranking('A')}}

    def test_metrics_csv(self, qrels):
        evaluation = report(self.runs(), qrels, k=2)
        out = io.StringIO()
        write_metrics_csv(evaluation, out)
        assert out.getvalue() == (
            "run,topic,hits,k,p_at_k,average_precision,r_precision\n"
            "base,1,4,2,0.500000,0.833333,0.500000\n"
            "base,all,4,2,0.500000,0.833333,0.500000\n"
        )

    def test_unjudged_topics_skipped(self, qrels):
        evaluation = report(self.runs(), qrels, k=2)
        assert [row.topic for row in evaluation.rows] == [1]

    def test_no_shared_topic(self, qrels):
        with pytest.raises(InvalidArgumentError):
            report({'other': {7: ranking('A')}}, qrels)

    def test_diagnostics(self, qrels, documents, tokenizer):
        evaluation = report(
            self.runs(), qrels, k=2, documents=documents, queries={1: Query.of('target')},
            objectives={'base': parse_objective("1|3")}, tokenizer=tokenizer, depth=10, min_hits=0
        )
        row = evaluation.rows[0]
        assert row.diagnosed
        assert row.objective == '1|3'
        assert row.occurrences == 3
        assert row.fitting_rate == pytest.approx(2 / 3)
        assert row.skewness == pytest.approx(sample_skewness([0.5 / 6, 5.5 / 6, 1.5 / 6]))

        out = io.StringIO()
        write_diagnostics_csv(evaluation, out)
        lines = out.getvalue().splitlines()
        assert lines[0] == "run,topic,objective,occurrences,skewness,fitting_rate"
        assert lines[1].startswith("base,1,1|3,3,")
        assert lines[1].endswith(",0.666667")

    def test_hit_filter(self, qrels, documents, tokenizer):
        evaluation = report(
            self.runs(), qrels, documents=documents, queries={1: Query.of('target')},
            tokenizer=tokenizer, min_hits=4
        )
        assert not evaluation.rows[0].diagnosed
        out = io.StringIO()
        write_diagnostics_csv(evaluation, out)
        assert out.getvalue().splitlines() == ["run,topic,objective,occurrences,skewness,fitting_rate"]

    def test_undefined_values_written_as_na(self, qrels, documents, tokenizer):
        evaluation = report(
            {'base': {1: ranking('A', 'D')}}, qrels, documents=documents, queries={1: Query.of('target')},
            tokenizer=tokenizer, min_hits=0
        )
        out = io.StringIO()
        write_diagnostics_csv(evaluation, out)
        assert out.getvalue().splitlines()[1] == "base,1,NA,1,NA,NA"

    def test_runs_sorted_and_metadata(self, qrels):
        evaluation = report({'zeta': {1: ranking('A')}, 'alpha': {1: ranking('C')}}, qrels, k=5)
        assert evaluation.runs() == ['alpha', 'zeta']
        assert evaluation.metadata['k'] == '5'

    def test_report_is_byte_deterministic(self, qrels):
        outputs = []
        for _ in range(2):
            out = io.StringIO()
            write_metrics_csv(report(self.runs(), qrels, k=3), out)
            outputs.append(out.getvalue())
        assert outputs[0] == outputs[1]
