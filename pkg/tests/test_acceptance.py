"""End-to-end properties on generated benchmarks with known structure."""

import math
import time
from collections import Counter

import numpy as np
import pytest

from app.corpus_functions import tokenize
from app.eval_functions import average_precision, fitting_rate, position_skewness, precision_at_k, r_precision
from app.expansion_functions import candidate_terms, expanded_search
from app.index_functions import build_index, load_index, postings, save_index
from app.objective_functions import objective_spectral, parse_objective
from app.retrieval_functions import fvs_rerank, tfidf_search
from app.spectral_functions import compute_spectral, cosine_sim, dot, sample_distribution
from app.synth_functions import UNIFORM_TERMS, generate, preset
from models import QrelSet, Query, RankedEntry, RankedList, SynthSpec, TermPositions


def trapezoid(ys, xs):
    return float(np.sum((ys[1:] + ys[:-1]) * np.diff(xs)) / 2.0)


def benchmark(name, seed, tokenizer, order=3):
    corpus = generate(preset(name, seed))
    streams = [tokenize(d, tokenizer) for d in corpus.documents]
    index = build_index(streams, order, tokenizer)
    documents = {d.docno: d for d in corpus.documents}
    return corpus, index, documents


def best_of(runs, action):
    timings = []
    for _ in range(runs):
        start = time.perf_counter()
        action()
        timings.append(time.perf_counter() - start)
    return min(timings)


class TestSpectralOracle:

    def test_dot_matches_quadrature(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            length = int(rng.integers(10, 501))
            order = int(rng.integers(1, 17))
            pair = []
            for _ in range(2):
                size = int(rng.integers(1, length // 5 + 1))
                chosen = np.sort(rng.choice(np.arange(1, length + 1), size=size, replace=False))
                pair.append(compute_spectral(TermPositions.of(chosen.tolist(), length), order))
            xs, f = sample_distribution(pair[0], 10001)
            _, g = sample_distribution(pair[1], 10001)
            expected = trapezoid(f * g, xs)
            assert dot(*pair) == pytest.approx(expected, rel=1e-4, abs=1e-9 * pair[0].norm * pair[1].norm)

    def test_a0_encodes_tf_on_every_posting(self, tokenizer):
        corpus = generate(preset('plain', 0))
        streams = [tokenize(d, tokenizer) for d in corpus.documents]
        index = build_index(streams, 3, tokenizer)
        counts = [Counter(t.term for t in s.tokens if t.indexable) for s in streams]
        checked = 0
        for term in index.vocabulary:
            for posting in postings(index, term):
                length = index.doc(posting.doc).length
                tf = counts[posting.doc][term]
                assert abs(posting.coeffs.a0 - tf / math.sqrt(length)) <= 1e-12
                assert posting.tf == tf
                checked += 1
        assert checked == sum(len(c) for c in counts)

    @pytest.mark.parametrize("length,order", [(10, 1), (137, 3), (500, 16)])
    def test_term_everywhere_is_constant(self, length, order):
        sv = compute_spectral(TermPositions.of(range(1, length + 1), length), order)
        expected = np.zeros(2 * order + 1)
        expected[0] = math.sqrt(length)
        np.testing.assert_allclose(sv.coeffs, expected, rtol=0, atol=1e-9)
        whole = objective_spectral(parse_objective("1|1"), length, order)
        assert cosine_sim(sv, whole) == pytest.approx(1.0, abs=1e-9)


class TestObjectiveReranking:

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_region_order_has_no_inversions(self, tokenizer, seed):
        corpus, index, _ = benchmark('region', seed, tokenizer)
        query = Query.of('target')
        baseline = tfidf_search(index, query)
        assert len(baseline) == 200

        for objective, favoured in (("1|3", 'first-third'), ("3|3", 'last-third')):
            ranked = fvs_rerank(index, query, parse_objective(objective), baseline, top_n=200, depth=200)
            head = set(ranked.docnos()[:100])
            assert head == set(corpus.docnos_in(favoured))

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_skewness_sign_follows_objective(self, tokenizer, seed):
        _, index, documents = benchmark('skew', seed, tokenizer)
        query = Query.of('target')
        baseline = tfidf_search(index, query)
        head = fvs_rerank(index, query, parse_objective("1|3"), baseline, depth=1000)
        tail = fvs_rerank(index, query, parse_objective("3|3"), baseline, depth=1000)
        assert position_skewness(documents, query, head, tokenizer, depth=10) > 0.3
        assert position_skewness(documents, query, tail, tokenizer, depth=10) < -0.3

    def test_baseline_skewness_near_zero_for_uniform_terms(self, tokenizer):
        _, index, documents = benchmark('uniform', 0, tokenizer)
        values = []
        for term in UNIFORM_TERMS:
            query = Query.of(term)
            values.append(position_skewness(documents, query, tfidf_search(index, query), tokenizer, depth=10))
        assert abs(np.mean(values)) <= 0.2

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_fitting_rate_uplift(self, tokenizer, seed):
        first_third = parse_objective("1|3")
        _, index, documents = benchmark('skew', seed, tokenizer)
        query = Query.of('target')
        baseline = tfidf_search(index, query)
        reranked = fvs_rerank(index, query, first_third, baseline, depth=1000)
        before = fitting_rate(documents, query, baseline, first_third, tokenizer, depth=10)
        after = fitting_rate(documents, query, reranked, first_third, tokenizer, depth=10)
        assert before == pytest.approx(1 / 3, abs=0.05)
        assert after >= 0.6


class TestExpansion:

    def test_colocated_term_leads_candidates(self, tokenizer):
        query = Query.of('probe')
        in_top3 = 0
        alpha, beta = [], []
        for seed in range(20):
            _, index, _ = benchmark('colocation', seed, tokenizer)
            candidates = candidate_terms(index, query, tfidf_search(index, query), r=10, k=1000)
            in_top3 += 'alpha' in candidates.terms()[:3]
            alpha.append(candidates.score('alpha'))
            beta.append(candidates.score('beta'))
        assert in_top3 >= 19
        assert np.mean(alpha) >= 5 * np.mean(beta)

    def test_expansion_improves_precision(self, tokenizer):
        query = Query.of('osteoporosis')
        baseline, expanded = [], []
        for seed in (0, 1, 2):
            corpus, index, _ = benchmark('expansion', seed, tokenizer)
            qrels = corpus.ground_truth
            baseline.append(precision_at_k(tfidf_search(index, query), qrels, 403, 10))
            ranked = expanded_search(index, query, r=10, k=40, mode='unit')
            expanded.append(precision_at_k(ranked, qrels, 403, 10))
        assert np.mean(baseline) == pytest.approx(0.5)
        assert np.mean(expanded) >= 1.1 * np.mean(baseline)


class TestPersistence:

    def test_generated_index_round_trips_byte_identical(self, tokenizer, tmp_path):
        _, index, _ = benchmark('colocation', 0, tokenizer, order=5)
        first, second = tmp_path / 'a.fvsi', tmp_path / 'b.fvsi'
        save_index(index, first)
        loaded = load_index(first)
        save_index(loaded, second)
        assert first.read_bytes() == second.read_bytes()
        assert loaded == index

    def test_metrics_match_brute_force(self):
        rng = np.random.default_rng(42)
        pool = [f"D{i:02d}" for i in range(30)]
        for _ in range(200):
            judged = rng.choice(pool, size=int(rng.integers(1, 20)), replace=False).tolist()
            grades = rng.integers(0, 3, size=len(judged)).tolist()
            qrels = QrelSet()
            for docno, grade in zip(judged, grades):
                qrels.add(1, docno, grade)
            retrieved = rng.choice(pool, size=int(rng.integers(0, 30)), replace=False).tolist()
            ranked = RankedList(tuple(
                RankedEntry(d, float(len(retrieved) - i), float(len(retrieved) - i)) for i, d in enumerate(retrieved)
            ))
            k = int(rng.integers(1, 15))

            relevant = {d for d, g in zip(judged, grades) if g > 0}
            flags = [d in relevant for d in retrieved]
            expected_p = sum(flags[:k]) / k
            precisions = [sum(flags[:i + 1]) / (i + 1) for i, hit in enumerate(flags) if hit]
            expected_ap = sum(precisions) / len(relevant) if relevant else 0.0
            expected_rp = sum(flags[:len(relevant)]) / len(relevant) if relevant else 0.0

            assert precision_at_k(ranked, qrels, 1, k) == pytest.approx(expected_p, abs=1e-12)
            assert average_precision(ranked, qrels, 1) == pytest.approx(expected_ap, abs=1e-12)
            assert r_precision(ranked, qrels, 1) == pytest.approx(expected_rp, abs=1e-12)


@pytest.mark.timing
class TestComplexity:

    def test_coefficient_time_linear_in_order(self):
        positions = TermPositions.of(range(1, 200001, 4), 200000)
        compute_spectral(positions, 8)
        low = best_of(7, lambda: compute_spectral(positions, 8))
        high = best_of(7, lambda: compute_spectral(positions, 16))
        assert 1.5 <= high / low <= 2.5

    def test_candidate_time_linear_in_feedback_depth(self, tokenizer):
        _, index, _ = benchmark('uniform', 1, tokenizer)
        query = Query.of('apple')
        baseline = tfidf_search(index, query)
        candidate_terms(index, query, baseline, r=300, k=40)
        low = best_of(11, lambda: candidate_terms(index, query, baseline, r=120, k=40))
        high = best_of(11, lambda: candidate_terms(index, query, baseline, r=240, k=40))
        assert 1.5 <= high / low <= 2.5

    def test_index_ten_thousand_documents(self, tokenizer):
        corpus = generate(SynthSpec(seed=0, docs=10000))
        start = time.perf_counter()
        index = build_index((tokenize(d, tokenizer) for d in corpus.documents), 3, tokenizer, threads=4)
        assert time.perf_counter() - start < 60.0
        assert index.num_docs == 10000
