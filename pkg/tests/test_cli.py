"""End-to-end command line runs on a generated benchmark."""

import csv
import json

import pytest
from sqlalchemy.orm import sessionmaker

import database
from app.retrieval_functions import read_run
from app.store_functions import load_run, run_summary
from cli import EXIT_FORMAT, EXIT_INVALID, EXIT_MISSING, EXIT_OK, main


@pytest.fixture
def bench(tmp_path):
    """Region benchmark with an index built over it."""
    assert main(['gen-synthetic', '--preset', 'region', '--seed', '1', '--output-dir', str(tmp_path)]) == EXIT_OK
    index = tmp_path / 'region.fvsi'
    assert main(['index', '--corpus', str(tmp_path / 'corpus.tsv'), '--output', str(index),
                 '--threads', '2']) == EXIT_OK
    return tmp_path


@pytest.fixture
def store(engine, monkeypatch):
    """Route --store through the in-memory experiment store."""
    monkeypatch.setattr(database, 'engine', engine)
    monkeypatch.setattr(database, 'SessionLocal', sessionmaker(autocommit=False, autoflush=False, bind=engine))
    return database.SessionLocal


def search(bench, output, *extra):
    return main(['search', '--index', str(bench / 'region.fvsi'), '--topics', str(bench / 'topics.txt'),
                 '--output', str(bench / output), *extra])


class TestGenerate:

    def test_outputs(self, bench):
        for name in ('corpus.tsv', 'qrels.txt', 'topics.txt', 'labels.tsv'):
            assert (bench / name).stat().st_size > 0
        assert len((bench / 'corpus.tsv').read_text().splitlines()) == 200

    def test_spec_file(self, tmp_path):
        spec = tmp_path / 'spec.json'
        spec.write_text(json.dumps({'seed': 3, 'docs': 12}))
        out = tmp_path / 'gen'
        assert main(['gen-synthetic', '--spec', str(spec), '--seed', '4', '--output-dir', str(out)]) == EXIT_OK
        assert len((out / 'corpus.tsv').read_text().splitlines()) == 12

    def test_same_seed_same_bytes(self, tmp_path):
        for name in ('a', 'b'):
            main(['gen-synthetic', '--preset', 'colocation', '--seed', '9', '--output-dir', str(tmp_path / name)])
        for name in ('corpus.tsv', 'qrels.txt', 'topics.txt', 'labels.tsv'):
            assert (tmp_path / 'a' / name).read_bytes() == (tmp_path / 'b' / name).read_bytes()


class TestRuns:

    def test_search_writes_trec_run(self, bench):
        assert search(bench, 'base.run', '--top-n', '50') == EXIT_OK
        with open(bench / 'base.run', encoding='utf-8') as handle:
            header, topics = read_run(handle)
        assert header['subcommand'] == 'search'
        assert header['params']['top_n'] == 50
        assert sorted(topics) == [1, 2]
        assert len(topics[1]) == 50

    def test_runs_are_reproducible(self, bench):
        search(bench, 'a.run')
        search(bench, 'b.run')
        assert (bench / 'a.run').read_bytes() == (bench / 'b.run').read_bytes()

    def test_rerank_favours_first_third(self, bench):
        assert main(['rerank', '--index', str(bench / 'region.fvsi'), '--query', 'target', '--topic-id', '1',
                     '--objective', '1|3', '--depth', '200', '--top-n', '100',
                     '--output', str(bench / 'rr.run')]) == EXIT_OK
        with open(bench / 'rr.run', encoding='utf-8') as handle:
            header, topics = read_run(handle)
        assert header['params']['objective'] == '1|3'
        labels = dict(line.split('\t') for line in (bench / 'labels.tsv').read_text().splitlines())
        assert all(labels[docno] == 'first-third' for docno in topics[1].docnos())

    def test_expand_writes_candidates(self, bench):
        assert main(['expand', '--index', str(bench / 'region.fvsi'), '--query', 'target',
                     '--r', '5', '--k', '3', '--output', str(bench / 'ex.run'),
                     '--candidates', str(bench / 'cand.txt')]) == EXIT_OK
        lines = (bench / 'cand.txt').read_text().splitlines()
        assert lines[0] == '# topic 1'
        assert len(lines) == 4
        assert all(len(line.split('\t')) == 2 for line in lines[1:])

    def test_eval_with_diagnostics(self, bench):
        search(bench, 'base.run')
        main(['rerank', '--index', str(bench / 'region.fvsi'), '--topics', str(bench / 'topics.txt'),
              '--objective', '1|3', '--output', str(bench / 'rr.run')])
        assert main(['eval', '--run', str(bench / 'base.run'), str(bench / 'rr.run'),
                     '--qrels', str(bench / 'qrels.txt'), '--topics', str(bench / 'topics.txt'),
                     '--corpus', str(bench / 'corpus.tsv'), '--k', '10',
                     '--metrics', str(bench / 'm.csv'), '--diagnostics', str(bench / 'd.csv')]) == EXIT_OK

        with open(bench / 'm.csv', newline='') as handle:
            metrics = list(csv.DictReader(handle))
        assert [(row['run'], row['topic']) for row in metrics] == [
            ('base', '1'), ('base', '2'), ('base', 'all'), ('rr', '1'), ('rr', '2'), ('rr', 'all')
        ]
        rr_first = next(row for row in metrics if row['run'] == 'rr' and row['topic'] == '1')
        assert float(rr_first['p_at_k']) == 1.0

        with open(bench / 'd.csv', newline='') as handle:
            diagnostics = list(csv.DictReader(handle))
        rr_rows = [row for row in diagnostics if row['run'] == 'rr']
        assert rr_rows[0]['objective'] == '1|3'
        assert float(rr_rows[0]['fitting_rate']) == 1.0
        assert all(row['fitting_rate'] == 'NA' for row in diagnostics if row['run'] == 'base')

    def test_neighborhood_and_export(self, bench, capsys):
        docno = (bench / 'corpus.tsv').read_text().splitlines()[0].split('\t')[0]
        capsys.readouterr()
        assert main(['neighborhood', '--index', str(bench / 'region.fvsi'), '--docno', docno,
                     '--term', 'target', '--limit', '3']) == EXIT_OK
        assert len(capsys.readouterr().out.splitlines()) == 4
        assert main(['export-postings', '--index', str(bench / 'region.fvsi'),
                     '--output', str(bench / 'postings.tsv')]) == EXIT_OK
        rows = [line.split('\t') for line in (bench / 'postings.tsv').read_text().splitlines()]
        target = [row for row in rows if row[0] == 'target']
        assert len(target) == 200
        assert all(row[2] == '4' for row in target)


class TestStore:

    def test_store_run_and_evaluation(self, bench, store):
        assert main(['index', '--corpus', str(bench / 'corpus.tsv'), '--output', str(bench / 's.fvsi'),
                     '--store']) == EXIT_OK
        assert main(['search', '--index', str(bench / 's.fvsi'), '--topics', str(bench / 'topics.txt'),
                     '--output', str(bench / 'base.run'), '--store']) == EXIT_OK
        # diagnostics read the stored texts when no corpus is given
        assert main(['eval', '--run', str(bench / 'base.run'), '--qrels', str(bench / 'qrels.txt'),
                     '--topics', str(bench / 'topics.txt'), '--metrics', str(bench / 'm.csv'),
                     '--store']) == EXIT_OK

        db = store()
        try:
            header, topics = load_run(db, 'base')
            assert header['subcommand'] == 'search'
            assert sorted(topics) == [1, 2]
            summary = run_summary(db)
            assert [row['run'] for row in summary] == ['base']
            assert summary[0]['topics'] == 2
            assert summary[0]['skewness'] is not None
        finally:
            db.close()


class TestExitCodes:

    def test_missing_corpus(self, tmp_path, capsys):
        code = main(['index', '--corpus', str(tmp_path / 'none.tsv'), '--output', str(tmp_path / 'x.fvsi')])
        assert code == EXIT_MISSING
        assert capsys.readouterr().err.startswith('error:')

    def test_corrupt_index(self, bench):
        path = bench / 'region.fvsi'
        path.write_bytes(path.read_bytes()[:100])
        assert search(bench, 'x.run') == EXIT_FORMAT

    def test_malformed_corpus(self, tmp_path):
        corpus = tmp_path / 'bad.tsv'
        corpus.write_text("no tab here\n")
        assert main(['index', '--corpus', str(corpus), '--format', 'plain',
                     '--output', str(tmp_path / 'x.fvsi')]) == EXIT_FORMAT

    def test_empty_qrels(self, bench):
        search(bench, 'base.run')
        (bench / 'empty.txt').write_text('')
        assert main(['eval', '--run', str(bench / 'base.run'), '--qrels', str(bench / 'empty.txt'),
                     '--metrics', str(bench / 'm.csv')]) == EXIT_INVALID

    def test_tokenizer_mismatch(self, bench):
        assert search(bench, 'x.run', '--stem') == EXIT_INVALID

    def test_query_without_indexable_terms(self, bench):
        assert main(['search', '--index', str(bench / 'region.fvsi'), '--query', 'the of',
                     '--output', str(bench / 'x.run')]) == EXIT_INVALID

    @pytest.mark.parametrize("argv", [
        ['rerank', '--index', 'i', '--query', 'q', '--output', 'o', '--objective', '0|3'],
        ['rerank', '--index', 'i', '--query', 'q', '--output', 'o', '--objective', '1|3', '--depth', '0'],
        ['index', '--corpus', 'c', '--output', 'o', '--order', '40'],
        ['expand', '--index', 'i', '--query', 'q', '--output', 'o', '--w0', '-1'],
        ['search', '--index', 'i', '--output', 'o'],
        ['frobnicate'],
    ])
    def test_bad_flags(self, argv):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 2
