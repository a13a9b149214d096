import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from core.exceptions import DataFormatError, EmptyInputError
from core.pdf import summary_pdf
from corpus.loaders import load_corpus
from embedstore.matrix import load_embeddings

from .recall import GoldAlignment, Task, load_gold, read_predicted, recall
from .reports import BREAKDOWN_HEADER, breakdown_rows, format_table, render_report_pdf, report_rows
from .synth import synth_corpus


def run(name, *args, **options):
	out = StringIO()
	call_command(name, *args, stdout=out, stderr=StringIO(), **options)
	return json.loads(out.getvalue())


class RecallTests(SimpleTestCase):
	def setUp(self):
		self.gold = GoldAlignment(Task.DOCUMENT, frozenset({("a", "w"), ("b", "x"), ("c", "y"), ("d", "z")}))

	def test_perfect_and_empty(self):
		self.assertEqual(recall(set(self.gold.pairs), self.gold).recall, 1.0)
		self.assertEqual(recall(set(), self.gold).recall, 0.0)

	def test_extra_predictions_do_not_hurt(self):
		predicted = {("a", "w"), ("b", "x"), ("c", "y")} | {(f"s{i}", "q") for i in range(10)}
		report = recall(predicted, self.gold)
		self.assertEqual((report.hits, report.gold_size, report.predicted_size), (3, 4, 13))
		self.assertEqual(report.recall, 0.75)

	def test_monotone_under_growth(self):
		predicted: set = set()
		last = 0.0
		for pair in [("z", "z"), ("a", "w"), ("b", "b"), ("d", "z")]:
			predicted.add(pair)
			current = recall(predicted, self.gold).recall
			self.assertGreaterEqual(current, last)
			last = current

	def test_empty_gold(self):
		with self.assertRaises(EmptyInputError):
			recall({("a", "w")}, GoldAlignment(Task.DOCUMENT, frozenset()))


class GoldFileTests(SimpleTestCase):
	def setUp(self):
		self.tmp = tempfile.TemporaryDirectory()
		self.addCleanup(self.tmp.cleanup)
		self.dir = Path(self.tmp.name)

	def test_sentence_ids_are_integers(self):
		path = self.dir / "gold.tsv"
		path.write_text("1\t2\n1\t2\n3\t4\t0.5\n", encoding="utf-8")
		gold = load_gold(path, Task.SENTENCE)
		self.assertEqual(gold.pairs, frozenset({(1, 2), (3, 4)}))
		self.assertEqual(read_predicted(path, Task.SENTENCE), {(1, 2), (3, 4)})

	def test_non_integer_sentence_id(self):
		path = self.dir / "gold.tsv"
		path.write_text("a\t2\n", encoding="utf-8")
		with self.assertRaises(DataFormatError):
			load_gold(path, Task.SENTENCE)
		self.assertEqual(load_gold(path, Task.DOCUMENT).pairs, frozenset({("a", "2")}))


class ReportTests(SimpleTestCase):
	def test_table_and_pdf(self):
		report = recall({("a", "w")}, GoldAlignment(Task.DOCUMENT, frozenset({("a", "w"), ("b", "x")})))
		table = format_table(report)
		self.assertIn("Recall", table)
		self.assertIn("0.500000000", table)
		with tempfile.TemporaryDirectory() as tmp:
			path = render_report_pdf(report, Path(tmp) / "report.pdf")
			self.assertTrue(path.read_bytes().startswith(b"%PDF"))

	def test_pdf_carries_the_outcome_breakdown(self):
		gold = GoldAlignment(Task.DOCUMENT, frozenset({("a", "w"), ("b", "x")}))
		report = recall({("a", "w"), ("c", "z")}, gold)
		self.assertEqual(
			breakdown_rows(report),
			[["Found", "1"], ["Missed", "1"], ["Predicted, not in gold", "1"]],
		)
		title = "Document alignment recall"
		with_table = summary_pdf(title, report_rows(report), header=BREAKDOWN_HEADER, rows=breakdown_rows(report))
		with tempfile.TemporaryDirectory() as tmp:
			path = render_report_pdf(report, Path(tmp) / "report.pdf")
			self.assertEqual(path.read_bytes(), with_table)
		self.assertNotEqual(with_table, summary_pdf(title, report_rows(report)))


class SynthTests(SimpleTestCase):
	def test_same_seed_is_byte_identical(self):
		with tempfile.TemporaryDirectory() as one, tempfile.TemporaryDirectory() as two:
			first = synth_corpus(12, 3, 8, 0.05, 7, one)
			synth_corpus(12, 3, 8, 0.05, 7, two)
			names = sorted(p.name for p in Path(one).iterdir())
			self.assertEqual(names, sorted(p.name for p in Path(two).iterdir()))
			for name in names:
				self.assertEqual((Path(one) / name).read_bytes(), (Path(two) / name).read_bytes(), name)
			self.assertEqual(first.sentences, 36)

	def test_fixture_is_consistent(self):
		with tempfile.TemporaryDirectory() as tmp:
			files = synth_corpus(15, 4, 8, 0.0, 3, tmp)
			src = load_corpus(files.src_corpus)
			tgt = load_corpus(files.tgt_corpus)
			self.assertEqual((len(src), len(tgt)), (15, 15))
			self.assertEqual((src.dropped, tgt.dropped), (0, 0))
			src_emb = load_embeddings(files.src_embeddings, 8, expected_rows=src.sentence_count)
			tgt_emb = load_embeddings(files.tgt_embeddings, 8, expected_rows=tgt.sentence_count)
			gold_docs = load_gold(files.gold_documents, Task.DOCUMENT)
			gold_sents = load_gold(files.gold_sentences, Task.SENTENCE)
			self.assertEqual((len(gold_docs), len(gold_sents)), (15, 60))
			for src_id, tgt_id in gold_docs.pairs:
				self.assertEqual(src.document(src_id).date, tgt.document(tgt_id).date)
			for s, t in gold_sents.pairs:
				self.assertEqual(src_emb.vectors([s]).tolist(), tgt_emb.vectors([t]).tolist())
				self.assertEqual(len(src.sentences[s].tokens), len(tgt.sentences[t].tokens))
			self.assertNotEqual(sorted(gold_sents.pairs), [(i, i) for i in range(60)])


class PipelineTests(SimpleTestCase):
	"""Drives the management commands end to end on synthetic fixtures."""

	def setUp(self):
		self.tmp = tempfile.TemporaryDirectory()
		self.addCleanup(self.tmp.cleanup)
		self.dir = Path(self.tmp.name)

	def fixture(self, docs=200, sents=10, dim=64, sigma=0.01, seed=42):
		out = self.dir / f"fixture-{docs}-{sigma}"
		summary = run("synth", docs=docs, sents=sents, dim=dim, sigma=sigma, seed=seed, out_dir=str(out))
		self.assertEqual(summary["documents"], docs)
		return out

	def corpus_args(self, fx, dim):
		return {
			"src": str(fx / "src.jsonl"),
			"tgt": str(fx / "tgt.jsonl"),
			"src_emb": str(fx / "src.emb"),
			"tgt_emb": str(fx / "tgt.emb"),
			"dim": dim,
		}

	def test_synthetic_end_to_end_recall(self):
		fx = self.fixture()
		doc = run(
			"doc",
			scheme="slen",
			window_days=0,
			gold=str(fx / "gold_documents.tsv"),
			out=str(self.dir / "docs.tsv"),
			**self.corpus_args(fx, 64),
		)
		self.assertGreaterEqual(doc["recall"], 0.95)
		self.assertEqual(doc["pairs"], 200)

		sent = run(
			"sent",
			strategy="forward",
			gold=str(fx / "gold_sentences.tsv"),
			out=str(self.dir / "sents.tsv"),
			**self.corpus_args(fx, 64),
		)
		self.assertGreaterEqual(sent["recall"], 0.95)
		self.assertEqual(sent["pairs"], 2000)

		evaluated = run("eval", task="sentence", pred=str(self.dir / "sents.tsv"), gold=str(fx / "gold_sentences.tsv"))
		self.assertEqual(evaluated["recall"], sent["recall"])

		scoped = run(
			"sent",
			strategy="intersection",
			doc_pairs=str(self.dir / "docs.tsv"),
			lexicon=[str(fx / "lexicon.tsv")],
			out=str(self.dir / "scoped.tsv"),
			**self.corpus_args(fx, 64),
		)
		self.assertLessEqual(scoped["pairs"], 2000)

		sub = run(
			"margin_subsample",
			pairs=str(self.dir / "sents.tsv"),
			src_emb=str(fx / "src.emb"),
			tgt_emb=str(fx / "tgt.emb"),
			src=str(fx / "src.jsonl"),
			tgt=str(fx / "tgt.jsonl"),
			dim=64,
			budget=500,
			out=str(self.dir / "sub.tsv"),
		)
		self.assertGreaterEqual(sub["target_words"], 500)
		self.assertLess(sub["pairs"], 2000)

	def test_noise_free_documents_align_perfectly_under_every_scheme(self):
		fx = self.fixture(docs=30, sents=4, dim=16, sigma=0.0)
		for scheme in ("relfreq", "slen", "idf", "slidf"):
			summary = run(
				"doc",
				scheme=scheme,
				gold=str(fx / "gold_documents.tsv"),
				out=str(self.dir / f"{scheme}.tsv"),
				**self.corpus_args(fx, 16),
			)
			self.assertEqual(summary["recall"], 1.0, scheme)

	def test_outputs_do_not_depend_on_workers(self):
		fx = self.fixture(docs=40, sents=5, dim=16, sigma=0.05)
		lexicon = [str(fx / "lexicon.tsv")]
		for command in ("doc", "sent"):
			paths = []
			for workers in (1, 8, 1):
				path = self.dir / f"{command}-{workers}-{len(paths)}.tsv"
				run(command, workers=workers, lexicon=lexicon, out=str(path), **self.corpus_args(fx, 16))
				paths.append(path)
			self.assertEqual(paths[0].read_bytes(), paths[1].read_bytes())
			self.assertEqual(paths[0].read_bytes(), paths[2].read_bytes())

	def test_empty_lexicon_keeps_forward_pairs(self):
		fx = self.fixture(docs=30, sents=4, dim=16, sigma=0.2)
		empty = self.dir / "empty.tsv"
		empty.write_text("", encoding="utf-8")
		baseline = self.dir / "baseline.tsv"
		rescored = self.dir / "rescored.tsv"
		run("sent", out=str(baseline), **self.corpus_args(fx, 16))
		run("sent", lexicon=[str(empty)], out=str(rescored), **self.corpus_args(fx, 16))
		pairs = lambda p: read_predicted(p, Task.SENTENCE)  # noqa: E731
		self.assertEqual(pairs(baseline), pairs(rescored))

	def test_eval_identical_files_and_reports(self):
		gold = self.dir / "gold.tsv"
		gold.write_text("a\tx\nb\ty\n", encoding="utf-8")
		err = StringIO()
		out = StringIO()
		call_command(
			"eval",
			task="document",
			pred=str(gold),
			gold=str(gold),
			pretty=True,
			report_pdf=str(self.dir / "r.pdf"),
			stdout=out,
			stderr=err,
		)
		self.assertEqual(json.loads(out.getvalue())["recall"], 1.0)
		self.assertIn("Gold pairs", err.getvalue())
		self.assertTrue((self.dir / "r.pdf").exists())

	def test_build_lexicon(self):
		glossary = self.dir / "glossary.tsv"
		glossary.write_text("Ministry of Health\tsaukya amathyansaya\n", encoding="utf-8")
		words = self.dir / "words.tsv"
		words.write_text("health\tsaukya\n", encoding="utf-8")
		out = self.dir / "improved.tsv"
		summary = run("build_lexicon", glossary=str(glossary), words=str(words), out=str(out))
		self.assertEqual(summary["entries"], 2)
		self.assertEqual(out.read_text(encoding="utf-8"), "health\tsaukya\nministry of\tamathyansaya\n")

	def test_missing_embedding_file_is_a_data_error(self):
		fx = self.fixture(docs=10, sents=2, dim=8, sigma=0.1)
		args = self.corpus_args(fx, 8)
		args["tgt_emb"] = str(self.dir / "absent.emb")
		with self.assertRaises(CommandError) as ctx:
			run("doc", out=str(self.dir / "x.tsv"), **args)
		self.assertEqual(ctx.exception.returncode, 2)
		self.assertIn("absent.emb", str(ctx.exception))

	def test_wrong_dimension_is_a_data_error(self):
		fx = self.fixture(docs=10, sents=2, dim=8, sigma=0.1)
		with self.assertRaises(CommandError) as ctx:
			run("sent", out=str(self.dir / "x.tsv"), **self.corpus_args(fx, 5))
		self.assertEqual(ctx.exception.returncode, 2)
		self.assertIn("size mismatch", str(ctx.exception))

	def test_embedding_rows_must_match_the_corpus(self):
		fx = self.fixture(docs=10, sents=2, dim=8, sigma=0.1)
		other = self.fixture(docs=12, sents=2, dim=8, sigma=0.1)
		args = self.corpus_args(fx, 8)
		args["src_emb"] = str(other / "src.emb")
		with self.assertRaises(CommandError) as ctx:
			run("doc", out=str(self.dir / "x.tsv"), **args)
		self.assertEqual(ctx.exception.returncode, 2)
		self.assertIn("expected 640 bytes", str(ctx.exception))
		pairs = self.dir / "pairs.tsv"
		pairs.write_text("0\t0\t0.5\n", encoding="utf-8")
		with self.assertRaises(CommandError) as ctx:
			run(
				"margin_subsample",
				pairs=str(pairs),
				src=args["src"],
				src_emb=args["src_emb"],
				tgt=args["tgt"],
				tgt_emb=args["tgt_emb"],
				dim=8,
				budget=10,
				out=str(self.dir / "sub.tsv"),
			)
		self.assertEqual(ctx.exception.returncode, 2)

	def test_usage_errors(self):
		with self.assertRaises(CommandError) as ctx:
			run("doc", "--scheme", "tfidf", "--src", "a", "--tgt", "b", "--src-emb", "c", "--tgt-emb", "d", "--out", "e")
		self.assertEqual(ctx.exception.returncode, 1)
		with self.assertRaises(CommandError) as ctx:
			run("synth", docs=0, sents=1, dim=1, sigma=0.0, seed=1, out_dir=str(self.dir))
		self.assertEqual(ctx.exception.returncode, 1)
