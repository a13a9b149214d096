import json
import tempfile
from collections import Counter
from datetime import date, timedelta
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import DataFormatError

from .dates import date_buckets
from .loaders import SourceDocument, corpus_from_documents, document_record, load_corpus, write_corpus
from .serializers import DocumentRecordSerializer
from .tokenization import tokenize

LONG = "This sentence is long enough to keep its document in the corpus."
# Letters, edge punctuation, whitespace and non-Latin marks (ZWJ included).
ALPHABET = list("aZé.,!?'\"-()«»…  \t\nශ්රීලංகஇ") + ["\u200d"]


def write_lines(path: Path, records) -> Path:
	path.write_text("".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records), encoding="utf-8")
	return path


class TokenizeTests(SimpleTestCase):
	def test_basic_rule(self):
		self.assertEqual(tokenize("John went home."), ["john", "went", "home"])

	def test_edge_punctuation_only(self):
		self.assertEqual(tokenize('"Mr. O\'Brien," he said!'), ["mr", "o'brien", "he", "said"])
		self.assertEqual(tokenize("-- ... !!"), [])

	def test_non_latin_scripts(self):
		self.assertEqual(tokenize("ශ්‍රී ලංකාව."), ["ශ්‍රී", "ලංකාව"])
		self.assertEqual(tokenize("இலங்கை, அரசு"), ["இலங்கை", "அரசு"])

	def test_empty(self):
		self.assertEqual(tokenize(""), [])
		self.assertEqual(tokenize("   \t\n"), [])

	def test_tokenizing_tokens_again_changes_nothing(self):
		rng = np.random.default_rng(5)
		for _ in range(500):
			text = "".join(rng.choice(ALPHABET, size=int(rng.integers(0, 40))))
			tokens = tokenize(text)
			self.assertEqual(tokenize(" ".join(tokens)), tokens, repr(text))


class SerializerTests(SimpleTestCase):
	def test_needs_sentences_or_text(self):
		s = DocumentRecordSerializer(data={"id": "d1", "lang": "en", "date": "2020-01-01"})
		self.assertFalse(s.is_valid())

	def test_text_is_split_on_newlines(self):
		s = DocumentRecordSerializer(data={"id": "d1", "lang": "en", "date": "2020-01-01", "text": "One.\n\n Two. \n"})
		self.assertTrue(s.is_valid(), s.errors)
		self.assertEqual(s.sentence_texts(), ["One.", "Two."])

	def test_bad_date(self):
		s = DocumentRecordSerializer(data={"id": "d1", "lang": "en", "date": "01/02/2020", "sentences": ["x"]})
		self.assertFalse(s.is_valid())
		self.assertIn("date", s.errors)

	def test_long_ids_are_accepted_and_numeric_ids_rejected(self):
		long_id = "doc-" + "x" * 2000
		s = DocumentRecordSerializer(data={"id": long_id, "lang": "en", "date": "2020-01-01", "sentences": ["x"]})
		self.assertTrue(s.is_valid(), s.errors)
		self.assertEqual(s.validated_data["id"], long_id)
		s = DocumentRecordSerializer(data={"id": 17, "lang": "en", "date": "2020-01-01", "sentences": ["x"]})
		self.assertFalse(s.is_valid())
		self.assertIn("id", s.errors)


class LoadCorpusTests(SimpleTestCase):
	def setUp(self):
		self.tmp = tempfile.TemporaryDirectory()
		self.addCleanup(self.tmp.cleanup)
		self.dir = Path(self.tmp.name)

	def test_sentence_ids_follow_document_order(self):
		path = write_lines(
			self.dir / "c.jsonl",
			[
				{"id": "a", "lang": "en", "date": "2020-01-02", "sentences": [LONG, "Second one."]},
				{"id": "b", "lang": "en", "date": "2020-01-01", "sentences": ["Third.", LONG]},
			],
		)
		corpus = load_corpus(path)
		self.assertEqual(corpus.lang, "en")
		self.assertEqual(corpus.sentence_count, 4)
		self.assertEqual(corpus.document("a").sentence_ids, (0, 1))
		self.assertEqual(corpus.document("b").sentence_ids, (2, 3))
		self.assertEqual([s.text for s in corpus.sentences_of("b")], ["Third.", LONG])
		self.assertEqual(corpus.sentences[1].tokens, ("second", "one"))
		self.assertEqual(corpus.by_date[date(2020, 1, 1)], ("b",))
		self.assertIn("a", corpus)

	def test_short_documents_are_dropped(self):
		path = write_lines(
			self.dir / "c.jsonl",
			[
				{"id": "short", "lang": "en", "date": "2020-01-01", "sentences": ["Tiny."]},
				{"id": "ok", "lang": "en", "date": "2020-01-01", "sentences": [LONG]},
			],
		)
		corpus = load_corpus(path)
		self.assertEqual([d.id for d in corpus.documents], ["ok"])
		self.assertEqual(corpus.dropped, 1)
		self.assertEqual(corpus.document("ok").sentence_ids, (0,))

	def test_min_chars_counts_joined_text(self):
		# 24 + 1 + 25 = 50 characters once joined with a single space.
		path = write_lines(
			self.dir / "c.jsonl",
			[{"id": "edge", "lang": "en", "date": "2020-01-01", "sentences": ["a" * 24, "b" * 25]}],
		)
		self.assertEqual(len(load_corpus(path, min_chars=50)), 1)
		self.assertEqual(len(load_corpus(path, min_chars=51)), 0)

	def test_blank_sentences_are_skipped(self):
		path = write_lines(
			self.dir / "c.jsonl",
			[{"id": "a", "lang": "en", "date": "2020-01-01", "sentences": ["", LONG, "   "]}],
		)
		self.assertEqual(load_corpus(path).sentence_count, 1)

	def test_sentence_ids_are_contiguous(self):
		rng = np.random.default_rng(8)
		for _ in range(50):
			items = [
				SourceDocument(f"d{i}", date(2020, 1, 1), [f"sentence {i} {j}" for j in range(int(rng.integers(1, 6)))])
				for i in range(int(rng.integers(0, 12)))
			]
			corpus = corpus_from_documents("en", items)
			self.assertEqual(sum(len(d.sentence_ids) for d in corpus.documents), corpus.sentence_count)
			sids = [sid for d in corpus.documents for sid in d.sentence_ids]
			self.assertEqual(sids, list(range(corpus.sentence_count)))
			self.assertEqual([s.sid for s in corpus.sentences], sids)

	def test_errors_carry_line_numbers(self):
		path = self.dir / "bad.jsonl"
		path.write_text(
			json.dumps({"id": "a", "lang": "en", "date": "2020-01-01", "sentences": [LONG]}) + "\n{not json\n",
			encoding="utf-8",
		)
		with self.assertRaises(DataFormatError) as ctx:
			load_corpus(path)
		self.assertEqual(ctx.exception.line, 2)

	def test_duplicate_ids_and_language_mismatch(self):
		rec = {"id": "a", "lang": "en", "date": "2020-01-01", "sentences": [LONG]}
		with self.assertRaises(DataFormatError):
			load_corpus(write_lines(self.dir / "dup.jsonl", [rec, rec]))
		other = dict(rec, id="b", lang="si")
		with self.assertRaises(DataFormatError):
			load_corpus(write_lines(self.dir / "mix.jsonl", [rec, other]))
		with self.assertRaises(DataFormatError):
			load_corpus(write_lines(self.dir / "want.jsonl", [rec]), lang="si")

	def test_writer_output_loads_back(self):
		path = write_corpus(
			self.dir / "w.jsonl",
			[document_record("x", "si", date(2021, 5, 4), [LONG], url="http://example.org/x")],
		)
		corpus = load_corpus(path)
		self.assertEqual(corpus.document("x").url, "http://example.org/x")
		self.assertEqual(corpus.document("x").date, date(2021, 5, 4))


class DateBucketTests(SimpleTestCase):
	def setUp(self):
		self.tmp = tempfile.TemporaryDirectory()
		self.addCleanup(self.tmp.cleanup)
		d = Path(self.tmp.name)
		self.src = load_corpus(
			write_lines(
				d / "src.jsonl",
				[
					{"id": "s1", "lang": "en", "date": "2020-01-01", "sentences": [LONG]},
					{"id": "s2", "lang": "en", "date": "2020-01-03", "sentences": [LONG]},
				],
			)
		)
		self.tgt = load_corpus(
			write_lines(
				d / "tgt.jsonl",
				[
					{"id": "t1", "lang": "si", "date": "2020-01-02", "sentences": [LONG]},
					{"id": "t2", "lang": "si", "date": "2020-01-01", "sentences": [LONG]},
				],
			)
		)

	def test_same_day_only(self):
		buckets = date_buckets(self.src, self.tgt, 0)
		self.assertEqual([(b.src_ids, b.tgt_ids) for b in buckets], [(("s1",), ("t2",))])

	def test_window_keeps_corpus_order(self):
		buckets = date_buckets(self.src, self.tgt, 1)
		self.assertEqual(
			[(b.src_ids, b.tgt_ids) for b in buckets],
			[(("s1",), ("t1", "t2")), (("s2",), ("t1",))],
		)

	def test_no_filter(self):
		buckets = date_buckets(self.src, self.tgt, None)
		self.assertEqual(len(buckets), 1)
		self.assertEqual(buckets[0].src_ids, ("s1", "s2"))
		self.assertEqual(buckets[0].tgt_ids, ("t1", "t2"))

	def test_same_day_pairs_land_in_exactly_one_bucket(self):
		rng = np.random.default_rng(9)
		start = date(2020, 1, 1)

		def dated(prefix, n):
			items = [
				SourceDocument(f"{prefix}{i}", start + timedelta(days=int(rng.integers(0, 6))), [LONG])
				for i in range(n)
			]
			return corpus_from_documents(prefix, items)

		for _ in range(30):
			src = dated("s", int(rng.integers(1, 15)))
			tgt = dated("t", int(rng.integers(1, 15)))
			seen = Counter(
				(s, t) for bucket in date_buckets(src, tgt, 0) for s in bucket.src_ids for t in bucket.tgt_ids
			)
			same_day = {(s.id, t.id) for s in src.documents for t in tgt.documents if s.date == t.date}
			self.assertEqual(set(seen), same_day)
			self.assertTrue(all(n == 1 for n in seen.values()))
