import math
import tempfile
from datetime import date
from itertools import permutations
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

from core.exceptions import DimensionError, EmptyInputError, LexiconDirectionError, MassMismatchError
from corpus.loaders import SourceDocument, corpus_from_documents
from embedstore.matrix import EmbeddingMatrix
from lexicon.matching import LexiconWeighting
from lexicon.tables import BilingualLexicon

from .alignment import (
	DocumentAlignment,
	align_documents,
	competitive_matching,
	read_document_pairs,
	write_document_alignment,
)
from .masses import Scheme, WeightVector, idf_statistics, idf_weight, sentence_masses
from .transport import DocDistance, greedy_movers_distance

DAY = date(2020, 1, 1)


def uniform(n, doc_id="d"):
	return WeightVector(doc_id, Scheme.RELFREQ, tuple(range(n)), tuple([1.0 / n] * n))


def exact_emd(src, tgt):
	"""Uniform-mass EMD as an assignment over n*m unit copies."""
	d = cdist(src, tgt)
	n, m = d.shape
	expanded = np.kron(d, np.ones((m, n)))
	rows, cols = linear_sum_assignment(expanded)
	return expanded[rows, cols].sum() / (n * m)


class MassTests(SimpleTestCase):
	def setUp(self):
		self.corpus = corpus_from_documents(
			"en",
			[
				SourceDocument("d1", DAY, ["x", "one two three", "x"]),
				SourceDocument("d2", DAY, ["x", "y"]),
				SourceDocument("d3", DAY, ["z", "..."]),
			],
		)

	def test_relfreq_pools_duplicates_on_first_occurrence(self):
		masses = sentence_masses(self.corpus.document("d1"), self.corpus, Scheme.RELFREQ)
		self.assertEqual(masses.sids, (0, 1))
		self.assertEqual(masses.masses, (2 / 3, 1 / 3))

	def test_relfreq_uniform(self):
		masses = sentence_masses(self.corpus.document("d2"), self.corpus, Scheme.RELFREQ)
		self.assertEqual(masses.masses, (0.5, 0.5))

	def test_slen(self):
		corpus = corpus_from_documents("en", [SourceDocument("d", DAY, ["one", "two three four"])])
		masses = sentence_masses(corpus.document("d"), corpus, Scheme.SLEN)
		self.assertEqual(masses.masses, (0.25, 0.75))

	def test_token_less_sentence_carries_no_length_mass(self):
		masses = sentence_masses(self.corpus.document("d3"), self.corpus, Scheme.SLEN)
		self.assertEqual(masses.sids, (5,))
		self.assertEqual(masses.masses, (1.0,))
		only_punct = corpus_from_documents("en", [SourceDocument("p", DAY, ["...", "!"])])
		with self.assertRaises(EmptyInputError):
			sentence_masses(only_punct.document("p"), only_punct, Scheme.SLEN)

	def test_idf_statistics(self):
		stats = idf_statistics(self.corpus)
		self.assertEqual(stats.n_docs, 3)
		self.assertEqual(stats.document_frequency("x"), 2)
		self.assertEqual(stats.document_frequency("unseen"), 0)
		self.assertAlmostEqual(stats.weight("unseen"), 1 + math.log(4), places=12)

	def test_idf_weight(self):
		self.assertAlmostEqual(idf_weight(3, 1), 1 + math.log(2), delta=1e-12)

	def test_idf_needs_statistics(self):
		with self.assertRaises(ValueError):
			sentence_masses(self.corpus.document("d1"), self.corpus, Scheme.IDF)

	def test_every_scheme_sums_to_one(self):
		rng = np.random.default_rng(5)
		vocab = ["alpha", "beta", "gamma", "delta", "eps"]
		docs = []
		for i in range(100):
			texts = [
				" ".join(rng.choice(vocab, size=int(rng.integers(1, 6))))
				for _ in range(int(rng.integers(1, 8)))
			]
			docs.append(SourceDocument(f"d{i}", DAY, texts))
		corpus = corpus_from_documents("en", docs)
		stats = idf_statistics(corpus)
		for scheme in Scheme.values:
			for doc in corpus.documents:
				masses = sentence_masses(doc, corpus, scheme, stats)
				self.assertAlmostEqual(masses.total, 1.0, delta=1e-9)
				self.assertTrue(all(m > 0 for m in masses.masses))


class GreedyMoversDistanceTests(SimpleTestCase):
	def test_hand_traced_example(self):
		src = EmbeddingMatrix(np.array([[1.0, 0.0], [0.0, 1.0]]))
		tgt = EmbeddingMatrix(np.array([[1.0, 0.0]]))
		result = greedy_movers_distance(uniform(2, "a"), uniform(1, "b"), src, tgt)
		self.assertAlmostEqual(result.distance, 0.5 * math.sqrt(2), delta=1e-12)
		self.assertEqual([(s.src_sid, s.tgt_sid, s.flow) for s in result.trace], [(0, 0, 0.5), (1, 0, 0.5)])
		self.assertAlmostEqual(result.total_flow, 1.0, delta=1e-9)

	def test_mass_mismatch(self):
		emb = EmbeddingMatrix(np.eye(2))
		half = WeightVector("h", Scheme.RELFREQ, (0,), (0.5,))
		with self.assertRaises(MassMismatchError):
			greedy_movers_distance(uniform(2), half, emb, emb)

	def test_upper_bounds_exact_emd(self):
		rng = np.random.default_rng(42)
		for _ in range(200):
			n, m = (int(v) for v in rng.integers(2, 7, size=2))
			src = rng.standard_normal((n, 8))
			tgt = rng.standard_normal((m, 8))
			gmd = greedy_movers_distance(uniform(n), uniform(m), EmbeddingMatrix(src), EmbeddingMatrix(tgt))
			self.assertGreaterEqual(gmd.distance, exact_emd(src, tgt) - 1e-9)

	def test_assignment_oracles_agree_on_square_instances(self):
		rng = np.random.default_rng(8)
		for _ in range(20):
			n = int(rng.integers(2, 6))
			src = rng.standard_normal((n, 8))
			tgt = rng.standard_normal((n, 8))
			d = cdist(src, tgt)
			by_permutation = min(sum(d[i, p[i]] for i in range(n)) for p in permutations(range(n))) / n
			self.assertAlmostEqual(exact_emd(src, tgt), by_permutation, delta=1e-9)

	def test_equals_emd_when_greedy_order_is_optimal(self):
		rng = np.random.default_rng(9)
		for n in range(2, 7):
			src = rng.standard_normal((n, 8)) * 10
			tgt = src + rng.standard_normal((n, 8)) * 1e-3
			gmd = greedy_movers_distance(uniform(n), uniform(n), EmbeddingMatrix(src), EmbeddingMatrix(tgt))
			self.assertAlmostEqual(gmd.distance, exact_emd(src, tgt), delta=1e-9)

	def test_identity_and_symmetry(self):
		rng = np.random.default_rng(21)
		for _ in range(100):
			n, m = (int(v) for v in rng.integers(1, 8, size=2))
			src = EmbeddingMatrix(rng.standard_normal((n, 16)))
			tgt = EmbeddingMatrix(rng.standard_normal((m, 16)))
			raw_a, raw_b = rng.random(n) + 0.1, rng.random(m) + 0.1
			a = WeightVector("a", Scheme.RELFREQ, tuple(range(n)), tuple(raw_a / raw_a.sum()))
			b = WeightVector("b", Scheme.RELFREQ, tuple(range(m)), tuple(raw_b / raw_b.sum()))
			self.assertAlmostEqual(greedy_movers_distance(a, a, src, src).distance, 0.0, delta=1e-9)
			forward = greedy_movers_distance(a, b, src, tgt).distance
			backward = greedy_movers_distance(b, a, tgt, src).distance
			self.assertAlmostEqual(forward, backward, delta=1e-9)

	def test_trace_accounts_for_distance(self):
		rng = np.random.default_rng(4)
		src = EmbeddingMatrix(rng.standard_normal((4, 8)))
		tgt = EmbeddingMatrix(rng.standard_normal((3, 8)))
		result = greedy_movers_distance(uniform(4), uniform(3), src, tgt, pair_weight=lambda s, t: 0.5 + 0.1 * t)
		self.assertAlmostEqual(result.total_flow, 1.0, delta=1e-9)
		self.assertAlmostEqual(result.distance, sum(s.flow * s.delta * s.weight for s in result.trace), delta=1e-9)


class CompetitiveMatchingTests(SimpleTestCase):
	def test_best_pairs_first(self):
		candidates = [
			DocDistance("a", "x", 0.1),
			DocDistance("a", "y", 0.2),
			DocDistance("b", "x", 0.15),
			DocDistance("b", "y", 0.9),
		]
		pairs = competitive_matching(candidates)
		self.assertEqual([(p.src_id, p.tgt_id) for p in pairs], [("a", "x"), ("b", "y")])

	def test_ties_break_by_ids(self):
		pairs = competitive_matching([DocDistance("b", "x", 0.5), DocDistance("a", "x", 0.5)])
		self.assertEqual([(p.src_id, p.tgt_id) for p in pairs], [("a", "x")])


class AlignDocumentsTests(SimpleTestCase):
	def setUp(self):
		rng = np.random.default_rng(17)
		self.src_vectors = rng.standard_normal((12, 8))
		order = [3, 0, 2, 1]
		self.src = corpus_from_documents(
			"en",
			[SourceDocument(f"s{i}", DAY, [f"source {i} line {j}" for j in range(3)]) for i in range(4)],
		)
		self.tgt = corpus_from_documents(
			"si",
			[SourceDocument(f"t{i}", DAY, [f"target {i} line {j}" for j in range(3)]) for i in order],
		)
		rows = [self.src_vectors[3 * i:3 * i + 3] for i in order]
		self.tgt_vectors = np.vstack(rows) + rng.standard_normal((12, 8)) * 0.01

	def align(self, **kwargs):
		return align_documents(
			self.src,
			self.tgt,
			EmbeddingMatrix(self.src_vectors),
			EmbeddingMatrix(self.tgt_vectors),
			**kwargs,
		)

	def test_recovers_true_pairs(self):
		for scheme in Scheme.values:
			alignment = self.align(scheme=scheme)
			self.assertEqual(alignment.pair_set(), {(f"s{i}", f"t{i}") for i in range(4)})
			self.assertEqual(alignment.candidates, 16)

	def test_sorted_one_to_one(self):
		alignment = self.align()
		distances = [p.distance for p in alignment.pairs]
		self.assertEqual(distances, sorted(distances))
		self.assertEqual(len({p.src_id for p in alignment.pairs}), len(alignment))
		self.assertEqual(len({p.tgt_id for p in alignment.pairs}), len(alignment))

	def test_workers_do_not_change_result(self):
		self.assertEqual(self.align(workers=1), self.align(workers=8))

	def test_disjoint_dates_never_pair(self):
		src = corpus_from_documents("en", [SourceDocument("s", date(2020, 1, 1), ["same text"])])
		tgt = corpus_from_documents("si", [SourceDocument("t", date(2020, 1, 5), ["same text"])])
		emb = EmbeddingMatrix(np.ones((1, 4)))
		self.assertEqual(len(align_documents(src, tgt, emb, emb, window_days=0)), 0)
		self.assertEqual(len(align_documents(src, tgt, emb, emb, window_days=4)), 1)
		self.assertEqual(len(align_documents(src, tgt, emb, emb, window_days=None)), 1)

	def test_lexicon_never_increases_distance(self):
		names = BilingualLexicon("en", "si", {("source",): [("target",)], ("line",): [("line",)]})
		plain = {(p.src_id, p.tgt_id): p.distance for p in self.align().pairs}
		weighted = self.align(lex=LexiconWeighting(phrases=names, count_init=0))
		for pair in weighted.pairs:
			self.assertLessEqual(pair.distance, plain[(pair.src_id, pair.tgt_id)] + 1e-12)

	def test_lexicon_direction_is_checked(self):
		backwards = BilingualLexicon("si", "en", {("target",): [("source",)]})
		with self.assertRaises(LexiconDirectionError):
			self.align(lex=LexiconWeighting(phrases=backwards))

	def test_row_count_mismatch(self):
		with self.assertRaises(DimensionError):
			align_documents(self.src, self.tgt, EmbeddingMatrix(self.src_vectors[:5]), EmbeddingMatrix(self.tgt_vectors))


class AlignmentFileTests(SimpleTestCase):
	def test_round_trip_is_byte_stable(self):
		alignment = DocumentAlignment(pairs=competitive_matching([DocDistance("a", "x", 0.123456789123), DocDistance("b", "y", 2.0)]))
		with tempfile.TemporaryDirectory() as tmp:
			first = write_document_alignment(Path(tmp) / "one.tsv", alignment)
			pairs = read_document_pairs(first)
			self.assertEqual([(p.src_id, p.tgt_id, p.distance) for p in pairs], [("a", "x", 0.123456789), ("b", "y", 2.0)])
			second = write_document_alignment(Path(tmp) / "two.tsv", DocumentAlignment(pairs=tuple(pairs)))
			self.assertEqual(first.read_bytes(), second.read_bytes())
			self.assertEqual(first.read_text(encoding="utf-8"), "a\tx\t0.123456789\nb\ty\t2.000000000\n")
