import math
import tempfile
from datetime import date
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import DataFormatError, DegenerateScoreError, DimensionError, EmptyInputError
from corpus.loaders import SourceDocument, corpus_from_documents
from embedstore.matrix import EmbeddingMatrix
from embedstore.metrics import cosine_matrix
from lexicon.matching import LexiconWeighting
from lexicon.tables import BilingualLexicon

from .candidates import document_scope, generate_candidates
from .margin import margin_score, margin_scores, subsample_by_budget
from .pairfiles import read_scored_pairs, write_scored_pairs
from .strategies import (
	ScoredPair,
	SentenceAlignment,
	Strategy,
	align_sentences,
	apply_threshold,
	backward_align,
	forward_align,
	intersect,
)

DAY = date(2020, 1, 1)


def corpus(lang, texts, per_doc=None):
	per_doc = per_doc or max(1, len(texts))
	docs = [
		SourceDocument(f"{lang}{i // per_doc}", DAY, texts[i:i + per_doc])
		for i in range(0, len(texts), per_doc)
	]
	return corpus_from_documents(lang, docs)


def plain(lang, n, per_doc=None):
	return corpus(lang, [f"{lang} sentence {i}" for i in range(n)], per_doc)


def unit(angle):
	return [math.cos(angle), math.sin(angle)]


class ForwardAlignTests(SimpleTestCase):
	def test_argmax_cosine(self):
		aln = forward_align(plain("en", 1), plain("si", 2), EmbeddingMatrix(np.array([[1.0, 0.0]])), EmbeddingMatrix(np.eye(2)))
		self.assertEqual(aln.pairs, (ScoredPair(0, 0, 1.0),))

	def test_lexicon_weight_can_promote_second_candidate(self):
		src = corpus("en", ["alpha beta gamma"])
		tgt = corpus("si", ["nothing here", "ALFA here"])
		src_emb = EmbeddingMatrix(np.array([[1.0, 0.0]]))
		tgt_emb = EmbeddingMatrix(np.array([[0.8, 0.6], [0.78, math.sqrt(1 - 0.78 ** 2)]]))
		lex = LexiconWeighting(phrases=BilingualLexicon("en", "si", {("alpha",): [("alfa",)]}), count_init=0)

		sets = generate_candidates(src, tgt, src_emb, tgt_emb, k=2, lex=lex)
		weights = {c.tgt_sid: c.weight for c in sets[0].candidates}
		self.assertEqual(weights, {0: 1.0, 1: 1.5})
		self.assertEqual(sets[0].best.tgt_sid, 1)
		self.assertAlmostEqual(sets[0].best.score, 1.17, delta=1e-12)
		for cand in sets[0].candidates:
			self.assertAlmostEqual(cand.score, cand.cosine * cand.weight, delta=1e-12)

		baseline = forward_align(src, tgt, src_emb, tgt_emb, k=2)
		self.assertEqual(baseline.pairs[0].tgt_sid, 0)

	def test_chosen_target_is_among_top_k_cosines(self):
		rng = np.random.default_rng(2)
		src, tgt = plain("en", 20), plain("si", 30)
		src_emb = EmbeddingMatrix(rng.standard_normal((20, 6)))
		tgt_emb = EmbeddingMatrix(rng.standard_normal((30, 6)))
		lex = LexiconWeighting(phrases=BilingualLexicon("en", "si", {("en",): [("si",)], ("3",): [("7",)]}))
		table = cosine_matrix(src_emb.values, tgt_emb.values)
		for pair in forward_align(src, tgt, src_emb, tgt_emb, k=4, lex=lex).pairs:
			top = sorted(range(30), key=lambda j: (-table[pair.src_sid, j], j))[:4]
			self.assertIn(pair.tgt_sid, top)

	def test_empty_target_side(self):
		empty = corpus_from_documents("si", [])
		with self.assertRaises(EmptyInputError):
			forward_align(plain("en", 1), empty, EmbeddingMatrix(np.ones((1, 2))), EmbeddingMatrix(np.ones((0, 2))))

	def test_row_mismatch(self):
		with self.assertRaises(DimensionError):
			forward_align(plain("en", 2), plain("si", 2), EmbeddingMatrix(np.ones((1, 2))), EmbeddingMatrix(np.ones((2, 2))))


class StrategyTests(SimpleTestCase):
	def random_instance(self, rng):
		n, m = (int(v) for v in rng.integers(1, 25, size=2))
		return (
			plain("en", n),
			plain("si", m),
			EmbeddingMatrix(rng.standard_normal((n, 5))),
			EmbeddingMatrix(rng.standard_normal((m, 5))),
		)

	def test_strategy_algebra(self):
		rng = np.random.default_rng(6)
		for _ in range(50):
			src, tgt, src_emb, tgt_emb = self.random_instance(rng)
			fwd = forward_align(src, tgt, src_emb, tgt_emb)
			bwd = backward_align(src, tgt, src_emb, tgt_emb)
			both = align_sentences(Strategy.INTERSECTION, src, tgt, src_emb, tgt_emb)
			self.assertEqual(sorted(p.src_sid for p in fwd.pairs), list(range(src.sentence_count)))
			self.assertEqual(sorted(p.tgt_sid for p in bwd.pairs), list(range(tgt.sentence_count)))
			self.assertLessEqual(both.pair_set(), fwd.pair_set())
			self.assertLessEqual(both.pair_set(), bwd.pair_set())
			self.assertEqual(both.pair_set(), fwd.pair_set() & bwd.pair_set())

	def test_backward_is_swapped_forward(self):
		rng = np.random.default_rng(10)
		src, tgt = plain("en", 12), plain("si", 9)
		src_emb = EmbeddingMatrix(rng.standard_normal((12, 4)))
		tgt_emb = EmbeddingMatrix(rng.standard_normal((9, 4)))
		lex = LexiconWeighting(phrases=BilingualLexicon("en", "si", {("sentence",): [("sentence",)], ("en",): [("si",)]}))
		bwd = align_sentences(Strategy.BACKWARD, src, tgt, src_emb, tgt_emb, lex=lex)
		swapped = forward_align(tgt, src, tgt_emb, src_emb, lex=lex.inverted())
		self.assertEqual(set(bwd.pairs), {ScoredPair(p.tgt_sid, p.src_sid, p.score) for p in swapped.pairs})

	def test_single_target_gives_one_backward_pair(self):
		rng = np.random.default_rng(1)
		bwd = backward_align(plain("en", 7), plain("si", 1), EmbeddingMatrix(rng.standard_normal((7, 3))), EmbeddingMatrix(rng.standard_normal((1, 3))))
		self.assertEqual(len(bwd), 1)
		self.assertEqual(bwd.pairs[0].tgt_sid, 0)

	def test_intersect(self):
		fwd = SentenceAlignment(Strategy.FORWARD, (ScoredPair(0, 1, 0.9),))
		self.assertEqual(intersect(fwd, SentenceAlignment(Strategy.BACKWARD, (ScoredPair(0, 1, 0.5),))).pairs, (ScoredPair(0, 1, 0.9),))
		self.assertEqual(intersect(fwd, SentenceAlignment(Strategy.BACKWARD, (ScoredPair(0, 2, 0.5),))).pairs, ())

	def test_pairs_ranked_by_score(self):
		rng = np.random.default_rng(3)
		aln = forward_align(plain("en", 15), plain("si", 15), EmbeddingMatrix(rng.standard_normal((15, 4))), EmbeddingMatrix(rng.standard_normal((15, 4))))
		keys = [(-p.score, p.src_sid, p.tgt_sid) for p in aln.pairs]
		self.assertEqual(keys, sorted(keys))

	def test_workers_do_not_change_result(self):
		rng = np.random.default_rng(4)
		src, tgt = plain("en", 600), plain("si", 500)
		src_emb = EmbeddingMatrix(rng.standard_normal((600, 8)))
		tgt_emb = EmbeddingMatrix(rng.standard_normal((500, 8)))
		lex = LexiconWeighting(phrases=BilingualLexicon("en", "si", {("1",): [("1",)]}))
		self.assertEqual(
			forward_align(src, tgt, src_emb, tgt_emb, lex=lex, workers=1),
			forward_align(src, tgt, src_emb, tgt_emb, lex=lex, workers=8),
		)

	def test_unknown_strategy(self):
		with self.assertRaises(ValueError):
			align_sentences("sideways", plain("en", 1), plain("si", 1), EmbeddingMatrix(np.ones((1, 2))), EmbeddingMatrix(np.ones((1, 2))))


class NeutralLexiconTests(SimpleTestCase):
	def test_empty_lexicon_keeps_baseline_pairs(self):
		rng = np.random.default_rng(42)
		src, tgt = plain("en", 80), plain("si", 90)
		src_emb = EmbeddingMatrix(rng.standard_normal((80, 16)))
		tgt_emb = EmbeddingMatrix(rng.standard_normal((90, 16)))
		baseline = forward_align(src, tgt, src_emb, tgt_emb).pair_set()
		empty = BilingualLexicon("en", "si", {})
		for count_init in (0, 1):
			lex = LexiconWeighting(phrases=empty, names=empty, count_init=count_init)
			self.assertEqual(forward_align(src, tgt, src_emb, tgt_emb, lex=lex).pair_set(), baseline)


class ScopeTests(SimpleTestCase):
	def test_candidates_stay_inside_aligned_documents(self):
		rng = np.random.default_rng(12)
		src = plain("en", 6, per_doc=3)
		tgt = plain("si", 6, per_doc=3)
		src_emb = EmbeddingMatrix(rng.standard_normal((6, 4)))
		tgt_emb = EmbeddingMatrix(rng.standard_normal((6, 4)))
		scope = document_scope(src, tgt, [("en0", "si1"), ("en1", "si0")])
		self.assertEqual(scope, [([0, 1, 2], [3, 4, 5]), ([3, 4, 5], [0, 1, 2])])
		for pair in forward_align(src, tgt, src_emb, tgt_emb, scope=scope).pairs:
			self.assertEqual(pair.src_sid // 3, 1 - pair.tgt_sid // 3)
		for pair in backward_align(src, tgt, src_emb, tgt_emb, scope=scope).pairs:
			self.assertEqual(pair.src_sid // 3, 1 - pair.tgt_sid // 3)

	def test_unknown_document(self):
		with self.assertRaises(DataFormatError):
			document_scope(plain("en", 2), plain("si", 2), [("en0", "nope")])


class ThresholdTests(SimpleTestCase):
	def setUp(self):
		self.aln = SentenceAlignment(Strategy.FORWARD, (ScoredPair(0, 0, 0.9), ScoredPair(1, 1, 0.5)))

	def test_threshold(self):
		self.assertEqual(apply_threshold(self.aln, -math.inf), self.aln)
		self.assertEqual(len(apply_threshold(self.aln, 0.95)), 0)
		self.assertEqual(apply_threshold(self.aln, 0.7).pairs, (ScoredPair(0, 0, 0.9),))
		self.assertEqual(len(apply_threshold(self.aln, 0.5)), 2)


class MarginTests(SimpleTestCase):
	def test_single_pair_is_one(self):
		x = EmbeddingMatrix(np.array([[1.0, 2.0]]))
		y = EmbeddingMatrix(np.array([[2.0, 0.5]]))
		self.assertAlmostEqual(margin_score((0, 0), x, y, k=1), 1.0, delta=1e-12)
		self.assertAlmostEqual(margin_score((0, 0), x, y, k=4), 1.0, delta=1e-12)

	def test_matches_direct_arithmetic(self):
		src = EmbeddingMatrix(np.array([unit(0.0), unit(0.3), unit(1.2)]))
		tgt = EmbeddingMatrix(np.array([unit(0.1), unit(0.9), unit(1.5)]))
		table = cosine_matrix(src.values, tgt.values)
		pairs = [(0, 0), (1, 1), (2, 2), (2, 0)]
		for (s, t), score in zip(pairs, margin_scores(pairs, src, tgt, k=2)):
			left = sum(sorted(table[s, :], reverse=True)[:2]) / 4
			right = sum(sorted(table[:, t], reverse=True)[:2]) / 4
			self.assertAlmostEqual(score, table[s, t] / (left + right), delta=1e-12)

	def test_scale_invariance(self):
		rng = np.random.default_rng(0)
		src, tgt = rng.standard_normal((10, 5)), rng.standard_normal((8, 5))
		pairs = [(i, i % 8) for i in range(10)]
		base = margin_scores(pairs, EmbeddingMatrix(src), EmbeddingMatrix(tgt))
		scaled = margin_scores(pairs, EmbeddingMatrix(src * 2), EmbeddingMatrix(tgt * 2))
		np.testing.assert_allclose(base, scaled, atol=1e-12)

	def test_degenerate_denominator(self):
		with self.assertRaises(DegenerateScoreError):
			margin_score((0, 0), EmbeddingMatrix(np.array([[1.0, 0.0]])), EmbeddingMatrix(np.array([[0.0, 1.0]])), k=1)

	def test_pair_outside_matrix(self):
		with self.assertRaises(DimensionError):
			margin_scores([(0, 5)], EmbeddingMatrix(np.eye(2)), EmbeddingMatrix(np.eye(2)))


class SubsampleTests(SimpleTestCase):
	def setUp(self):
		self.tgt = corpus("si", ["a b c d e"] * 4)
		self.pairs = [ScoredPair(i, i, score) for i, score in enumerate([0.5, 0.9, 0.7, 0.9])]

	def test_crossing_pair_is_kept(self):
		self.assertEqual(subsample_by_budget(self.pairs, 10, self.tgt), [ScoredPair(1, 1, 0.9), ScoredPair(3, 3, 0.9)])
		self.assertEqual(subsample_by_budget(self.pairs, 11, self.tgt)[-1], ScoredPair(2, 2, 0.7))

	def test_budget_one(self):
		self.assertEqual(subsample_by_budget(self.pairs, 1, self.tgt), [ScoredPair(1, 1, 0.9)])

	def test_large_budget_keeps_everything(self):
		self.assertEqual(len(subsample_by_budget(self.pairs, 10 ** 6, self.tgt)), 4)


class PairFileTests(SimpleTestCase):
	def test_round_trip(self):
		pairs = [ScoredPair(3, 1, 0.8765432101), ScoredPair(0, 2, -0.25)]
		with tempfile.TemporaryDirectory() as tmp:
			first = write_scored_pairs(Path(tmp) / "a.tsv", pairs)
			back = read_scored_pairs(first)
			self.assertEqual(back, [ScoredPair(3, 1, 0.87654321), ScoredPair(0, 2, -0.25)])
			second = write_scored_pairs(Path(tmp) / "b.tsv", back)
			self.assertEqual(first.read_bytes(), second.read_bytes())

	def test_emit_text(self):
		src = corpus("en", ["Hello\tthere  world", "x"])
		tgt = corpus("si", ["Ayubowan"])
		with tempfile.TemporaryDirectory() as tmp:
			path = write_scored_pairs(Path(tmp) / "t.tsv", [ScoredPair(0, 0, 1.0)], src, tgt, emit_text=True)
			self.assertEqual(path.read_text(encoding="utf-8"), "0\t0\t1.000000000\tHello there world\tAyubowan\n")

	def test_bad_rows(self):
		with tempfile.TemporaryDirectory() as tmp:
			path = Path(tmp) / "bad.tsv"
			path.write_text("0\t1\tnot-a-number\n", encoding="utf-8")
			with self.assertRaises(DataFormatError):
				read_scored_pairs(path)
