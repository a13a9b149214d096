import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import DataFormatError, LexiconDirectionError

from .improve import build_improved_lexicon, glossary_residue
from .matching import LexiconWeighting, count_matches_phrase, count_matches_single, load_weighting
from .tables import BilingualLexicon, PhrasePairs, load_lexicon, load_phrase_pairs, merge_lexicons, write_lexicon
from .weights import doc_pair_weight, sent_pair_weight


def lex(entries, src="en", tgt="si"):
	return BilingualLexicon(
		src,
		tgt,
		{tuple(k.split()): [tuple(v.split()) for v in vs] for k, vs in entries.items()},
	)


def single_oracle(a, b, entries, count_init=1):
	remaining = list(b)
	count = count_init
	for word in a:
		for translation in entries.get((word,), ()):
			if len(translation) == 1 and translation[0] in remaining:
				remaining.remove(translation[0])
				count += 1
				break
	return count, tuple(remaining)


def phrase_oracle(a, b, entries, max_len=5, count_init=1, consume_source=True):
	spans = sorted(
		((start, n) for n in range(1, min(max_len, len(a)) + 1) for start in range(len(a) - n + 1)),
		key=lambda span: (-span[1], span[0]),
	)
	a_used, b_used = set(), set()
	count = count_init
	for start, n in spans:
		a_span = set(range(start, start + n))
		if consume_source and a_span & a_used:
			continue
		for translation in entries.get(tuple(a[start:start + n]), ()):
			hits = [
				j
				for j in range(len(b) - len(translation) + 1)
				if tuple(b[j:j + len(translation)]) == translation
				and not set(range(j, j + len(translation))) & b_used
			]
			if hits:
				b_used |= set(range(hits[0], hits[0] + len(translation)))
				if consume_source:
					a_used |= a_span
				count += 1
				break
	return count, tuple(tok for j, tok in enumerate(b) if j not in b_used)


class LoadLexiconTests(SimpleTestCase):
	def setUp(self):
		self.tmp = tempfile.TemporaryDirectory()
		self.addCleanup(self.tmp.cleanup)
		self.dir = Path(self.tmp.name)

	def write(self, name, text):
		path = self.dir / name
		path.write_text(text, encoding="utf-8")
		return path

	def test_repeated_source_keys_merge(self):
		path = self.write("lex.tsv", "a\tx\na\ty\nB C\tZ\na\tx\n")
		table = load_lexicon(path, "en", "si")
		self.assertEqual(table.translations(["a"]), (("x",), ("y",)))
		self.assertEqual(table.translations(["b", "c"]), (("z",),))
		self.assertEqual(len(table), 2)
		self.assertEqual(table.pair_count, 3)

	def test_long_rows_are_skipped(self):
		path = self.write("lex.tsv", "one two three four five six\tx\na\tx\n")
		table = load_lexicon(path, "en", "si")
		self.assertEqual(table.skipped, 1)
		self.assertEqual(list(table.entries), [("a",)])

	def test_malformed_rows(self):
		with self.assertRaises(DataFormatError) as ctx:
			load_lexicon(self.write("notab.tsv", "a\tx\nno tab here\n"), "en", "si")
		self.assertEqual(ctx.exception.line, 2)
		with self.assertRaises(DataFormatError):
			load_lexicon(self.write("twotabs.tsv", "a\tx\ty\n"), "en", "si")
		with self.assertRaises(DataFormatError):
			load_lexicon(self.write("empty.tsv", "a\t ...\n"), "en", "si")

	def test_glossary_has_no_length_limit(self):
		pairs = load_phrase_pairs(self.write("g.tsv", "a b c d e f g\tx y\n"), "en", "si")
		self.assertEqual(len(pairs.pairs[0][0]), 7)

	def test_write_then_load(self):
		table = lex({"a": ["x", "y"], "b c": ["z"]})
		loaded = load_lexicon(write_lexicon(self.dir / "out.tsv", table), "en", "si")
		self.assertEqual(dict(loaded.entries), dict(table.entries))

	def test_load_weighting_without_files(self):
		self.assertIsNone(load_weighting([], [], "en", "si"))


class MergeTests(SimpleTestCase):
	def test_union_per_key(self):
		merged = merge_lexicons([lex({"a": ["x"]}), lex({"a": ["y"], "b": ["z"]})])
		self.assertEqual(dict(merged.entries), dict(lex({"a": ["x", "y"], "b": ["z"]}).entries))

	def test_single_part_is_identity(self):
		part = lex({"a": ["x"], "b c": ["y z"]})
		self.assertEqual(dict(merge_lexicons([part]).entries), dict(part.entries))

	def test_direction_mismatch(self):
		with self.assertRaises(LexiconDirectionError):
			merge_lexicons([lex({"a": ["x"]}), lex({"x": ["a"]}, "si", "en")])

	def test_inverted(self):
		inv = lex({"a": ["x"], "b": ["x", "y"]}).inverted()
		self.assertEqual(inv.direction, ("si", "en"))
		self.assertEqual(inv.translations(["x"]), (("a",), ("b",)))


class SingleMatchTests(SimpleTestCase):
	def test_name_match(self):
		res = count_matches_single(["john", "went", "home"], ["x", "y"], lex({"john": ["x"]}))
		self.assertEqual(res.count, 2)
		self.assertEqual(res.residue, ("y",))
		self.assertEqual(res.matches, (((0, 1), (0, 1)),))

	def test_no_keys(self):
		self.assertEqual(count_matches_single(["a", "b"], ["x"], lex({"q": ["x"]})).count, 1)

	def test_occurrence_is_consumed(self):
		self.assertEqual(count_matches_single(["john", "john"], ["x"], lex({"john": ["x"]})).count, 2)

	def test_caller_lists_untouched(self):
		a, b = ["john"], ["x"]
		count_matches_single(a, b, lex({"john": ["x"]}))
		self.assertEqual((a, b), (["john"], ["x"]))

	def test_count_init_zero(self):
		self.assertEqual(count_matches_single(["a"], ["x"], lex({"a": ["x"]}), count_init=0).count, 1)


class PhraseMatchTests(SimpleTestCase):
	def test_longest_span_first(self):
		table = lex({"major general": ["mg"], "major": ["maj"]})
		res = count_matches_phrase(["major", "general", "silva"], ["mg", "silva2", "maj"], table)
		self.assertEqual(res.count, 2)
		self.assertEqual(res.matches, (((0, 2), (0, 1)),))

	def test_keep_source_spans(self):
		table = lex({"major general": ["mg"], "major": ["maj"]})
		res = count_matches_phrase(["major", "general"], ["mg", "maj"], table, consume_source=False)
		self.assertEqual(res.count, 3)

	def test_empty_lexicon(self):
		self.assertEqual(count_matches_phrase(["a", "b"], ["x"], lex({})).count, 1)

	def test_multi_token_translation_must_be_contiguous(self):
		table = lex({"a": ["x y"]})
		self.assertEqual(count_matches_phrase(["a"], ["x", "q", "y"], table).count, 1)
		self.assertEqual(count_matches_phrase(["a"], ["q", "x", "y"], table).residue, ("q",))

	def test_max_len_limits_spans(self):
		table = lex({"a b": ["x"]})
		self.assertEqual(count_matches_phrase(["a", "b"], ["x"], table, max_len=1).count, 1)


class MatchingOracleTests(SimpleTestCase):
	SRC = ["a", "b", "c", "d"]
	TGT = ["w", "x", "y", "z"]

	def random_case(self, rng):
		entries = {}
		for _ in range(int(rng.integers(0, 11))):
			key = tuple(rng.choice(self.SRC, size=int(rng.integers(1, 4))))
			value = tuple(rng.choice(self.TGT, size=int(rng.integers(1, 3))))
			entries.setdefault(key, []).append(value)
		table = BilingualLexicon("en", "si", entries)
		a = list(rng.choice(self.SRC, size=int(rng.integers(0, 9))))
		b = list(rng.choice(self.TGT, size=int(rng.integers(0, 9))))
		return [str(t) for t in a], [str(t) for t in b], table

	def test_single_matches_oracle(self):
		rng = np.random.default_rng(11)
		for _ in range(1000):
			a, b, table = self.random_case(rng)
			res = count_matches_single(a, b, table)
			self.assertEqual((res.count, res.residue), single_oracle(a, b, table.entries))
			self.assertLessEqual(res.count, 1 + len(a))

	def test_phrase_matches_oracle(self):
		rng = np.random.default_rng(12)
		for i in range(1000):
			a, b, table = self.random_case(rng)
			consume = i % 2 == 0
			res = count_matches_phrase(a, b, table, consume_source=consume)
			self.assertEqual((res.count, res.residue), phrase_oracle(a, b, table.entries, consume_source=consume))

	def test_unigram_lexicons_agree(self):
		rng = np.random.default_rng(13)
		for _ in range(300):
			entries = {(str(rng.choice(self.SRC)),): [(str(rng.choice(self.TGT)),)] for _ in range(int(rng.integers(0, 5)))}
			table = BilingualLexicon("en", "si", entries)
			a = [str(t) for t in rng.choice(self.SRC, size=int(rng.integers(0, 5)))]
			b = [str(t) for t in rng.choice(self.TGT, size=int(rng.integers(0, 9)))]
			self.assertEqual(count_matches_phrase(a, b, table).count, count_matches_single(a, b, table).count)


class WeightTests(SimpleTestCase):
	def test_examples(self):
		self.assertEqual(doc_pair_weight(1, 4), 0.75)
		self.assertAlmostEqual(doc_pair_weight(2, 3), 1 / 3, places=15)
		self.assertAlmostEqual(doc_pair_weight(10, 3), 1 / 3, places=15)
		self.assertEqual(sent_pair_weight(2, 4), 2.0)
		self.assertAlmostEqual(sent_pair_weight(1, 4), 4 / 3, places=15)
		self.assertEqual(doc_pair_weight(5, 1), 1.0)
		self.assertEqual(sent_pair_weight(5, 1), 1.0)

	def test_weights_are_inverse(self):
		for n in range(1, 51):
			for c in range(n):
				self.assertAlmostEqual(doc_pair_weight(c, n) * sent_pair_weight(c, n), 1.0, delta=1e-12)

	def test_clamped_ranges(self):
		for n in range(1, 20):
			for c in range(0, 3 * n):
				self.assertTrue(0.0 < doc_pair_weight(c, n) <= 1.0)
				self.assertTrue(1.0 <= sent_pair_weight(c, n) <= n)


class WeightingTests(SimpleTestCase):
	def test_counts_of_both_lexicons_are_summed(self):
		weighting = LexiconWeighting(names=lex({"john": ["x"]}), phrases=lex({"home": ["y"]}))
		# names: 1 + 1, phrases: 1 + 1
		self.assertEqual(weighting.count(["john", "went", "home"], ["x", "y"]), 4)
		self.assertEqual(weighting.distance_weight(["john", "went", "home"], ["x", "y"]), 1 / 3)

	def test_without_lexicons_only_init_counts(self):
		self.assertEqual(LexiconWeighting(count_init=1).count(["a"], ["b"]), 1)
		self.assertEqual(LexiconWeighting(count_init=0).similarity_weight(["a", "b"], ["c"]), 1.0)

	def test_direction(self):
		weighting = LexiconWeighting(phrases=lex({"a": ["x"]}))
		weighting.check_direction("en", "si")
		with self.assertRaises(LexiconDirectionError):
			weighting.check_direction("si", "en")
		weighting.inverted().check_direction("si", "en")
		with self.assertRaises(LexiconDirectionError):
			LexiconWeighting(names=lex({"a": ["x"]}), phrases=lex({"x": ["a"]}, "si", "en"))

	def test_count_init_must_be_binary(self):
		with self.assertRaises(ValueError):
			LexiconWeighting(count_init=2)


class ImprovedLexiconTests(SimpleTestCase):
	def glossary(self, *pairs):
		return PhrasePairs("en", "si", tuple((tuple(s.split()), tuple(t.split())) for s, t in pairs))

	def test_residue_becomes_entry(self):
		improved = build_improved_lexicon(self.glossary(("a b", "x y")), lex({"a": ["x"]}))
		self.assertEqual(improved.translations(["b"]), (("y",),))
		self.assertEqual(improved.translations(["a"]), (("x",),))

	def test_fully_covered_pair_adds_nothing(self):
		words = lex({"a": ["x"], "b": ["y"]})
		improved = build_improved_lexicon(self.glossary(("a b", "y x")), words)
		self.assertEqual(dict(improved.entries), dict(words.entries))

	def test_unrelated_pair_added_verbatim(self):
		improved = build_improved_lexicon(self.glossary(("p q", "r s t")), lex({"a": ["x"]}))
		self.assertEqual(improved.translations(["p", "q"]), (("r", "s", "t"),))

	def test_long_residue_is_discarded(self):
		improved = build_improved_lexicon(self.glossary(("a b c d e f g", "x y")), lex({"a": ["x"]}))
		self.assertEqual(len(improved), 1)

	def test_one_occurrence_per_hit(self):
		self.assertEqual(glossary_residue(("a", "a"), ("x",), lex({"a": ["x"]})), (("a",), ()))

	def test_direction_mismatch(self):
		with self.assertRaises(LexiconDirectionError):
			build_improved_lexicon(self.glossary(("a", "x")), lex({"x": ["a"]}, "si", "en"))
