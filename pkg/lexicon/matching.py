from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from core.exceptions import LexiconDirectionError

from .tables import MAX_PHRASE_TOKENS, BilingualLexicon, load_lexicon, merge_lexicons
from .weights import doc_pair_weight, sent_pair_weight

Span = tuple[int, int]


@dataclass(frozen=True)
class MatchResult:
	"""Counter of a matching pass: `count = count_init + len(matches)`.

	Spans are half-open token index ranges into the caller's A and B token lists;
	`residue` is what is left of B after consumption.
	"""

	count: int
	matches: tuple[tuple[Span, Span], ...] = ()
	residue: tuple[str, ...] = ()


def _find_span(tokens: Sequence[str], used: list[bool], phrase: Sequence[str]) -> int | None:
	n = len(phrase)
	for start in range(len(tokens) - n + 1):
		if any(used[start:start + n]):
			continue
		if all(tokens[start + i] == phrase[i] for i in range(n)):
			return start
	return None


def _result(count: int, matches: list, tokens_b: Sequence[str], b_used: list[bool]) -> MatchResult:
	residue = tuple(tok for tok, used in zip(tokens_b, b_used) if not used)
	return MatchResult(count=count, matches=tuple(matches), residue=residue)


def count_matches_single(
	tokens_a: Sequence[str],
	tokens_b: Sequence[str],
	lex: BilingualLexicon,
	count_init: int = 1,
) -> MatchResult:
	"""Single-word matching (person names).

	Each A token that is a one-token key looks for its translations in entry order; the
	first translation still present in B bumps the counter once and consumes one
	occurrence of it from B.
	"""
	b_used = [False] * len(tokens_b)
	count = count_init
	matches: list[tuple[Span, Span]] = []
	for i, word in enumerate(tokens_a):
		for translation in lex.translations((word,)):
			if len(translation) != 1:
				continue
			j = _find_span(tokens_b, b_used, translation)
			if j is None:
				continue
			b_used[j] = True
			count += 1
			matches.append(((i, i + 1), (j, j + 1)))
			break
	return _result(count, matches, tokens_b, b_used)


def count_matches_phrase(
	tokens_a: Sequence[str],
	tokens_b: Sequence[str],
	lex: BilingualLexicon,
	max_len: int = MAX_PHRASE_TOKENS,
	count_init: int = 1,
	consume_source: bool = True,
) -> MatchResult:
	"""Phrase matching (designations, word dictionary).

	Contiguous A n-grams are tried longest first, left to right within a length. A hit
	needs a translation that occurs as a contiguous run of unconsumed B tokens; it bumps
	the counter once and consumes both spans (the A span only with `consume_source`).
	"""
	a_used = [False] * len(tokens_a)
	b_used = [False] * len(tokens_b)
	count = count_init
	matches: list[tuple[Span, Span]] = []
	longest = min(max_len, len(tokens_a), lex.max_key_len)
	for n in range(longest, 0, -1):
		for start in range(len(tokens_a) - n + 1):
			if consume_source and any(a_used[start:start + n]):
				continue
			for translation in lex.translations(tokens_a[start:start + n]):
				j = _find_span(tokens_b, b_used, translation)
				if j is None:
					continue
				end_b = j + len(translation)
				b_used[j:end_b] = [True] * len(translation)
				if consume_source:
					a_used[start:start + n] = [True] * n
				count += 1
				matches.append(((start, start + n), (j, end_b)))
				break
	return _result(count, matches, tokens_b, b_used)


@dataclass(frozen=True)
class LexiconWeighting:
	"""Lexicon evidence for a sentence pair.

	`names` is matched word by word, `phrases` by n-grams; when both are present their raw
	counters are summed (each includes its own initialisation), then clamped once by the
	weight functions.
	"""

	names: BilingualLexicon | None = None
	phrases: BilingualLexicon | None = None
	count_init: int = 1
	max_len: int = MAX_PHRASE_TOKENS
	consume_source: bool = True
	_direction: tuple[str, str] = field(init=False, repr=False, compare=False)

	def __post_init__(self):
		if self.count_init not in (0, 1):
			raise ValueError("count_init must be 0 or 1")
		directions = {lex.direction for lex in (self.names, self.phrases) if lex is not None}
		if len(directions) > 1:
			raise LexiconDirectionError("name and phrase lexicons point in different directions")
		object.__setattr__(self, "_direction", directions.pop() if directions else ("", ""))

	@property
	def direction(self) -> tuple[str, str]:
		return self._direction

	def check_direction(self, src_lang: str, tgt_lang: str) -> None:
		if self.direction == ("", ""):
			return
		if self.direction != (src_lang, tgt_lang):
			raise LexiconDirectionError(
				f"lexicon direction {self.direction[0]}->{self.direction[1]} does not match "
				f"alignment direction {src_lang}->{tgt_lang}"
			)

	def inverted(self) -> "LexiconWeighting":
		return replace(
			self,
			names=self.names.inverted() if self.names is not None else None,
			phrases=self.phrases.inverted() if self.phrases is not None else None,
		)

	def count(self, tokens_a: Sequence[str], tokens_b: Sequence[str]) -> int:
		if self.names is None and self.phrases is None:
			return self.count_init
		total = 0
		if self.names is not None:
			total += count_matches_single(tokens_a, tokens_b, self.names, self.count_init).count
		if self.phrases is not None:
			total += count_matches_phrase(
				tokens_a,
				tokens_b,
				self.phrases,
				max_len=self.max_len,
				count_init=self.count_init,
				consume_source=self.consume_source,
			).count
		return total

	def distance_weight(self, tokens_a: Sequence[str], tokens_b: Sequence[str]) -> float:
		return doc_pair_weight(self.count(tokens_a, tokens_b), max(1, len(tokens_a)))

	def similarity_weight(self, tokens_a: Sequence[str], tokens_b: Sequence[str]) -> float:
		return sent_pair_weight(self.count(tokens_a, tokens_b), max(1, len(tokens_a)))


def load_weighting(
	names_paths: Sequence[str],
	phrase_paths: Sequence[str],
	src_lang: str,
	tgt_lang: str,
	count_init: int = 1,
	max_len: int = MAX_PHRASE_TOKENS,
	consume_source: bool = True,
) -> LexiconWeighting | None:
	"""Build the weighting from lexicon files; None when no file is given."""
	if not names_paths and not phrase_paths:
		return None

	def merged(paths: Sequence[str]) -> BilingualLexicon | None:
		if not paths:
			return None
		return merge_lexicons([load_lexicon(p, src_lang, tgt_lang, max_len) for p in paths])

	return LexiconWeighting(
		names=merged(names_paths),
		phrases=merged(phrase_paths),
		count_init=count_init,
		max_len=max_len,
		consume_source=consume_source,
	)
