from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from core.exceptions import DataFormatError, LexiconDirectionError
from core.files import atomic_write_lines
from corpus.tokenization import tokenize

logger = logging.getLogger(__name__)

MAX_PHRASE_TOKENS = 5

Phrase = tuple[str, ...]


@dataclass(frozen=True)
class BilingualLexicon:
	"""Directed phrase table: source phrase -> target phrases, in first-seen order.

	Phrases are token tuples (1..5 tokens, case-folded). `skipped` counts input rows that
	were dropped for exceeding the phrase-length limit.
	"""

	src_lang: str
	tgt_lang: str
	entries: Mapping[Phrase, tuple[Phrase, ...]] = field(default_factory=dict)
	skipped: int = 0

	def __post_init__(self):
		frozen = {}
		for src, targets in self.entries.items():
			src = tuple(src)
			_check_phrase(src)
			unique = tuple(dict.fromkeys(tuple(t) for t in targets))
			for tgt in unique:
				_check_phrase(tgt)
			frozen[src] = unique
		object.__setattr__(self, "entries", MappingProxyType(frozen))
		object.__setattr__(self, "max_key_len", max((len(k) for k in frozen), default=0))

	def __len__(self) -> int:
		return len(self.entries)

	def __contains__(self, phrase: object) -> bool:
		return phrase in self.entries

	def translations(self, phrase: Sequence[str]) -> tuple[Phrase, ...]:
		return self.entries.get(tuple(phrase), ())

	@property
	def direction(self) -> tuple[str, str]:
		return (self.src_lang, self.tgt_lang)

	@property
	def pair_count(self) -> int:
		return sum(len(targets) for targets in self.entries.values())

	def inverted(self) -> "BilingualLexicon":
		flipped: dict[Phrase, list[Phrase]] = {}
		for src, targets in self.entries.items():
			for tgt in targets:
				flipped.setdefault(tgt, []).append(src)
		return BilingualLexicon(self.tgt_lang, self.src_lang, flipped)


def _check_phrase(phrase: Phrase) -> None:
	if not 1 <= len(phrase) <= MAX_PHRASE_TOKENS:
		raise ValueError(f"phrase {phrase!r} must have 1-{MAX_PHRASE_TOKENS} tokens")
	if any(not token for token in phrase):
		raise ValueError(f"phrase {phrase!r} contains an empty token")


@dataclass(frozen=True)
class PhrasePairs:
	"""Parallel phrase pairs of unrestricted length, e.g. a sentence glossary."""

	src_lang: str
	tgt_lang: str
	pairs: tuple[tuple[Phrase, Phrase], ...] = ()

	def __len__(self) -> int:
		return len(self.pairs)


def _read_pairs(path: str | Path) -> Iterable[tuple[int, Phrase, Phrase]]:
	with open(path, encoding="utf-8") as fh:
		for line_no, raw in enumerate(fh, start=1):
			line = raw.rstrip("\r\n")
			if not line.strip() or line.lstrip().startswith("#"):
				continue
			if line.count("\t") != 1:
				raise DataFormatError("expected exactly one tab (source<TAB>target)", path=path, line=line_no)
			src_text, tgt_text = line.split("\t")
			src, tgt = tuple(tokenize(src_text)), tuple(tokenize(tgt_text))
			if not src or not tgt:
				raise DataFormatError("empty source or target phrase", path=path, line=line_no)
			yield line_no, src, tgt


def load_lexicon(path: str | Path, src_lang: str, tgt_lang: str, max_len: int = MAX_PHRASE_TOKENS) -> BilingualLexicon:
	"""Load a two-column TSV lexicon; repeated source phrases merge their targets."""
	entries: dict[Phrase, list[Phrase]] = {}
	skipped = 0
	rows = 0
	for line_no, src, tgt in _read_pairs(path):
		if len(src) > max_len or len(tgt) > max_len:
			skipped += 1
			logger.debug("%s:%s: phrase longer than %s tokens, skipped", path, line_no, max_len)
			continue
		entries.setdefault(src, []).append(tgt)
		rows += 1
	if skipped:
		logger.warning("%s: skipped %s rows with phrases longer than %s tokens", path, skipped, max_len)
	logger.info("%s: %s rows ingested into %s entries", path, rows, len(entries))
	return BilingualLexicon(src_lang, tgt_lang, entries, skipped=skipped)


def load_phrase_pairs(path: str | Path, src_lang: str, tgt_lang: str) -> PhrasePairs:
	return PhrasePairs(src_lang, tgt_lang, tuple((src, tgt) for _, src, tgt in _read_pairs(path)))


def merge_lexicons(parts: Sequence[BilingualLexicon]) -> BilingualLexicon:
	"""Union of entries; target sets are unioned per source phrase, first-seen order kept."""
	if not parts:
		raise ValueError("merge_lexicons needs at least one lexicon")
	direction = parts[0].direction
	merged: dict[Phrase, list[Phrase]] = {}
	for part in parts:
		if part.direction != direction:
			raise LexiconDirectionError(
				f"cannot merge {part.src_lang}->{part.tgt_lang} into {direction[0]}->{direction[1]}"
			)
		for src, targets in part.entries.items():
			merged.setdefault(src, []).extend(targets)
	return BilingualLexicon(direction[0], direction[1], merged, skipped=sum(p.skipped for p in parts))


def write_lexicon(path: str | Path, lexicon: BilingualLexicon) -> Path:
	return atomic_write_lines(
		path,
		(
			f"{' '.join(src)}\t{' '.join(tgt)}"
			for src, targets in lexicon.entries.items()
			for tgt in targets
		),
	)
