from __future__ import annotations

import logging

from core.exceptions import LexiconDirectionError

from .tables import MAX_PHRASE_TOKENS, BilingualLexicon, Phrase, PhrasePairs, merge_lexicons

logger = logging.getLogger(__name__)


def glossary_residue(src: Phrase, tgt: Phrase, words: BilingualLexicon) -> tuple[Phrase, Phrase]:
	"""Remove every dictionary word pair found in a glossary pair, one occurrence per hit."""
	src_left = list(src)
	tgt_left = list(tgt)
	for word in src:
		for translation in words.translations((word,)):
			if len(translation) != 1 or translation[0] not in tgt_left:
				continue
			src_left.remove(word)
			tgt_left.remove(translation[0])
			break
	return tuple(src_left), tuple(tgt_left)


def build_improved_lexicon(
	glossary: PhrasePairs,
	words: BilingualLexicon,
	max_len: int = MAX_PHRASE_TOKENS,
) -> BilingualLexicon:
	"""Grow a word dictionary with the leftovers of glossary pairs.

	For each glossary pair the known word translations are subtracted from both sides;
	when both residues are non-empty and at most `max_len` tokens long, the residue pair
	becomes a new entry. Longer residues are discarded, never truncated.
	"""
	if (glossary.src_lang, glossary.tgt_lang) != words.direction:
		raise LexiconDirectionError(
			f"glossary {glossary.src_lang}->{glossary.tgt_lang} does not match "
			f"dictionary {words.src_lang}->{words.tgt_lang}"
		)
	found: dict[Phrase, list[Phrase]] = {}
	too_long = 0
	for src, tgt in glossary.pairs:
		src_left, tgt_left = glossary_residue(src, tgt, words)
		if not src_left or not tgt_left:
			continue
		if len(src_left) > max_len or len(tgt_left) > max_len:
			too_long += 1
			continue
		found.setdefault(src_left, []).append(tgt_left)
	logger.info("glossary yielded %s new entries (%s residues too long)", len(found), too_long)
	extra = BilingualLexicon(words.src_lang, words.tgt_lang, found)
	return merge_lexicons([words, extra])
