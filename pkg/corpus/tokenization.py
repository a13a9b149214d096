from __future__ import annotations

import unicodedata


def _is_punct(ch: str) -> bool:
	return unicodedata.category(ch).startswith("P")


def _strip_punct(token: str) -> str:
	start, end = 0, len(token)
	while start < end and _is_punct(token[start]):
		start += 1
	while end > start and _is_punct(token[end - 1]):
		end -= 1
	return token[start:end]


def tokenize(text: str) -> list[str]:
	"""Split on Unicode whitespace, strip edge punctuation, case-fold, drop empties.

	The same rule is applied to every script so lexicon matching stays script-agnostic:
		"John went home."  ->  ["john", "went", "home"]
	"""
	tokens: list[str] = []
	for raw in (text or "").split():
		token = _strip_punct(raw.casefold())
		if token:
			tokens.append(token)
	return tokens
