from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from core.exceptions import DegenerateScoreError, DimensionError
from corpus.records import Corpus
from embedstore.matrix import EmbeddingMatrix
from embedstore.metrics import unit_rows
from embedstore.search import knn

from .candidates import DEFAULT_TOP_K
from .strategies import ScoredPair

logger = logging.getLogger(__name__)

_DEGENERATE = 1e-12


def _neighbourhood_means(queries: EmbeddingMatrix, rows: Sequence[int], index: EmbeddingMatrix, k: int, workers: int) -> dict[int, float]:
	k_eff = min(k, index.rows)
	hits = knn(queries, rows, index, k_eff, workers=workers)
	return {hit.query: float(np.sum([score for _, score in hit.neighbors])) / (2 * k_eff) for hit in hits}


def margin_scores(
	pairs: Sequence[tuple[int, int]],
	src_emb: EmbeddingMatrix,
	tgt_emb: EmbeddingMatrix,
	k: int = DEFAULT_TOP_K,
	workers: int = 1,
) -> list[float]:
	"""Ratio margin of each (src_sid, tgt_sid) pair.

	cos(x, y) divided by the sum of the mean cosine of x to its k nearest targets and of y
	to its k nearest sources, each mean taken over 2k. k is clamped to the rows available.
	"""
	if k < 1:
		raise ValueError("k must be >= 1")
	if not pairs:
		return []
	src_rows = sorted({int(s) for s, _ in pairs})
	tgt_rows = sorted({int(t) for _, t in pairs})
	if src_rows[0] < 0 or src_rows[-1] >= src_emb.rows or tgt_rows[0] < 0 or tgt_rows[-1] >= tgt_emb.rows:
		raise DimensionError("pair sentence ids fall outside the embedding matrices")
	src_side = _neighbourhood_means(src_emb, src_rows, tgt_emb, k, workers)
	tgt_side = _neighbourhood_means(tgt_emb, tgt_rows, src_emb, k, workers)

	x = unit_rows(src_emb.vectors([s for s, _ in pairs]))
	y = unit_rows(tgt_emb.vectors([t for _, t in pairs]))
	cosines = np.clip(np.einsum("ij,ij->i", x, y), -1.0, 1.0)

	scores = []
	for (s, t), cos in zip(pairs, cosines):
		denominator = src_side[int(s)] + tgt_side[int(t)]
		if abs(denominator) < _DEGENERATE:
			raise DegenerateScoreError(f"margin undefined for pair ({s}, {t}): neighbourhood similarity is zero")
		scores.append(float(cos) / denominator)
	return scores


def margin_score(pair: tuple[int, int], src_emb: EmbeddingMatrix, tgt_emb: EmbeddingMatrix, k: int = DEFAULT_TOP_K) -> float:
	return margin_scores([pair], src_emb, tgt_emb, k)[0]


def subsample_by_budget(pairs: Sequence[ScoredPair], budget_words: int, tgt: Corpus) -> list[ScoredPair]:
	"""Best-scored pairs until the target side reaches `budget_words` tokens.

	The pair that crosses the budget is kept, then selection stops.
	"""
	if budget_words < 1:
		raise ValueError("budget_words must be a positive integer")
	ranked = sorted(pairs, key=lambda p: (-p.score, p.src_sid, p.tgt_sid))
	chosen: list[ScoredPair] = []
	words = 0
	for pair in ranked:
		chosen.append(pair)
		words += len(tgt.sentences[pair.tgt_sid].tokens)
		if words >= budget_words:
			break
	logger.info("kept %s of %s pairs (%s target words, budget %s)", len(chosen), len(ranked), words, budget_words)
	return chosen
