from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from django.db import models

from corpus.records import Corpus
from embedstore.matrix import EmbeddingMatrix
from lexicon.matching import LexiconWeighting

from .candidates import DEFAULT_TOP_K, ScopeBlock, generate_candidates

logger = logging.getLogger(__name__)


class Strategy(models.TextChoices):
	FORWARD = "forward", "Forward"
	BACKWARD = "backward", "Backward"
	INTERSECTION = "intersection", "Intersection"


class ScoredPair(NamedTuple):
	src_sid: int
	tgt_sid: int
	score: float


def rank_pairs(pairs: Iterable[ScoredPair]) -> tuple[ScoredPair, ...]:
	"""Descending score, ties by (src_sid, tgt_sid)."""
	return tuple(sorted(pairs, key=lambda p: (-p.score, p.src_sid, p.tgt_sid)))


@dataclass(frozen=True)
class SentenceAlignment:
	strategy: str
	pairs: tuple[ScoredPair, ...] = ()

	def __len__(self) -> int:
		return len(self.pairs)

	def pair_set(self) -> set[tuple[int, int]]:
		return {(p.src_sid, p.tgt_sid) for p in self.pairs}


def forward_align(
	src: Corpus,
	tgt: Corpus,
	src_emb: EmbeddingMatrix,
	tgt_emb: EmbeddingMatrix,
	k: int = DEFAULT_TOP_K,
	lex: LexiconWeighting | None = None,
	scope: Sequence[ScopeBlock] | None = None,
	workers: int = 1,
) -> SentenceAlignment:
	"""Align every source sentence with its best scoring target sentence."""
	sets = generate_candidates(src, tgt, src_emb, tgt_emb, k, lex, scope, workers)
	pairs = (ScoredPair(cs.src_sid, cs.best.tgt_sid, cs.best.score) for cs in sets)
	return SentenceAlignment(Strategy.FORWARD, rank_pairs(pairs))


def backward_align(
	src: Corpus,
	tgt: Corpus,
	src_emb: EmbeddingMatrix,
	tgt_emb: EmbeddingMatrix,
	k: int = DEFAULT_TOP_K,
	lex: LexiconWeighting | None = None,
	scope: Sequence[ScopeBlock] | None = None,
	workers: int = 1,
) -> SentenceAlignment:
	"""Align every target sentence with its best source sentence.

	`lex` must point target -> source. Pairs are reported as (src_sid, tgt_sid).
	"""
	flipped = None if scope is None else [(tgt_sids, src_sids) for src_sids, tgt_sids in scope]
	sets = generate_candidates(tgt, src, tgt_emb, src_emb, k, lex, flipped, workers)
	pairs = (ScoredPair(cs.best.tgt_sid, cs.src_sid, cs.best.score) for cs in sets)
	return SentenceAlignment(Strategy.BACKWARD, rank_pairs(pairs))


def intersect(fwd: SentenceAlignment, bwd: SentenceAlignment) -> SentenceAlignment:
	"""Forward pairs confirmed by the backward pass; scores stay the forward ones."""
	confirmed = bwd.pair_set()
	return SentenceAlignment(
		Strategy.INTERSECTION,
		tuple(p for p in fwd.pairs if (p.src_sid, p.tgt_sid) in confirmed),
	)


def apply_threshold(aln: SentenceAlignment, threshold: float) -> SentenceAlignment:
	return SentenceAlignment(aln.strategy, tuple(p for p in aln.pairs if p.score >= threshold))


def align_sentences(
	strategy: str,
	src: Corpus,
	tgt: Corpus,
	src_emb: EmbeddingMatrix,
	tgt_emb: EmbeddingMatrix,
	k: int = DEFAULT_TOP_K,
	lex: LexiconWeighting | None = None,
	scope: Sequence[ScopeBlock] | None = None,
	workers: int = 1,
) -> SentenceAlignment:
	"""Run one strategy; `lex` points source -> target and is inverted for the backward pass."""
	back_lex = lex.inverted() if lex is not None else None
	if strategy == Strategy.FORWARD:
		return forward_align(src, tgt, src_emb, tgt_emb, k, lex, scope, workers)
	if strategy == Strategy.BACKWARD:
		return backward_align(src, tgt, src_emb, tgt_emb, k, back_lex, scope, workers)
	if strategy == Strategy.INTERSECTION:
		fwd = forward_align(src, tgt, src_emb, tgt_emb, k, lex, scope, workers)
		bwd = backward_align(src, tgt, src_emb, tgt_emb, k, back_lex, scope, workers)
		logger.info("intersection of %s forward and %s backward pairs", len(fwd), len(bwd))
		return intersect(fwd, bwd)
	raise ValueError(f"unknown strategy {strategy!r}")
