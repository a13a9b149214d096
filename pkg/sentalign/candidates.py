from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from core.exceptions import DataFormatError, DimensionError, EmptyInputError
from core.parallel import ordered_map
from corpus.records import Corpus
from embedstore.matrix import EmbeddingMatrix
from embedstore.search import NeighborList, knn
from lexicon.matching import LexiconWeighting

DEFAULT_TOP_K = 4

# A scope block: query sentence ids that compete only for the listed index sentence ids.
ScopeBlock = tuple[Sequence[int], Sequence[int]]


class Candidate(NamedTuple):
	tgt_sid: int
	cosine: float
	weight: float
	score: float


@dataclass(frozen=True)
class CandidateSet:
	"""Top-k cosine candidates of one query sentence, re-ranked by `cosine x weight`."""

	src_sid: int
	candidates: tuple[Candidate, ...]

	@property
	def best(self) -> Candidate:
		return self.candidates[0]


def check_rows(corpus: Corpus, emb: EmbeddingMatrix, side: str) -> None:
	if emb.rows != corpus.sentence_count:
		raise DimensionError(f"{side} embeddings have {emb.rows} rows but the corpus has {corpus.sentence_count} sentences")


def generate_candidates(
	query_corpus: Corpus,
	index_corpus: Corpus,
	query_emb: EmbeddingMatrix,
	index_emb: EmbeddingMatrix,
	k: int = DEFAULT_TOP_K,
	lex: LexiconWeighting | None = None,
	scope: Sequence[ScopeBlock] | None = None,
	workers: int = 1,
) -> list[CandidateSet]:
	"""Candidates for every query sentence of the scope, in scope order.

	Without a lexicon only the cosine argmax is needed, so the search runs with k = 1.
	With one, the k best cosine neighbours are weighted by the lexicon similarity weight
	and re-ranked; ties keep ascending target ids.
	"""
	if k < 1:
		raise ValueError("k must be >= 1")
	check_rows(query_corpus, query_emb, "query")
	check_rows(index_corpus, index_emb, "index")
	if index_emb.rows == 0:
		raise EmptyInputError("no target sentences to align against")
	if lex is not None:
		lex.check_direction(query_corpus.lang, index_corpus.lang)
	if scope is None:
		scope = [(range(query_emb.rows), range(index_emb.rows))]

	search_k = k if lex is not None else 1
	hits: list[NeighborList] = []
	for query_sids, index_sids in scope:
		if not len(query_sids) or not len(index_sids):
			continue
		hits.extend(knn(query_emb, query_sids, index_emb, search_k, index_rows=index_sids, workers=workers))

	def rescore(hit: NeighborList) -> CandidateSet:
		tokens_a = query_corpus.sentences[hit.query].tokens
		cands = []
		for tgt_sid, cos in hit.neighbors:
			weight = 1.0 if lex is None else lex.similarity_weight(tokens_a, index_corpus.sentences[tgt_sid].tokens)
			cands.append(Candidate(tgt_sid, cos, weight, cos * weight))
		cands.sort(key=lambda c: (-c.score, c.tgt_sid))
		return CandidateSet(hit.query, tuple(cands))

	return ordered_map(rescore, hits, workers)


def document_scope(src: Corpus, tgt: Corpus, doc_pairs: Sequence[tuple[str, str]]) -> list[ScopeBlock]:
	"""One scope block per aligned document pair, in the order given."""
	scope: list[ScopeBlock] = []
	for src_id, tgt_id in doc_pairs:
		if src_id not in src or tgt_id not in tgt:
			raise DataFormatError(f"document pair ({src_id}, {tgt_id}) names a document missing from the corpora")
		scope.append(
			(
				list(src.document(src_id).sentence_ids),
				list(tgt.document(tgt_id).sentence_ids),
			)
		)
	return scope
