from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

from core.exceptions import DataFormatError, DimensionError
from core.files import atomic_write_lines, iter_tsv
from core.formatting import fixed9
from core.parallel import ordered_map
from corpus.dates import date_buckets
from corpus.records import Corpus
from embedstore.matrix import EmbeddingMatrix
from lexicon.matching import LexiconWeighting

from .masses import Scheme, WeightVector, idf_statistics, sentence_masses
from .transport import DocDistance, greedy_movers_distance

logger = logging.getLogger(__name__)


class AlignedDocuments(NamedTuple):
	src_id: str
	tgt_id: str
	distance: float


@dataclass(frozen=True)
class DocumentAlignment:
	"""One-to-one document pairs, ascending distance, ties by (src_id, tgt_id)."""

	pairs: tuple[AlignedDocuments, ...] = ()
	candidates: int = 0

	def __len__(self) -> int:
		return len(self.pairs)

	def pair_set(self) -> set[tuple[str, str]]:
		return {(p.src_id, p.tgt_id) for p in self.pairs}


def competitive_matching(candidates: list[DocDistance]) -> tuple[AlignedDocuments, ...]:
	"""Accept candidates best-first while both documents are still free."""
	ranked = sorted(candidates, key=lambda c: (c.distance, c.src_id, c.tgt_id))
	used_src: set[str] = set()
	used_tgt: set[str] = set()
	pairs = []
	for cand in ranked:
		if cand.src_id in used_src or cand.tgt_id in used_tgt:
			continue
		used_src.add(cand.src_id)
		used_tgt.add(cand.tgt_id)
		pairs.append(AlignedDocuments(cand.src_id, cand.tgt_id, cand.distance))
	return tuple(pairs)


def _document_masses(corpus: Corpus, scheme: str) -> dict[str, WeightVector]:
	idf = idf_statistics(corpus) if scheme in (Scheme.IDF, Scheme.SLIDF) else None
	return {doc.id: sentence_masses(doc, corpus, scheme, idf) for doc in corpus.documents}


def align_documents(
	src: Corpus,
	tgt: Corpus,
	src_emb: EmbeddingMatrix,
	tgt_emb: EmbeddingMatrix,
	scheme: str = Scheme.RELFREQ,
	lex: LexiconWeighting | None = None,
	window_days: int | None = 0,
	workers: int = 1,
) -> DocumentAlignment:
	"""Score every same-bucket document pair with GMD and keep the best one-to-one pairs."""
	for side, corpus, emb in (("source", src, src_emb), ("target", tgt, tgt_emb)):
		if emb.rows != corpus.sentence_count:
			raise DimensionError(
				f"{side} embeddings have {emb.rows} rows but the corpus has {corpus.sentence_count} sentences"
			)
	if lex is not None:
		lex.check_direction(src.lang, tgt.lang)

	src_masses = _document_masses(src, scheme)
	tgt_masses = _document_masses(tgt, scheme)

	pair_weight = None
	if lex is not None:
		def pair_weight(src_sid: int, tgt_sid: int) -> float:
			return lex.distance_weight(src.sentences[src_sid].tokens, tgt.sentences[tgt_sid].tokens)

	jobs = [
		(src_id, tgt_id)
		for bucket in date_buckets(src, tgt, window_days)
		for src_id in bucket.src_ids
		for tgt_id in bucket.tgt_ids
	]
	logger.info("scoring %s candidate document pairs (%s workers)", len(jobs), workers)

	def score(job: tuple[str, str]) -> DocDistance:
		src_id, tgt_id = job
		return greedy_movers_distance(src_masses[src_id], tgt_masses[tgt_id], src_emb, tgt_emb, pair_weight)

	candidates = ordered_map(score, jobs, workers)
	return DocumentAlignment(pairs=competitive_matching(candidates), candidates=len(candidates))


def write_document_alignment(path: str | Path, alignment: DocumentAlignment) -> Path:
	return atomic_write_lines(path, (f"{p.src_id}\t{p.tgt_id}\t{fixed9(p.distance)}" for p in alignment.pairs))


def read_document_pairs(path: str | Path) -> list[AlignedDocuments]:
	pairs = []
	for line_no, fields in iter_tsv(path, min_columns=2):
		distance = 0.0
		if len(fields) > 2 and fields[2].strip():
			try:
				distance = float(fields[2])
			except ValueError as exc:
				raise DataFormatError(f"distance {fields[2]!r} is not a number", path=path, line=line_no) from exc
		pairs.append(AlignedDocuments(fields[0].strip(), fields[1].strip(), distance))
	return pairs
