from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from core.exceptions import EmptyInputError
from core.parallel import chunked, ordered_map

from .matrix import EmbeddingMatrix
from .metrics import cosine_matrix

QUERY_BLOCK_ROWS = 256

METRICS = ("cosine",)


@dataclass(frozen=True)
class NeighborList:
	query: int
	neighbors: tuple[tuple[int, float], ...]

	@property
	def rows(self) -> tuple[int, ...]:
		return tuple(row for row, _ in self.neighbors)


def top_k_order(scores: np.ndarray, k: int) -> np.ndarray:
	"""Positions of the k highest scores, descending, ties by ascending position."""
	n = scores.shape[0]
	if k >= n:
		return np.lexsort((np.arange(n), -scores))
	part = np.argpartition(-scores, k - 1)[:k]
	# Keep every position tied with the k-th score so the tie-break stays exact.
	cand = np.flatnonzero(scores >= scores[part].min())
	return cand[np.lexsort((cand, -scores[cand]))][:k]


def knn(
	queries: EmbeddingMatrix,
	query_rows: Sequence[int],
	index: EmbeddingMatrix,
	k: int,
	metric: str = "cosine",
	*,
	index_rows: Sequence[int] | None = None,
	workers: int = 1,
) -> list[NeighborList]:
	"""Exact brute-force k nearest neighbours by cosine similarity.

	Returns one NeighborList per query row, in `query_rows` order. Neighbour ids are rows
	of `index`; `index_rows` restricts the search to a subset of them.
	"""
	if k < 1:
		raise ValueError("k must be >= 1")
	if metric not in METRICS:
		raise ValueError(f"unsupported metric {metric!r}")
	pool = np.arange(index.rows, dtype=np.int64) if index_rows is None else np.unique(np.asarray(index_rows, dtype=np.int64))
	if pool.size == 0:
		raise EmptyInputError("nearest-neighbour index is empty")
	query_rows = [int(r) for r in query_rows]
	pool_vectors = index.vectors(pool)

	def search_block(block: Sequence[int]) -> list[NeighborList]:
		table = cosine_matrix(queries.vectors(block), pool_vectors)
		out = []
		for query, scores in zip(block, table):
			order = top_k_order(scores, k)
			out.append(NeighborList(query, tuple((int(pool[i]), float(scores[i])) for i in order)))
		return out

	blocks = chunked(query_rows, QUERY_BLOCK_ROWS)
	return [hit for block in ordered_map(search_block, blocks, workers) for hit in block]
