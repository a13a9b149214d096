from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.spatial.distance import cdist

from core.exceptions import MassMismatchError
from embedstore.matrix import EmbeddingMatrix

from .masses import WeightVector

logger = logging.getLogger(__name__)

MASS_MISMATCH_TOLERANCE = 1e-6
# Remaining mass below this is treated as exhausted.
_EPS = 1e-15

PairWeight = Callable[[int, int], float]


class FlowStep(NamedTuple):
	src_sid: int
	tgt_sid: int
	flow: float
	delta: float
	weight: float


@dataclass(frozen=True)
class DocDistance:
	src_id: str
	tgt_id: str
	distance: float
	trace: tuple[FlowStep, ...] = ()

	@property
	def total_flow(self) -> float:
		return float(np.sum([step.flow for step in self.trace])) if self.trace else 0.0


def greedy_movers_distance(
	src_mass: WeightVector,
	tgt_mass: WeightVector,
	src_emb: EmbeddingMatrix,
	tgt_emb: EmbeddingMatrix,
	pair_weight: PairWeight | None = None,
) -> DocDistance:
	"""Greedy approximation of the sentence mover's distance between two documents.

	All cross sentence pairs are visited in ascending Euclidean distance (ties by source
	then target sentence id); each moves min(remaining source mass, remaining target mass)
	and adds flow x delta x weight. `pair_weight(src_sid, tgt_sid)` is the lexicon weight,
	1 when omitted; it scales the cost but never changes the visiting order.
	"""
	src_total = src_mass.total
	tgt_total = tgt_mass.total
	if abs(src_total - tgt_total) > MASS_MISMATCH_TOLERANCE:
		raise MassMismatchError(
			f"mass mismatch between {src_mass.doc_id!r} ({src_total:.9f}) and {tgt_mass.doc_id!r} ({tgt_total:.9f})"
		)

	deltas = cdist(src_emb.vectors(src_mass.sids), tgt_emb.vectors(tgt_mass.sids), metric="euclidean")
	n_src, n_tgt = deltas.shape
	rows, cols = np.divmod(np.arange(n_src * n_tgt), n_tgt)
	# Row/column order equals sentence-id order, so this is the (delta, src, tgt) order.
	order = np.lexsort((cols, rows, deltas.ravel()))

	src_left = np.asarray(src_mass.masses, dtype=np.float64)
	tgt_left = np.asarray(tgt_mass.masses, dtype=np.float64)
	src_open = n_src
	tgt_open = n_tgt
	distance = 0.0
	trace: list[FlowStep] = []
	for flat in order:
		i = int(rows[flat])
		j = int(cols[flat])
		if src_left[i] <= _EPS or tgt_left[j] <= _EPS:
			continue
		flow = min(src_left[i], tgt_left[j])
		delta = float(deltas[i, j])
		weight = 1.0 if pair_weight is None else float(pair_weight(src_mass.sids[i], tgt_mass.sids[j]))
		distance += flow * delta * weight
		trace.append(FlowStep(src_mass.sids[i], tgt_mass.sids[j], float(flow), delta, weight))
		src_left[i] -= flow
		tgt_left[j] -= flow
		if src_left[i] <= _EPS:
			src_open -= 1
		if tgt_left[j] <= _EPS:
			tgt_open -= 1
		if src_open == 0 or tgt_open == 0:
			break
	result = DocDistance(src_mass.doc_id, tgt_mass.doc_id, float(distance), tuple(trace))
	if abs(result.total_flow - src_total) > MASS_MISMATCH_TOLERANCE:
		logger.warning(
			"greedy transport moved %.9f of %.9f mass between %r and %r",
			result.total_flow,
			src_total,
			src_mass.doc_id,
			tgt_mass.doc_id,
		)
	return result
