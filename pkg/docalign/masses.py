from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from django.db import models

from core.exceptions import EmptyInputError
from corpus.records import Corpus, Document


class Scheme(models.TextChoices):
	RELFREQ = "relfreq", "Relative frequency"
	SLEN = "slen", "Sentence length"
	IDF = "idf", "Inverse document frequency"
	SLIDF = "slidf", "Sentence length x IDF"


MASS_TOLERANCE = 1e-9


@dataclass(frozen=True)
class IdfStats:
	"""Document frequencies of exact sentence strings over one corpus."""

	n_docs: int
	df: Mapping[str, int]

	def __post_init__(self):
		object.__setattr__(self, "df", MappingProxyType(dict(self.df)))

	def document_frequency(self, text: str) -> int:
		return self.df.get(text, 0)

	def weight(self, text: str) -> float:
		return idf_weight(self.n_docs, self.document_frequency(text))


def idf_weight(n_docs: int, df: int) -> float:
	"""Smoothed IDF, natural log: 1 + ln((N + 1) / (1 + df)). Unseen sentences use df = 0."""
	return 1.0 + math.log((n_docs + 1) / (1 + df))


def idf_statistics(corpus: Corpus) -> IdfStats:
	if not corpus.documents:
		raise EmptyInputError("cannot compute IDF statistics over an empty corpus")
	df: Counter[str] = Counter()
	for doc in corpus.documents:
		df.update({sentence.text for sentence in corpus.sentences_of(doc)})
	return IdfStats(n_docs=len(corpus.documents), df=df)


@dataclass(frozen=True)
class WeightVector:
	"""Probability mass per distinct sentence of one document.

	Duplicate sentences pool their mass on the first occurrence, so `sids` lists one
	representative sentence id per distinct text, in document order.
	"""

	doc_id: str
	scheme: str
	sids: tuple[int, ...]
	masses: tuple[float, ...]

	def __len__(self) -> int:
		return len(self.sids)

	@property
	def total(self) -> float:
		return math.fsum(self.masses)


def sentence_masses(doc: Document, corpus: Corpus, scheme: str, idf: IdfStats | None = None) -> WeightVector:
	if scheme in (Scheme.IDF, Scheme.SLIDF) and idf is None:
		raise ValueError(f"scheme {scheme!r} needs IDF statistics")

	counts: Counter[str] = Counter()
	first_sid: dict[str, int] = {}
	lengths: dict[str, int] = {}
	for sentence in corpus.sentences_of(doc):
		counts[sentence.text] += 1
		first_sid.setdefault(sentence.text, sentence.sid)
		lengths.setdefault(sentence.text, len(sentence.tokens))

	texts = list(first_sid)
	if scheme == Scheme.RELFREQ:
		raw = [float(counts[t]) for t in texts]
	elif scheme == Scheme.SLEN:
		raw = [float(counts[t] * lengths[t]) for t in texts]
	elif scheme == Scheme.IDF:
		raw = [idf.weight(t) for t in texts]
	elif scheme == Scheme.SLIDF:
		raw = [counts[t] * lengths[t] * idf.weight(t) for t in texts]
	else:
		raise ValueError(f"unknown weighting scheme {scheme!r}")

	total = math.fsum(raw)
	if total <= 0.0:
		raise EmptyInputError(f"document {doc.id!r} has no tokens to weight under scheme {scheme!r}")
	# Token-less sentences carry no mass under length schemes; leave them out of the transport.
	kept = [(first_sid[t], w) for t, w in zip(texts, raw) if w > 0.0]
	return WeightVector(
		doc_id=doc.id,
		scheme=str(scheme),
		sids=tuple(sid for sid, _ in kept),
		masses=tuple(w / total for _, w in kept),
	)
