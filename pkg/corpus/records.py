from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from types import MappingProxyType
from typing import Mapping


@dataclass(frozen=True)
class Document:
	id: str
	lang: str
	date: date
	sentence_ids: tuple[int, ...]
	url: str | None = None

	def __post_init__(self):
		if not self.sentence_ids:
			raise ValueError(f"document {self.id!r} has no sentences")
		if any(b <= a for a, b in zip(self.sentence_ids, self.sentence_ids[1:])):
			raise ValueError(f"document {self.id!r} sentence ids are not strictly increasing")


@dataclass(frozen=True)
class SentenceRecord:
	sid: int
	doc_id: str
	position: int
	text: str
	tokens: tuple[str, ...]


@dataclass(frozen=True)
class Corpus:
	"""An immutable document collection in one language.

	Sentence ids run 0..n-1 in document order, then position order, and double as row
	indices into the embedding matrix loaded alongside the corpus.
	"""

	lang: str
	documents: tuple[Document, ...] = ()
	sentences: tuple[SentenceRecord, ...] = ()
	by_date: Mapping[date, tuple[str, ...]] = field(default_factory=dict)
	dropped: int = 0

	def __post_init__(self):
		index = {doc.id: doc for doc in self.documents}
		object.__setattr__(self, "by_date", MappingProxyType(dict(self.by_date)))
		object.__setattr__(self, "_index", MappingProxyType(index))

	def __len__(self) -> int:
		return len(self.documents)

	@property
	def sentence_count(self) -> int:
		return len(self.sentences)

	def document(self, doc_id: str) -> Document:
		try:
			return self._index[doc_id]
		except KeyError:
			raise KeyError(f"unknown document id {doc_id!r}") from None

	def __contains__(self, doc_id: object) -> bool:
		return doc_id in self._index

	def sentences_of(self, doc: Document | str) -> list[SentenceRecord]:
		if isinstance(doc, str):
			doc = self.document(doc)
		return [self.sentences[sid] for sid in doc.sentence_ids]
