from __future__ import annotations

import json
import logging
from collections import defaultdict
from datetime import date
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from core.exceptions import DataFormatError
from core.files import atomic_write_lines

from .records import Corpus, Document, SentenceRecord
from .serializers import DocumentRecordSerializer
from .tokenization import tokenize

logger = logging.getLogger(__name__)

DEFAULT_MIN_CHARS = 50


class SourceDocument(NamedTuple):
	id: str
	date: date
	sentences: Sequence[str]
	url: str | None = None


def _flatten_errors(errors) -> str:
	parts = []
	for key, value in errors.items():
		if isinstance(value, dict):
			value = _flatten_errors(value)
		elif isinstance(value, (list, tuple)):
			value = "; ".join(str(v) for v in value)
		parts.append(f"{key}: {value}")
	return ", ".join(parts)


def corpus_from_documents(lang: str, items: Iterable[SourceDocument], dropped: int = 0) -> Corpus:
	"""Number sentences 0..n-1 in document order and tokenize them."""
	documents: list[Document] = []
	sentences: list[SentenceRecord] = []
	by_date: dict[date, list[str]] = defaultdict(list)
	for item in items:
		first = len(sentences)
		for position, text in enumerate(item.sentences):
			sentences.append(
				SentenceRecord(
					sid=first + position,
					doc_id=item.id,
					position=position,
					text=text,
					tokens=tuple(tokenize(text)),
				)
			)
		documents.append(
			Document(
				id=item.id,
				lang=lang,
				date=item.date,
				url=item.url or None,
				sentence_ids=tuple(range(first, len(sentences))),
			)
		)
		by_date[item.date].append(item.id)
	return Corpus(
		lang=lang,
		documents=tuple(documents),
		sentences=tuple(sentences),
		by_date={day: tuple(ids) for day, ids in by_date.items()},
		dropped=dropped,
	)


def load_corpus(path: str | Path, lang: str | None = None, min_chars: int = DEFAULT_MIN_CHARS) -> Corpus:
	"""Read a document JSON-lines file into an immutable Corpus.

	Documents whose merged text (sentences joined by single spaces) is shorter than
	`min_chars` are dropped. When `lang` is None the language of the first record is used.
	"""
	if min_chars < 0:
		raise ValueError("min_chars must be non-negative")

	kept: list[SourceDocument] = []
	seen_ids: set[str] = set()
	dropped = 0

	with open(path, encoding="utf-8") as fh:
		for line_no, raw in enumerate(fh, start=1):
			if not raw.strip():
				continue
			try:
				payload = json.loads(raw)
			except json.JSONDecodeError as exc:
				raise DataFormatError(f"invalid JSON ({exc.msg})", path=path, line=line_no) from exc
			if not isinstance(payload, dict):
				raise DataFormatError("record must be a JSON object", path=path, line=line_no)

			serializer = DocumentRecordSerializer(data=payload)
			if not serializer.is_valid():
				raise DataFormatError(_flatten_errors(serializer.errors), path=path, line=line_no)
			data = serializer.validated_data

			doc_id = data["id"]
			if doc_id in seen_ids:
				raise DataFormatError(f"duplicate document id {doc_id!r}", path=path, line=line_no)
			seen_ids.add(doc_id)

			if lang is None:
				lang = data["lang"]
			elif data["lang"] != lang:
				raise DataFormatError(
					f"record language {data['lang']!r} does not match corpus language {lang!r}",
					path=path,
					line=line_no,
				)

			texts = serializer.sentence_texts()
			if not texts:
				logger.warning("%s:%s: document %r has no sentences, skipped", path, line_no, doc_id)
				dropped += 1
				continue
			if len(" ".join(texts)) < min_chars:
				logger.info("%s:%s: document %r shorter than %s chars, skipped", path, line_no, doc_id, min_chars)
				dropped += 1
				continue
			kept.append(SourceDocument(doc_id, data["date"], texts, data.get("url")))

	corpus = corpus_from_documents(lang or "", kept, dropped=dropped)
	logger.info(
		"loaded %s documents / %s sentences from %s (%s dropped)",
		len(corpus.documents),
		corpus.sentence_count,
		path,
		dropped,
	)
	return corpus


def document_record(doc_id: str, lang: str, day: date, sentences: Iterable[str], url: str | None = None) -> str:
	payload = {"id": doc_id, "lang": lang, "date": day.isoformat()}
	if url:
		payload["url"] = url
	payload["sentences"] = list(sentences)
	return json.dumps(payload, ensure_ascii=False)


def write_corpus(path: str | Path, records: Iterable[str]) -> Path:
	"""Write pre-serialized document records (see `document_record`) as JSON lines."""
	return atomic_write_lines(path, records)
