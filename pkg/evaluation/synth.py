from __future__ import annotations

import logging
from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from corpus.loaders import document_record, write_corpus
from core.files import atomic_write_lines
from embedstore.matrix import write_embeddings

logger = logging.getLogger(__name__)

FIRST_DAY = date(2020, 1, 1)
VOCABULARY_SIZE = 600
SENTENCE_TOKENS = (10, 18)
# Share of the vocabulary written to the synthetic lexicon.
LEXICON_SHARE = 0.25

_CONSONANTS = "bdfghklmnprstvz"
_VOWELS = "aeiou"


@dataclass(frozen=True)
class SynthFiles:
	src_corpus: Path
	tgt_corpus: Path
	src_embeddings: Path
	tgt_embeddings: Path
	gold_documents: Path
	gold_sentences: Path
	lexicon: Path
	documents: int
	sentences: int


def _vocabulary(rng: np.random.Generator, size: int) -> list[str]:
	words: dict[str, None] = {}
	while len(words) < size:
		syllables = []
		for _ in range(3):
			syllable = _CONSONANTS[rng.integers(len(_CONSONANTS))] + _VOWELS[rng.integers(len(_VOWELS))]
			if rng.random() < 0.5:
				syllable += _CONSONANTS[rng.integers(len(_CONSONANTS))]
			syllables.append(syllable)
		words.setdefault("".join(syllables), None)
	return list(words)


def _sentence(words: list[str]) -> str:
	return " ".join(words).capitalize() + "."


def synth_corpus(
	n_docs: int,
	sents_per_doc: int,
	dim: int,
	noise_sigma: float,
	seed: int,
	out_dir: str | Path,
	src_lang: str = "en",
	tgt_lang: str = "si",
) -> SynthFiles:
	"""Write a comparable-corpus fixture with known document and sentence alignments.

	Target documents translate source documents word by word through a random bijective
	vocabulary; target embeddings are the source ones plus isotropic Gaussian noise.
	Target documents, and the sentences inside each, are shuffled. Output is a pure
	function of the arguments.
	"""
	if min(n_docs, sents_per_doc, dim) < 1 or noise_sigma < 0:
		raise ValueError("n_docs, sents_per_doc and dim must be positive; noise_sigma non-negative")
	out = Path(out_dir)
	rng = np.random.default_rng(seed)

	src_vocab = _vocabulary(rng, VOCABULARY_SIZE)
	tgt_vocab = _vocabulary(rng, VOCABULARY_SIZE)
	translate = dict(zip(src_vocab, tgt_vocab))
	n_days = max(1, n_docs // 10)

	src_docs: list[list[list[str]]] = []
	for _ in range(n_docs):
		doc = []
		for _ in range(sents_per_doc):
			length = int(rng.integers(SENTENCE_TOKENS[0], SENTENCE_TOKENS[1] + 1))
			doc.append([src_vocab[i] for i in rng.integers(len(src_vocab), size=length)])
		src_docs.append(doc)

	n_sents = n_docs * sents_per_doc
	src_vectors = rng.standard_normal((n_sents, dim))
	src_vectors /= np.linalg.norm(src_vectors, axis=1, keepdims=True)

	doc_order = rng.permutation(n_docs)
	sent_orders = [rng.permutation(sents_per_doc) for _ in range(n_docs)]
	noise = rng.standard_normal((n_sents, dim)) * noise_sigma

	src_records, tgt_records = [], []
	gold_docs, gold_sents = [], []
	tgt_rows = np.empty((n_sents, dim))
	tgt_sid = 0
	for i in range(n_docs):
		day = FIRST_DAY + timedelta(days=i % n_days)
		src_records.append(document_record(f"s{i:05d}", src_lang, day, (_sentence(s) for s in src_docs[i])))
	for slot, i in enumerate(doc_order):
		i = int(i)
		day = FIRST_DAY + timedelta(days=i % n_days)
		texts = []
		for position in sent_orders[i]:
			src_sid = i * sents_per_doc + int(position)
			texts.append(_sentence([translate[w] for w in src_docs[i][int(position)]]))
			tgt_rows[tgt_sid] = src_vectors[src_sid] + noise[tgt_sid]
			gold_sents.append(f"{src_sid}\t{tgt_sid}")
			tgt_sid += 1
		tgt_records.append(document_record(f"t{slot:05d}", tgt_lang, day, texts))
		gold_docs.append((f"s{i:05d}", f"t{slot:05d}"))

	lexicon_rows = [f"{w}\t{translate[w]}" for w in src_vocab[: int(len(src_vocab) * LEXICON_SHARE)]]

	files = SynthFiles(
		src_corpus=write_corpus(out / "src.jsonl", src_records),
		tgt_corpus=write_corpus(out / "tgt.jsonl", tgt_records),
		src_embeddings=write_embeddings(out / "src.emb", src_vectors),
		tgt_embeddings=write_embeddings(out / "tgt.emb", tgt_rows),
		gold_documents=atomic_write_lines(out / "gold_documents.tsv", (f"{s}\t{t}" for s, t in sorted(gold_docs))),
		gold_sentences=atomic_write_lines(out / "gold_sentences.tsv", sorted(gold_sents, key=lambda r: tuple(map(int, r.split("\t"))))),
		lexicon=atomic_write_lines(out / "lexicon.tsv", lexicon_rows),
		documents=n_docs,
		sentences=n_sents,
	)
	logger.info("synthetic fixture: %s document pairs, %s sentence pairs in %s", n_docs, n_sents, out)
	return files
