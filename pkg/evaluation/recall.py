from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Hashable, Iterable

from django.db import models

from core.exceptions import DataFormatError, EmptyInputError
from core.files import iter_tsv

Pair = tuple[Hashable, Hashable]


class Task(models.TextChoices):
	DOCUMENT = "document", "Document alignment"
	SENTENCE = "sentence", "Sentence alignment"


@dataclass(frozen=True)
class GoldAlignment:
	task: str
	pairs: frozenset

	def __len__(self) -> int:
		return len(self.pairs)


@dataclass(frozen=True)
class EvalReport:
	task: str
	gold_size: int
	predicted_size: int
	hits: int
	recall: float

	def as_dict(self) -> dict:
		return asdict(self)


def read_pairs(path: str | Path, task: str) -> list[Pair]:
	"""First two TSV columns of each row; sentence ids are parsed as integers."""
	pairs: list[Pair] = []
	for line_no, fields in iter_tsv(path, min_columns=2):
		src, tgt = fields[0].strip(), fields[1].strip()
		if task == Task.SENTENCE:
			try:
				pairs.append((int(src), int(tgt)))
			except ValueError as exc:
				raise DataFormatError("sentence ids must be integers", path=path, line=line_no) from exc
		else:
			pairs.append((src, tgt))
	return pairs


def load_gold(path: str | Path, task: str) -> GoldAlignment:
	return GoldAlignment(task=str(task), pairs=frozenset(read_pairs(path, task)))


def read_predicted(path: str | Path, task: str) -> set[Pair]:
	return set(read_pairs(path, task))


def recall(predicted: Iterable[Pair], gold: GoldAlignment) -> EvalReport:
	"""Share of gold pairs found; precision is not reported because gold sets are incomplete."""
	if not gold.pairs:
		raise EmptyInputError("gold alignment is empty")
	predicted = set(predicted)
	hits = len(predicted & gold.pairs)
	return EvalReport(
		task=gold.task,
		gold_size=len(gold.pairs),
		predicted_size=len(predicted),
		hits=hits,
		recall=hits / len(gold.pairs),
	)
