from __future__ import annotations

from datetime import timedelta
from typing import NamedTuple

from .records import Corpus


class DateBucket(NamedTuple):
	day: object
	src_ids: tuple[str, ...]
	tgt_ids: tuple[str, ...]


def date_buckets(src: Corpus, tgt: Corpus, window_days: int | None = 0) -> list[DateBucket]:
	"""Partition cross-corpus document pairs by publication day.

	With `window_days=w` the source documents of day d share a bucket with the target
	documents of days d-w..d+w, so every (src, tgt) pair lands in at most one bucket.
	`None` disables date filtering: one bucket with every document of both sides.
	Buckets with an empty side are omitted; ids keep corpus order.
	"""
	if window_days is None:
		if not src.documents or not tgt.documents:
			return []
		return [DateBucket(None, tuple(d.id for d in src.documents), tuple(d.id for d in tgt.documents))]
	if window_days < 0:
		raise ValueError("window_days must be non-negative")

	tgt_order = {doc.id: i for i, doc in enumerate(tgt.documents)}
	buckets: list[DateBucket] = []
	for day in sorted(src.by_date):
		tgt_ids: list[str] = []
		for offset in range(-window_days, window_days + 1):
			tgt_ids.extend(tgt.by_date.get(day + timedelta(days=offset), ()))
		if not tgt_ids:
			continue
		tgt_ids.sort(key=tgt_order.__getitem__)
		buckets.append(DateBucket(day, tuple(src.by_date[day]), tuple(tgt_ids)))
	return buckets
