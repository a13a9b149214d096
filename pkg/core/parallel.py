from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

# Below this many items a pool costs more than it saves.
MIN_ITEMS_FOR_PARALLEL = 16


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
	"""Map `fn` over `items`, returning results in input order.

	Output never depends on `workers`; numpy releases the GIL for the heavy kernels, so
	threads are enough.
	"""
	seq: Sequence[T] = items if isinstance(items, Sequence) else list(items)
	if workers <= 1 or len(seq) < MIN_ITEMS_FOR_PARALLEL:
		return [fn(item) for item in seq]
	with ThreadPoolExecutor(max_workers=workers) as ex:
		return list(ex.map(fn, seq))


def chunked(seq: Sequence[T], size: int) -> list[Sequence[T]]:
	size = max(1, int(size))
	return [seq[i:i + size] for i in range(0, len(seq), size)]
