from __future__ import annotations

import numpy as np

from core.exceptions import DimensionError


def _pair(u, v) -> tuple[np.ndarray, np.ndarray]:
	a = np.asarray(u, dtype=np.float64).ravel()
	b = np.asarray(v, dtype=np.float64).ravel()
	if a.shape != b.shape:
		raise DimensionError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
	return a, b


def euclidean(u, v) -> float:
	a, b = _pair(u, v)
	return float(np.sqrt(np.sum((a - b) ** 2)))


def cosine(u, v) -> float:
	a, b = _pair(u, v)
	na = np.linalg.norm(a)
	nb = np.linalg.norm(b)
	if na == 0.0 or nb == 0.0:
		raise DimensionError("cosine is undefined for a zero vector")
	return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def unit_rows(values: np.ndarray) -> np.ndarray:
	"""float64 copy with unit-length rows; zero rows stay zero so they score 0."""
	data = np.asarray(values, dtype=np.float64)
	norms = np.linalg.norm(data, axis=1, keepdims=True)
	norms[norms == 0.0] = 1.0
	return data / norms


def cosine_matrix(queries: np.ndarray, index: np.ndarray) -> np.ndarray:
	"""Cosine table of shape (len(queries), len(index))."""
	q = np.atleast_2d(queries)
	x = np.atleast_2d(index)
	if q.shape[1] != x.shape[1]:
		raise DimensionError(f"dimension mismatch: {q.shape[1]} vs {x.shape[1]}")
	return np.clip(unit_rows(q) @ unit_rows(x).T, -1.0, 1.0)
