from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from core.exceptions import DataFormatError, DimensionError
from core.files import atomic_write_bytes

logger = logging.getLogger(__name__)

# Headerless, row-major, little-endian IEEE-754 binary32.
FLOAT_DTYPE = np.dtype("<f4")
BYTES_PER_VALUE = FLOAT_DTYPE.itemsize


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
	"""Row r holds the vector of global sentence ordinal r of the companion corpus."""

	values: np.ndarray

	def __post_init__(self):
		values = np.asarray(self.values)
		if values.ndim != 2:
			raise DimensionError(f"embedding matrix must be 2-D, got shape {values.shape}")
		values = values.view()
		values.setflags(write=False)
		object.__setattr__(self, "values", values)

	@property
	def rows(self) -> int:
		return int(self.values.shape[0])

	@property
	def dim(self) -> int:
		return int(self.values.shape[1])

	def __len__(self) -> int:
		return self.rows

	def vectors(self, rows) -> np.ndarray:
		"""Selected rows as float64 (all accumulation happens in 64-bit)."""
		return np.asarray(self.values[np.asarray(rows, dtype=np.int64)], dtype=np.float64)

	def normalized(self) -> "EmbeddingMatrix":
		"""L2-normalize every row; all-zero rows are left as zeros."""
		data = np.asarray(self.values, dtype=np.float64)
		norms = np.linalg.norm(data, axis=1, keepdims=True)
		norms[norms == 0.0] = 1.0
		return EmbeddingMatrix(data / norms)


def load_embeddings(path: str | Path, dim: int, expected_rows: int | None = None) -> EmbeddingMatrix:
	"""Read a raw float32 dump of `expected_rows` x `dim` values.

	When `expected_rows` is None the row count is inferred from the file size, which must
	then be a whole number of rows.
	"""
	if dim < 1:
		raise ValueError("dim must be a positive integer")
	size = Path(path).stat().st_size
	row_bytes = dim * BYTES_PER_VALUE
	if expected_rows is None:
		if size % row_bytes:
			raise DataFormatError(
				f"size mismatch: {size} bytes is not a multiple of dim {dim} x {BYTES_PER_VALUE} bytes",
				path=path,
			)
		expected_rows = size // row_bytes
	expected = expected_rows * row_bytes
	if size != expected:
		raise DataFormatError(
			f"size mismatch: expected {expected} bytes ({expected_rows} rows x {dim} dims x {BYTES_PER_VALUE}), "
			f"found {size} bytes",
			path=path,
		)

	values = np.fromfile(path, dtype=FLOAT_DTYPE, count=expected_rows * dim).reshape(expected_rows, dim)
	finite = np.isfinite(values)
	if not finite.all():
		row, col = (int(i) for i in np.argwhere(~finite)[0])
		raise DataFormatError(f"non-finite value at row {row}, col {col}", path=path)

	logger.info("loaded %s x %s embeddings from %s", expected_rows, dim, path)
	return EmbeddingMatrix(values)


def write_embeddings(path: str | Path, matrix: EmbeddingMatrix | np.ndarray) -> Path:
	values = matrix.values if isinstance(matrix, EmbeddingMatrix) else np.asarray(matrix)
	return atomic_write_bytes(path, np.ascontiguousarray(values, dtype=FLOAT_DTYPE).tobytes())
