from __future__ import annotations

from pathlib import Path


class BitextError(Exception):
	"""Base class for every error the pipeline reports as a data problem (exit 2)."""


class DataFormatError(BitextError):
	"""An input file does not follow its format contract."""

	def __init__(self, message: str, *, path: str | Path | None = None, line: int | None = None):
		self.message = message
		self.path = str(path) if path is not None else None
		self.line = line
		super().__init__(str(self))

	def __str__(self) -> str:
		where = self.path or ""
		if self.line is not None:
			where = f"{where}:{self.line}" if where else f"line {self.line}"
		return f"{where}: {self.message}" if where else self.message


class EmptyInputError(BitextError):
	pass


class DimensionError(BitextError):
	pass


class LexiconDirectionError(BitextError):
	pass


class MassMismatchError(BitextError):
	pass


class DegenerateScoreError(BitextError):
	pass
