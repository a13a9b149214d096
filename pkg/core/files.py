from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Iterable, Iterator

from .exceptions import DataFormatError


def atomic_write_lines(path: str | Path, lines: Iterable[str]) -> Path:
	"""Write newline-terminated UTF-8 lines to `path` via a temp file + rename.

	Readers never observe a half-written artifact; on failure the temp file is removed
	and any previous file at `path` is left untouched.
	"""
	target = Path(path)
	target.parent.mkdir(parents=True, exist_ok=True)
	fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
	try:
		with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
			for line in lines:
				fh.write(line)
				fh.write("\n")
		os.replace(tmp_name, target)
	except BaseException:
		try:
			os.unlink(tmp_name)
		except OSError:
			pass
		raise
	return target


def atomic_write_bytes(path: str | Path, payload: bytes) -> Path:
	target = Path(path)
	target.parent.mkdir(parents=True, exist_ok=True)
	fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
	try:
		with os.fdopen(fd, "wb") as fh:
			fh.write(payload)
		os.replace(tmp_name, target)
	except BaseException:
		try:
			os.unlink(tmp_name)
		except OSError:
			pass
		raise
	return target


def iter_tsv(path: str | Path, *, min_columns: int, comments: bool = False) -> Iterator[tuple[int, list[str]]]:
	"""Yield `(line_number, fields)` for each non-blank row of a UTF-8 TSV file.

	Line numbers are 1-based. With `comments=True`, rows starting with `#` are skipped.
	"""
	with open(path, encoding="utf-8") as fh:
		for line_no, raw in enumerate(fh, start=1):
			line = raw.rstrip("\r\n")
			if not line.strip():
				continue
			if comments and line.lstrip().startswith("#"):
				continue
			fields = line.split("\t")
			if len(fields) < min_columns:
				raise DataFormatError(
					f"expected at least {min_columns} tab-separated columns, found {len(fields)}",
					path=path,
					line=line_no,
				)
			yield line_no, fields
