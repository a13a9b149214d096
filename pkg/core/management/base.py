from __future__ import annotations

import json
import sys
import time
from typing import Any

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from core.exceptions import BitextError
from lexicon.matching import LexiconWeighting, load_weighting

EXIT_USAGE = 1
EXIT_DATA = 2


def _usage_error(parser, message: str):
	if getattr(parser, "called_from_command_line", False):
		parser.print_usage(sys.stderr)
		parser.exit(EXIT_USAGE, f"{parser.prog}: error: {message}\n")
	raise CommandError(f"Error: {message}", returncode=EXIT_USAGE)


class PipelineCommand(BaseCommand):
	"""Base for the pipeline subcommands.

	Exit status contract: 0 success, 1 usage error, 2 data/format error. Standard output
	carries exactly one JSON summary line; diagnostics go to standard error.
	"""

	requires_system_checks: list[str] = []

	def create_parser(self, prog_name, subcommand, **kwargs):
		parser = super().create_parser(prog_name, subcommand, **kwargs)
		# argparse exits with 2 on bad flags; 2 is reserved for data errors here.
		parser.error = lambda message: _usage_error(parser, message)
		return parser

	def add_workers_argument(self, parser) -> None:
		parser.add_argument(
			"--workers",
			type=int,
			default=getattr(settings, "BITEXT_WORKERS", 1),
			help="Worker threads for pairwise scoring (default: BITEXT_WORKERS or 1).",
		)

	def add_dim_argument(self, parser) -> None:
		parser.add_argument(
			"--dim",
			type=int,
			default=getattr(settings, "BITEXT_EMBEDDING_DIM", 1024),
			help="Embedding dimensionality (default: BITEXT_EMBEDDING_DIM or 1024).",
		)

	def add_lexicon_arguments(self, parser) -> None:
		parser.add_argument(
			"--lexicon",
			action="append",
			default=[],
			metavar="F",
			help="Phrase lexicon TSV matched by n-grams; repeat to merge several.",
		)
		parser.add_argument(
			"--names-lexicon",
			action="append",
			default=[],
			metavar="F",
			help="Person-name lexicon TSV matched word by word; repeat to merge several.",
		)
		parser.add_argument(
			"--count-init",
			type=int,
			choices=[0, 1],
			default=getattr(settings, "BITEXT_COUNT_INIT", 1),
			help="Initial value of the match counter (default: BITEXT_COUNT_INIT or 1).",
		)
		parser.add_argument(
			"--keep-source-spans",
			action="store_true",
			help="Allow a source span to match again after a phrase match.",
		)

	def lexicon_weighting(self, options: dict[str, Any], src_lang: str, tgt_lang: str) -> LexiconWeighting | None:
		return load_weighting(
			options["names_lexicon"],
			options["lexicon"],
			src_lang,
			tgt_lang,
			count_init=options["count_init"],
			max_len=getattr(settings, "BITEXT_MAX_PHRASE_LEN", 5),
			consume_source=not options["keep_source_spans"],
		)

	def handle(self, *args, **options):
		started = time.perf_counter()
		try:
			summary = self.run(**options)
		except BitextError as exc:
			raise CommandError(str(exc), returncode=EXIT_DATA) from exc
		except OSError as exc:
			where = f": {exc.filename}" if getattr(exc, "filename", None) else ""
			raise CommandError(f"{exc.strerror or exc}{where}", returncode=EXIT_DATA) from exc
		summary = dict(summary or {})
		summary.setdefault("command", self.command_name)
		summary["elapsed_seconds"] = round(time.perf_counter() - started, 3)
		self.emit_summary(summary)

	def run(self, **options) -> dict[str, Any]:
		raise NotImplementedError("subclasses of PipelineCommand must provide a run() method")

	@property
	def command_name(self) -> str:
		return self.__class__.__module__.rsplit(".", 1)[-1]

	def emit_summary(self, summary: dict[str, Any]) -> None:
		self.stdout.write(json.dumps(summary, sort_keys=True, ensure_ascii=False))

	def usage_error(self, message: str):
		raise CommandError(message, returncode=EXIT_USAGE)

	def require_positive(self, name: str, value: int) -> int:
		if value is None or value < 1:
			self.usage_error(f"--{name.replace('_', '-')} must be a positive integer")
		return value
