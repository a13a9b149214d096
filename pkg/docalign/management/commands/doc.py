from django.conf import settings

from core.management.base import PipelineCommand
from corpus.loaders import load_corpus
from embedstore.matrix import load_embeddings
from evaluation.recall import Task, load_gold, recall

from docalign.alignment import align_documents, write_document_alignment
from docalign.masses import Scheme


class Command(PipelineCommand):
	help = "Align documents across two comparable corpora with Greedy Mover's Distance."

	def add_arguments(self, parser):
		parser.add_argument("--src", required=True, help="Source corpus (JSON lines).")
		parser.add_argument("--tgt", required=True, help="Target corpus (JSON lines).")
		parser.add_argument("--src-emb", required=True, help="Source sentence embeddings (<f4, row-major).")
		parser.add_argument("--tgt-emb", required=True, help="Target sentence embeddings (<f4, row-major).")
		self.add_dim_argument(parser)
		parser.add_argument("--scheme", choices=Scheme.values, default=Scheme.RELFREQ, help="Sentence mass scheme.")
		self.add_lexicon_arguments(parser)
		parser.add_argument(
			"--window-days",
			type=int,
			default=None,
			help="Only compare documents published within N days of each other (default: no date filter).",
		)
		parser.add_argument("--normalize", action="store_true", help="L2-normalize embeddings before scoring.")
		parser.add_argument(
			"--min-chars",
			type=int,
			default=getattr(settings, "BITEXT_MIN_CHARS", 50),
			help="Drop documents shorter than this many characters.",
		)
		parser.add_argument("--gold", help="Gold document pairs TSV; adds recall to the summary.")
		self.add_workers_argument(parser)
		parser.add_argument("--out", required=True, help="Output TSV: src_id, tgt_id, distance.")

	def run(self, **options):
		dim = self.require_positive("dim", options["dim"])
		workers = self.require_positive("workers", options["workers"])
		if options["window_days"] is not None and options["window_days"] < 0:
			self.usage_error("--window-days must not be negative")

		src = load_corpus(options["src"], min_chars=options["min_chars"])
		tgt = load_corpus(options["tgt"], min_chars=options["min_chars"])
		src_emb = load_embeddings(options["src_emb"], dim, expected_rows=src.sentence_count)
		tgt_emb = load_embeddings(options["tgt_emb"], dim, expected_rows=tgt.sentence_count)
		if options["normalize"]:
			src_emb, tgt_emb = src_emb.normalized(), tgt_emb.normalized()
		lex = self.lexicon_weighting(options, src.lang, tgt.lang)

		alignment = align_documents(
			src,
			tgt,
			src_emb,
			tgt_emb,
			scheme=options["scheme"],
			lex=lex,
			window_days=options["window_days"],
			workers=workers,
		)
		write_document_alignment(options["out"], alignment)

		summary = {
			"src_documents": len(src.documents),
			"tgt_documents": len(tgt.documents),
			"candidates": alignment.candidates,
			"pairs": len(alignment),
			"scheme": options["scheme"],
			"out": options["out"],
		}
		if options["gold"]:
			report = recall(alignment.pair_set(), load_gold(options["gold"], Task.DOCUMENT))
			summary["recall"] = report.recall
		return summary
