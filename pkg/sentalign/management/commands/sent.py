from django.conf import settings

from core.management.base import PipelineCommand
from corpus.loaders import load_corpus
from docalign.alignment import read_document_pairs
from embedstore.matrix import load_embeddings
from evaluation.recall import Task, load_gold, recall

from sentalign.candidates import document_scope
from sentalign.pairfiles import write_scored_pairs
from sentalign.strategies import Strategy, align_sentences, apply_threshold


class Command(PipelineCommand):
	help = "Align sentences by cosine similarity, optionally re-weighted by bilingual lexicons."

	def add_arguments(self, parser):
		parser.add_argument("--src", required=True, help="Source corpus (JSON lines).")
		parser.add_argument("--tgt", required=True, help="Target corpus (JSON lines).")
		parser.add_argument("--src-emb", required=True)
		parser.add_argument("--tgt-emb", required=True)
		self.add_dim_argument(parser)
		parser.add_argument("--strategy", choices=Strategy.values, default=Strategy.FORWARD)
		parser.add_argument(
			"--k",
			type=int,
			default=getattr(settings, "BITEXT_TOP_K", 4),
			help="Cosine candidates re-ranked per sentence when a lexicon is given.",
		)
		self.add_lexicon_arguments(parser)
		parser.add_argument("--threshold", type=float, default=None, help="Drop pairs scoring below this value.")
		parser.add_argument("--doc-pairs", help="Document alignment TSV restricting candidates to aligned documents.")
		parser.add_argument("--normalize", action="store_true", help="L2-normalize embeddings before scoring.")
		parser.add_argument(
			"--min-chars",
			type=int,
			default=getattr(settings, "BITEXT_MIN_CHARS", 50),
			help="Drop documents shorter than this many characters.",
		)
		parser.add_argument("--emit-text", action="store_true", help="Append both sentence texts to each row.")
		parser.add_argument("--gold", help="Gold sentence pairs TSV; adds recall to the summary.")
		self.add_workers_argument(parser)
		parser.add_argument("--out", required=True, help="Output TSV: src_sid, tgt_sid, score.")

	def run(self, **options):
		dim = self.require_positive("dim", options["dim"])
		k = self.require_positive("k", options["k"])
		workers = self.require_positive("workers", options["workers"])

		src = load_corpus(options["src"], min_chars=options["min_chars"])
		tgt = load_corpus(options["tgt"], min_chars=options["min_chars"])
		src_emb = load_embeddings(options["src_emb"], dim, expected_rows=src.sentence_count)
		tgt_emb = load_embeddings(options["tgt_emb"], dim, expected_rows=tgt.sentence_count)
		if options["normalize"]:
			src_emb, tgt_emb = src_emb.normalized(), tgt_emb.normalized()
		lex = self.lexicon_weighting(options, src.lang, tgt.lang)

		scope = None
		if options["doc_pairs"]:
			pairs = read_document_pairs(options["doc_pairs"])
			scope = document_scope(src, tgt, [(p.src_id, p.tgt_id) for p in pairs])

		alignment = align_sentences(options["strategy"], src, tgt, src_emb, tgt_emb, k, lex, scope, workers)
		before = len(alignment)
		if options["threshold"] is not None:
			alignment = apply_threshold(alignment, options["threshold"])
		write_scored_pairs(options["out"], alignment.pairs, src, tgt, emit_text=options["emit_text"])

		summary = {
			"strategy": options["strategy"],
			"lexicon": lex is not None,
			"pairs_before_threshold": before,
			"pairs": len(alignment),
			"out": options["out"],
		}
		if options["gold"]:
			summary["recall"] = recall(alignment.pair_set(), load_gold(options["gold"], Task.SENTENCE)).recall
		return summary
