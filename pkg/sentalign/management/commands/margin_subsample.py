from django.conf import settings

from core.management.base import PipelineCommand
from corpus.loaders import load_corpus
from embedstore.matrix import load_embeddings

from sentalign.margin import margin_scores, subsample_by_budget
from sentalign.pairfiles import read_scored_pairs, write_scored_pairs
from sentalign.strategies import ScoredPair


class Command(PipelineCommand):
	help = "Re-score aligned sentence pairs with the ratio margin and keep the best ones up to a target-word budget."

	def add_arguments(self, parser):
		parser.add_argument("--pairs", required=True, help="Scored sentence pairs TSV.")
		parser.add_argument("--src-emb", required=True)
		parser.add_argument("--tgt-emb", required=True)
		parser.add_argument("--src", help="Source corpus; when given, the source embedding rows are checked against it.")
		parser.add_argument("--tgt", required=True, help="Target corpus, for counting budget words.")
		self.add_dim_argument(parser)
		parser.add_argument("--budget", type=int, required=True, help="Target-side token budget.")
		parser.add_argument("--k", type=int, default=getattr(settings, "BITEXT_TOP_K", 4))
		parser.add_argument(
			"--min-chars",
			type=int,
			default=getattr(settings, "BITEXT_MIN_CHARS", 50),
			help="Must match the value the pairs were aligned with.",
		)
		self.add_workers_argument(parser)
		parser.add_argument("--out", required=True)

	def run(self, **options):
		dim = self.require_positive("dim", options["dim"])
		budget = self.require_positive("budget", options["budget"])
		k = self.require_positive("k", options["k"])
		workers = self.require_positive("workers", options["workers"])

		pairs = read_scored_pairs(options["pairs"])
		tgt = load_corpus(options["tgt"], min_chars=options["min_chars"])
		src_rows = load_corpus(options["src"], min_chars=options["min_chars"]).sentence_count if options["src"] else None
		src_emb = load_embeddings(options["src_emb"], dim, expected_rows=src_rows)
		tgt_emb = load_embeddings(options["tgt_emb"], dim, expected_rows=tgt.sentence_count)

		keys = [(p.src_sid, p.tgt_sid) for p in pairs]
		rescored = [ScoredPair(s, t, score) for (s, t), score in zip(keys, margin_scores(keys, src_emb, tgt_emb, k, workers))]
		chosen = subsample_by_budget(rescored, budget, tgt)
		write_scored_pairs(options["out"], chosen)
		return {
			"pairs_in": len(pairs),
			"pairs": len(chosen),
			"target_words": sum(len(tgt.sentences[p.tgt_sid].tokens) for p in chosen),
			"budget": budget,
			"out": options["out"],
		}
