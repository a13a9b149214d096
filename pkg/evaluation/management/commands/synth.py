from core.management.base import PipelineCommand

from evaluation.synth import synth_corpus


class Command(PipelineCommand):
	help = "Generate a synthetic comparable corpus with embeddings and gold alignments."

	def add_arguments(self, parser):
		parser.add_argument("--docs", type=int, required=True)
		parser.add_argument("--sents", type=int, required=True, help="Sentences per document.")
		parser.add_argument("--dim", type=int, required=True)
		parser.add_argument("--sigma", type=float, required=True, help="Standard deviation of the target-side noise.")
		parser.add_argument("--seed", type=int, required=True)
		parser.add_argument("--src-lang", default="en")
		parser.add_argument("--tgt-lang", default="si")
		parser.add_argument("--out-dir", required=True)

	def run(self, **options):
		for name in ("docs", "sents", "dim"):
			self.require_positive(name, options[name])
		if options["sigma"] < 0:
			self.usage_error("--sigma must not be negative")
		files = synth_corpus(
			options["docs"],
			options["sents"],
			options["dim"],
			options["sigma"],
			options["seed"],
			options["out_dir"],
			src_lang=options["src_lang"],
			tgt_lang=options["tgt_lang"],
		)
		return {"documents": files.documents, "sentences": files.sentences, "out_dir": options["out_dir"]}
