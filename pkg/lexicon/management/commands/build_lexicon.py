from django.conf import settings

from core.management.base import PipelineCommand

from lexicon.improve import build_improved_lexicon
from lexicon.tables import load_lexicon, load_phrase_pairs, write_lexicon


class Command(PipelineCommand):
	help = "Extend a word dictionary with phrase entries recovered from a glossary."

	def add_arguments(self, parser):
		parser.add_argument("--glossary", required=True, help="Glossary TSV (phrase pairs, any length).")
		parser.add_argument("--words", required=True, help="Word dictionary TSV.")
		parser.add_argument("--src-lang", default="src")
		parser.add_argument("--tgt-lang", default="tgt")
		parser.add_argument(
			"--max-len",
			type=int,
			default=getattr(settings, "BITEXT_MAX_PHRASE_LEN", 5),
			help="Longest phrase kept, in tokens.",
		)
		parser.add_argument("--out", required=True)

	def run(self, **options):
		max_len = self.require_positive("max_len", options["max_len"])
		words = load_lexicon(options["words"], options["src_lang"], options["tgt_lang"], max_len)
		glossary = load_phrase_pairs(options["glossary"], options["src_lang"], options["tgt_lang"])
		improved = build_improved_lexicon(glossary, words, max_len)
		write_lexicon(options["out"], improved)
		return {
			"glossary_pairs": len(glossary),
			"word_entries": len(words),
			"entries": len(improved),
			"pairs": improved.pair_count,
			"out": options["out"],
		}
