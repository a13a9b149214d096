from core.management.base import PipelineCommand

from evaluation.recall import Task, load_gold, read_predicted, recall
from evaluation.reports import format_table, render_report_pdf


class Command(PipelineCommand):
	help = "Recall of predicted document or sentence pairs against a gold alignment."

	def add_arguments(self, parser):
		parser.add_argument("--task", choices=Task.values, required=True)
		parser.add_argument("--pred", required=True, help="Predicted pairs TSV (extra columns ignored).")
		parser.add_argument("--gold", required=True, help="Gold pairs TSV.")
		parser.add_argument("--pretty", action="store_true", help="Print a table to standard error as well.")
		parser.add_argument("--report-pdf", help="Write a PDF run report here.")

	def run(self, **options):
		report = recall(read_predicted(options["pred"], options["task"]), load_gold(options["gold"], options["task"]))
		if options["pretty"]:
			self.stderr.write(format_table(report))
		if options["report_pdf"]:
			render_report_pdf(report, options["report_pdf"], predicted_path=options["pred"], gold_path=options["gold"])
		return report.as_dict()
