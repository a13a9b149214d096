import json
import os
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from .exceptions import DataFormatError
from .files import atomic_write_bytes, atomic_write_lines, iter_tsv
from .formatting import fixed9
from .parallel import chunked, ordered_map
from .pdf import summary_pdf


class FormattingTests(SimpleTestCase):
	def test_nine_decimals(self):
		self.assertEqual(fixed9(0.70710678118), "0.707106781")
		self.assertEqual(fixed9(1), "1.000000000")
		self.assertEqual(fixed9(2.5e-10), "0.000000000")
		self.assertEqual(fixed9(5e-10), "0.000000001")

	def test_negative_zero_is_normalized(self):
		self.assertEqual(fixed9(-0.0), "0.000000000")
		self.assertEqual(fixed9(-1e-12), "0.000000000")

	def test_reformatting_is_stable(self):
		for value in (0.123456789, 3.999999999, 12.000000001):
			self.assertEqual(fixed9(float(fixed9(value))), fixed9(value))


class FileTests(SimpleTestCase):
	def setUp(self):
		self.tmp = tempfile.TemporaryDirectory()
		self.addCleanup(self.tmp.cleanup)
		self.dir = Path(self.tmp.name)

	def test_atomic_write_leaves_no_temp_files(self):
		target = self.dir / "nested" / "out.tsv"
		atomic_write_lines(target, ["a\tb", "c\td"])
		self.assertEqual(target.read_text(encoding="utf-8"), "a\tb\nc\td\n")
		self.assertEqual(os.listdir(target.parent), ["out.tsv"])

	def test_failed_write_keeps_previous_file(self):
		target = self.dir / "out.tsv"
		atomic_write_lines(target, ["old"])

		def broken():
			yield "new"
			raise RuntimeError("boom")

		with self.assertRaises(RuntimeError):
			atomic_write_lines(target, broken())
		self.assertEqual(target.read_text(encoding="utf-8"), "old\n")
		self.assertEqual(os.listdir(self.dir), ["out.tsv"])

	def test_atomic_write_bytes(self):
		target = atomic_write_bytes(self.dir / "blob.bin", b"\x00\x01")
		self.assertEqual(target.read_bytes(), b"\x00\x01")

	def test_iter_tsv_reports_short_rows_with_line_number(self):
		path = self.dir / "pairs.tsv"
		path.write_text("a\tb\n\nonly-one\n", encoding="utf-8")
		rows = iter_tsv(path, min_columns=2)
		self.assertEqual(next(rows), (1, ["a", "b"]))
		with self.assertRaises(DataFormatError) as ctx:
			next(rows)
		self.assertEqual(ctx.exception.line, 3)
		self.assertIn("pairs.tsv:3:", str(ctx.exception))

	def test_iter_tsv_comments(self):
		path = self.dir / "lex.tsv"
		path.write_text("# header\nx\ty\n", encoding="utf-8")
		self.assertEqual(list(iter_tsv(path, min_columns=2, comments=True)), [(2, ["x", "y"])])


class ParallelTests(SimpleTestCase):
	def test_order_does_not_depend_on_workers(self):
		items = list(range(100))
		expected = [i * i for i in items]
		for workers in (1, 2, 8):
			self.assertEqual(ordered_map(lambda i: i * i, items, workers), expected)

	def test_chunked(self):
		self.assertEqual(chunked([1, 2, 3, 4, 5], 2), [[1, 2], [3, 4], [5]])
		self.assertEqual(chunked([], 3), [])


class PdfTests(SimpleTestCase):
	def test_summary_pdf_is_a_pdf(self):
		payload = summary_pdf("Run", [("Recall", "1.000000000")], header=["a", "b"], rows=[["x", "1"]])
		self.assertTrue(payload.startswith(b"%PDF"))


class PipelineCommandTests(SimpleTestCase):
	def test_summary_is_one_json_line(self):
		with tempfile.TemporaryDirectory() as tmp:
			gold = Path(tmp) / "gold.tsv"
			gold.write_text("a\tx\n", encoding="utf-8")
			out = StringIO()
			call_command("eval", task="document", pred=str(gold), gold=str(gold), stdout=out)
		lines = out.getvalue().strip().splitlines()
		self.assertEqual(len(lines), 1)
		summary = json.loads(lines[0])
		self.assertEqual(summary["command"], "eval")
		self.assertIn("elapsed_seconds", summary)

	def test_bad_choice_is_a_usage_error(self):
		with self.assertRaises(CommandError) as ctx:
			call_command("eval", "--task", "paragraph", "--pred", "p", "--gold", "g", stdout=StringIO())
		self.assertEqual(ctx.exception.returncode, 1)

	def test_missing_file_is_a_data_error(self):
		with self.assertRaises(CommandError) as ctx:
			call_command("eval", task="document", pred="/nonexistent/pred.tsv", gold="/nonexistent/gold.tsv", stdout=StringIO())
		self.assertEqual(ctx.exception.returncode, 2)
		self.assertIn("/nonexistent/", str(ctx.exception))
