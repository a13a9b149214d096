import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import DataFormatError, DimensionError, EmptyInputError

from .matrix import EmbeddingMatrix, load_embeddings, write_embeddings
from .metrics import cosine, cosine_matrix, euclidean
from .search import knn, top_k_order


class LoadEmbeddingsTests(SimpleTestCase):
	def setUp(self):
		self.tmp = tempfile.TemporaryDirectory()
		self.addCleanup(self.tmp.cleanup)
		self.dir = Path(self.tmp.name)

	def test_reads_little_endian_float32_rows(self):
		values = np.arange(12, dtype=np.float32).reshape(3, 4)
		path = self.dir / "e.emb"
		path.write_bytes(values.astype("<f4").tobytes())
		emb = load_embeddings(path, 4, expected_rows=3)
		self.assertEqual((emb.rows, emb.dim), (3, 4))
		np.testing.assert_array_equal(emb.vectors([2, 0]), [[8, 9, 10, 11], [0, 1, 2, 3]])
		self.assertEqual(emb.vectors([1]).dtype, np.float64)

	def test_size_mismatch(self):
		path = self.dir / "e.emb"
		path.write_bytes(np.zeros((3, 4), dtype="<f4").tobytes())
		with self.assertRaises(DataFormatError) as ctx:
			load_embeddings(path, 4, expected_rows=4)
		self.assertIn("size mismatch", str(ctx.exception))
		with self.assertRaises(DataFormatError):
			load_embeddings(path, 5)

	def test_rows_inferred_from_size(self):
		path = write_embeddings(self.dir / "e.emb", np.ones((5, 2)))
		self.assertEqual(load_embeddings(path, 2).rows, 5)

	def test_non_finite_values_are_rejected(self):
		values = np.zeros((2, 3), dtype=np.float32)
		values[1, 2] = np.nan
		path = self.dir / "e.emb"
		path.write_bytes(values.astype("<f4").tobytes())
		with self.assertRaises(DataFormatError) as ctx:
			load_embeddings(path, 3)
		self.assertIn("row 1, col 2", str(ctx.exception))

	def test_missing_file(self):
		with self.assertRaises(OSError):
			load_embeddings(self.dir / "absent.emb", 4)

	def test_matrix_is_read_only(self):
		emb = EmbeddingMatrix(np.zeros((2, 2)))
		with self.assertRaises(ValueError):
			emb.values[0, 0] = 1.0

	def test_normalized_keeps_zero_rows(self):
		emb = EmbeddingMatrix(np.array([[3.0, 4.0], [0.0, 0.0]])).normalized()
		np.testing.assert_allclose(emb.values, [[0.6, 0.8], [0.0, 0.0]])


class MetricTests(SimpleTestCase):
	def test_euclidean(self):
		self.assertEqual(euclidean([0, 0], [3, 4]), 5.0)
		with self.assertRaises(DimensionError):
			euclidean([1, 2], [1, 2, 3])

	def test_cosine(self):
		self.assertAlmostEqual(cosine([1, 0], [1, 1]), 1 / np.sqrt(2), places=12)
		self.assertAlmostEqual(cosine([1, 2], [-2, -4]), -1.0, places=12)
		with self.assertRaises(DimensionError):
			cosine([0, 0], [1, 0])

	def test_euclidean_is_a_metric(self):
		rng = np.random.default_rng(11)
		for _ in range(200):
			u, v, w = rng.standard_normal((3, 6))
			self.assertEqual(euclidean(u, u), 0.0)
			self.assertAlmostEqual(euclidean(u, v), euclidean(v, u), delta=1e-9)
			self.assertLessEqual(euclidean(u, w), euclidean(u, v) + euclidean(v, w) + 1e-9)

	def test_cosine_ignores_positive_scaling(self):
		rng = np.random.default_rng(12)
		for _ in range(200):
			u, v = rng.standard_normal((2, 6))
			a, b = rng.uniform(0.01, 100.0, size=2)
			self.assertAlmostEqual(cosine(a * u, v), cosine(u, v), delta=1e-9)
			self.assertAlmostEqual(cosine(u, b * v), cosine(u, v), delta=1e-9)

	def test_cosine_matrix_zero_rows_score_zero(self):
		table = cosine_matrix(np.array([[0.0, 0.0], [1.0, 0.0]]), np.array([[1.0, 0.0], [0.0, 2.0]]))
		np.testing.assert_allclose(table, [[0.0, 0.0], [1.0, 0.0]])


class KnnTests(SimpleTestCase):
	def test_ties_break_by_lower_row(self):
		order = top_k_order(np.array([0.5, 0.9, 0.9, 0.1, 0.9]), 2)
		self.assertEqual(order.tolist(), [1, 2])
		self.assertEqual(top_k_order(np.array([0.2, 0.2]), 5).tolist(), [0, 1])

	def test_matches_brute_force(self):
		rng = np.random.default_rng(7)
		queries = EmbeddingMatrix(rng.standard_normal((30, 8)))
		index = EmbeddingMatrix(rng.standard_normal((50, 8)))
		hits = knn(queries, range(30), index, 4)
		table = cosine_matrix(queries.values, index.values)
		for hit in hits:
			expected = sorted(range(50), key=lambda j: (-table[hit.query, j], j))[:4]
			self.assertEqual(list(hit.rows), expected)

	def test_restricted_index_and_workers(self):
		rng = np.random.default_rng(3)
		queries = EmbeddingMatrix(rng.standard_normal((300, 6)))
		index = EmbeddingMatrix(rng.standard_normal((40, 6)))
		subset = [5, 1, 9, 30]
		single = knn(queries, range(300), index, 2, index_rows=subset)
		many = knn(queries, range(300), index, 2, index_rows=subset, workers=8)
		self.assertEqual(single, many)
		self.assertTrue(all(set(h.rows) <= set(subset) for h in single))

	def test_k_larger_than_index(self):
		index = EmbeddingMatrix(np.eye(3))
		hit = knn(index, [0], index, 10)[0]
		self.assertEqual(hit.rows, (0, 1, 2))

	def test_empty_index(self):
		index = EmbeddingMatrix(np.eye(3))
		with self.assertRaises(EmptyInputError):
			knn(index, [0], index, 1, index_rows=[])
