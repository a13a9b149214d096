def _clamped(count: int, len_a: int) -> int:
	# count == |s_A| would zero the distance weight and divide by zero in its inverse.
	return max(0, min(int(count), len_a - 1))


def doc_pair_weight(count: int, len_a: int) -> float:
	"""Distance multiplier (|s_A| - count) / |s_A|, in (0, 1]."""
	if len_a < 1:
		raise ValueError("len_a must be >= 1")
	if len_a == 1:
		return 1.0
	return (len_a - _clamped(count, len_a)) / len_a


def sent_pair_weight(count: int, len_a: int) -> float:
	"""Similarity multiplier |s_A| / (|s_A| - count), in [1, |s_A|]; inverse of doc_pair_weight."""
	if len_a < 1:
		raise ValueError("len_a must be >= 1")
	if len_a == 1:
		return 1.0
	return len_a / (len_a - _clamped(count, len_a))
