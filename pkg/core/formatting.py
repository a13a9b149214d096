from decimal import Decimal, InvalidOperation, ROUND_HALF_UP

_NINE_PLACES = Decimal("0.000000001")


def fixed9(val) -> str:
	"""Format a score or distance with exactly 9 decimal places.

	Used for every TSV artifact so that reading a value back and writing it again is
	byte-stable:
		0.70710678118  ->  0.707106781
		-0.0           ->  0.000000000
	"""
	try:
		# Avoid Decimal(float) binary artifacts; parse floats via repr().
		dec = val if isinstance(val, Decimal) else Decimal(repr(float(val)))
		dec = dec.quantize(_NINE_PLACES, rounding=ROUND_HALF_UP)
		if dec.is_zero():
			dec = abs(dec)
		return f"{dec:.9f}"
	except (InvalidOperation, ValueError, TypeError):
		return str(val)
