"""Hot loops, each in a numba flavour and a numpy flavour.

Fixed-point conventions: a real ``x`` is represented by the word
``floor(x * 2**64) mod 2**64`` (``uint64``), so integer combinations wrap
exactly like fractional parts do. The distance to the nearest integer of a
word ``u`` is ``min(u, 2**64 - u)`` ulps. When the true value has more than
64 fractional bits the word under-estimates it by less than one ulp, so a
combination ``sum x_i * w_i`` is off by less than ``sum |x_i|`` ulps; the
kernels take a ``slack`` flag (0 for exact 64-bit inputs, 1 otherwise) and
report ambiguous cases for exact re-checking.
"""

MEMBER = 1
NON_MEMBER = 0
AMBIGUOUS = 2
