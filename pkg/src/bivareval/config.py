"""Tunable crossover constants for the arithmetic kernels.

The defaults are engineering choices; none of the algorithms depend on
them for correctness.  Use :func:`override` to change them temporarily::

    with override(schoolbook_cutoff=8):
        poly_mul(a, b)
"""

from contextlib import contextmanager
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class ArithmeticConfig:
    # poly_mul: schoolbook when the shorter operand has degree below this
    schoolbook_cutoff: int = 32
    # poly_divrem: long division when the divisor has degree below this
    newton_cutoff: int = 32
    # multipoint_eval: Horner at every point once a subtree holds this many
    horner_leaf_size: int = 8
    # taylor_shift: quadratic synthetic shifting below this length
    taylor_cutoff: int = 16
    # moduli >= 2^31: one big-integer product up to this result length,
    # multi-modular transforms above it
    bigint_cutoff: int = 2048


DEFAULT_CONFIG = ArithmeticConfig()
_current = DEFAULT_CONFIG


def current() -> ArithmeticConfig:
    return _current


@contextmanager
def override(**changes):
    global _current
    saved = _current
    _current = replace(saved, **changes)
    try:
        yield _current
    finally:
        _current = saved
