"""Working-precision context shared by every numeric routine.

All computations run under mpmath with a binary precision carried by a
:class:`PrecisionCtx`.  Tolerances are derived from the context rather than
hard-coded so that a single object pins the accuracy of a whole pipeline.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from mpmath import mp, mpf, workprec

DEFAULT_BITS = int(os.environ.get("ANGELESCO_BITS", "256"))
DEFAULT_GUARD = 16


@dataclass(frozen=True)
class PrecisionCtx:
    """Binary working precision plus guard bits for internal headroom."""

    bits: int = DEFAULT_BITS
    guard_bits: int = DEFAULT_GUARD

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("precision must be at least 64 bits")
        if self.guard_bits < 0:
            raise ValueError("guard_bits must be non-negative")

    @property
    def work_bits(self) -> int:
        return self.bits + self.guard_bits

    def workprec(self):
        """Context manager setting mpmath to bits + guard_bits."""
        return workprec(self.work_bits)

    @property
    def eps(self) -> mpf:
        with self.workprec():
            return mpf(2) ** (-self.bits + self.guard_bits)

    @property
    def half_eps(self) -> mpf:
        """2^(-bits/2), the default certification tolerance."""
        with self.workprec():
            return mpf(2) ** (-self.bits // 2)

    @property
    def third_eps(self) -> mpf:
        """2^(-bits/3), used for finite-difference steps and root residuals."""
        with self.workprec():
            return mpf(2) ** (-self.bits // 3)

    def doubled(self) -> "PrecisionCtx":
        return PrecisionCtx(bits=2 * self.bits, guard_bits=self.guard_bits)


DEFAULT_CTX = PrecisionCtx()


def mpf_str(x) -> str:
    """Decimal string at the precision currently active in mpmath."""
    return mp.nstr(x, int(mp.dps) + 2, strip_zeros=False)
