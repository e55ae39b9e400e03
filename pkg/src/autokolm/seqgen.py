"""Deterministic binary digit sources.

All sources emit '0'/'1' characters.  Equal parameters always produce
the same stream, on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ContractError, FormatError

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def champernowne_bits(n: int) -> str:
    """First n bits of 0 1 10 11 100 101 110 111 1000 ...

    The stream starts with a lone 0 and then concatenates the positive
    integers written in binary.
    """
    if n < 0:
        raise ContractError("bit count must be nonnegative")
    parts = ["0"]
    total = 1
    i = 1
    while total < n:
        b = format(i, "b")
        parts.append(b)
        total += len(b)
        i += 1
    return "".join(parts)[:n]


def rational_bits(p: int, q: int, n: int) -> str:
    """First n binary digits of frac(p/q) by exact long division.

    Dyadic rationals get their terminating expansion (trailing zeros).
    """
    if q == 0:
        raise ContractError("denominator must be nonzero")
    if not 0 <= p < q:
        raise ContractError("need 0 <= p < q")
    digits = []
    r = p
    for _ in range(n):
        r *= 2
        if r >= q:
            digits.append("1")
            r -= q
        else:
            digits.append("0")
    return "".join(digits)


def bernoulli_bits(p: float, seed: int, n: int) -> str:
    """n bits, bit i set iff the i-th SplitMix64 draw is below p * 2**64.

    SplitMix64 is counter-based, so the draws vectorize: draw i mixes
    seed + (i+1) * 0x9E3779B97F4A7C15 through two xor-multiply rounds.
    """
    if not 0.0 <= p <= 1.0:
        raise ContractError("probability must lie in [0, 1]")
    if n < 0:
        raise ContractError("bit count must be nonnegative")
    if n == 0:
        return ""
    if p == 0.0:
        return "0" * n
    if p == 1.0:
        return "1" * n
    threshold = np.uint64(min(int(p * 2.0 ** 64), _MASK))
    idx = np.arange(1, n + 1, dtype=np.uint64)
    z = (np.uint64(seed & _MASK) + idx * np.uint64(_GOLDEN))
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    z = z ^ (z >> np.uint64(31))
    bits = np.where(z < threshold, ord("1"), ord("0")).astype(np.uint8)
    return bits.tobytes().decode("ascii")


def read_sequence_text(text: str, origin: str = "<input>") -> str:
    """Extract a 0/1 string, ignoring whitespace; other bytes are errors."""
    out = []
    for offset, ch in enumerate(text):
        if ch in "01":
            out.append(ch)
        elif not ch.isspace():
            raise FormatError(
                f"{origin}: unexpected byte {ch!r} at offset {offset}")
    return "".join(out)


def read_sequence_file(path) -> str:
    with open(path, "r", encoding="ascii") as fh:
        return read_sequence_text(fh.read(), origin=str(path))


@dataclass
class SequenceSource:
    """A named deterministic bit stream with a read cursor.

    kind is one of champernowne, rational, bernoulli, file; file sources
    are finite, the rest unbounded.
    """

    kind: str
    generate: Callable            # (n) -> first n bits
    limit: Optional[int] = None   # finite length, None if unbounded
    position: int = 0

    @classmethod
    def champernowne(cls) -> "SequenceSource":
        return cls("champernowne", champernowne_bits)

    @classmethod
    def rational(cls, p: int, q: int) -> "SequenceSource":
        return cls(f"rational({p}/{q})", lambda n: rational_bits(p, q, n))

    @classmethod
    def bernoulli(cls, p: float, seed: int) -> "SequenceSource":
        return cls(f"bernoulli({p},seed={seed})",
                   lambda n: bernoulli_bits(p, seed, n))

    @classmethod
    def from_file(cls, path) -> "SequenceSource":
        bits = read_sequence_file(path)
        return cls(f"file({path})", lambda n: bits[:n], limit=len(bits))

    def prefix(self, n: int) -> str:
        """First n bits, independent of the cursor."""
        if self.limit is not None and n > self.limit:
            raise ContractError(
                f"source {self.kind} holds only {self.limit} bits, {n} requested")
        return self.generate(n)

    def take(self, n: int) -> str:
        """Next n bits, advancing the cursor."""
        chunk = self.prefix(self.position + n)[self.position:]
        self.position += n
        return chunk
