"""Deterministic, platform-stable randomness.

All protocol draws come from SHA-256 running in counter mode over
(seed, label, counter). Identical seeds therefore produce byte-identical
transcripts and CSV output on every platform and Python version, which the
reproducibility contract of the CLI depends on. Uniformity mod q uses
rejection sampling on single bytes (exact, no modulo bias).
"""

from __future__ import annotations

import hashlib


class Stream:
    """One labeled deterministic byte stream.

    Bytes are produced as SHA256(seed_bytes | label_bytes | counter) blocks.
    Distinct labels give computationally independent streams from one seed.
    """

    def __init__(self, seed: int | str, label: str):
        if isinstance(seed, int):
            seed_bytes = str(seed).encode()
        else:
            seed_bytes = seed.encode()
        self._prefix = hashlib.sha256(seed_bytes + b"\x00" + label.encode()).digest()
        self._counter = 0
        self._buf = b""

    def _refill(self) -> None:
        block = hashlib.sha256(
            self._prefix + self._counter.to_bytes(8, "big")
        ).digest()
        self._counter += 1
        self._buf += block

    def next_byte(self) -> int:
        if not self._buf:
            self._refill()
        b = self._buf[0]
        self._buf = self._buf[1:]
        return b

    def randint(self, q: int) -> int:
        """Uniform integer in [0, q); single-byte rejection for small q,
        4-byte rejection beyond."""
        if q < 1:
            raise ValueError(f"randint needs q >= 1, got {q}")
        if q == 1:
            return 0
        if q <= 256:
            limit = 256 - (256 % q)
            while True:
                b = self.next_byte()
                if b < limit:
                    return b % q
        return self._randbelow(q)

    def randvec(self, n: int, q: int) -> tuple[int, ...]:
        return tuple(self.randint(q) for _ in range(n))

    def sample(self, population: int, k: int) -> tuple[int, ...]:
        """Sorted k-subset of range(population), uniform, deterministic."""
        if k > population:
            raise ValueError("sample size exceeds population")
        chosen: list[int] = []
        remaining = list(range(population))
        for _ in range(k):
            idx = self._randbelow(len(remaining))
            chosen.append(remaining.pop(idx))
        return tuple(sorted(chosen))

    def _randbelow(self, n: int) -> int:
        """Uniform in [0, n) for arbitrary n via 4-byte rejection."""
        if n <= 0:
            raise ValueError("empty range")
        span = 1 << 32
        limit = span - (span % n)
        while True:
            word = (
                self.next_byte() << 24
                | self.next_byte() << 16
                | self.next_byte() << 8
                | self.next_byte()
            )
            if word < limit:
                return word % n


def stream(seed: int | str, label: str) -> Stream:
    """Convenience constructor for a labeled stream."""
    return Stream(seed, label)
