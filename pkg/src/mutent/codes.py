"""Systematic error-correcting codes over the four-element field.

Two families are provided: cyclic block codes given by a generator
polynomial (with exhaustive-minimum-distance syndrome decoding), and
rate-1/2 systematic convolutional codes with self-orthogonal tap sets
decoded by majority logic.  Codewords carry the information symbols
verbatim in their leading positions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from . import gf4
from .errors import LengthMismatch, UncorrectableBlock, ValidationError

MAX_ENUMERATION_WORDS = 1 << 18


def _blocks_needed(length: int, k: int) -> int:
    return max((length + k - 1) // k, 0)


@dataclass(frozen=True)
class CyclicCode:
    """Systematic cyclic block code over GF(4).

    The generator polynomial (ascending coefficients) must divide
    x^n + 1; its degree fixes the parity length n - k.  A codeword's
    first k symbols are the information symbols, followed by n - k
    parity symbols, and the associated polynomial (first symbol as the
    highest-degree coefficient) is divisible by the generator.
    """

    n: int
    k: int
    generator: gf4.Poly

    def __post_init__(self) -> None:
        gen = gf4.poly_trim(self.generator)
        if not gen:
            raise ValidationError("generator polynomial must be nonzero")
        object.__setattr__(self, "generator", gen)
        degree = len(gen) - 1
        if self.n < 1 or not (0 < self.k <= self.n):
            raise ValidationError(
                f"invalid code dimensions n={self.n}, k={self.k}"
            )
        if degree != self.n - self.k:
            raise ValidationError(
                f"generator degree {degree} must equal n - k = {self.n - self.k}"
            )
        if degree > 0:
            _, rem = gf4.poly_divmod(gf4.x_pow_n_plus_one(self.n), gen)
            if rem:
                raise ValidationError(
                    f"generator {gen} does not divide x^{self.n} + 1"
                )

    @classmethod
    def repetition(cls, n: int = 3) -> "CyclicCode":
        """Length-n repetition code: generator (x^n + 1)/(x + 1)."""
        quot, rem = gf4.poly_divmod(gf4.x_pow_n_plus_one(n), (1, 1))
        if rem:
            raise ValidationError(f"x + 1 does not divide x^{n} + 1")
        return cls(n=n, k=1, generator=quot)

    @classmethod
    def identity(cls, n: int) -> "CyclicCode":
        """Trivial code with no parity; encode and decode are identity."""
        return cls(n=n, k=n, generator=(1,))

    @property
    def kind(self) -> str:
        return "cyclic"

    def describe(self) -> dict:
        return {
            "kind": "cyclic",
            "n": self.n,
            "k": self.k,
            "generator": list(self.generator),
        }

    # -- block primitives ------------------------------------------------

    def _word_to_poly(self, word: tuple[int, ...]) -> gf4.Poly:
        # First symbol is the highest-degree coefficient.
        return gf4.poly_trim(tuple(reversed(word)))

    def encode_block(self, info: tuple[int, ...]) -> tuple[int, ...]:
        if len(info) != self.k:
            raise LengthMismatch(
                f"information block has {len(info)} symbols, expected {self.k}"
            )
        parity_len = self.n - self.k
        if parity_len == 0:
            return tuple(info)
        # info(x) * x^(n-k), reduced modulo the generator, gives the parity.
        shifted = (0,) * parity_len + tuple(reversed(info))
        rem = gf4.poly_mod(shifted, self.generator)
        parity = list(rem) + [0] * (parity_len - len(rem))
        return tuple(info) + tuple(reversed(parity))

    def syndrome(self, received: tuple[int, ...]) -> gf4.Poly:
        return gf4.poly_mod(self._word_to_poly(received), self.generator)

    @cached_property
    def min_distance(self) -> int:
        """Minimum Hamming weight over all nonzero codewords, by enumeration."""
        if self.n == self.k:
            return 1
        if 4**self.k > MAX_ENUMERATION_WORDS:
            raise ValidationError(
                f"minimum-distance enumeration infeasible for k={self.k}"
            )
        best = self.n
        for info in itertools.product(gf4.ELEMENTS, repeat=self.k):
            if not any(info):
                continue
            weight = sum(1 for s in self.encode_block(info) if s)
            best = min(best, weight)
        return best

    @property
    def correctable_errors(self) -> int:
        return (self.min_distance - 1) // 2

    @cached_property
    def _syndrome_table(self) -> dict[gf4.Poly, tuple[int, ...]]:
        """Map syndrome -> minimal-weight error pattern, up to t errors."""
        table: dict[gf4.Poly, tuple[int, ...]] = {(): (0,) * self.n}
        for weight in range(1, self.correctable_errors + 1):
            for positions in itertools.combinations(range(self.n), weight):
                for values in itertools.product((1, 2, 3), repeat=weight):
                    error = [0] * self.n
                    for pos, val in zip(positions, values):
                        error[pos] = val
                    syn = self.syndrome(tuple(error))
                    table.setdefault(syn, tuple(error))
        return table

    def decode_block(
        self, received: tuple[int, ...], block_index: int = 0
    ) -> tuple[tuple[int, ...], tuple[tuple[int, int], ...]]:
        """Return (information symbols, corrections as (position, value))."""
        if len(received) != self.n:
            raise LengthMismatch(
                f"received block has {len(received)} symbols, expected {self.n}"
            )
        syn = self.syndrome(received)
        if not syn:
            return tuple(received[: self.k]), ()
        error = self._syndrome_table.get(syn)
        if error is None:
            raise UncorrectableBlock(
                f"block {block_index}: syndrome {list(syn)} exceeds the "
                f"correction capability t={self.correctable_errors}",
                block_index=block_index,
                syndrome=list(syn),
            )
        corrected = tuple(r ^ e for r, e in zip(received, error))
        fixes = tuple((i, e) for i, e in enumerate(error) if e)
        return corrected[: self.k], fixes

    # -- streams ----------------------------------------------------------

    def encode(self, symbols) -> tuple[tuple[int, ...], int]:
        """Encode a symbol stream block-wise; returns (codeword stream, pad)."""
        data = [int(s) for s in symbols]
        blocks = _blocks_needed(len(data), self.k)
        pad = blocks * self.k - len(data)
        data.extend([0] * pad)
        out: list[int] = []
        for b in range(blocks):
            out.extend(self.encode_block(tuple(data[b * self.k : (b + 1) * self.k])))
        return tuple(out), pad

    def decode(
        self, received, pad: int = 0
    ) -> tuple[tuple[int, ...], tuple[tuple[int, int, int], ...]]:
        """Decode a codeword stream; returns (info, corrections).

        Corrections are (block index, position in block, error value).
        The trailing `pad` zero symbols introduced by encode are dropped.
        """
        data = [int(s) for s in received]
        if len(data) % self.n:
            raise LengthMismatch(
                f"received length {len(data)} is not a multiple of n={self.n}"
            )
        info: list[int] = []
        fixes: list[tuple[int, int, int]] = []
        for b in range(len(data) // self.n):
            block = tuple(data[b * self.n : (b + 1) * self.n])
            symbols, block_fixes = self.decode_block(block, block_index=b)
            info.extend(symbols)
            fixes.extend((b, pos, val) for pos, val in block_fixes)
        if pad:
            info = info[: len(info) - pad]
        return tuple(info), tuple(fixes)


@dataclass(frozen=True)
class ConvolutionalCode:
    """Rate-1/2 systematic convolutional code with truncated encoding.

    Each information symbol u_t is emitted together with the parity
    p_t = sum of u_(t-j) over the tap offsets j.  Tap sets with distinct
    pairwise differences (such as the default 0, 1, 3) are self-orthogonal,
    so feedback majority logic corrects isolated errors.  Encoding is
    truncated: no tail flush, output length is exactly twice the input.
    """

    taps: tuple[int, ...] = (0, 1, 3)

    def __post_init__(self) -> None:
        taps = tuple(sorted({int(t) for t in self.taps}))
        if not taps or taps[0] != 0:
            raise ValidationError("tap set must include offset 0")
        if any(t < 0 for t in taps):
            raise ValidationError("tap offsets must be nonnegative")
        diffs = [b - a for a, b in itertools.combinations(taps, 2)]
        if len(diffs) != len(set(diffs)):
            raise ValidationError(
                f"tap set {taps} is not self-orthogonal "
                "(pairwise differences repeat)"
            )
        object.__setattr__(self, "taps", taps)

    @property
    def kind(self) -> str:
        return "conv"

    @property
    def n(self) -> int:
        return 2

    @property
    def k(self) -> int:
        return 1

    @property
    def memory(self) -> int:
        return self.taps[-1]

    def describe(self) -> dict:
        return {"kind": "conv", "taps": list(self.taps), "rate": "1/2"}

    def encode(self, symbols) -> tuple[tuple[int, ...], int]:
        data = [int(s) for s in symbols]
        out: list[int] = []
        for t, u in enumerate(data):
            parity = 0
            for j in self.taps:
                if t - j >= 0:
                    parity ^= data[t - j]
            out.extend((u, parity))
        return tuple(out), 0

    def decode(
        self, received, pad: int = 0
    ) -> tuple[tuple[int, ...], tuple[tuple[int, int, int], ...]]:
        """Majority-logic decoding per bit plane; returns (info, corrections).

        Corrections are reported as (0, stream position, error value) since
        the truncated stream forms a single block.
        """
        data = [int(s) for s in received]
        if len(data) % 2:
            raise LengthMismatch(
                f"received length {len(data)} is not a multiple of 2"
            )
        length = len(data) // 2
        info = [data[2 * t] for t in range(length)]
        parity = [data[2 * t + 1] for t in range(length)]
        corrected = list(info)
        for plane in (0, 1):
            bit = 1 << plane
            u = [(s >> plane) & 1 for s in info]
            p = [(s >> plane) & 1 for s in parity]
            syndrome = []
            for t in range(length):
                expect = 0
                for j in self.taps:
                    if t - j >= 0:
                        expect ^= u[t - j]
                syndrome.append(p[t] ^ expect)
            for t in range(length):
                checks = [t + j for j in self.taps if t + j < length]
                votes = sum(syndrome[c] for c in checks)
                if 2 * votes > len(checks):
                    u[t] ^= 1
                    corrected[t] ^= bit
                    for c in checks:
                        syndrome[c] ^= 1
        fixes = tuple(
            (0, 2 * t, corrected[t] ^ info[t])
            for t in range(length)
            if corrected[t] != info[t]
        )
        result = tuple(corrected)
        if pad:
            result = result[: len(result) - pad]
        return result, fixes


SystematicCode = CyclicCode | ConvolutionalCode
