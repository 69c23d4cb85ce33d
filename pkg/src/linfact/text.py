"""Byte strings <-> dense integer-alphabet texts with a unique terminal sentinel."""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import UnknownSymbol

SENTINEL = 1


@dataclass(frozen=True, eq=False)
class Text:
    """Integer text ``symbols`` over ``{1..sigma+1}``; symbol 1 is the sentinel and ends the text.

    ``byte_for_symbol[k]`` is the original byte of internal symbol ``k + 2``.
    """

    symbols: np.ndarray
    sigma: int
    byte_for_symbol: bytes
    sentinel_symbol: int = SENTINEL

    @property
    def n(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __eq__(self, other):
        if not isinstance(other, Text):
            return NotImplemented
        return self.byte_for_symbol == other.byte_for_symbol and np.array_equal(
            self.symbols, other.symbols
        )

    def symbol_for_byte(self, b: int) -> int:
        i = self.byte_for_symbol.find(bytes([b]))
        if i < 0:
            raise UnknownSymbol(f"byte {b!r} not in alphabet")
        return i + 2


def byte_ranks(alphabet_bytes: bytes | np.ndarray) -> tuple[np.ndarray, bytes]:
    """Dense order-preserving ranks (starting at 2) for the distinct byte values present.

    Returns the 256-entry lookup table (0 for absent bytes) and the sorted alphabet.
    """
    present = np.zeros(256, dtype=bool)
    if len(alphabet_bytes):
        arr = np.frombuffer(alphabet_bytes, dtype=np.uint8) if isinstance(
            alphabet_bytes, (bytes, bytearray, memoryview)
        ) else np.asarray(alphabet_bytes, dtype=np.uint8)
        present[np.bincount(arr, minlength=256) > 0] = True
    table = np.zeros(256, dtype=np.int32)
    values = np.flatnonzero(present)
    table[values] = np.arange(2, 2 + len(values), dtype=np.int32)
    return table, bytes(values.astype(np.uint8))


def encode_text(data: bytes) -> Text:
    data = bytes(data)
    table, alphabet = byte_ranks(data)
    symbols = np.empty(len(data) + 1, dtype=np.int32)
    if data:
        symbols[:-1] = table[np.frombuffer(data, dtype=np.uint8)]
    symbols[-1] = SENTINEL
    symbols.flags.writeable = False
    return Text(symbols, len(alphabet), alphabet)


def decode_text(t: Text) -> bytes:
    syms = np.asarray(t.symbols, dtype=np.int64)
    if len(syms) and syms[-1] == SENTINEL:
        syms = syms[:-1]
    if len(syms) == 0:
        return b""
    lut = np.frombuffer(t.byte_for_symbol, dtype=np.uint8)
    idx = syms - 2
    bad = (idx < 0) | (idx >= len(lut))
    if bad.any():
        raise UnknownSymbol(f"symbol {int(syms[np.argmax(bad)])} has no byte mapping")
    return lut[idx].tobytes()


_TOKEN = re.compile(r"\\x\{([0-9A-Fa-f]{2})\}")


def byte_token(b: int | None) -> str:
    """Display token for a byte; ``None`` is the sentinel, always shown as ``$``.

    Printable non-space ASCII is shown as itself except ``$`` and backslash, which are
    escaped as ``\\x{hh}`` like every other byte.
    """
    if b is None:
        return "$"
    if 0x21 <= b <= 0x7E and b not in (0x24, 0x5C):
        return chr(b)
    return "\\x{%02x}" % b


def parse_byte_token(tok: str) -> int | None:
    """Inverse of :func:`byte_token`; raises ValueError on anything else."""
    if tok == "$":
        return None
    if len(tok) == 1 and tok != "\\" and 0x21 <= ord(tok) <= 0x7E:
        return ord(tok)
    m = _TOKEN.fullmatch(tok)
    if m is None:
        raise ValueError(f"bad symbol token {tok!r}")
    return int(m.group(1), 16)
