"""Pre-trained word embedding tables and the vector arithmetic built on them.

Supports the two common distribution formats (word2vec binary, GloVe text).
All vectors are widened to float64 on load; downstream feature code assumes
64-bit precision.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import ParseError


class EmbeddingFormat(enum.Enum):
    WORD2VEC_BINARY = "w2v-bin"
    GLOVE_TEXT = "glove-txt"


@dataclass(frozen=True)
class EmbeddingTable:
    """Immutable token -> float64 vector map.

    Safe for concurrent read-only access once constructed.
    """

    dim: int
    entries: Mapping[str, np.ndarray]
    source_format: EmbeddingFormat = EmbeddingFormat.GLOVE_TEXT

    def __post_init__(self) -> None:
        if self.dim <= 0:
            raise ValueError(f"embedding dim must be positive, got {self.dim}")

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: str) -> bool:
        return token in self.entries


def make_table(entries: Mapping[str, Iterable[float]], dim: int,
               source_format: EmbeddingFormat = EmbeddingFormat.GLOVE_TEXT) -> EmbeddingTable:
    """Build a table from in-memory data, validating shape and finiteness."""
    store: dict[str, np.ndarray] = {}
    for token, values in entries.items():
        vec = np.asarray(values, dtype=np.float64)
        if vec.shape != (dim,):
            raise ValueError(f"vector for {token!r} has shape {vec.shape}, expected ({dim},)")
        if not np.all(np.isfinite(vec)):
            raise ValueError(f"vector for {token!r} contains non-finite values")
        store[token] = vec
    return EmbeddingTable(dim=dim, entries=store, source_format=source_format)


def load_embeddings(path: str | Path, format: EmbeddingFormat | str) -> EmbeddingTable:
    """Load a pre-trained embedding file in the given format."""
    path = Path(path)
    fmt = EmbeddingFormat(format) if not isinstance(format, EmbeddingFormat) else format
    if fmt is EmbeddingFormat.WORD2VEC_BINARY:
        return _load_word2vec_binary(path)
    return _load_glove_text(path)


def _load_word2vec_binary(path: Path) -> EmbeddingTable:
    # Layout: ASCII header "<vocab> <dim>\n", then per record the token bytes
    # terminated by a single space, dim little-endian float32s, and an
    # optional trailing newline.
    data = path.read_bytes()
    newline = data.find(b"\n")
    if newline < 0:
        raise ParseError(f"{path}: no header line (file is empty or truncated at byte 0)")
    header = data[:newline].split()
    if len(header) != 2:
        raise ParseError(f"{path}: malformed header {data[:newline]!r}")
    try:
        vocab_size, dim = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError(f"{path}: malformed header {data[:newline]!r}") from None
    if vocab_size < 0 or dim <= 0:
        raise ParseError(f"{path}: malformed header counts vocab={vocab_size} dim={dim}")

    record_bytes = 4 * dim
    entries: dict[str, np.ndarray] = {}
    offset = newline + 1
    for record in range(vocab_size):
        space = data.find(b" ", offset)
        if space < 0:
            raise ParseError(f"{path}: record {record} truncated at byte {offset}")
        try:
            token = data[offset:space].decode("utf-8")
        except UnicodeDecodeError:
            raise ParseError(f"{path}: record {record} token at byte {offset} is not UTF-8") from None
        vec_start = space + 1
        if vec_start + record_bytes > len(data):
            raise ParseError(f"{path}: record {record} vector truncated at byte {vec_start}")
        vec32 = np.frombuffer(data, dtype="<f4", count=dim, offset=vec_start)
        if not np.all(np.isfinite(vec32)):
            raise ParseError(f"{path}: record {record} ({token!r}) has non-finite components")
        entries[token] = vec32.astype(np.float64)
        offset = vec_start + record_bytes
        if offset < len(data) and data[offset:offset + 1] == b"\n":
            offset += 1
    if data[offset:].strip():
        raise ParseError(f"{path}: unexpected trailing data at byte {offset}")
    return EmbeddingTable(dim=dim, entries=entries, source_format=EmbeddingFormat.WORD2VEC_BINARY)


def _load_glove_text(path: Path) -> EmbeddingTable:
    # One record per line: token and dim decimal literals, space-separated.
    entries: dict[str, np.ndarray] = {}
    dim: int | None = None
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                raise ParseError(f"{path}: empty record at line {lineno}")
            parts = line.split(" ")
            token, raw_values = parts[0], parts[1:]
            if dim is None:
                dim = len(raw_values)
                if dim == 0:
                    raise ParseError(f"{path}: line {lineno} has a token but no values")
            elif len(raw_values) != dim:
                raise ParseError(
                    f"{path}: line {lineno} has {len(raw_values)} values, expected {dim}")
            try:
                vec = np.array(raw_values, dtype=np.float64)
            except ValueError:
                raise ParseError(f"{path}: line {lineno} has a malformed number") from None
            if not np.all(np.isfinite(vec)):
                raise ParseError(f"{path}: line {lineno} has non-finite components")
            entries[token] = vec
    if dim is None:
        raise ParseError(f"{path}: empty file")
    return EmbeddingTable(dim=dim, entries=entries, source_format=EmbeddingFormat.GLOVE_TEXT)


def lookup(table: EmbeddingTable, token: str) -> np.ndarray | None:
    """Exact-match lookup with a lowercase fallback; None when both miss."""
    vec = table.entries.get(token)
    if vec is None:
        vec = table.entries.get(token.lower())
    return vec


def centroid(table: EmbeddingTable, tokens: Iterable[str]) -> np.ndarray:
    """Mean vector of the tokens that resolve via lookup.

    Tokens without a vector are skipped; the zero vector is returned when
    nothing resolves, so all-OOV fragments still yield a usable value.
    """
    total = np.zeros(table.dim, dtype=np.float64)
    count = 0
    for token in tokens:
        vec = lookup(table, token)
        if vec is not None:
            total += vec
            count += 1
    if count == 0:
        return total
    return total / count


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity, defined as 0.0 when either operand has zero norm."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"vector length mismatch: {a.shape} vs {b.shape}")
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return float(np.dot(a, b) / (norm_a * norm_b))
