"""graph6 encoding (upper triangle, column-major, 6 bits per byte + 63)."""

from __future__ import annotations

import numpy as np

from .graph import SympGraph

HEADER = b">>graph6<<"
_MAX_N = (1 << 36) - 1


class Graph6Error(ValueError):
    pass


def _encode_n(n: int) -> bytes:
    if n < 0 or n > _MAX_N:
        raise Graph6Error(f"graph6 cannot encode n={n}")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])


def _decode_n(data: bytes) -> tuple[int, int]:
    """Return (n, number of header bytes consumed)."""
    if not data:
        raise Graph6Error("empty graph6 string")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise Graph6Error("truncated 8-byte size header")
        digits, used = data[2:8], 8
    else:
        if len(data) < 4:
            raise Graph6Error("truncated 4-byte size header")
        digits, used = data[1:4], 4
    n = 0
    for d in digits:
        if not 63 <= d <= 126:
            raise Graph6Error(f"invalid size byte {d}")
        n = (n << 6) | (d - 63)
    return n, used


def _triu_colmajor(n: int) -> tuple[np.ndarray, np.ndarray]:
    # pairs (i, j), i < j, ordered by j then i
    j, i = np.triu_indices(n, k=1)[::-1]
    order = np.lexsort((i, j))
    return i[order], j[order]


def graph6_encode(g: SympGraph, header: bool = False) -> bytes:
    """Encode a graph as a graph6 byte string (no trailing newline)."""
    n = g.n
    i, j = _triu_colmajor(n)
    bits = g.dense()[i, j].astype(np.uint8)
    pad = (-len(bits)) % 6
    bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
    groups = bits.reshape(-1, 6) @ (1 << np.arange(5, -1, -1))
    body = (groups + 63).astype(np.uint8).tobytes()
    return (HEADER if header else b"") + _encode_n(n) + body


def graph6_decode(data: bytes | str, *, nu: int = 0, name: str = "") -> SympGraph:
    """Decode one graph6 record.

    If ``nu`` is given, the result is labeled as a graph on the nonzero
    vectors of F_2^{2nu} (vertex ``i`` is vector ``i + 1``).
    """
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.strip()
    if data.startswith(HEADER):
        data = data[len(HEADER):]
    n, used = _decode_n(data)
    body = np.frombuffer(data[used:], dtype=np.uint8)
    nbits = n * (n - 1) // 2
    if len(body) != (nbits + 5) // 6:
        raise Graph6Error(f"expected {(nbits + 5) // 6} data bytes for n={n}, got {len(body)}")
    if np.any((body < 63) | (body > 126)):
        raise Graph6Error("data byte outside printable range 63..126")
    vals = body.astype(np.int64) - 63
    bits = ((vals[:, None] >> np.arange(5, -1, -1)) & 1).reshape(-1)
    if np.any(bits[nbits:]):
        raise Graph6Error("nonzero padding bits")
    i, j = _triu_colmajor(n)
    adj = np.zeros((n, n), dtype=bool)
    adj[i, j] = bits[:nbits].astype(bool)
    adj |= adj.T
    labels = None
    if nu:
        if n != (1 << 2 * nu) - 1:
            raise Graph6Error(f"n={n} is not 2^(2*{nu})-1")
        labels = np.arange(1, n + 1, dtype=np.int64)
    return SympGraph.from_dense(adj, nu=nu, labels=labels, name=name)
