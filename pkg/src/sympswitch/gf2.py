"""Bit-packed GF(2) vectors, the standard symplectic form, and affine solving.

Vectors in F_2^{2nu} are plain Python ints: coordinate ``i`` (1-based) lives
at bit ``i - 1``, so block ``l`` occupies bits ``2l - 2`` and ``2l - 1``.  With
this layout the form matrix ``K = I_nu (x) R`` is a swap of adjacent bits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

MIN_NU = 3
MAX_NU = 8

#: Hard ceiling on how many solutions ``solve_affine`` will materialise.
ENUMERATION_CAP = 1 << 20


def check_nu(nu: int) -> int:
    if not isinstance(nu, int) or isinstance(nu, bool):
        raise TypeError(f"nu must be an int, got {type(nu).__name__}")
    if not MIN_NU <= nu <= MAX_NU:
        raise ValueError(f"nu must be in [{MIN_NU}, {MAX_NU}], got {nu}")
    return nu


def _even_mask(nbits: int) -> int:
    # 0b...0101: the first coordinate of every block
    blocks = (nbits + 1) // 2
    return int("01" * blocks, 2) if blocks else 0


@dataclass(frozen=True)
class BitVector:
    """A vector of F_2^dim, bit-packed into an int."""

    bits: int
    dim: int

    def __post_init__(self) -> None:
        if self.dim < 2 * MIN_NU or self.dim % 2:
            raise ValueError(f"dim must be even and >= {2 * MIN_NU}, got {self.dim}")
        if self.bits < 0 or self.bits >> self.dim:
            raise ValueError(f"bits {self.bits:#x} do not fit in dim {self.dim}")

    @classmethod
    def from_coords(cls, coords: Iterable[int]) -> "BitVector":
        """Build from a coordinate sequence, first coordinate first."""
        coords = list(coords)
        bits = 0
        for i, c in enumerate(coords):
            if c not in (0, 1):
                raise ValueError(f"coordinate {i + 1} is {c!r}, expected 0 or 1")
            bits |= c << i
        return cls(bits, len(coords))

    @classmethod
    def from_string(cls, s: str) -> "BitVector":
        """Parse a column vector written as a string, e.g. ``"11101000"``."""
        return cls.from_coords(int(ch) for ch in s.strip() if ch in "01")

    @classmethod
    def unit(cls, i: int, dim: int) -> "BitVector":
        """The standard basis vector ``e_i`` (1-based)."""
        if not 1 <= i <= dim:
            raise ValueError(f"e_{i} does not exist in dim {dim}")
        return cls(1 << (i - 1), dim)

    @property
    def nu(self) -> int:
        return self.dim // 2

    def coords(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.dim)]

    def block(self, l: int) -> tuple[int, int]:
        """The 2-bit block ``x_l`` (1-based) as a pair of coordinates."""
        b = self.bits >> (2 * l - 2)
        return (b & 1, (b >> 1) & 1)

    def __add__(self, other: "BitVector") -> "BitVector":
        _same_dim(self, other)
        return BitVector(self.bits ^ other.bits, self.dim)

    def __int__(self) -> int:
        return self.bits

    def __str__(self) -> str:
        return "".join(str(c) for c in self.coords())


def _same_dim(x: object, y: object) -> None:
    if isinstance(x, BitVector) and isinstance(y, BitVector) and x.dim != y.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {y.dim}")


def pair_swap(y: int | BitVector) -> int | BitVector:
    """Swap the two bits inside every block, i.e. compute ``K y``."""
    if isinstance(y, BitVector):
        return BitVector(pair_swap(y.bits), y.dim)
    m = _even_mask(y.bit_length() + 1)
    return ((y & m) << 1) | ((y >> 1) & m)


def symp_form(x: int | BitVector, y: int | BitVector) -> int:
    """``x^T K y`` over F_2."""
    _same_dim(x, y)
    return (int(x) & pair_swap(int(y))).bit_count() & 1


def block_weights(x: int, nu: int) -> list[int]:
    return [((x >> (2 * l)) & 1) + ((x >> (2 * l + 1)) & 1) for l in range(nu)]


@dataclass(frozen=True)
class Gf2Matrix:
    """Rows of a GF(2) matrix, each a bit-packed int of width ``dim``."""

    rows: tuple[int, ...]
    dim: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        for r in self.rows:
            if r < 0 or r >> self.dim:
                raise ValueError(f"row {r:#x} does not fit in dim {self.dim}")

    @classmethod
    def form_rows(cls, vectors: Iterable[int], dim: int) -> "Gf2Matrix":
        """Stack ``v^T K`` for each vector; ``(v^T K) w = symp_form(v, w)``."""
        return cls(tuple(pair_swap(int(v)) for v in vectors), dim)

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class AffineSolutionSet:
    rank: int
    consistent: bool
    count: int
    solutions: tuple[int, ...] | None = field(default=None, repr=False)


def _eliminate(rows: Sequence[int], dim: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; returns (reduced rows, pivot columns)."""
    work = list(rows)
    pivots: list[int] = []
    r = 0
    for col in range(dim):
        bit = 1 << col
        p = next((i for i in range(r, len(work)) if work[i] & bit), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= work[r]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work, pivots


def rank(m: Gf2Matrix | Sequence[int], dim: int | None = None) -> int:
    """Row rank over F_2."""
    if isinstance(m, Gf2Matrix):
        rows, dim = m.rows, m.dim
    else:
        rows = list(m)
        dim = dim if dim is not None else max((r.bit_length() for r in rows), default=0)
    return len(_eliminate(rows, dim)[1])


def solve_affine(
    m: Gf2Matrix,
    rhs: Sequence[int],
    enumerate_limit: int | None = None,
) -> AffineSolutionSet:
    """Solve ``m w = rhs`` over F_2 and count the solutions exactly.

    When ``enumerate_limit`` is given and the solution count does not exceed
    it, every solution is listed (in increasing integer order).
    """
    if len(rhs) != len(m.rows):
        raise ValueError(f"rhs has length {len(rhs)}, matrix has {len(m.rows)} rows")
    if enumerate_limit is not None and enumerate_limit > ENUMERATION_CAP:
        raise ValueError(f"enumerate_limit exceeds cap {ENUMERATION_CAP}")
    dim = m.dim
    aug = [row | ((b & 1) << dim) for row, b in zip(m.rows, rhs)]
    work, pivots = _eliminate(aug, dim)
    rk = len(pivots)
    lo_mask = (1 << dim) - 1
    consistent = all(row & lo_mask or not row >> dim for row in work[rk:])
    if not consistent:
        return AffineSolutionSet(rk, False, 0, () if enumerate_limit is not None else None)
    count = 1 << (dim - rk)
    solutions = None
    if enumerate_limit is not None and count <= enumerate_limit:
        particular = 0
        for row, col in zip(work, pivots):
            if row >> dim:
                particular |= 1 << col
        free = [c for c in range(dim) if c not in set(pivots)]
        kernel = []
        for f in free:
            v = 1 << f
            for row, col in zip(work, pivots):
                if row & (1 << f):
                    v |= 1 << col
            kernel.append(v)
        sols = [particular]
        for k in kernel:
            sols += [s ^ k for s in sols]
        solutions = tuple(sorted(sols))
    return AffineSolutionSet(rk, True, count, solutions)
