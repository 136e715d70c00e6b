"""Classical Mastermind semantics.

Feedback functions, the characteristic matrix of a secret, and the purely
classical reconstruction steps used by the quantum drivers. Colors are
0-based everywhere; strings are plain tuples of ints.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

Colors = tuple[int, ...]
Bits = tuple[int, ...]

FILLER_COLOR = 1


class MalformedInputError(ValueError):
    """Pair rows (or other derived data) that no secret could have produced."""


@dataclass(frozen=True)
class GameInstance:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")

    def string(self, digits: Iterable[int]) -> Colors:
        """Validate a secret or query against this instance."""
        out = tuple(int(d) for d in digits)
        if len(out) != self.n:
            raise ValueError(f"expected {self.n} positions, got {len(out)}")
        bad = [d for d in out if not 0 <= d < self.k]
        if bad:
            raise ValueError(f"colors {bad} outside [0, {self.k})")
        return out

    @property
    def size(self) -> int:
        return self.k**self.n


@dataclass(frozen=True)
class Feedback:
    black: int
    white: int

    def __post_init__(self):
        if self.black < 0 or self.white < 0:
            raise ValueError("peg counts must be non-negative")


def _check_pair(s: Sequence[int], x: Sequence[int], k: int | None = None) -> None:
    if len(s) != len(x):
        raise ValueError(f"length mismatch: {len(s)} vs {len(x)}")
    for d in (*s, *x):
        if d < 0 or (k is not None and d >= k):
            raise ValueError(f"color {d} outside the alphabet")


def black_peg(s: Sequence[int], x: Sequence[int], k: int | None = None) -> int:
    """Number of positions where ``s`` and ``x`` agree."""
    _check_pair(s, x, k)
    return sum(a == b for a, b in zip(s, x))


def white_peg(s: Sequence[int], x: Sequence[int], k: int | None = None) -> int:
    """Right color, wrong position.

    Uses the color-count overlap; ``baselines.permutation_white_peg`` keeps
    the permutation-maximization definition for cross-checking.
    """
    _check_pair(s, x, k)
    cs, cx = Counter(s), Counter(x)
    overlap = sum(min(cs[c], cx[c]) for c in cs)
    return overlap - black_peg(s, x)


def black_white_peg(s: Sequence[int], x: Sequence[int], k: int | None = None) -> Feedback:
    return Feedback(black_peg(s, x, k), white_peg(s, x, k))


# Batched forms over an (N, n) array of query strings; used by the oracles.

def black_peg_batch(s: Sequence[int], xs: np.ndarray) -> np.ndarray:
    return (np.asarray(xs) == np.asarray(s)).sum(axis=-1)


def black_plus_white_batch(s: Sequence[int], xs: np.ndarray, k: int) -> np.ndarray:
    """B + W for each row of ``xs``, i.e. the multiset color overlap."""
    xs = np.asarray(xs)
    palette = np.arange(k)
    count_s = (np.asarray(s)[:, None] == palette).sum(axis=0)
    count_x = (xs[..., None] == palette).sum(axis=-2)
    return np.minimum(count_x, count_s).sum(axis=-1)


def characteristic_matrix(s: Sequence[int], k: int) -> np.ndarray:
    """k x n 0/1 matrix with a 1 at (c, j) iff ``s[j] == c``."""
    s = np.asarray(s, dtype=int)
    if s.size and (s.min() < 0 or s.max() >= k):
        raise ValueError("secret has colors outside [0, k)")
    return (np.arange(k)[:, None] == s[None, :]).astype(np.uint8)


def secret_from_matrix(matrix: np.ndarray) -> Colors:
    """Invert :func:`characteristic_matrix` as ``s = sum_c c * M(c, *)``.

    Raises MalformedInputError unless every column holds exactly one 1.
    """
    matrix = np.asarray(matrix, dtype=int)
    column_sums = matrix.sum(axis=0)
    bad = np.flatnonzero(column_sums != 1)
    if bad.size:
        raise MalformedInputError(
            f"columns {bad.tolist()} have {column_sums[bad].tolist()} ones, expected exactly 1"
        )
    colors = np.arange(matrix.shape[0])
    return tuple(int(v) for v in colors @ matrix)


def pair_row(s: Sequence[int], c_a: int, c_b: int) -> Bits:
    """Positions where ``s`` shows color ``c_a`` or ``c_b``."""
    if c_a == c_b:
        raise ValueError("pair colors must differ")
    return tuple(int(v in (c_a, c_b)) for v in s)


def reconstruct_from_star(pair_rows: Mapping[tuple[int, int], Sequence[int]], k: int) -> Colors:
    """Recover the secret from the k-1 pair rows anchored on one color.

    ``pair_rows`` maps ``(anchor, c)`` to the pair row for every color
    ``c != anchor``. The anchor row is the AND of any two pair rows; every
    other row is the anchor row XOR its pair row.
    """
    if k < 3:
        raise ValueError("star reconstruction needs k >= 3")
    anchors = {a for a, _ in pair_rows}
    if len(anchors) != 1:
        raise ValueError(f"pair rows must share one anchor color, got {sorted(anchors)}")
    anchor = anchors.pop()
    partners = sorted(c for _, c in pair_rows)
    if partners != [c for c in range(k) if c != anchor]:
        raise ValueError("need one pair row for every non-anchor color")

    rows = {c: np.asarray(pair_rows[(anchor, c)], dtype=np.uint8) for c in partners}
    n = len(next(iter(rows.values())))
    matrix = np.zeros((k, n), dtype=np.uint8)
    matrix[anchor] = rows[partners[0]] & rows[partners[1]]
    for c in partners:
        matrix[c] = matrix[anchor] ^ rows[c]
    return secret_from_matrix(matrix)


def build_triple_cover(k: int) -> list[tuple[int, int, int]]:
    """Cover [k] with ceil(k/3) triples of consecutive colors.

    All triples are disjoint except the last, which borrows trailing colors
    from its predecessor when k is not a multiple of 3, e.g. k=10 gives
    (0,1,2) (3,4,5) (6,7,8) (7,8,9).
    """
    if k < 3:
        raise ValueError("triple cover needs k >= 3")
    triples = [(c, c + 1, c + 2) for c in range(0, k - 2, 3)]
    if k % 3:
        triples.append((k - 3, k - 2, k - 1))
    return triples


def triple_pairs(triple: tuple[int, int, int]) -> tuple[tuple[int, int], tuple[int, int]]:
    """The two pair rows a triple is decoded from: (g, l) and (l, h)."""
    g, l, h = triple
    return (g, l), (l, h)


def decode_triple(triple: tuple[int, int, int], row_gl: Sequence[int], row_lh: Sequence[int]) -> list[int | None]:
    """Per-position decode from a triple's two pair rows (None = color not in triple)."""
    g, l, h = triple
    table = {(1, 1): l, (1, 0): g, (0, 1): h, (0, 0): None}
    return [table[(int(a), int(b))] for a, b in zip(row_gl, row_lh)]


def reconstruct_from_triples(
    cover: Sequence[tuple[int, int, int]],
    pair_rows: Mapping[tuple[int, int], Sequence[int]],
) -> Colors:
    """Recover the secret from the pair rows of a triple cover.

    Overlapping triples may decode the same position twice; that is fine as
    long as they agree.
    """
    decided: list[int | None] | None = None
    for triple in cover:
        gl, lh = triple_pairs(triple)
        try:
            part = decode_triple(triple, pair_rows[gl], pair_rows[lh])
        except KeyError as exc:
            raise ValueError(f"missing pair row {exc.args[0]} for triple {triple}") from None
        if decided is None:
            decided = [None] * len(part)
        for i, c in enumerate(part):
            if c is None:
                continue
            if decided[i] is not None and decided[i] != c:
                raise MalformedInputError(f"position {i} decoded as both {decided[i]} and {c}")
            decided[i] = c
    if decided is None:
        raise ValueError("empty triple cover")
    missing = [i for i, c in enumerate(decided) if c is None]
    if missing:
        raise MalformedInputError(f"positions {missing} not claimed by any triple")
    return tuple(decided)


def two_color_query_string(x: Sequence[int], c_l: int, c_h: int) -> Colors:
    """Map a bit string to the query with ``c_l`` at 0-bits and ``c_h`` at 1-bits.

    ``black_peg(s, result)`` then counts positions where s shows c_l under a
    0 or c_h under a 1.
    """
    if c_l == c_h:
        raise ValueError("c_l and c_h must differ")
    return tuple(c_h if b else c_l for b in x)


def two_color_count(s: Sequence[int], x: Sequence[int], c_l: int, c_h: int) -> int:
    """Direct count of positions i with (x_i, s_i) in {(0, c_l), (1, c_h)}."""
    return sum((b == 0 and v == c_l) or (b == 1 and v == c_h) for v, b in zip(s, x))


def color_subset_indicator(s: Sequence[int], subset: Sequence[int]) -> Bits:
    """Bit i is 1 iff ``subset[i]`` occurs in ``s``."""
    used = set(s)
    return tuple(int(t in used) for t in subset)


def _bw_query_string(n: int, subset: Sequence[int], y: Sequence[int]) -> Colors:
    z = [FILLER_COLOR] * n
    for i, (t, bit) in enumerate(zip(subset, y)):
        if bit:
            z[i] = t
    return tuple(z)


def _bw_correction(n: int, subset: Sequence[int], y: Sequence[int], b1: int) -> int:
    weight = sum(y)
    selected = {t for t, bit in zip(subset, y) if bit}
    if FILLER_COLOR not in selected or b1 == 0:
        return min(n - weight, b1)
    return min(n - weight, b1 - 1)


def bw_inner_product(s: Sequence[int], subset: Sequence[int], y: Sequence[int], b1: int, k: int) -> int:
    """Integer dot product of the color-subset indicator with ``y`` from one BW query.

    ``b1`` is the black-peg count of the all-ones query, obtained beforehand.
    """
    n = len(s)
    if len(subset) > n:
        raise ValueError(f"|T|={len(subset)} exceeds n={n}")
    if len(set(subset)) != len(subset):
        raise ValueError("subset colors must be distinct")
    if len(y) != len(subset):
        raise ValueError("y must have one bit per subset color")
    z = _bw_query_string(n, subset, y)
    fb = black_white_peg(s, z, k)
    return fb.black + fb.white - _bw_correction(n, subset, y, b1)


def bw_inner_product_batch(s: Sequence[int], subset: Sequence[int], ys: np.ndarray, b1: int, k: int) -> np.ndarray:
    """Vectorized :func:`bw_inner_product` over rows of ``ys``."""
    ys = np.asarray(ys, dtype=int)
    n = len(s)
    if len(subset) > n:
        raise ValueError(f"|T|={len(subset)} exceeds n={n}")
    zs = np.full((ys.shape[0], n), FILLER_COLOR, dtype=int)
    t = np.asarray(subset, dtype=int)
    zs[:, : len(t)] = np.where(ys == 1, t, FILLER_COLOR)
    overlap = black_plus_white_batch(s, zs, k)
    weight = ys.sum(axis=1)
    filler_selected = ((ys == 1) & (t == FILLER_COLOR)).any(axis=1)
    literal = np.where(filler_selected & (b1 != 0), np.minimum(n - weight, b1 - 1), np.minimum(n - weight, b1))
    return overlap - literal


def format_string(digits: Sequence[int], k: int) -> str:
    """Digit string when k <= 10, comma-separated decimals otherwise."""
    if k <= 10:
        return "".join(str(d) for d in digits)
    return ",".join(str(d) for d in digits)


def parse_string(text: str, k: int) -> Colors:
    text = text.strip()
    if "," in text or k > 10:
        parts = [p for p in text.split(",") if p.strip()]
        return tuple(int(p) for p in parts)
    return tuple(int(ch) for ch in text)


def format_matrix(matrix: np.ndarray) -> list[str]:
    """Row-major 0/1 strings, one per color."""
    return ["".join(str(int(v)) for v in row) for row in np.asarray(matrix)]
