"""Query oracles as basis permutations, plus the ledger that charges them.

Every oracle here has the form ``|x>|y> -> |x>|y (+)_M f(x)>`` for some
classical ``f``; composite oracles (two-color, IPT, IPK, padded, BW subset
parity) record what they would cost in underlying codemaker queries.
Adjoint applications are charged like forward ones.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import game
from .sim import StateVector

KINDS = ("black_peg", "black_white_peg", "two_color", "ipt", "ipk", "hamming_parity", "padded")


class IdentityViolation(AssertionError):
    """An internal counting identity failed during an oracle evaluation."""


@dataclass
class QueryLedger:
    """Per-kind query counters for one algorithm execution.

    ``black_peg`` counts every invocation of the black-peg function,
    including those made inside composite oracles; the composite kinds count
    how often each composite was applied.
    """

    counts: Counter = field(default_factory=Counter)

    def charge(self, kind: str, amount: int = 1) -> None:
        if kind not in KINDS:
            raise KeyError(f"unknown oracle kind {kind!r}")
        if amount < 0:
            raise ValueError("charges are non-negative")
        self.counts[kind] += amount

    def charge_all(self, charges: dict[str, int]) -> None:
        for kind, amount in charges.items():
            self.charge(kind, amount)

    def __getitem__(self, kind: str) -> int:
        return self.counts.get(kind, 0)

    def __getattr__(self, kind: str) -> int:
        if kind in KINDS:
            return self.counts.get(kind, 0)
        raise AttributeError(kind)

    @property
    def black_peg_equivalent(self) -> int:
        """Total codemaker queries of any flavour, each counted once."""
        return self["black_peg"] + self["black_white_peg"] + self["hamming_parity"]

    def merge(self, other: "QueryLedger") -> None:
        self.counts.update(other.counts)

    def to_dict(self) -> dict[str, int]:
        out = {kind: self[kind] for kind in KINDS}
        out["black_peg_equivalent"] = self.black_peg_equivalent
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


ValueFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class OracleHandle:
    """``|x>|y> -> |x>|(y + f(x)) mod M>`` on chosen input and target registers.

    ``value`` maps an (N, len(inputs)) digit array to N integers. The target
    registers are read together as one big-endian mixed-radix integer whose
    range must equal ``modulus``.
    """

    kind: str
    input_dims: tuple[int, ...]
    modulus: int
    value: ValueFn
    charges: dict[str, int]
    scratch_dims: tuple[int, ...] = ()

    def evaluate(self, xs: Sequence[Sequence[int]] | np.ndarray) -> np.ndarray:
        return np.asarray(self.value(np.atleast_2d(np.asarray(xs, dtype=int))), dtype=int)

    def __call__(self, x: Sequence[int]) -> int:
        return int(self.evaluate([x])[0])

    def mapping(self, inputs: Sequence[int], targets: Sequence[int], dims: Sequence[int], inverse: bool = False):
        target_dims = [dims[t] for t in targets]
        if math.prod(target_dims) != self.modulus:
            raise ValueError(
                f"target registers span {math.prod(target_dims)} values, oracle modulus is {self.modulus}"
            )
        if tuple(dims[i] for i in inputs) != self.input_dims:
            raise ValueError(f"input registers {inputs} do not match oracle inputs {self.input_dims}")
        sign = -1 if inverse else 1
        inputs, targets = list(inputs), list(targets)

        def permute(digits: np.ndarray) -> np.ndarray:
            fx = self.value(digits[:, inputs])
            packed = np.ravel_multi_index(tuple(digits[:, targets].T), target_dims)
            packed = (packed + sign * fx) % self.modulus
            digits[:, targets] = np.stack(np.unravel_index(packed, target_dims), axis=1)
            return digits

        return permute

    def apply(
        self,
        state: StateVector,
        inputs: Sequence[int],
        targets: Sequence[int],
        ledger: QueryLedger | None,
        inverse: bool = False,
        scratch: Sequence[int] = (),
        check_bijection: bool = False,
    ) -> StateVector:
        state.apply_permutation(self.mapping(inputs, targets, state.dims, inverse), check_bijection)
        if ledger is not None:
            ledger.charge_all(self.charges)
        return state

    def inverse_apply(self, state, inputs, targets, ledger, scratch=()):
        return self.apply(state, inputs, targets, ledger, inverse=True, scratch=scratch)


def _check_colors(s: Sequence[int], k: int) -> tuple[int, ...]:
    s = tuple(int(v) for v in s)
    if any(not 0 <= v < k for v in s):
        raise ValueError(f"secret {s} has colors outside [0, {k})")
    return s


def make_black_peg_oracle(s: Sequence[int], k: int, modulus: int | None = None) -> OracleHandle:
    """Black-peg oracle over [k]^n with an answer register of size ``modulus`` (default n+1)."""
    s = _check_colors(s, k)
    n = len(s)
    modulus = n + 1 if modulus is None else modulus
    if modulus < n + 1:
        raise ValueError(f"modulus {modulus} < n+1 would lose information")
    target = np.asarray(s)
    return OracleHandle(
        kind="black_peg",
        input_dims=(k,) * n,
        modulus=modulus,
        value=lambda xs: (xs == target).sum(axis=1),
        charges={"black_peg": 1},
    )


def make_two_color_oracle(s: Sequence[int], k: int, c_l: int, c_h: int, m: int) -> OracleHandle:
    """Two-color counting oracle on n qubits, built from one black-peg call.

    Each bit string is turned into the query with ``c_l`` at zeros and
    ``c_h`` at ones, then scored by the black-peg function.
    """
    s = _check_colors(s, k)
    n = len(s)
    if c_l == c_h:
        raise ValueError("c_l and c_h must differ")
    if not (0 <= c_l < k and 0 <= c_h < k):
        raise ValueError("pair colors outside [0, k)")
    if 2**m < n + 1:
        raise ValueError(f"2^{m} < n+1 = {n + 1}")
    target = np.asarray(s)

    def value(xs: np.ndarray) -> np.ndarray:
        queries = np.where(xs == 1, c_h, c_l)
        return game.black_peg_batch(target, queries)

    return OracleHandle(
        kind="two_color",
        input_dims=(2,) * n,
        modulus=2**m,
        value=value,
        charges={"two_color": 1, "black_peg": 1},
    )


@dataclass(frozen=True)
class PaddedOracle(OracleHandle):
    """Black-peg oracle for ``s + (1,)*(n-m)`` assembled from the oracle for ``s``.

    Uses two scratch registers: one holding the inner black-peg answer
    (dimension m+1) and one holding the tail match count (dimension n-m+1).
    The sequence is inner, tail count, adder, tail uncount, inner adjoint.
    """

    inner: OracleHandle | None = None

    def apply(self, state, inputs, targets, ledger, inverse=False, scratch=(), check_bijection=False):
        if len(scratch) != 2:
            raise ValueError("padded oracle needs two scratch registers")
        inner = self.inner
        m = len(inner.input_dims)
        head, tail = list(inputs[:m]), list(inputs[m:])
        s_reg, u_reg = scratch
        tail_count = _tail_counter(len(tail), inner.input_dims[0] if inner.input_dims else 2)

        inner.apply(state, head, [s_reg], ledger, check_bijection=check_bijection)
        tail_count.apply(state, tail, [u_reg], None, check_bijection=check_bijection)
        _adder(state, [s_reg, u_reg], targets, state.dims, inverse, check_bijection)
        tail_count.apply(state, tail, [u_reg], None, inverse=True, check_bijection=check_bijection)
        inner.apply(state, head, [s_reg], ledger, inverse=True, check_bijection=check_bijection)
        if ledger is not None:
            ledger.charge("padded")
        return state


def _tail_counter(length: int, k: int) -> OracleHandle:
    """Count positions of the tail query equal to the padding color (uncharged, no secret)."""
    return OracleHandle(
        kind="padded",
        input_dims=(k,) * length,
        modulus=length + 1,
        value=lambda xs: (xs == game.FILLER_COLOR).sum(axis=1),
        charges={},
    )


def _adder(state: StateVector, sources: Sequence[int], targets: Sequence[int], dims, inverse: bool, check: bool):
    """``|a>|b>|c> -> |a>|b>|c + a + b>`` with c read modulo its register range."""
    target_dims = [dims[t] for t in targets]
    modulus = math.prod(target_dims)
    sign = -1 if inverse else 1
    sources, targets = list(sources), list(targets)

    def permute(digits: np.ndarray) -> np.ndarray:
        add = digits[:, sources].sum(axis=1)
        packed = np.ravel_multi_index(tuple(digits[:, targets].T), target_dims)
        packed = (packed + sign * add) % modulus
        digits[:, targets] = np.stack(np.unravel_index(packed, target_dims), axis=1)
        return digits

    state.apply_permutation(permute, check)


def make_padded_oracle(inner: OracleHandle, n: int) -> PaddedOracle:
    """Extend a black-peg oracle on m positions to n > m positions padded with color 1."""
    if inner.kind != "black_peg":
        raise ValueError("padding wraps a black-peg oracle")
    m = len(inner.input_dims)
    if n <= m:
        raise ValueError(f"need n > m, got n={n}, m={m}")
    k = inner.input_dims[0]
    if k <= game.FILLER_COLOR:
        raise ValueError("padding color 1 needs k >= 2")

    def value(xs: np.ndarray) -> np.ndarray:
        return inner.value(xs[:, :m]) + (xs[:, m:] == game.FILLER_COLOR).sum(axis=1)

    return PaddedOracle(
        kind="padded",
        input_dims=(k,) * n,
        modulus=n + 1,
        value=value,
        charges={},
        scratch_dims=(inner.modulus, n - m + 1),
        inner=inner,
    )


def ipt_via_black_peg(s: Sequence[int], xs: np.ndarray, k: int) -> np.ndarray:
    """Binary inner product sum_i s_i x_i mod k from k black-peg values per x.

    For colour c the query puts c on the ones of x and 0 elsewhere. The
    per-colour counts among the ones follow from the k answers; the counting
    identity sum_c n_c == |V| + k*a is checked against the secret on every
    evaluation.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=int))
    target = np.asarray(s, dtype=int)
    ones = xs == 1
    answers = np.stack([game.black_peg_batch(target, np.where(ones, c, 0)) for c in range(k)], axis=1)
    weight = ones.sum(axis=1)
    zeros_outside = ((target == 0) & ~ones).sum(axis=1)
    total = answers.sum(axis=1)
    if not np.array_equal(total, weight + k * zeros_outside):
        raise IdentityViolation("sum of black-peg answers != |V| + k*a")
    per_color = answers - ((total - weight) // k)[:, None]
    return (per_color @ np.arange(k)) % k


def ipk_via_slices(s: Sequence[int], xs: np.ndarray, k: int) -> np.ndarray:
    """Base-k inner product mod k recombined from binary digit slices of x."""
    xs = np.atleast_2d(np.asarray(xs, dtype=int))
    acc = np.zeros(xs.shape[0], dtype=int)
    for j in range(bit_length(k)):
        acc += (1 << j) * ipt_via_black_peg(s, (xs >> j) & 1, k)
    return acc % k


def bit_length(k: int) -> int:
    """ceil(log2 k), the number of binary slices a digit in [k] needs."""
    return max(1, math.ceil(math.log2(k)))


def make_ipt_oracle(s: Sequence[int], k: int) -> OracleHandle:
    s = _check_colors(s, k)
    return OracleHandle(
        kind="ipt",
        input_dims=(2,) * len(s),
        modulus=k,
        value=lambda xs: ipt_via_black_peg(s, xs, k),
        charges={"ipt": 1, "black_peg": k},
    )


def make_ipk_oracle(s: Sequence[int], k: int) -> OracleHandle:
    s = _check_colors(s, k)
    slices = bit_length(k)
    return OracleHandle(
        kind="ipk",
        input_dims=(k,) * len(s),
        modulus=k,
        value=lambda xs: ipk_via_slices(s, xs, k),
        charges={"ipk": 1, "ipt": slices, "black_peg": k * slices},
    )


def make_hamming_parity_oracle(a: Sequence[int], k: int) -> OracleHandle:
    """Parity of the Hamming distance to ``a`` on a single qubit."""
    if k <= 4:
        raise ValueError("Hamming-parity oracle is only implemented for k > 4")
    a = _check_colors(a, k)
    target = np.asarray(a)
    return OracleHandle(
        kind="hamming_parity",
        input_dims=(k,) * len(a),
        modulus=2,
        value=lambda xs: (xs != target).sum(axis=1) % 2,
        charges={"hamming_parity": 1},
    )


def make_bw_subset_parity_oracle(s: Sequence[int], subset: Sequence[int], b1: int, k: int) -> OracleHandle:
    """Parity of the color-subset indicator dotted with y, one BW query per evaluation.

    A coherent evaluation computes the feedback into scratch and uncomputes
    it, so each application costs two black-white-peg queries.
    """
    s = _check_colors(s, k)
    subset = tuple(int(t) for t in subset)
    if len(subset) > len(s):
        raise ValueError(f"|T|={len(subset)} exceeds n={len(s)}")
    if len(set(subset)) != len(subset):
        raise ValueError("subset colors must be distinct")
    return OracleHandle(
        kind="black_white_peg",
        input_dims=(2,) * len(subset),
        modulus=2,
        value=lambda ys: game.bw_inner_product_batch(s, subset, ys, b1, k) % 2,
        charges={"black_white_peg": 2},
    )


def make_remapped_black_peg_oracle(s: Sequence[int], k: int, alphabet: Sequence[int]) -> OracleHandle:
    """Black-peg oracle over a reduced alphabet: digit d means color ``alphabet[d]``."""
    s = _check_colors(s, k)
    alphabet = np.asarray(alphabet, dtype=int)
    if np.unique(alphabet).size != alphabet.size:
        raise ValueError("alphabet must be injective")
    target = np.asarray(s)
    return OracleHandle(
        kind="black_peg",
        input_dims=(len(alphabet),) * len(s),
        modulus=len(s) + 1,
        value=lambda xs: (alphabet[xs] == target).sum(axis=1),
        charges={"black_peg": 1},
    )
