"""Dense state-vector simulation over mixed-radix registers.

A state lives on an ordered list of registers with arbitrary dimensions
(qubits, qudits of dimension k, an n+1 level answer register, ...). Local
gates act on one register axis of the reshaped amplitude tensor; classical
reversible oracles act as basis permutations.
"""

from __future__ import annotations

import contextlib
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

DEFAULT_MAX_DIM = 2**24
_max_dim = DEFAULT_MAX_DIM

NORM_TOL = 1e-12
UNITARY_TOL = 1e-10


class DimensionError(ValueError):
    """Layout exceeds the configured amplitude cap."""


class NormError(ArithmeticError):
    pass


@contextlib.contextmanager
def dimension_cap(limit: int):
    """Temporarily change the maximum number of amplitudes a layout may hold."""
    global _max_dim
    previous, _max_dim = _max_dim, int(limit)
    try:
        yield
    finally:
        _max_dim = previous


def max_dimension() -> int:
    return _max_dim


@dataclass(frozen=True)
class RegisterLayout:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims:
            raise ValueError("layout needs at least one register")
        if any(d < 2 for d in dims):
            raise ValueError(f"register dimensions must be >= 2, got {dims}")
        if self.size > _max_dim:
            raise DimensionError(f"layout {dims} needs {self.size} amplitudes, cap is {_max_dim}")

    @property
    def size(self) -> int:
        return math.prod(self.dims)

    def __len__(self) -> int:
        return len(self.dims)

    @property
    def strides(self) -> tuple[int, ...]:
        out, acc = [], 1
        for d in reversed(self.dims):
            out.append(acc)
            acc *= d
        return tuple(reversed(out))

    def index(self, digits: Sequence[int]) -> int:
        if len(digits) != len(self.dims):
            raise ValueError(f"expected {len(self.dims)} digits, got {len(digits)}")
        for d, dim in zip(digits, self.dims):
            if not 0 <= d < dim:
                raise ValueError(f"digit {d} out of range for register of dimension {dim}")
        return sum(int(d) * s for d, s in zip(digits, self.strides))

    def digits_of(self, index: int) -> tuple[int, ...]:
        return tuple(int(v) for v in np.unravel_index(index, self.dims))

    def all_digits(self) -> np.ndarray:
        """(size, registers) array of every basis tuple, in index order."""
        return _all_digits(self.dims)

    def indices(self, digits: np.ndarray) -> np.ndarray:
        return np.ravel_multi_index(tuple(np.asarray(digits).T), self.dims)


@lru_cache(maxsize=32)
def _all_digits(dims: tuple[int, ...]) -> np.ndarray:
    grids = np.indices(dims).reshape(len(dims), -1).T
    grids.setflags(write=False)
    return grids


def qubits_for(n: int, minimum: int = 1) -> int:
    """Smallest m >= minimum with 2**m >= n + 1."""
    return max(minimum, math.ceil(math.log2(n + 1)))


@lru_cache(maxsize=64)
def qft_matrix(d: int, inverse: bool = False) -> np.ndarray:
    """QFT_d with entries omega**(l*j) / sqrt(d) at row j, column l."""
    j = np.arange(d)
    sign = -1 if inverse else 1
    mat = np.exp(sign * 2j * np.pi * np.outer(j, j) / d) / math.sqrt(d)
    mat.setflags(write=False)
    return mat


HADAMARD = qft_matrix(2)


def is_unitary(matrix: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False
    return bool(np.allclose(matrix @ matrix.conj().T, np.eye(matrix.shape[0]), atol=tol, rtol=0))


def zero_reflection_matrix(d: int, phi: float) -> np.ndarray:
    """QFT_d (I + (e^{i phi} - 1)|0><0|) QFT_d^dagger."""
    core = np.eye(d, dtype=complex)
    core[0, 0] = np.exp(1j * phi)
    return qft_matrix(d) @ core @ qft_matrix(d, inverse=True)


class StateVector:
    """Amplitudes over a :class:`RegisterLayout`.

    Gate methods mutate in place and return ``self`` so circuits read as
    chains. The squared norm is checked after every gate.
    """

    def __init__(self, layout: RegisterLayout | Sequence[int], amplitudes: np.ndarray | None = None):
        self.layout = layout if isinstance(layout, RegisterLayout) else RegisterLayout(tuple(layout))
        if amplitudes is None:
            amplitudes = np.zeros(self.layout.size, dtype=complex)
            amplitudes[0] = 1.0
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if amplitudes.size != self.layout.size:
            raise ValueError("amplitude count does not match layout")
        self.amplitudes = amplitudes.copy()

    @classmethod
    def basis(cls, layout: RegisterLayout | Sequence[int], digits: Sequence[int]) -> "StateVector":
        state = cls(layout)
        state.amplitudes[0] = 0.0
        state.amplitudes[state.layout.index(digits)] = 1.0
        return state

    def copy(self) -> "StateVector":
        return StateVector(self.layout, self.amplitudes)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.layout.dims

    def norm_squared(self) -> float:
        # pairwise summation; a BLAS dot accumulates ~1e-13 error on 1e5 amplitudes
        a = self.amplitudes
        return float((a.real**2 + a.imag**2).sum())

    def _check_norm(self) -> None:
        err = abs(self.norm_squared() - 1.0)
        if err > NORM_TOL:
            raise NormError(f"state norm drifted by {err:.3e}")

    def _register(self, register: int) -> int:
        if not 0 <= register < len(self.dims):
            raise IndexError(f"no register {register} in layout {self.dims}")
        return register

    # -- local gates ---------------------------------------------------

    def _apply_local(self, register: int, matrix: np.ndarray) -> "StateVector":
        tensor = self.amplitudes.reshape(self.dims)
        moved = np.tensordot(matrix, tensor, axes=([1], [register]))
        self.amplitudes = np.moveaxis(moved, 0, register).reshape(-1)
        self._check_norm()
        return self

    def apply_unitary(self, register: int, matrix: np.ndarray) -> "StateVector":
        """Apply a d x d unitary to one register."""
        register = self._register(register)
        matrix = np.asarray(matrix, dtype=complex)
        d = self.dims[register]
        if matrix.shape != (d, d):
            raise ValueError(f"expected a {d}x{d} matrix, got {matrix.shape}")
        if not is_unitary(matrix):
            raise ValueError("matrix is not unitary")
        return self._apply_local(register, matrix)

    def apply_qft(self, register: int, inverse: bool = False) -> "StateVector":
        register = self._register(register)
        return self._apply_local(register, qft_matrix(self.dims[register], inverse))

    def apply_hadamard(self, register: int) -> "StateVector":
        if self.dims[self._register(register)] != 2:
            raise ValueError("Hadamard needs a qubit register")
        return self._apply_local(register, HADAMARD)

    def apply_phase_by_value(self, register: int, phi: float) -> "StateVector":
        """Multiply each amplitude by e^{i j phi}, j the digit on ``register``."""
        register = self._register(register)
        d = self.dims[register]
        phases = np.exp(1j * phi * np.arange(d))
        shape = [1] * len(self.dims)
        shape[register] = d
        tensor = self.amplitudes.reshape(self.dims) * phases.reshape(shape)
        self.amplitudes = tensor.reshape(-1)
        self._check_norm()
        return self

    def apply_zero_reflection(self, register: int, phi: float) -> "StateVector":
        register = self._register(register)
        return self._apply_local(register, zero_reflection_matrix(self.dims[register], phi))

    # -- oracles -------------------------------------------------------

    def apply_permutation(
        self,
        mapping: Callable[[np.ndarray], np.ndarray],
        check_bijection: bool = False,
    ) -> "StateVector":
        """Permute amplitudes: the basis tuple ``t`` moves to ``mapping(t)``.

        ``mapping`` receives the (size, registers) digit array and returns a
        new array of the same shape.
        """
        digits = self.layout.all_digits()
        targets = np.asarray(mapping(digits.copy()))
        if targets.shape != digits.shape:
            raise ValueError("mapping must preserve the digit array shape")
        dest = self.layout.indices(targets)
        if check_bijection and np.unique(dest).size != dest.size:
            raise ValueError("oracle mapping is not a bijection on basis states")
        out = np.empty_like(self.amplitudes)
        out[dest] = self.amplitudes
        self.amplitudes = out
        self._check_norm()
        return self

    # -- readout -------------------------------------------------------

    def probabilities(self, registers: Sequence[int] | None = None) -> np.ndarray:
        """Marginal distribution over ``registers`` (all by default), as a tensor."""
        probs = (np.abs(self.amplitudes) ** 2).reshape(self.dims)
        if registers is None:
            return probs
        registers = [self._register(r) for r in registers]
        others = tuple(i for i in range(len(self.dims)) if i not in registers)
        marginal = probs.sum(axis=others)
        # sum() leaves the kept axes in ascending order
        order = np.argsort(np.argsort(registers))
        return np.transpose(marginal, order) if len(registers) > 1 else marginal

    def peek_probability(self, prefix: Sequence[int]) -> float:
        """Probability that the leading registers read ``prefix``."""
        prefix = tuple(int(d) for d in prefix)
        if len(prefix) > len(self.dims):
            raise ValueError("prefix longer than the layout")
        probs = (np.abs(self.amplitudes) ** 2).reshape(self.dims)
        return float(probs[prefix].sum())

    def probability_of(self, registers: Sequence[int], digits: Sequence[int]) -> float:
        marginal = self.probabilities(registers)
        return float(marginal[tuple(int(d) for d in digits)])

    def measure(self, registers: Sequence[int], rng: np.random.Generator) -> tuple[int, ...]:
        """Born-rule sample of ``registers`` (the state itself is left untouched)."""
        marginal = self.probabilities(registers).reshape(-1)
        total = marginal.sum()
        if total <= 0:
            raise ValueError("cannot measure a zero-norm state")
        choice = rng.choice(marginal.size, p=marginal / total)
        dims = [self.dims[r] for r in registers]
        return tuple(int(v) for v in np.unravel_index(choice, dims))

    def measure_all(self, rng: np.random.Generator) -> tuple[int, ...]:
        return self.measure(range(len(self.dims)), rng)

    def equals_up_to_phase(self, other: "StateVector", tol: float = NORM_TOL) -> bool:
        if self.dims != other.dims:
            return False
        overlap = np.vdot(other.amplitudes, self.amplitudes)
        if abs(overlap) < 1e-300:
            return bool(np.allclose(self.amplitudes, other.amplitudes, atol=tol, rtol=0))
        phase = overlap / abs(overlap)
        return bool(np.allclose(self.amplitudes, phase * other.amplitudes, atol=tol, rtol=0))

    def to_json(self, cutoff: float = 0.0) -> str:
        """JSON array of [index, re, im] for every amplitude above ``cutoff``."""
        entries = [
            [int(i), float(a.real), float(a.imag)]
            for i, a in enumerate(self.amplitudes)
            if abs(a) > cutoff
        ]
        return json.dumps(entries)

    def __repr__(self) -> str:
        return f"StateVector(dims={self.dims})"


# Function-style aliases matching the operation names used elsewhere.

def init_basis_state(layout: RegisterLayout | Sequence[int], digits: Sequence[int]) -> StateVector:
    return StateVector.basis(layout, digits)


def apply_qft(state: StateVector, register: int, inverse: bool = False) -> StateVector:
    return state.apply_qft(register, inverse)


def apply_single_register_unitary(state: StateVector, register: int, matrix: np.ndarray) -> StateVector:
    return state.apply_unitary(register, matrix)


def apply_diagonal_phase_on_value(state: StateVector, register: int, phi: float) -> StateVector:
    return state.apply_phase_by_value(register, phi)


def apply_zero_reflection(state: StateVector, register: int, phi: float) -> StateVector:
    return state.apply_zero_reflection(register, phi)


def peek_probability(state: StateVector, prefix: Sequence[int]) -> float:
    return state.peek_probability(prefix)


def measure_all(state: StateVector, rng: np.random.Generator) -> tuple[int, ...]:
    return state.measure_all(rng)


@dataclass(frozen=True)
class GroverParams:
    """Iteration count and matched phase for exact search over k items with one target."""

    k: int
    theta: float
    T: int
    phi: float

    @classmethod
    def for_colors(cls, k: int) -> "GroverParams":
        if k < 2:
            raise ValueError("exact search needs k >= 2")
        theta = math.asin(math.sqrt(1.0 / k))
        # guard against pi/(4 theta) - 1/2 landing a hair above an integer
        T = math.ceil(math.pi / (4 * theta) - 0.5 - 1e-9)
        ratio = math.sin(math.pi / (4 * T + 2)) / math.sin(theta)
        if ratio > 1 + 1e-12:
            raise ArithmeticError(f"no real phase for k={k}: ratio {ratio}")
        # asin is ill-conditioned at 1; snap rounding noise so phi = pi exactly there
        if ratio > 1 - 1e-12:
            ratio = 1.0
        phi = 2 * math.asin(ratio)
        return cls(k=k, theta=theta, T=T, phi=phi)
