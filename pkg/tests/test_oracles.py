import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmastermind import game, oracles
from qmastermind.oracles import QueryLedger
from qmastermind.sim import StateVector


def brute_ipt(s, x, k):
    return sum(si * xi for si, xi in zip(s, x)) % k


def exhaustive_check(oracle, reference, target_dims=None):
    """Apply ``oracle`` to every basis state; compare with the defining map and the inverse."""
    n_in = len(oracle.input_dims)
    target_dims = target_dims or (oracle.modulus,)
    dims = oracle.input_dims + tuple(target_dims)
    targets = list(range(n_in, len(dims)))
    for digits in itertools.product(*map(range, dims)):
        state = StateVector.basis(dims, digits)
        oracle.apply(state, list(range(n_in)), targets, None, check_bijection=True)
        x = digits[:n_in]
        y = int(np.ravel_multi_index(digits[n_in:], target_dims))
        out_y = (y + reference(x)) % oracle.modulus
        expected = x + tuple(int(v) for v in np.unravel_index(out_y, target_dims))
        assert state.peek_probability(expected) == pytest.approx(1), (digits, expected)
        oracle.inverse_apply(state, list(range(n_in)), targets, None)
        assert state.peek_probability(digits) == pytest.approx(1)


def test_ledger_counts_and_merge():
    ledger = QueryLedger()
    ledger.charge("black_peg")
    ledger.charge_all({"ipt": 2, "black_peg": 6})
    assert ledger.black_peg == 7
    assert ledger["ipt"] == 2
    assert ledger.hamming_parity == 0
    other = QueryLedger()
    other.charge("black_white_peg", 3)
    ledger.merge(other)
    assert ledger.black_peg_equivalent == 10
    assert ledger.to_dict()["black_white_peg"] == 3
    with pytest.raises(KeyError):
        ledger.charge("white_peg")
    with pytest.raises(ValueError):
        ledger.charge("black_peg", -1)
    with pytest.raises(AttributeError):
        ledger.nonsense


def test_black_peg_oracle_example():
    oracle = oracles.make_black_peg_oracle((0, 1), 2, modulus=3)
    state = StateVector.basis((2, 2, 3), (0, 0, 2))
    oracle.apply(state, [0, 1], [2], None)
    assert state.peek_probability((0, 0, 0)) == pytest.approx(1)


def test_black_peg_oracle_rejects_small_modulus():
    with pytest.raises(ValueError):
        oracles.make_black_peg_oracle((0, 1, 1), 2, modulus=3)


@pytest.mark.parametrize("s, k, modulus", [((0, 1), 2, 3), ((2, 0), 3, 4), ((1, 0, 1), 2, 4), ((2, 1, 0), 3, 5)])
def test_black_peg_oracle_exhaustive(s, k, modulus):
    oracle = oracles.make_black_peg_oracle(s, k, modulus)
    exhaustive_check(oracle, lambda x: game.black_peg(s, x))


@pytest.mark.parametrize("s, k, pair", [((3, 4, 0, 3), 5, (3, 4)), ((0, 1, 2), 3, (2, 0)), ((1, 1), 2, (0, 1))])
def test_two_color_oracle_exhaustive(s, k, pair):
    n = len(s)
    m = math.ceil(math.log2(n + 1))
    oracle = oracles.make_two_color_oracle(s, k, *pair, m)
    reference = lambda x: sum((xi == 0 and si == pair[0]) + (xi == 1 and si == pair[1]) for si, xi in zip(s, x))
    exhaustive_check(oracle, reference, (2,) * m)


def test_two_color_oracle_example_value():
    oracle = oracles.make_two_color_oracle((3, 4, 0, 3), 5, 3, 4, 3)
    assert oracle((0, 1, 1, 0)) == 3


def test_two_color_oracle_validation():
    with pytest.raises(ValueError):
        oracles.make_two_color_oracle((0, 1, 2), 3, 1, 1, 2)
    with pytest.raises(ValueError):
        oracles.make_two_color_oracle((0, 1, 2), 3, 0, 1, 1)


def test_ipt_example():
    assert oracles.make_ipt_oracle((1, 2, 0), 3)((1, 0, 1)) == 1 == brute_ipt((1, 2, 0), (1, 0, 1), 3)


def test_ipk_example():
    assert oracles.make_ipk_oracle((1, 2), 3)((2, 2)) == 0 == brute_ipt((1, 2), (2, 2), 3)


def test_ipt_ipk_exhaustive():
    for n in range(1, 5):
        for k in range(2, 6):
            for s in itertools.product(range(k), repeat=n):
                bits = np.array(list(itertools.product(range(2), repeat=n)))
                got = oracles.ipt_via_black_peg(s, bits, k)
                assert list(got) == [brute_ipt(s, x, k) for x in bits]
                if n <= 3:
                    digits = np.array(list(itertools.product(range(k), repeat=n)))
                    got = oracles.ipk_via_slices(s, digits, k)
                    assert list(got) == [brute_ipt(s, x, k) for x in digits]


def test_ipt_identity_violation_detected(monkeypatch):
    real = game.black_peg_batch
    monkeypatch.setattr(game, "black_peg_batch", lambda s, xs: real(s, xs) + 1)
    with pytest.raises(oracles.IdentityViolation):
        oracles.ipt_via_black_peg((0, 1), np.array([[1, 0]]), 3)


@pytest.mark.parametrize("s, k", [((1, 2), 3), ((0, 3, 1), 4), ((2, 2), 5)])
def test_ipk_oracle_exhaustive(s, k):
    exhaustive_check(oracles.make_ipk_oracle(s, k), lambda x: brute_ipt(s, x, k))


@pytest.mark.parametrize("k, slices", [(2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4)])
def test_ipk_charges(k, slices):
    oracle = oracles.make_ipk_oracle((0,) * 2, k)
    assert oracles.bit_length(k) == slices
    assert oracle.charges == {"ipk": 1, "ipt": slices, "black_peg": k * slices}


def test_hamming_parity_example():
    assert oracles.make_hamming_parity_oracle((0, 1, 2), 5)((0, 2, 2)) == 1


def test_hamming_parity_requires_k_above_4():
    with pytest.raises(ValueError):
        oracles.make_hamming_parity_oracle((0, 1), 4)


@pytest.mark.parametrize("a, k", [((0, 1), 5), ((4, 2, 3), 6)])
def test_hamming_parity_exhaustive(a, k):
    oracle = oracles.make_hamming_parity_oracle(a, k)
    exhaustive_check(oracle, lambda x: sum(u != v for u, v in zip(a, x)) % 2)


@pytest.mark.parametrize(
    "s, subset, y, expected",
    [((2, 2, 2), (0, 1), (1, 1), 0), ((0, 2, 2), (0, 2), (0, 1), 1)],
)
def test_bw_subset_parity_examples(s, subset, y, expected):
    oracle = oracles.make_bw_subset_parity_oracle(s, subset, game.black_peg(s, (1,) * len(s)), 3)
    assert oracle(y) == expected


def test_bw_subset_parity_exhaustive():
    for s in itertools.product(range(4), repeat=3):
        b1 = game.black_peg(s, (1, 1, 1))
        for subset in itertools.permutations(range(4), 3):
            oracle = oracles.make_bw_subset_parity_oracle(s, subset, b1, 4)
            exhaustive_check(oracle, lambda y: sum(b * (t in s) for t, b in zip(subset, y)) % 2)


def test_bw_subset_parity_validation():
    with pytest.raises(ValueError):
        oracles.make_bw_subset_parity_oracle((0, 1), (0, 1, 2), 1, 3)
    with pytest.raises(ValueError):
        oracles.make_bw_subset_parity_oracle((0, 1), (1, 1), 1, 3)


def test_remapped_oracle():
    oracle = oracles.make_remapped_black_peg_oracle((4, 0, 4), 5, (0, 4))
    exhaustive_check(oracle, lambda x: game.black_peg((4, 0, 4), tuple((0, 4)[d] for d in x)))
    with pytest.raises(ValueError):
        oracles.make_remapped_black_peg_oracle((0, 1), 3, (1, 1))


@pytest.mark.parametrize(
    "factory",
    [
        lambda: oracles.make_black_peg_oracle((1, 0, 2), 3),
        lambda: oracles.make_two_color_oracle((1, 0, 2), 3, 0, 1, 2),
        lambda: oracles.make_ipt_oracle((1, 0, 2), 3),
        lambda: oracles.make_ipk_oracle((1, 0, 2), 3),
        lambda: oracles.make_hamming_parity_oracle((1, 0, 2), 5),
        lambda: oracles.make_bw_subset_parity_oracle((1, 0, 2), (0, 2), 1, 3),
    ],
)
def test_forward_then_inverse_doubles_charges(factory):
    oracle = factory()
    dims = oracle.input_dims + (oracle.modulus,)
    targets = [len(dims) - 1]
    inputs = list(range(len(dims) - 1))
    once = QueryLedger()
    oracle.apply(StateVector(dims), inputs, targets, once)
    twice = QueryLedger()
    state = StateVector(dims)
    oracle.apply(state, inputs, targets, twice)
    oracle.inverse_apply(state, inputs, targets, twice)
    assert twice.to_dict() == {kind: 2 * v for kind, v in once.to_dict().items()}
    assert sum(once.to_dict().values()) > 0


def test_oracle_register_validation():
    oracle = oracles.make_black_peg_oracle((0, 1), 2)
    with pytest.raises(ValueError):
        oracle.apply(StateVector((2, 2, 4)), [0, 1], [2], None)
    with pytest.raises(ValueError):
        oracle.apply(StateVector((3, 2, 3)), [0, 1], [2], None)


def test_oracle_rejects_out_of_range_secret():
    with pytest.raises(ValueError):
        oracles.make_black_peg_oracle((0, 3), 3)


def test_padded_value_example():
    inner = oracles.make_black_peg_oracle((2,), 3)
    padded = oracles.make_padded_oracle(inner, 2)
    assert padded((2, 0)) == 1 == game.black_peg((2, 1), (2, 0))


@pytest.mark.parametrize("s, k, n", [((2,), 3, 2), ((0, 1), 2, 3), ((1,), 2, 3), ((2, 0), 3, 3)])
def test_padded_matches_direct_on_every_basis_state(s, k, n):
    inner = oracles.make_black_peg_oracle(s, k)
    padded = oracles.make_padded_oracle(inner, n)
    direct = oracles.make_black_peg_oracle(tuple(s) + (game.FILLER_COLOR,) * (n - len(s)), k)
    dims = (k,) * n + (n + 1,)
    full = dims + padded.scratch_dims
    inputs, target = list(range(n)), [n]
    scratch = [n + 1, n + 2]
    for digits in itertools.product(*map(range, dims)):
        via_padded = StateVector.basis(full, digits + (0, 0))
        ledger = QueryLedger()
        padded.apply(via_padded, inputs, target, ledger, scratch=scratch, check_bijection=True)
        reference = StateVector.basis(dims, digits)
        direct.apply(reference, inputs, target, None)
        # scratch registers come back to |0>
        assert via_padded.probabilities(scratch)[0, 0] == pytest.approx(1)
        np.testing.assert_allclose(via_padded.probabilities(range(n + 1)), reference.probabilities(), atol=1e-12)
        assert ledger.black_peg == 2 and ledger.padded == 1


def test_padded_validation():
    inner = oracles.make_black_peg_oracle((0, 1), 2)
    with pytest.raises(ValueError):
        oracles.make_padded_oracle(inner, 2)
    with pytest.raises(ValueError):
        oracles.make_padded_oracle(oracles.make_ipt_oracle((0, 1), 2), 3)
    padded = oracles.make_padded_oracle(inner, 3)
    with pytest.raises(ValueError):
        padded.apply(StateVector((2, 2, 2, 4)), [0, 1, 2], [3], None)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4).flatmap(lambda k: st.tuples(st.just(k), st.lists(st.integers(0, k - 1), min_size=1, max_size=3))))
def test_black_peg_oracle_is_bijection_exhaustively(ks):
    k, s = ks
    oracle = oracles.make_black_peg_oracle(s, k)
    dims = oracle.input_dims + (oracle.modulus,)
    assert math.prod(dims) <= 2**14
    # the raw map on all basis labels hits every label exactly once
    layout_digits = np.array(list(itertools.product(*map(range, dims))))
    mapped = oracle.mapping(range(len(s)), [len(s)], dims)(layout_digits.copy())
    assert len({tuple(r) for r in mapped}) == len(layout_digits)
