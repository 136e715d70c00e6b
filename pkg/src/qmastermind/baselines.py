"""Classical references and sweep tooling.

Brute-force helpers here are deliberately independent of the quantum
drivers: they are what the drivers get checked against.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import game
from .algorithms import EXACT_TOL, ALGORITHMS, RunResult, get_algorithm, hunziker_meyer_bound

DEFAULT_BUDGET = 1296
DEFAULT_SAMPLE = 256
DEFAULT_SEED = 20240101


def permutation_white_peg(s: Sequence[int], x: Sequence[int]) -> int:
    """White pegs by literal maximization over all position permutations."""
    if len(s) != len(x):
        raise ValueError("length mismatch")
    if len(s) > 6:
        raise ValueError("permutation brute force limited to n <= 6")
    best = max(sum(a == x[p] for a, p in zip(s, perm)) for perm in itertools.permutations(range(len(x))))
    return best - sum(a == b for a, b in zip(s, x))


def all_strings(n: int, k: int) -> np.ndarray:
    return np.array(list(itertools.product(range(k), repeat=n)), dtype=int).reshape(-1, n)


@dataclass
class CandidateSet:
    """Secrets still consistent with every answer seen so far."""

    n: int
    k: int
    remaining: np.ndarray = None

    def __post_init__(self):
        if self.remaining is None:
            self.remaining = all_strings(self.n, self.k)

    def __len__(self) -> int:
        return len(self.remaining)

    def __contains__(self, s) -> bool:
        return bool((self.remaining == np.asarray(s)).all(axis=1).any())

    def filter(self, query: Sequence[int], answer) -> None:
        query = np.asarray(query)
        blacks = (self.remaining == query).sum(axis=1)
        if isinstance(answer, game.Feedback):
            palette = np.arange(self.k)
            cand_counts = (self.remaining[..., None] == palette).sum(axis=1)
            query_counts = (query[:, None] == palette).sum(axis=0)
            overlap = np.minimum(cand_counts, query_counts).sum(axis=1)
            keep = (blacks == answer.black) & (overlap - blacks == answer.white)
        else:
            keep = blacks == int(answer)
        self.remaining = self.remaining[keep]


def brute_force_codebreaker(
    feedback: Callable[[tuple[int, ...]], object],
    n: int,
    k: int,
    candidates: CandidateSet | None = None,
) -> tuple[tuple[int, ...], int]:
    """Query the first consistent candidate until one secret remains.

    Returns the secret and the number of classical queries spent.
    """
    pool = candidates if candidates is not None else CandidateSet(n, k)
    queries = 0
    while len(pool) > 1:
        guess = tuple(int(v) for v in pool.remaining[0])
        answer = feedback(guess)
        queries += 1
        pool.filter(guess, answer)
    if len(pool) == 0:
        raise RuntimeError("feedback is inconsistent with every secret")
    return tuple(int(v) for v in pool.remaining[0]), queries


@dataclass
class VerificationReport:
    algorithm: str
    n: int
    k: int
    runs: int
    min_success: float
    query_counts: dict
    failures: list = field(default_factory=list)
    sampled: bool = False
    bound: int | None = None
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "n": self.n,
            "k": self.k,
            "runs": self.runs,
            "min_success": float(f"{self.min_success:.12g}"),
            "query_counts": self.query_counts,
            "failures": self.failures,
            "sampled": self.sampled,
            "bound": self.bound,
            "seed": self.seed,
        }


def sweep_secrets(n: int, k: int, budget: int = DEFAULT_BUDGET, sample: int = DEFAULT_SAMPLE, seed: int = DEFAULT_SEED):
    """Every secret in [k]^n, or a seeded sample of distinct ones when k^n > budget."""
    total = k**n
    if total <= budget:
        return [tuple(int(v) for v in row) for row in all_strings(n, k)], False
    rng = np.random.default_rng(seed)
    picks = rng.choice(total, size=min(sample, total), replace=False)
    picks.sort()
    return [tuple(int(v) for v in np.unravel_index(i, (k,) * n)) for i in picks], True


def _run_one(args) -> RunResult:
    name, secret, k = args
    return get_algorithm(name).run(secret, k)


def run_sweep(name: str, secrets: Sequence[tuple[int, ...]], k: int, workers: int = 1) -> list[RunResult]:
    jobs = [(name, s, k) for s in secrets]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_one, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [_run_one(job) for job in jobs]


def exhaustive_verifier(
    algorithm: str,
    n: int,
    k: int,
    budget: int = DEFAULT_BUDGET,
    sample: int = DEFAULT_SAMPLE,
    seed: int = DEFAULT_SEED,
    tolerance: float = EXACT_TOL,
    workers: int = 1,
    cross_check: bool = False,
) -> VerificationReport:
    """Run ``algorithm`` on every secret of [k]^n and summarize.

    Exact algorithms fail a secret when the success probability falls below
    1 - tolerance, the wrong string is recovered, or the query count exceeds
    the algorithm's bound. The bounded-error Hunziker-Meyer entry is judged
    only against its guaranteed success probability. ``cross_check`` also
    runs the classical brute-force codebreaker and compares answers.
    """
    info = get_algorithm(algorithm)
    problem = info.check(n, k)
    if problem:
        raise ValueError(f"{algorithm}: {problem}")
    secrets, sampled = sweep_secrets(n, k, budget, sample, seed)
    results = run_sweep(algorithm, secrets, k, workers)
    bound = info.bound(n, k)
    guarantee = None if info.exact else hunziker_meyer_bound(n, k)

    failures = []
    histogram: Counter = Counter()
    for res in results:
        histogram[res.queries] += 1
        reasons = []
        if info.exact:
            if res.success_probability < 1 - tolerance:
                reasons.append(f"success {res.success_probability:.12g}")
            if res.recovered != res.expected:
                reasons.append(f"recovered {game.format_string(res.recovered, k)}")
            if res.queries > bound:
                reasons.append(f"{res.queries} queries > bound {bound}")
        elif guarantee is not None and res.success_probability < guarantee:
            reasons.append(f"success {res.success_probability:.12g} < guaranteed {guarantee:.12g}")
        if cross_check:
            found, _ = brute_force_codebreaker(lambda x, s=res.secret: game.black_peg(s, x), n, k)
            if found != res.secret:
                reasons.append("classical codebreaker disagrees")
        if reasons:
            failures.append({"secret": game.format_string(res.secret, k), "reasons": reasons})

    counts = sorted(histogram)
    return VerificationReport(
        algorithm=algorithm,
        n=n,
        k=k,
        runs=len(results),
        min_success=min((r.success_probability for r in results), default=math.nan),
        query_counts={
            "min": counts[0] if counts else None,
            "max": counts[-1] if counts else None,
            "histogram": {str(q): histogram[q] for q in counts},
        },
        failures=failures,
        sampled=sampled,
        bound=bound,
        seed=seed if sampled else None,
    )


__all__ = [
    "ALGORITHMS",
    "CandidateSet",
    "VerificationReport",
    "brute_force_codebreaker",
    "exhaustive_verifier",
    "permutation_white_peg",
    "sweep_secrets",
]
