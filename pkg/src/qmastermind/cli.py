"""Command-line front end: run one game, verify a sweep, or emit a query-count table."""

from __future__ import annotations

import csv
import io
import json
import sys

import click
import numpy as np

from . import algorithms, game, sim
from .algorithms import ALGORITHMS, EXACT_TOL, get_algorithm
from .baselines import DEFAULT_BUDGET, DEFAULT_SAMPLE, DEFAULT_SEED, exhaustive_verifier

CSV_COLUMNS = ["algorithm", "n", "k", "secret", "queries", "bound", "success_prob", "exact"]
ALG_CHOICES = [*ALGORITHMS, "padded"]


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=not text.endswith("\n"))


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _random_secret(n: int, k: int, seed: int) -> tuple[int, ...]:
    rng = np.random.default_rng((seed, n, k))
    return tuple(int(v) for v in rng.integers(0, k, size=n))


def _csv_row(result, bound: int, tolerance: float) -> dict:
    return {
        "algorithm": result.algorithm,
        "n": len(result.expected),
        "k": result.k,
        "secret": game.format_string(result.secret, result.k),
        "queries": result.queries,
        "bound": bound,
        "success_prob": _fmt(result.success_probability),
        "exact": result.is_exact(tolerance),
    }


def common_options(f):
    f = click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="json",
                     envvar="QMM_FORMAT", show_default=True)(f)
    f = click.option("--out", type=click.Path(dir_okay=False), default=None, envvar="QMM_OUT",
                     help="Write output here instead of stdout.")(f)
    f = click.option("--seed", type=int, default=DEFAULT_SEED, envvar="QMM_SEED", show_default=True)(f)
    f = click.option("--tolerance", type=float, default=EXACT_TOL, envvar="QMM_TOLERANCE", show_default=True,
                     help="Allowed shortfall of the success probability from 1.")(f)
    f = click.option("--norm-tol", type=float, default=sim.NORM_TOL, envvar="QMM_NORM_TOL", show_default=True,
                     help="Allowed drift of the state norm after each gate.")(f)
    f = click.option("--max-dim", type=int, default=sim.DEFAULT_MAX_DIM, envvar="QMM_MAX_DIM", show_default=True,
                     help="Largest state vector (amplitudes) the simulator may allocate.")(f)
    return f


def _configure(norm_tol: float) -> None:
    sim.NORM_TOL = norm_tol


@click.group()
def main():
    """Exact quantum Mastermind algorithms, simulated."""


@main.command()
@click.option("--alg", type=click.Choice(ALG_CHOICES), required=True, envvar="QMM_ALG")
@click.option("--n", type=click.IntRange(min=1), required=True, envvar="QMM_N")
@click.option("--k", type=click.IntRange(min=2), required=True, envvar="QMM_K")
@click.option("--secret", default=None, envvar="QMM_SECRET",
              help="Explicit secret (digit string, or comma-separated when k > 10); random from --seed otherwise.")
@click.option("--pad-to", type=int, default=None, envvar="QMM_PAD_TO",
              help="For --alg padded: length of the padded game (must exceed n).")
@common_options
def run(alg, n, k, secret, pad_to, fmt, out, seed, tolerance, norm_tol, max_dim):
    """Run one algorithm on one secret."""
    _configure(norm_tol)
    try:
        if secret is None:
            digits = _random_secret(n, k, seed)
        else:
            digits = game.GameInstance(n, k).string(game.parse_string(secret, k))
        with sim.dimension_cap(max_dim):
            if alg == "padded":
                if pad_to is None or pad_to <= n:
                    raise ValueError("--alg padded needs --pad-to greater than n")
                result = algorithms.run_via_padded_oracle(digits, k, pad_to)
                bound = result.iterations
            else:
                info = get_algorithm(alg)
                problem = info.check(n, k)
                if problem:
                    raise ValueError(f"{alg} {problem}")
                result = info.run(digits, k)
                bound = info.bound(n, k)
    except (ValueError, sim.DimensionError) as exc:
        raise click.ClickException(str(exc)) from None

    if fmt == "json":
        payload = result.to_dict()
        payload["bound"] = bound
        payload["exact"] = result.is_exact(tolerance)
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", out)
    elif fmt == "csv":
        _emit(_csv([_csv_row(result, bound, tolerance)]), out)
    else:
        _emit(
            f"{alg}: secret={game.format_string(result.secret, k)} "
            f"recovered={game.format_string(result.recovered, k)} "
            f"success={_fmt(result.success_probability)} queries={result.queries} "
            f"ledger={result.ledger.to_json()}\n",
            out,
        )
    exact_alg = alg == "padded" or ALGORITHMS[alg].exact
    if exact_alg and not result.is_exact(tolerance):
        sys.exit(1)


@main.command()
@click.option("--alg", type=click.Choice(list(ALGORITHMS)), required=True, envvar="QMM_ALG")
@click.option("--n", type=click.IntRange(min=1), required=True, envvar="QMM_N")
@click.option("--k", type=click.IntRange(min=2), required=True, envvar="QMM_K")
@click.option("--budget", type=int, default=DEFAULT_BUDGET, envvar="QMM_BUDGET", show_default=True,
              help="Sweep every secret when k^n is at most this, else sample.")
@click.option("--sample", type=int, default=DEFAULT_SAMPLE, envvar="QMM_SAMPLE", show_default=True)
@click.option("--workers", type=int, default=1, envvar="QMM_WORKERS", show_default=True)
@common_options
def verify(alg, n, k, budget, sample, workers, fmt, out, seed, tolerance, norm_tol, max_dim):
    """Sweep an algorithm over all (or sampled) secrets; exit 0 iff every run passes."""
    _configure(norm_tol)
    try:
        with sim.dimension_cap(max_dim):
            report = exhaustive_verifier(alg, n, k, budget=budget, sample=sample, seed=seed,
                                         tolerance=tolerance, workers=workers)
    except (ValueError, sim.DimensionError) as exc:
        raise click.ClickException(str(exc)) from None

    if fmt == "json":
        _emit(json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n", out)
    elif fmt == "csv":
        hist = report.query_counts["histogram"]
        rows = "".join(f"{alg},{n},{k},{q},{c}\n" for q, c in hist.items())
        _emit("algorithm,n,k,queries,runs\n" + rows, out)
    else:
        status = "PASS" if report.passed else "FAIL"
        flag = " (sampled)" if report.sampled else ""
        _emit(
            f"{status} {alg} n={n} k={k}: {report.runs} runs{flag}, min success "
            f"{_fmt(report.min_success)}, queries {report.query_counts['min']}..{report.query_counts['max']}"
            f" (bound {report.bound})\n"
            + "".join(f"  {f['secret']}: {'; '.join(f['reasons'])}\n" for f in report.failures),
            out,
        )
    if not report.passed:
        sys.exit(1)


def _parse_grid(text: str) -> list[int]:
    """'2,3' or '3..6' (inclusive) or a mix; empty string means no values."""
    values: list[int] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if ".." in part:
            lo, hi = part.split("..")
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(int(part))
    return values


@main.command()
@click.option("--alg", "algs", type=click.Choice(list(ALGORITHMS)), multiple=True,
              help="Algorithms to include (repeatable); all by default.")
@click.option("--n", "n_grid", default="2,3", envvar="QMM_N", show_default=True, help="e.g. '2,3' or '1..4'")
@click.option("--k", "k_grid", default="3..6", envvar="QMM_K", show_default=True)
@common_options
def table(algs, n_grid, k_grid, fmt, out, seed, tolerance, norm_tol, max_dim):
    """Query counts per (algorithm, n, k): bound, measured count, exactness."""
    _configure(norm_tol)
    names = list(algs) or list(ALGORITHMS)
    rows = []
    with sim.dimension_cap(max_dim):
        for name in names:
            info = get_algorithm(name)
            for n in _parse_grid(n_grid):
                for k in _parse_grid(k_grid):
                    if info.check(n, k):
                        continue
                    try:
                        result = info.run(_random_secret(n, k, seed), k)
                    except sim.DimensionError as exc:
                        click.echo(f"skipping {name} n={n} k={k}: {exc}", err=True)
                        continue
                    rows.append(_csv_row(result, info.bound(n, k), tolerance))
    if fmt == "csv":
        _emit(_csv(rows), out)
    elif fmt == "json":
        _emit(json.dumps(rows, sort_keys=True, indent=2) + "\n", out)
    else:
        lines = [" ".join(f"{c:>10}" for c in CSV_COLUMNS)]
        lines += [" ".join(f"{str(r[c]):>10}" for c in CSV_COLUMNS) for r in rows]
        _emit("\n".join(lines) + "\n", out)


if __name__ == "__main__":
    main()
