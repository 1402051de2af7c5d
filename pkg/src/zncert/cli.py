"""Command-line interface: certificates, recovery, norms, and experiments."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from ._version import __version__
from .lattice import GroupParams, load_set
from .spectral import dft, load_signal, support_of
from .energy import energy_certificate
from .bounds import (
    additive_bound,
    classical_bound,
    refined_bound,
)
from .energy import energy_representation
from .gowers import conjecture_scan, gowers_norm
from .recovery import SolverConfig, l1_recover, least_squares_recover, load_problem
from .harness import (
    ExperimentConfig,
    RunReport,
    canonical_json,
    certificates_to_csv,
    run_example1,
    run_example2,
    run_recovery_sweep,
    run_soundness_sweep,
)


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=not text.endswith("\n"))


def _emit_report(report: RunReport, output: str | None, fmt: str, check: bool) -> None:
    text = report.to_csv() if fmt == "csv" else report.to_json()
    _emit(text, output)
    summary = report.summary
    click.echo(
        f"{report.scenario}: {summary['pass_count']} passed,"
        f" {summary['fail_count']} failed",
        err=True,
    )
    if check and report.failed:
        sys.exit(1)


@click.group()
@click.version_option(version=__version__)
def main() -> None:
    """Additive-energy uncertainty certificates and sparse recovery on Z_N^d."""


@main.command()
@click.option("--set", "set_path", required=True, type=click.Path(exists=True), help="Set file (JSON).")
@click.option(
    "--method",
    type=click.Choice(["quadruple", "representation", "fourier-check"]),
    default="representation",
    show_default=True,
)
@click.option("--output", type=click.Path(), default=None)
def energy(set_path: str, method: str, output: str | None) -> None:
    """Additive energy of a set, as an exact certificate."""
    cert = energy_certificate(load_set(set_path), method)
    _emit(canonical_json(cert.to_json_dict()), output)


@main.command()
@click.option("--signal", "signal_path", type=click.Path(exists=True), default=None)
@click.option("--E", "e_path", type=click.Path(exists=True), default=None)
@click.option("--Sigma", "sigma_path", type=click.Path(exists=True), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--output", type=click.Path(), default=None)
def bounds(
    signal_path: str | None,
    e_path: str | None,
    sigma_path: str | None,
    fmt: str,
    output: str | None,
) -> None:
    """Evaluate all uncertainty certificates for a signal or a set pair."""
    if signal_path:
        f = load_signal(signal_path)
        e = support_of(f)
        sigma = support_of(dft(f))
    elif e_path and sigma_path:
        e = load_set(e_path)
        sigma = load_set(sigma_path)
    else:
        raise click.UsageError("provide --signal or both --E and --Sigma")
    params = e.params
    certs = [
        classical_bound(len(e), len(sigma), params),
        additive_bound(len(e), energy_representation(sigma), params),
        additive_bound(len(sigma), energy_representation(e), params),
        *refined_bound(e, sigma),
    ]
    if fmt == "csv":
        _emit(certificates_to_csv(certs), output)
    else:
        _emit(canonical_json({"certificates": [c.to_json_dict() for c in certs]}), output)


@main.command()
@click.option("--problem", "problem_path", required=True, type=click.Path(exists=True))
@click.option("--method", type=click.Choice(["l1", "lsq"]), default="l1", show_default=True)
@click.option("--support", "support_path", type=click.Path(exists=True), default=None, help="Candidate support set (lsq).")
@click.option("--max-iter", type=int, default=SolverConfig.max_iter, show_default=True)
@click.option("--output", type=click.Path(), default=None)
def recover(
    problem_path: str,
    method: str,
    support_path: str | None,
    max_iter: int,
    output: str | None,
) -> None:
    """Reconstruct a signal from a partially observed spectrum."""
    problem = load_problem(problem_path)
    if method == "l1":
        solution = l1_recover(problem, SolverConfig(max_iter=max_iter))
    else:
        if support_path is None:
            raise click.UsageError("--method lsq requires --support")
        solution = least_squares_recover(problem, load_set(support_path))
    _emit(canonical_json(solution.to_json_dict()), output)


@main.command()
@click.option("--signal", "signal_path", required=True, type=click.Path(exists=True))
@click.option("--k", type=int, default=2, show_default=True)
@click.option("--output", type=click.Path(), default=None)
def gowers(signal_path: str, k: int, output: str | None) -> None:
    """Uniformity norm of order k, by the full cube-average sum."""
    report = gowers_norm(load_signal(signal_path), k)
    _emit(canonical_json(report.to_json_dict()), output)


@main.command("conjecture-scan")
@click.option("--N", "modulus", type=int, required=True)
@click.option("--d", "dimension", type=int, default=1, show_default=True)
@click.option("--k", type=int, default=2, show_default=True)
@click.option(
    "--sampler",
    type=click.Choice(["random", "exhaustive-small"]),
    default="random",
    show_default=True,
)
@click.option("--trials", type=int, default=500, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", type=click.Path(), default=None)
def conjecture_scan_cmd(
    modulus: int, dimension: int, k: int, sampler: str, trials: int, seed: int, output: str | None
) -> None:
    """Scan for violations of the support-times-uniformity-norm inequality."""
    params = GroupParams(modulus, dimension)
    report = conjecture_scan(params, k, sampler=sampler, trials=trials, seed=seed)
    _emit(canonical_json(report.to_json_dict()), output)
    if report.violations:
        click.echo(
            f"WARNING: {len(report.violations)} products fell below 1;"
            " witnesses are in the report",
            err=True,
        )


@main.command()
@click.argument("scenario", type=click.Choice(["example1", "example2"]))
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--output", type=click.Path(), default=None)
@click.option("--check", is_flag=True, help="Exit nonzero if any check fails.")
def reproduce(scenario: str, fmt: str, output: str | None, check: bool) -> None:
    """Re-run a pinned walkthrough and report its golden checks."""
    report = run_example1() if scenario == "example1" else run_example2()
    _emit_report(report, output, fmt, check)


@main.command()
@click.argument("kind", type=click.Choice(["soundness", "recovery"]))
@click.option("--trials", type=int, default=None, help="Trial count (default per sweep).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--output", type=click.Path(), default=None)
@click.option("--check", is_flag=True, help="Exit nonzero on any violation.")
def sweep(
    kind: str, trials: int | None, seed: int, fmt: str, output: str | None, check: bool
) -> None:
    """Randomized certificate and recovery sweeps with fixed seeds."""
    params = {} if trials is None else {"trials": trials}
    cfg = ExperimentConfig(scenario=f"{kind}-sweep", params=params, seed=seed)
    runner = run_soundness_sweep if kind == "soundness" else run_recovery_sweep
    _emit_report(runner(cfg), output, fmt, check)


if __name__ == "__main__":
    main()
