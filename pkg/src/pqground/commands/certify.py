"""Command: pqground certify - Re-certify a stored profile."""

from pathlib import Path

import typer
from rich.console import Console


console = Console()


def certify(
    profile_file: Path = typer.Argument(..., help="Profile JSON written by 'pqground solve'"),
    config: str = typer.Option(..., "--config", "-c", help="Config file or preset name"),
    out: Path | None = typer.Option(None, "--out", "-o", help="Write the certificate JSON here"),
) -> None:
    """Recompute the certificate of a stored profile.

    Exit codes: 0 passed, 3 failed, 1 unreadable file or config.
    """
    from pqground.certificates import certify as certify_profile
    from pqground.commands.solve import certificate_table
    from pqground.errors import CertificationFailedError, PqGroundError
    from pqground.persistence import read_profile_json, write_model_json
    from pqground.problem import build_problem
    from pqground.utils import load_config

    try:
        cfg = load_config(config)
        problem = build_problem(cfg)
        profile = read_profile_json(profile_file)
        if profile.grid.dim != problem.op.dim:
            raise PqGroundError(
                f"Profile dimension N={profile.grid.dim} does not match the config (N={problem.op.dim})"
            )
        report = certify_profile(profile, problem.spec, problem.op, cfg.tolerances)
    except PqGroundError as e:
        console.print(f"[red]Error:[/red] {e.message}")
        raise typer.Exit(e.exit_code) from None

    if out is not None:
        write_model_json(out, report)
    console.print(certificate_table(report, title=f"Certificate: {profile_file.name}"))

    if not report.passed:
        console.print(f"[red]Error:[/red] {CertificationFailedError.message}")
        raise typer.Exit(CertificationFailedError.exit_code)
    console.print("[green]✓[/green] Certified")
