"""Command: pqground solve - Compute and certify a radial ground state."""

from pathlib import Path
from typing import TYPE_CHECKING

import typer
from rich.console import Console
from rich.table import Table


if TYPE_CHECKING:
    from pqground.problem import Problem
    from pqground.schemas import CertificateReport, NonexistenceReport, SolveConfig


console = Console()


def certificate_table(report: "CertificateReport", title: str = "Certificate") -> Table:
    """Render a CertificateReport as a pass/fail table."""
    table = Table(title=title, show_header=True)
    table.add_column("Check", style="cyan", no_wrap=True)
    table.add_column("Value", justify="right")
    table.add_column("Status", no_wrap=True)

    def status(ok: bool) -> str:
        return "[green]pass[/green]" if ok else "[red]fail[/red]"

    table.add_row("Pohozaev residual", f"{report.pohozaev_residual:.3e}", status(report.pohozaev_passed))
    table.add_row("Nehari residual", f"{report.nehari_residual:.3e}", status(report.nehari_passed))
    table.add_row(
        "Action relation",
        f"{report.action_relation_residual:.3e}",
        status(report.action_relation_passed),
    )
    if report.pure_power_residual is not None:
        table.add_row("Pure-power identity", f"{report.pure_power_residual:.3e}", "")
    table.add_row("Positivity", "", status(report.positivity))
    table.add_row(
        "Decay bound",
        f"{report.decay_bound:.4g} (variation {report.decay_variation:.2e})",
        status(report.decay_passed),
    )
    table.add_row("Tail share", f"{report.tail_fraction:.2e}", "" if report.tail_valid else "[yellow]invalid[/yellow]")
    table.add_row("Action", f"{report.action:.10g}", "")
    return table


def nonexistence_for(problem: "Problem") -> "NonexistenceReport | None":
    """Nonexistence certificate when the problem is a Born-Infeld chain with a pure power."""
    from pqground.certificates import nonexistence_certificate

    op, alpha = problem.op, problem.spec.pure_power_alpha
    if op.kind != "bi" or alpha is None:
        return None
    return nonexistence_certificate(alpha, op.dim, op.k, op.beta)


def _write_mountain_pass(problem: "Problem", out_dir: Path) -> None:
    from pqground.persistence import write_model_json
    from pqground.variational import (
        FunctionalParams,
        compute_lambda0,
        dilation_curve,
        mountain_pass_level,
        plateau_seed,
    )

    seed = plateau_seed(problem.spec, problem.op)
    lam0 = compute_lambda0(seed, problem.decomposition, problem.spec)
    params = FunctionalParams(1.0, problem.decomposition, problem.op, problem.spec, lam0=lam0)
    write_model_json(out_dir / "dilation_path.json", dilation_curve(seed, params))
    write_model_json(out_dir / "mountain_pass.json", mountain_pass_level(seed, params))
    console.print("[green]✓[/green] Mountain-pass diagnostics written")


def solve(
    config: str = typer.Option(..., "--config", "-c", help="Config file or preset name"),
    out: Path | None = typer.Option(None, "--out", "-o", help="Output directory"),
    resolution: int | None = typer.Option(None, "--resolution", help="Grid size M"),
    rtol: float | None = typer.Option(None, "--rtol", help="Integrator relative tolerance"),
    scan: str | None = typer.Option(None, "--scan", help="Scan range lo:hi:n"),
    fmt: str | None = typer.Option(None, "--format", help="Profile format: json or csv"),
    diagnostics: bool = typer.Option(
        False, "--diagnostics", help="Also write dilation-path and mountain-pass reports"
    ),
) -> None:
    """Compute a positive radial ground state and certify it.

    Exit codes: 0 certified, 2 no bracket or no certified candidate,
    3 certification failed, 1 any other error.
    """
    from pqground.errors import NoBracketError, PqGroundError
    from pqground.nonlinearity import decomposition_bounds, validate_assumptions
    from pqground.persistence import (
        config_hash,
        write_model_json,
        write_models_json,
        write_profile_csv,
        write_profile_json,
        write_scan_csv,
    )
    from pqground.problem import build_problem
    from pqground.settings import resolve_output_dir
    from pqground.shooting import multi_start_ground_state
    from pqground.utils import apply_overrides, load_config

    try:
        cfg: SolveConfig = apply_overrides(load_config(config), resolution, rtol, scan, fmt)
        problem = build_problem(cfg)
        out_dir = resolve_output_dir(out, cfg.output.directory) / cfg.name
        assumptions = validate_assumptions(problem.spec, problem.op)
        write_model_json(out_dir / "assumptions.json", assumptions)
        bounds = decomposition_bounds(problem.spec, problem.decomposition)
        write_model_json(out_dir / "decomposition.json", bounds)
        if diagnostics:
            _write_mountain_pass(problem, out_dir)

        console.print(f"\n[bold cyan]Solving:[/bold cyan] {cfg.name}\n")
        with console.status("[bold green]Shooting..."):
            state = multi_start_ground_state(problem.spec, problem.op, cfg.shooting, cfg.tolerances)
    except NoBracketError as e:
        write_scan_csv(out_dir / "scan.csv", e.scan)
        write_models_json(out_dir / "candidates.json", e.rejected)
        console.print(f"[yellow]No bracket:[/yellow] {e.message}")
        certificate = nonexistence_for(problem)
        if certificate is not None:
            write_model_json(out_dir / "nonexistence.json", certificate)
            if certificate.certified:
                console.print(
                    f"[green]✓[/green] Nonexistence certified for alpha={certificate.alpha}, "
                    f"N={certificate.dim}, k={certificate.k}"
                )
        console.print(f"Scan table written to {out_dir / 'scan.csv'}")
        raise typer.Exit(e.exit_code) from None
    except PqGroundError as e:
        console.print(f"[red]Error:[/red] {e.message}")
        raise typer.Exit(e.exit_code) from None

    meta = {
        "operator_sha256": config_hash(cfg.operator),
        "nonlinearity_sha256": config_hash(cfg.nonlinearity),
        "name": cfg.name,
    }
    if cfg.output.format == "csv":
        profile_path = write_profile_csv(out_dir / "profile.csv", state.profile)
    else:
        profile_path = write_profile_json(out_dir / "profile.json", state.profile, meta)
    write_model_json(out_dir / "certificate.json", state.report)
    write_models_json(out_dir / "candidates.json", [cand.record() for cand in state.candidates])
    write_scan_csv(out_dir / "scan.csv", state.scan)

    console.print(certificate_table(state.report))
    console.print(f"u(0) = {state.u0:.12g}, {len(state.candidates)} candidate(s)")
    console.print(f"[green]✓[/green] Profile written to {profile_path}")

    if not state.report.passed:
        console.print("[red]Error:[/red] The selected candidate failed certification.")
        raise typer.Exit(3)
