"""Command: pqground sweep - Solve every cell of a parameter sweep."""

from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import TYPE_CHECKING

import typer
from rich.console import Console
from rich.table import Table


if TYPE_CHECKING:
    from pqground.schemas import SolveConfig, SweepRow


console = Console()


def run_cell(config: "SolveConfig") -> "SweepRow":
    """Solve one sweep cell; every failure becomes a row, never an exception."""
    import structlog

    from pqground.commands.solve import nonexistence_for
    from pqground.errors import NoBracketError, PqGroundError
    from pqground.problem import build_problem
    from pqground.schemas import SweepRow
    from pqground.shooting import multi_start_ground_state

    op = config.operator
    base = {
        "alpha": config.nonlinearity.alpha,
        "k": op.k if op.kind == "bi" else None,
        "beta": op.beta,
        "dim": op.dim,
        "resolution": config.shooting.resolution,
    }
    problem = None
    try:
        problem = build_problem(config)
        state = multi_start_ground_state(problem.spec, problem.op, config.shooting, config.tolerances)
    except NoBracketError as e:
        certificate = nonexistence_for(problem) if problem is not None else None
        certified = certificate is not None and certificate.certified
        row = SweepRow(
            **base,
            outcome="nonexistent" if certified else "uncertified",
            exit_code=e.exit_code,
            message="nonexistence certified" if certified else e.message,
        )
    except PqGroundError as e:
        row = SweepRow(**base, outcome="error", exit_code=e.exit_code, message=e.message)
    else:
        report = state.report
        row = SweepRow(
            **base,
            outcome="certified" if report.passed else "uncertified",
            u0=state.u0,
            action=report.action,
            pohozaev_residual=report.pohozaev_residual,
            nehari_residual=report.nehari_residual,
            action_relation_residual=report.action_relation_residual,
            exit_code=0 if report.passed else 3,
        )
    structlog.get_logger().info("sweep_cell_finished", name=config.name, outcome=row.outcome)
    return row


def sweep(
    config: str = typer.Option(..., "--config", "-c", help="Config file or preset name"),
    out: Path | None = typer.Option(None, "--out", "-o", help="Output directory"),
    workers: int | None = typer.Option(None, "--workers", "-w", min=1, help="Parallel worker processes"),
) -> None:
    """Run the Cartesian sweep of a configuration and write sweep.csv.

    The exit code is the largest exit code over all cells (0 for an empty sweep).
    """
    from pqground.errors import PqGroundError
    from pqground.persistence import write_sweep_csv
    from pqground.problem import expand_sweep
    from pqground.settings import get_settings, resolve_output_dir
    from pqground.utils import load_config

    try:
        cfg = load_config(config)
        cells = expand_sweep(cfg)
    except PqGroundError as e:
        console.print(f"[red]Error:[/red] {e.message}")
        raise typer.Exit(e.exit_code) from None

    count = workers if workers is not None else get_settings().workers
    console.print(f"\n[bold cyan]Sweeping:[/bold cyan] {cfg.name} ({len(cells)} cells, {count} workers)\n")
    if count > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=count) as pool:
            rows = list(pool.map(run_cell, cells))
    else:
        rows = [run_cell(cell) for cell in cells]

    out_dir = resolve_output_dir(out, cfg.output.directory) / cfg.name
    path = write_sweep_csv(out_dir / "sweep.csv", rows)

    table = Table(title="Sweep", show_header=True)
    for column in ("alpha", "k", "beta", "N", "M", "outcome", "u(0)", "action"):
        table.add_column(column, no_wrap=True)
    colors = {"certified": "green", "nonexistent": "cyan", "uncertified": "yellow", "error": "red"}
    for row in rows:
        table.add_row(
            f"{row.alpha:g}" if row.alpha is not None else "-",
            str(row.k) if row.k is not None else "-",
            f"{row.beta:g}",
            str(row.dim),
            str(row.resolution),
            f"[{colors[row.outcome]}]{row.outcome}[/{colors[row.outcome]}]",
            f"{row.u0:.8g}" if row.u0 is not None else "-",
            f"{row.action:.8g}" if row.action is not None else "-",
        )
    console.print(table)
    console.print(f"[green]✓[/green] Results written to {path}")

    code = max((row.exit_code for row in rows), default=0)
    if code:
        raise typer.Exit(code)
