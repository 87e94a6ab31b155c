"""Command: pqground coeffs - Print Born-Infeld chain coefficients."""

from fractions import Fraction

import typer
from rich.console import Console
from rich.table import Table


console = Console()


def _exact(value: float) -> str:
    frac = Fraction(value).limit_denominator(10**6)
    return str(frac) if float(frac) == value else f"{value:.12g}"


def coeffs(
    k: int = typer.Argument(..., help="Chain order"),
    beta: float = typer.Argument(1.0, help="Born-Infeld parameter"),
    compare: float | None = typer.Option(
        None, "--compare", help="Compare the chain flux with the exact flux at this w"
    ),
) -> None:
    """Print a_1..a_k with the Taylor cross-check c_j (2 beta)^(j-1)."""
    from pqground.errors import PqGroundError
    from pqground.operators import BIChainOperator, bi_chain_coefficients, exact_bi_flux, flux, taylor_coefficients

    try:
        chain = bi_chain_coefficients(k, beta)
    except PqGroundError as e:
        console.print(f"[red]Error:[/red] {e.message}")
        raise typer.Exit(e.exit_code) from None
    taylor = [c * (2.0 * beta) ** j for j, c in enumerate(taylor_coefficients(k))]

    table = Table(title=f"Born-Infeld chain k={k}, beta={beta:g}", show_header=True)
    table.add_column("j", justify="right", no_wrap=True)
    table.add_column("Exponent 2j", justify="right")
    table.add_column("a_j", style="cyan", justify="right")
    table.add_column("Taylor", justify="right")
    table.add_column("Match", no_wrap=True)
    for j, (a, t) in enumerate(zip(chain, taylor, strict=True), start=1):
        ok = abs(a - t) <= 1e-12 * max(abs(a), 1.0)
        table.add_row(str(j), str(2 * j), _exact(a), _exact(t), "[green]✓[/green]" if ok else "[red]✗[/red]")
    console.print(table)

    if compare is not None:
        try:
            exact = exact_bi_flux(compare, beta)
        except PqGroundError as e:
            console.print(f"[red]Error:[/red] {e.message}")
            raise typer.Exit(e.exit_code) from None
        truncated = flux(compare, BIChainOperator(k, beta, dim=3))
        console.print(
            f"w = {compare:g}: chain flux {truncated:.12g}, exact flux {exact:.12g}, "
            f"gap {exact - truncated:.3e}"
        )
