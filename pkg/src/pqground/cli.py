"""Main pqground CLI application."""

import typer
from rich.console import Console

from pqground import __version__
from pqground.commands import certify, coeffs, list_cmd, solve, sweep


console = Console()

app = typer.Typer(
    name="pqground",
    help="Compute and certify radial ground states of (p,q)-Laplacian and Born-Infeld chain equations.",
    no_args_is_help=True,
    rich_markup_mode="rich",
)

# Register commands
app.command(name="solve")(solve.solve)
app.command(name="certify")(certify.certify)
app.command(name="sweep")(sweep.sweep)
app.command(name="coeffs")(coeffs.coeffs)
app.command(name="list")(list_cmd.list_presets)


@app.callback(invoke_without_command=True)
def main_callback(
    version: bool = typer.Option(False, "--version", "-v", help="Show version and exit."),
    log_level: str | None = typer.Option(None, "--log-level", help="DEBUG, INFO, WARNING or ERROR"),
    log_json: bool | None = typer.Option(None, "--log-json/--log-console", help="Log format on stderr"),
) -> None:
    """pqground - radial ground states with identity certificates."""
    if version:
        console.print(f"[bold cyan]pqground[/bold cyan] version {__version__}")
        raise typer.Exit()

    from pqground.log import configure_logging
    from pqground.settings import get_settings

    settings = get_settings()
    configure_logging(
        level=log_level or settings.log_level,
        json_output=settings.log_json if log_json is None else log_json,
    )


def main() -> None:
    """Entry point for the CLI."""
    app()


if __name__ == "__main__":
    main()
