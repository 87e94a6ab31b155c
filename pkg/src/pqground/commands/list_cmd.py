"""Command: pqground list - List bundled presets."""

from rich.console import Console
from rich.table import Table


console = Console()


def list_presets() -> None:
    """List the presets that `--config` accepts by name."""
    from pqground.registry import PresetRegistry
    from pqground.utils import get_presets_path

    registry = PresetRegistry(get_presets_path())
    presets = registry.list_available()

    if not presets:
        console.print("[yellow]No presets available.[/yellow]")
        return

    table = Table(title="Available Presets", show_header=True)
    table.add_column("Name", style="cyan", no_wrap=True)
    table.add_column("Description")
    table.add_column("Operator", style="green", no_wrap=True)
    table.add_column("Nonlinearity", no_wrap=True)

    for p in presets:
        op = p.operator
        operator = f"bi k={op.k}" if op.kind == "bi" else f"pq p={op.p:g} q={op.q}"
        table.add_row(p.name, p.description, f"{operator}, N={op.dim}", p.nonlinearity.kind)

    console.print()
    console.print(table)
    console.print()
