"""Entry point tying the equitable coloring commands together."""

import click

from scripts.equitable.commands_solve import register_solve_commands
from scripts.equitable.commands_stress import register_stress_commands
from scripts.equitable.commands_structure import register_structure_commands


@click.group()
def cli() -> None:
    """Equitable k-colorings of K4-minor-free graphs."""


register_solve_commands(cli)
register_structure_commands(cli)
register_stress_commands(cli)

if __name__ == "__main__":
    cli()
