"""Command-line tools for equitable coloring of K4-minor-free graphs."""
