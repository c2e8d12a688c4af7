"""Deterministic CSV emission shared by the oracle trace, sweeps, and figures.

Layout: `#`-prefixed metadata lines (a full parameter echo, no
timestamps), one header row, then data rows. Floats are printed with
12 significant digits so reruns with identical configuration are
byte-identical.
"""

import numbers


def format_value(value) -> str:
    """Render one cell: floats at 12 significant digits, the rest as str."""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, numbers.Integral):
        return str(value)
    if isinstance(value, numbers.Real):
        return f"{float(value):.11e}"
    return str(value)


def write_csv(path, metadata: dict, header: list, rows) -> None:
    """Write rows to path with metadata comments and a header line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in metadata.items():
            fh.write(f"# {key} = {format_value(value)}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(cell) for cell in row) + "\n")
