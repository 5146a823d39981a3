from fptclock.storage.gridfile import (
    GridTable,
    read_grid,
    read_run_config,
    write_grid,
    write_json,
)

__all__ = ["GridTable", "read_grid", "write_grid", "write_json", "read_run_config"]
