"""Command-line front end producing figure tables and headline checks."""

from .config import ConfigError, Scenario, parse_scenario
from .tables import write_table

__all__ = ["ConfigError", "Scenario", "parse_scenario", "write_table"]
