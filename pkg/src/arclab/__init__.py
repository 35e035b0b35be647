"""arclab: exact computational workbench for platform arc rings and friends."""

__version__ = "0.1.0"
