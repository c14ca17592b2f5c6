"""Figure rendering for mocsim CSV tables.

This package talks to the simulator only through its versioned CSV files;
it never imports mocsim and can be installed (or left out) independently.
"""

__version__ = "0.1.0"
