"""Monte-Carlo simulator for constant-depth Clifford gates on toric codes."""

__version__ = "0.1.0"
