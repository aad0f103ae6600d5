"""Leachate inflow forecasting and peak-shift savings for a landfill microgrid."""

__version__ = "0.1.0"
