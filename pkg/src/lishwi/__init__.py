"""lishwi - capacity and utility of Large Intelligent Surfaces under hardware impairments."""

__version__ = "0.1.0"
