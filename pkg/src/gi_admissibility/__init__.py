"""Which time-periodic boundary triples of the GI equation on the half-line can be admissible."""
__version__ = "0.1.0"
