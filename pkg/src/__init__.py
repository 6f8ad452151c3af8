"""
QOsc - numerics for the (q;l,λ)-deformed Heisenberg algebra
"""

__version__ = "1.0.0"
