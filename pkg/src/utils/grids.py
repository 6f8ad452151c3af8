"""
Parsing of CLI grids: "a:b:step" ranges and complex literals
"""

import math
from typing import List, Sequence

import numpy as np

from src.kernel.errors import ParameterError


def parse_range(text: str) -> List[float]:
    """Inclusive arithmetic range "start:stop:step"; a single number is a one-point grid"""
    parts = text.split(":")
    try:
        values = [float(part) for part in parts]
    except ValueError as e:
        raise ParameterError(f"bad range {text!r}; expected start:stop:step") from e
    if len(values) == 1:
        return values
    if len(values) != 3:
        raise ParameterError(f"bad range {text!r}; expected start:stop:step")
    start, stop, step = values
    if step <= 0 or stop < start:
        raise ParameterError(f"range {text!r} needs step > 0 and stop ≥ start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + k * step for k in range(count)]


def parse_complex(text: str) -> complex:
    """Accepts 0.3, 0.3+0.2i, -0.1-2e-3j, 0.5i"""
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError as e:
        raise ParameterError(f"bad complex number {text!r}; use a+bi") from e


def complex_grid(real: Sequence[float], imag: Sequence[float]) -> List[complex]:
    """Row-major product grid, real part outermost"""
    return [complex(x, y) for x in real for y in imag]


def polar_grid(radii: Sequence[float], count: int) -> List[complex]:
    """`count` equally spaced angles on each circle"""
    angles = 2.0 * np.pi * np.arange(count) / count
    return [complex(r * np.cos(theta), r * np.sin(theta)) for r in radii for theta in angles]
