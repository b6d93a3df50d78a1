"""
Miscellaneous helper functions.

The formatter for ANSI colored console output is in locdisc.logutils.
"""

import importlib
import logging
import math
import os
import tempfile
from typing import Any, Callable, Union

import numpy as np

from .exceptions import GridSpecError

logger = logging.getLogger(__name__)

GRID_TOL = 1e-12


def import_attribute(name: str) -> Callable[..., Any]:
    """Returns an attribute from a dotted path name. Example: `path.to.func`.

    When the attribute we look for is a staticmethod, module name in its
    dotted path is not the last-before-end word

    E.g.: package_a.package_b.module_a.ClassA.my_static_method

    Thus we remove the bits from the end of the name until we can import it

    Args:
        name (str): The name (reference) to the path.

    Raises:
        ValueError: If no module is found or invalid attribute name.

    Returns:
        Any: An attribute (normally a Callable)
    """
    name_bits = name.split('.')
    module_name_bits, attribute_bits = name_bits[:-1], [name_bits[-1]]
    module = None
    while len(module_name_bits):
        try:
            module_name = '.'.join(module_name_bits)
            module = importlib.import_module(module_name)
            break
        except ImportError:
            attribute_bits.insert(0, module_name_bits.pop())

    if module is None:
        raise ValueError(f'Invalid attribute name: {name}')

    attribute_name = '.'.join(attribute_bits)
    if hasattr(module, attribute_name):
        return getattr(module, attribute_name)
    # staticmethods
    attribute_name = attribute_bits.pop()
    attribute_owner_name = '.'.join(attribute_bits)
    try:
        attribute_owner = getattr(module, attribute_owner_name)
    except AttributeError:
        raise ValueError('Invalid attribute name: %s' % attribute_name)

    if not hasattr(attribute_owner, attribute_name):
        raise ValueError('Invalid attribute name: %s' % name)
    return getattr(attribute_owner, attribute_name)


def _parse_grid_number(text: str, spec: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise GridSpecError(f'Invalid number {text!r} in grid spec {spec!r}')
    if not math.isfinite(value):
        raise GridSpecError(f'Non-finite value in grid spec {spec!r}')
    return value


def parse_grid(spec: Union[str, float, int], lower: float = 0.0, upper: float = 1.0) -> np.ndarray:
    """Parses a grid spec into an ascending vector of floats.

    Accepted forms are `start:step:end` (both endpoints included within 1e-12),
    a comma separated list `0,0.5,1` or a single number.

    Args:
        spec (Union[str, float, int]): The grid spec.
        lower (float): Smallest admissible grid value. Defaults to 0.
        upper (float): Largest admissible grid value. Defaults to 1.

    Raises:
        GridSpecError: If the spec is malformed, empty, not ascending or leaves [lower, upper].

    Returns:
        np.ndarray: The grid values
    """
    if isinstance(spec, (int, float)):
        values = [float(spec)]
    else:
        spec = spec.strip()
        if not spec:
            raise GridSpecError('Empty grid spec')
        if ':' in spec:
            parts = spec.split(':')
            if len(parts) != 3:
                raise GridSpecError(f'Grid spec {spec!r} must look like start:step:end')
            start, step, end = (_parse_grid_number(part, spec) for part in parts)
            if step <= 0:
                raise GridSpecError(f'Grid step must be positive in {spec!r}')
            if end < start - GRID_TOL:
                raise GridSpecError(f'Grid spec {spec!r} is empty')
            count = int(math.floor((end - start) / step + GRID_TOL)) + 1
            values = [start + k * step for k in range(count)]
            if abs(values[-1] - end) <= GRID_TOL * max(1.0, abs(end)) or abs(values[-1] - end) < 1e-9 * step:
                values[-1] = end
        else:
            values = [_parse_grid_number(part, spec) for part in spec.split(',') if part.strip()]

    if not values:
        raise GridSpecError(f'Grid spec {spec!r} is empty')
    grid = np.round(np.asarray(values, dtype=float), 12)
    if np.any(np.diff(grid) <= 0):
        raise GridSpecError(f'Grid spec {spec!r} is not strictly ascending')
    if grid[0] < lower - GRID_TOL or grid[-1] > upper + GRID_TOL:
        raise GridSpecError(f'Grid spec {spec!r} leaves [{lower}, {upper}]')
    return np.clip(grid, lower, upper)


def atomic_write(path: str, data: bytes):
    """Writes `data` to `path` through a temporary file in the same directory,
    so readers never observe a partially written file."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix='.locdisc-', suffix='.tmp')
    try:
        with os.fdopen(fd, 'wb') as fh:
            fh.write(data)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
    logger.debug('Wrote %d bytes to %s', len(data), path)


def format_float(value: float) -> str:
    """Shortest round-tripping text for a float, stable across runs."""
    return repr(float(value))
