"""Input checks for the estimator API.

sklearn's ``check_array`` coerces to a numeric dtype, which truncates
integers beyond 64 bits, so naturals are validated here instead.
"""
import numbers

import numpy as np

from .exceptions import InvalidInputError


def as_natural(value, min_value=0):
    """Convert one int-like or decimal string to a Python int."""
    if isinstance(value, (bool, np.bool_)):
        raise InvalidInputError(f"booleans are not naturals: {value!r}")
    if isinstance(value, str):
        text = value.strip()
        if not text.isdigit() or not text.isascii():
            raise InvalidInputError(f"not a decimal natural: {value!r}")
        out = int(text)
    elif isinstance(value, numbers.Integral):
        out = int(value)
    elif type(value).__name__ == "mpz":
        out = int(value)
    else:
        raise InvalidInputError(f"expected an integer, got {type(value).__name__}")
    if out < min_value:
        raise InvalidInputError(f"value {out} is below the minimum {min_value}")
    return out


def check_naturals(X, min_value=2):
    """Flatten ``X`` (list, 1-d or single-column 2-d array) into a list of ints."""
    if isinstance(X, (str, bytes)) or not hasattr(X, "__iter__"):
        raise InvalidInputError("expected an array-like of integers")
    if isinstance(X, np.ndarray):
        if X.ndim == 2 and X.shape[1] == 1:
            X = X[:, 0]
        elif X.ndim != 1:
            raise InvalidInputError(f"expected 1-d input or a single column, got shape {X.shape}")
        if X.dtype.kind == "f":
            raise InvalidInputError("floating-point input cannot hold exact naturals")
    values = []
    for item in X:
        if isinstance(item, (list, tuple, np.ndarray)):
            if len(item) != 1:
                raise InvalidInputError("expected a single column")
            item = item[0]
        values.append(as_natural(item, min_value))
    if not values:
        raise InvalidInputError("empty input")
    return values
