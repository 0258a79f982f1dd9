"""Built-in library of smooth test functions with closed-form derivatives.

Used by the identity checks, the convergence studies and the CLI transform
report.  Every entry is bounded near 0 (integrable against the
``tau**(alpha-1)`` weight for all orders) and slowly growing, so the library
is safe on the intervals the experiments use.
"""

import numpy as np

from .kernel import ScalarFunction


def power(beta: float) -> ScalarFunction:
    """``t**beta`` with its derivative; ``beta >= 0`` keeps it bounded near 0."""
    return ScalarFunction(
        fn=lambda t: t ** beta,
        derivative=lambda t: beta * t ** (beta - 1.0) if beta != 0.0 else 0.0,
        name=f"power_{beta:g}",
    )


CONSTANT_ONE = ScalarFunction(fn=lambda t: 1.0, derivative=lambda t: 0.0,
                              name="one")
LINEAR = ScalarFunction(fn=lambda t: t, derivative=lambda t: 1.0, name="linear")
QUADRATIC = ScalarFunction(fn=lambda t: t * t, derivative=lambda t: 2.0 * t,
                           name="quadratic")
CUBIC = ScalarFunction(fn=lambda t: t ** 3, derivative=lambda t: 3.0 * t * t,
                       name="cubic")
SINE = ScalarFunction(fn=np.sin, derivative=np.cos, name="sine")
COSINE = ScalarFunction(fn=np.cos, derivative=lambda t: -np.sin(t), name="cosine")
EXP_DECAY = ScalarFunction(fn=lambda t: np.exp(-t),
                           derivative=lambda t: -np.exp(-t), name="exp_decay")
RATIONAL = ScalarFunction(fn=lambda t: 1.0 / (1.0 + t),
                          derivative=lambda t: -1.0 / (1.0 + t) ** 2,
                          name="rational")
SQRT = power(0.5)

LIBRARY = (CONSTANT_ONE, LINEAR, QUADRATIC, CUBIC, SINE, COSINE, EXP_DECAY,
           RATIONAL, SQRT)
