"""Exact-arithmetic workbench for Azumaya algebras and quiver representations.

Subpackages:

* :mod:`azurep.divsite` -- sieves and topologies on the divisibility poset
* :mod:`azurep.exactalg` -- structure-constant algebras over QQ and GF(p)
* :mod:`azurep.quiverrep` -- representation equations, point counts, root algebras
* :mod:`azurep.twisted` -- twisted representations and groupoid counts
* :mod:`azurep.workbench` -- the JSON batch CLI
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    AzurepError,
    BudgetExceeded,
    InputError,
    PreconditionError,
    PropertyViolation,
    RetryError,
)
from .fields import GF, QQ, PrimeField, Rationals  # noqa: F401
