"""Subintegral closures of monoids and rings, invertible modules over monoid
algebras, and exact checkers for the identities relating them."""

__version__ = "0.1.0"

from .lattice_kernel import IntMatrix, Lattice, hermite_normal_form, smith_normal_form  # noqa: E402,F401
from .monoid import (AffineMonoid, ClosureResult, seminormalization,  # noqa: E402,F401
                     subintegral_closure_monoid)
from .linalg import Field, Subspace  # noqa: E402,F401
from .algebra import (FiniteAlgebra, MonoidAlgebraElement, MonoidAlgebraExtension,  # noqa: E402,F401
                      SubalgebraExtension, nil_radical, subintegral_closure_ring)
