"""hallforge: exact Hall algebras of quiver representations over finite
fields, two-periodic complexes of projectives, and desk-scale verification
of the Drinfeld-double compatibility relation."""

__version__ = "0.1.0"

from hallforge._backend import backend_name

__all__ = ["backend_name", "__version__"]
